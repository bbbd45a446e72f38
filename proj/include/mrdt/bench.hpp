#pragma once

#include "mrdt/core.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace mrdt::bench {

struct BenchRow {
  std::string workload;
  std::uint64_t n = 0;
  std::string metric;  // merge_ns | total_ms | max_size | tree_height
  double value = 0;
};

/// `workload,n,metric,value`; the header is written at most once.
void write_csv(std::ostream& out, const std::vector<BenchRow>& rows, bool with_header);

/// Queue merge timing. For each n: build an ancestor queue with n random
/// operations (75:25 enqueue:dequeue), diverge two branches by n operations
/// each, and time only the three-way merge. Medians over `reps` repetitions,
/// each repetition averaging enough merges to be clock-stable.
struct QueueMergeResult {
  std::vector<BenchRow> rows;
  std::vector<std::pair<std::uint64_t, double>> merge_ns;  // (n, median ns)
};
QueueMergeResult bench_queue_merge(const std::vector<std::uint64_t>& sizes, std::uint64_t seed,
                                   int reps = 7);

/// OR-set workload driver. Operations alternate between two branches;
/// `merge_every > 0` merges and resynchronizes both branches at that cadence,
/// `merge_every == 0` runs the three-phase shape (ancestor, branch a,
/// branch b) ending in a single merge. Lookups are membership probes that
/// cost whatever the variant's representation costs. The workload script is
/// generated once per call, so all variants see identical operations.
struct OrsetVariantResult {
  std::string variant;
  double total_ms = 0;
  std::uint64_t max_size = 0;
  std::vector<std::pair<std::uint64_t, int>> merge_heights;  // tree variant: (size, height)
};
struct OrsetResult {
  std::vector<BenchRow> rows;
  std::vector<OrsetVariantResult> variants;
};
OrsetResult bench_orset(const std::vector<std::string>& variants, std::uint64_t ops,
                        std::array<int, 3> mix,  // lookup : add : remove percentages
                        std::uint64_t merge_every, std::pair<std::int64_t, std::int64_t> range,
                        std::uint64_t seed);

} // namespace mrdt::bench
