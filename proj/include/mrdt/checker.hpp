#pragma once

#include "mrdt/core.hpp"
#include "mrdt/store.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace mrdt {

/// Deterministic 64-bit generator (splitmix64); identical sequences on every
/// platform, which keeps reports byte-reproducible under a fixed seed.
class SplitMix {
public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

  std::int64_t in_range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo)));
  }

private:
  std::uint64_t state_;
};

struct GenConfig {
  std::uint64_t seed = 1;
  int max_branches = 4;
  int ops_per_trial = 60;
  std::map<std::string, double> op_mix;  // weights by op name; empty = uniform
  double merge_probability = 0.15;
  std::pair<std::int64_t, std::int64_t> value_range{0, 2};  // half-open
  std::vector<std::string> keys{"x", "y"};                  // map keys / channels
};

struct EnumBounds {
  int max_branches = 3;
  int max_actions = 5;  // total transitions per trace
  std::vector<std::int64_t> values{0, 1};
  std::vector<std::string> keys{"x", "y"};
};

struct Failure {
  Trace trace;            // minimized failing trace
  std::string predicate;  // phi_spec | rsim | psi_ts | psi_lca | convergence
  std::string detail;
};

struct CheckReport {
  std::uint64_t trials = 0;
  std::uint64_t transitions_checked = 0;
  std::vector<Failure> failures;

  bool passed() const { return failures.empty(); }
  void absorb(CheckReport other);
  std::string summary_line(std::string_view type_name, std::string_view mode) const;
  std::string to_text() const;
};

/// Deterministic random trace: exactly `ops_per_trial` operations, plus
/// branch creations and merges according to `merge_probability`. Merges that
/// would hit a criss-cross history are pre-simulated and skipped.
Trace generate_trace(const Mrdt& type, const GenConfig& cfg);

/// Streams every trace of at most `max_actions` transitions over at most
/// `max_branches` branches (named in creation order, which quotients away
/// branch renaming) and the given payload universe. Every emitted trace
/// replays without error.
void enumerate_traces(const Mrdt& type, const EnumBounds& bounds,
                      const std::function<void(const Trace&)>& yield);

/// Replays one trace, asserting the full battery at every transition: each
/// operation's return value against the declarative specification, the
/// simulation relation and timestamp property on the touched branch, the lca
/// property at merges, and observational equivalence of branches with equal
/// histories. Failures are data; each is reported with a minimized trace.
CheckReport check_execution(const Mrdt& type, const Trace& trace, int max_failures = 5);

CheckReport run_random(const Mrdt& type, const GenConfig& cfg, int trials, bool parallel = false,
                       int max_failures = 5);

CheckReport run_exhaustive(const Mrdt& type, const EnumBounds& bounds, int max_failures = 5);

/// Greedy single-action removal until no action can be dropped while keeping
/// the trace replayable and failing.
Trace shrink_trace(const Trace& trace, const std::function<bool(const Trace&)>& still_fails);

} // namespace mrdt
