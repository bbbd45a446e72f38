#pragma once

#include "mrdt/core.hpp"
#include "mrdt/plist.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace mrdt {

using QItem = std::pair<Timestamp, std::int64_t>;

/// Two-list functional queue. Enqueue conses onto back (newest first);
/// dequeue pops front (oldest first), reversing back into front when front
/// runs dry. Every element is tagged with its enqueue timestamp, so the
/// flattened queue is strictly increasing in timestamp.
struct QueueState final : StateBase {
  PList<QItem> front;
  PList<QItem> back;
};

MrdtPtr make_queue();

/// Flattened queue in dequeue order: front followed by reversed back.
std::vector<QItem> queue_tolist(const QueueState& s);

/// Longest suffix of `a` not present in ancestor list `l`; both sorted
/// ascending by timestamp.
std::vector<QItem> queue_diff(const std::vector<QItem>& a, const std::vector<QItem>& l);

/// Longest common contiguous subsequence of the three versions: ancestor
/// elements dequeued on neither side.
std::vector<QItem> queue_intersection(const std::vector<QItem>& l, const std::vector<QItem>& a,
                                      const std::vector<QItem>& b);

/// Merge of two timestamp-sorted disjoint lists.
std::vector<QItem> queue_union(const std::vector<QItem>& x, const std::vector<QItem>& y);

/// Three-way merge on flattened queues: surviving ancestor prefix followed by
/// the timestamp-merged new suffixes.
std::vector<QItem> queue_merge_lists(const std::vector<QItem>& l, const std::vector<QItem>& a,
                                     const std::vector<QItem>& b);

} // namespace mrdt
