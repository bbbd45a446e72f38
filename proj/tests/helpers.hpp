#pragma once

#include "mrdt/checker.hpp"
#include "mrdt/core.hpp"
#include "mrdt/store.hpp"

#include <set>
#include <utility>
#include <vector>

namespace mrdt::test {

inline Event ev(EventId id, Op op, Value rval, Timestamp t) {
  return Event{id, std::move(op), std::move(rval), t};
}

inline AbstractExec exec_of(std::vector<Event> events,
                            std::vector<std::pair<EventId, EventId>> vis) {
  return AbstractExec::from_parts(std::move(events), std::move(vis));
}

/// Independent closure oracle: recompute the transitive closure of vis by
/// iterating to a fixed point and compare with what the execution stores.
inline bool closure_matches(const AbstractExec& exec) {
  std::set<std::pair<EventId, EventId>> closed(exec.vis().begin(), exec.vis().end());
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::pair<EventId, EventId>> fresh;
    for (const auto& [a, b] : closed)
      for (const auto& [c, d] : closed)
        if (b == c && !closed.count({a, d})) fresh.emplace_back(a, d);
    for (const auto& edge : fresh) grew |= closed.insert(edge).second;
  }
  return closed == std::set<std::pair<EventId, EventId>>(exec.vis().begin(), exec.vis().end());
}

/// A deterministic batch of generated traces for property-style tests.
inline std::vector<Trace> sample_traces(const Mrdt& type, int count, int ops, std::uint64_t seed,
                                        double merge_probability = 0.3) {
  std::vector<Trace> out;
  for (int i = 0; i < count; ++i) {
    GenConfig cfg;
    cfg.seed = seed + static_cast<std::uint64_t>(i) * 7919;
    cfg.ops_per_trial = ops;
    cfg.merge_probability = merge_probability;
    out.push_back(generate_trace(type, cfg));
  }
  return out;
}

} // namespace mrdt::test
