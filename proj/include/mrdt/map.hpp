#pragma once

#include "mrdt/core.hpp"

#include <map>
#include <string>

namespace mrdt {

/// Generic map from string keys to states of an inner data type. Absent keys
/// read as the inner type's initial state; only set operations bind keys.
struct AlphaMapState final : StateBase {
  std::map<std::string, StatePtr> bindings;
};

/// Map with inner type `inner`, reported under `name`. The specification and
/// simulation relation are compositional: they project per-key executions and
/// delegate to the inner type's own hooks.
MrdtPtr make_alpha_map(MrdtPtr inner, std::string name);

/// Grow-only map: alpha-map over the grow-only set.
MrdtPtr make_gmap();

/// IRC-style chat: send/read wrappers over a map of mergeable logs.
MrdtPtr make_chat();

/// The bound state for `key`, or the inner type's initial state.
StatePtr map_lookup_default(const AlphaMapState& s, const std::string& key, const Mrdt& inner);

/// Projects the set-events for `key` onto an execution of the inner type:
/// inner operations with the original return values, timestamps and ids, and
/// visibility restricted to the projected events.
AbstractExec project_key(const std::string& key, const AbstractExec& history);

} // namespace mrdt
