#pragma once

#include "mrdt/core.hpp"

#include <string>
#include <utility>
#include <vector>

namespace mrdt {

/// Append-only mergeable log, newest entry first. Timestamps are strictly
/// decreasing front to back.
struct LogState final : StateBase {
  std::vector<std::pair<Timestamp, std::string>> entries;
};

MrdtPtr make_log();

} // namespace mrdt
