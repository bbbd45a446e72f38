#pragma once

#include "mrdt/core.hpp"

#include <string_view>
#include <vector>

namespace mrdt {

/// All bundled data types, by CLI name.
std::vector<std::string_view> type_names();

/// Factory for a bundled type; nullptr when the name is unknown.
MrdtPtr make_type(std::string_view name);

} // namespace mrdt
