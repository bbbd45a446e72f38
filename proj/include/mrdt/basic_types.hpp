#pragma once

#include "mrdt/core.hpp"

#include <cstdint>
#include <vector>

namespace mrdt {

// The five plain data types: increment-only counter, PN-counter,
// last-writer-wins register, enable-wins flag, grow-only set.

struct CtrState final : StateBase {
  std::uint64_t count = 0;
};

struct PnState final : StateBase {
  std::uint64_t incs = 0;
  std::uint64_t decs = 0;
};

struct LwwState final : StateBase {
  Timestamp t = 0;  // 0 only in the initial state
  std::int64_t v = 0;
};

/// Enable-wins flag, realized as the set of live enable timestamps; a
/// concurrent enable survives a concurrent disable.
struct EwFlagState final : StateBase {
  std::vector<Timestamp> tokens;  // sorted ascending
};

struct GSetState final : StateBase {
  std::vector<std::int64_t> elems;  // sorted ascending
};

MrdtPtr make_counter();
MrdtPtr make_pn_counter();
MrdtPtr make_lww_register();
MrdtPtr make_ew_flag();
MrdtPtr make_gset();

} // namespace mrdt
