#include "mrdt/registry.hpp"

#include "mrdt/basic_types.hpp"
#include "mrdt/log.hpp"
#include "mrdt/map.hpp"
#include "mrdt/orset.hpp"
#include "mrdt/queue.hpp"

namespace mrdt {

std::vector<std::string_view> type_names() {
  return {"ctr",  "pnctr", "lww",         "ewflag",          "gset", "orset",
          "orset-space", "orset-spacetime", "log", "gmap", "logmap-chat", "queue"};
}

MrdtPtr make_type(std::string_view name) {
  if (name == "ctr") return make_counter();
  if (name == "pnctr") return make_pn_counter();
  if (name == "lww") return make_lww_register();
  if (name == "ewflag") return make_ew_flag();
  if (name == "gset") return make_gset();
  if (name == "orset") return make_orset();
  if (name == "orset-space") return make_orset_space();
  if (name == "orset-spacetime") return make_orset_spacetime();
  if (name == "log") return make_log();
  if (name == "gmap") return make_gmap();
  if (name == "logmap-chat") return make_chat();
  if (name == "queue") return make_queue();
  return nullptr;
}

} // namespace mrdt
