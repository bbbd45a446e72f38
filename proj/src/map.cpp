#include "mrdt/map.hpp"

#include "mrdt/log.hpp"
#include "mrdt/basic_types.hpp"

#include <algorithm>
#include <memory>
#include <set>
#include <sstream>

namespace mrdt {

namespace {

[[noreturn]] void reject(std::string_view type, const Op& op) {
  raise(ErrorCode::UnsupportedOperation,
        std::string(type) + " does not support " + to_string(op));
}

class AlphaMapType final : public Mrdt {
public:
  AlphaMapType(MrdtPtr inner, std::string name) : inner_(std::move(inner)), name_(std::move(name)) {}

  std::string_view name() const override { return name_; }

  StatePtr initial_state() const override { return std::make_shared<AlphaMapState>(); }

  DoResult apply(const Op& op, const StatePtr& state, Timestamp now) const override {
    const auto& s = state_cast<AlphaMapState>(state);
    if ((op.kind != OpKind::MapSet && op.kind != OpKind::MapGet) || !op.inner)
      reject(name_, op);
    DoResult inner_result = inner_->apply(*op.inner, map_lookup_default(s, op.key, *inner_), now);
    if (op.kind == OpKind::MapGet) return {state, inner_result.second};
    auto next = std::make_shared<AlphaMapState>(s);
    next->bindings[op.key] = inner_result.first;
    return {next, inner_result.second};
  }

  StatePtr merge(const StatePtr& lca, const StatePtr& left, const StatePtr& right) const override {
    const auto& l = state_cast<AlphaMapState>(lca);
    const auto& a = state_cast<AlphaMapState>(left);
    const auto& b = state_cast<AlphaMapState>(right);
    auto out = std::make_shared<AlphaMapState>();
    std::set<std::string> keys;
    for (const auto& [k, v] : l.bindings) keys.insert(k);
    for (const auto& [k, v] : a.bindings) keys.insert(k);
    for (const auto& [k, v] : b.bindings) keys.insert(k);
    for (const std::string& k : keys)
      out->bindings[k] = inner_->merge(map_lookup_default(l, k, *inner_),
                                       map_lookup_default(a, k, *inner_),
                                       map_lookup_default(b, k, *inner_));
    return out;
  }

  std::string canonical(const StatePtr& state) const override {
    const auto& s = state_cast<AlphaMapState>(state);
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (const auto& [k, v] : s.bindings) {
      if (!first) out << ',';
      first = false;
      out << '"' << k << "\":" << inner_->canonical(v);
    }
    out << '}';
    return out.str();
  }

  Value spec_value(const Op& op, const AbstractExec& history) const override {
    if ((op.kind != OpKind::MapSet && op.kind != OpKind::MapGet) || !op.inner)
      reject(name_, op);
    return inner_->spec_value(*op.inner, project_key(op.key, history));
  }

  bool simulates(const AbstractExec& history, const StatePtr& state) const override {
    const auto& s = state_cast<AlphaMapState>(state);
    std::set<std::string> keys;
    for (const auto& [k, v] : s.bindings) keys.insert(k);
    for (const Event& e : history.events())
      if (e.oper.kind == OpKind::MapSet || e.oper.kind == OpKind::MapGet) keys.insert(e.oper.key);
    for (const std::string& k : keys) {
      bool bound = s.bindings.count(k) > 0;
      bool has_set_event = false;
      for (const Event& e : history.events())
        if (e.oper.kind == OpKind::MapSet && e.oper.key == k) { has_set_event = true; break; }
      if (bound != has_set_event) return false;
      if (!inner_->simulates(project_key(k, history), map_lookup_default(s, k, *inner_)))
        return false;
    }
    return true;
  }

  std::vector<Op> operation_menu(std::span<const std::int64_t> values,
                                 std::span<const std::string> keys) const override {
    std::vector<Op> out;
    for (const std::string& k : keys) {
      for (const Op& io : inner_->operation_menu(values, keys)) {
        out.push_back(Op::map_set(k, io));
        if (io.kind == OpKind::Read) out.push_back(Op::map_get(k, io));
      }
    }
    return out;
  }

  std::vector<Op> probe_operations(const ProbeContext& ctx) const override {
    std::vector<Op> out;
    for (const std::string& k : ctx.keys)
      for (const Op& probe : inner_->probe_operations(ctx)) out.push_back(Op::map_get(k, probe));
    return out;
  }

private:
  MrdtPtr inner_;
  std::string name_;
};

/// Chat is the log-map with send/read operations translated at the boundary;
/// its specification and simulation relation are the map's, applied to the
/// translated execution.
class ChatType final : public Mrdt {
public:
  ChatType() : map_(make_alpha_map(make_log(), "logmap")) {}

  std::string_view name() const override { return "logmap-chat"; }

  StatePtr initial_state() const override { return map_->initial_state(); }

  DoResult apply(const Op& op, const StatePtr& state, Timestamp now) const override {
    return map_->apply(translate(op), state, now);
  }

  StatePtr merge(const StatePtr& lca, const StatePtr& left, const StatePtr& right) const override {
    return map_->merge(lca, left, right);
  }

  std::string canonical(const StatePtr& state) const override { return map_->canonical(state); }

  Value spec_value(const Op& op, const AbstractExec& history) const override {
    return map_->spec_value(translate(op), translate_history(history));
  }

  bool simulates(const AbstractExec& history, const StatePtr& state) const override {
    return map_->simulates(translate_history(history), state);
  }

  std::vector<Op> operation_menu(std::span<const std::int64_t> values,
                                 std::span<const std::string> keys) const override {
    std::vector<Op> out;
    for (const std::string& channel : keys) {
      for (std::int64_t v : values) out.push_back(Op::send(channel, "m" + std::to_string(v)));
      out.push_back(Op::chat_read(channel));
    }
    return out;
  }

  std::vector<Op> probe_operations(const ProbeContext& ctx) const override {
    std::vector<Op> out;
    for (const std::string& channel : ctx.keys) out.push_back(Op::chat_read(channel));
    return out;
  }

private:
  static Op translate(const Op& op) {
    switch (op.kind) {
      case OpKind::Send: return Op::map_set(op.key, Op::append(op.text));
      case OpKind::ChatRead: return Op::map_get(op.key, Op::read());
      default: reject("logmap-chat", op);
    }
  }

  static AbstractExec translate_history(const AbstractExec& history) {
    std::vector<Event> events;
    events.reserve(history.size());
    for (const Event& e : history.events())
      events.push_back(Event{e.id, translate(e.oper), e.rval, e.time});
    return AbstractExec::from_parts(std::move(events),
                                    {history.vis().begin(), history.vis().end()});
  }

  MrdtPtr map_;
};

} // namespace

MrdtPtr make_alpha_map(MrdtPtr inner, std::string name) {
  return std::make_shared<AlphaMapType>(std::move(inner), std::move(name));
}

MrdtPtr make_gmap() { return make_alpha_map(make_gset(), "gmap"); }

MrdtPtr make_chat() { return std::make_shared<ChatType>(); }

StatePtr map_lookup_default(const AlphaMapState& s, const std::string& key, const Mrdt& inner) {
  auto it = s.bindings.find(key);
  if (it != s.bindings.end()) return it->second;
  return inner.initial_state();
}

AbstractExec project_key(const std::string& key, const AbstractExec& history) {
  std::vector<Event> events;
  for (const Event& e : history.events())
    if (e.oper.kind == OpKind::MapSet && e.oper.key == key && e.oper.inner)
      events.push_back(Event{e.id, *e.oper.inner, e.rval, e.time});

  std::vector<std::pair<EventId, EventId>> vis;
  auto projected = [&events](EventId id) {
    for (const Event& e : events)
      if (e.id == id) return true;
    return false;
  };
  for (const auto& edge : history.vis())
    if (projected(edge.first) && projected(edge.second)) vis.push_back(edge);
  return AbstractExec::from_parts(std::move(events), std::move(vis));
}

} // namespace mrdt
