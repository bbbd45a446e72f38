#include "mrdt/basic_types.hpp"

#include "mrdt/oracle.hpp"

#include <algorithm>
#include <memory>
#include <sstream>

namespace mrdt {

namespace {

[[noreturn]] void reject(std::string_view type, const Op& op) {
  raise(ErrorCode::UnsupportedOperation,
        std::string(type) + " does not support " + to_string(op));
}

class CounterType final : public Mrdt {
public:
  std::string_view name() const override { return "ctr"; }

  StatePtr initial_state() const override { return std::make_shared<CtrState>(); }

  DoResult apply(const Op& op, const StatePtr& state, Timestamp) const override {
    const auto& s = state_cast<CtrState>(state);
    switch (op.kind) {
      case OpKind::Inc: {
        auto next = std::make_shared<CtrState>(s);
        next->count += 1;
        return {next, Value::unit()};
      }
      case OpKind::Read:
        return {state, Value::of_int(static_cast<std::int64_t>(s.count))};
      default:
        reject(name(), op);
    }
  }

  StatePtr merge(const StatePtr& lca, const StatePtr& left, const StatePtr& right) const override {
    const auto& l = state_cast<CtrState>(lca);
    const auto& a = state_cast<CtrState>(left);
    const auto& b = state_cast<CtrState>(right);
    if (a.count < l.count || b.count < l.count)
      raise(ErrorCode::PreconditionViolated, "counter merge: branch behind its ancestor");
    auto out = std::make_shared<CtrState>();
    out->count = a.count + b.count - l.count;
    return out;
  }

  std::string canonical(const StatePtr& state) const override {
    return std::to_string(state_cast<CtrState>(state).count);
  }

  Value spec_value(const Op& op, const AbstractExec& history) const override {
    switch (op.kind) {
      case OpKind::Inc: return Value::unit();
      case OpKind::Read: return Value::of_int(oracle::spec_counter_read(history));
      default: reject(name(), op);
    }
  }

  bool simulates(const AbstractExec& history, const StatePtr& state) const override {
    return oracle::rsim_counter(history, state_cast<CtrState>(state).count);
  }

  std::vector<Op> operation_menu(std::span<const std::int64_t>,
                                 std::span<const std::string>) const override {
    return {Op::inc(), Op::read()};
  }

  std::vector<Op> probe_operations(const ProbeContext&) const override { return {Op::read()}; }
};

class PnCounterType final : public Mrdt {
public:
  std::string_view name() const override { return "pnctr"; }

  StatePtr initial_state() const override { return std::make_shared<PnState>(); }

  DoResult apply(const Op& op, const StatePtr& state, Timestamp) const override {
    const auto& s = state_cast<PnState>(state);
    switch (op.kind) {
      case OpKind::Inc: {
        auto next = std::make_shared<PnState>(s);
        next->incs += 1;
        return {next, Value::unit()};
      }
      case OpKind::Dec: {
        auto next = std::make_shared<PnState>(s);
        next->decs += 1;
        return {next, Value::unit()};
      }
      case OpKind::Read:
        return {state, Value::of_int(static_cast<std::int64_t>(s.incs) -
                                     static_cast<std::int64_t>(s.decs))};
      default:
        reject(name(), op);
    }
  }

  StatePtr merge(const StatePtr& lca, const StatePtr& left, const StatePtr& right) const override {
    const auto& l = state_cast<PnState>(lca);
    const auto& a = state_cast<PnState>(left);
    const auto& b = state_cast<PnState>(right);
    if (a.incs < l.incs || b.incs < l.incs || a.decs < l.decs || b.decs < l.decs)
      raise(ErrorCode::PreconditionViolated, "pn merge: branch behind its ancestor");
    auto out = std::make_shared<PnState>();
    out->incs = a.incs + b.incs - l.incs;
    out->decs = a.decs + b.decs - l.decs;
    return out;
  }

  std::string canonical(const StatePtr& state) const override {
    const auto& s = state_cast<PnState>(state);
    return "(" + std::to_string(s.incs) + "," + std::to_string(s.decs) + ")";
  }

  Value spec_value(const Op& op, const AbstractExec& history) const override {
    switch (op.kind) {
      case OpKind::Inc:
      case OpKind::Dec: return Value::unit();
      case OpKind::Read: return Value::of_int(oracle::spec_pn_read(history));
      default: reject(name(), op);
    }
  }

  bool simulates(const AbstractExec& history, const StatePtr& state) const override {
    const auto& s = state_cast<PnState>(state);
    return oracle::rsim_pn(history, s.incs, s.decs);
  }

  std::vector<Op> operation_menu(std::span<const std::int64_t>,
                                 std::span<const std::string>) const override {
    return {Op::inc(), Op::dec(), Op::read()};
  }

  std::vector<Op> probe_operations(const ProbeContext&) const override { return {Op::read()}; }
};

class LwwRegisterType final : public Mrdt {
public:
  std::string_view name() const override { return "lww"; }

  StatePtr initial_state() const override { return std::make_shared<LwwState>(); }

  DoResult apply(const Op& op, const StatePtr& state, Timestamp now) const override {
    const auto& s = state_cast<LwwState>(state);
    switch (op.kind) {
      case OpKind::Write: {
        auto next = std::make_shared<LwwState>();
        next->t = now;
        next->v = op.value;
        return {next, Value::unit()};
      }
      case OpKind::Read:
        return {state, Value::of_int(s.v)};
      default:
        reject(name(), op);
    }
  }

  StatePtr merge(const StatePtr&, const StatePtr& left, const StatePtr& right) const override {
    const auto& a = state_cast<LwwState>(left);
    const auto& b = state_cast<LwwState>(right);
    return a.t >= b.t ? left : right;
  }

  std::string canonical(const StatePtr& state) const override {
    const auto& s = state_cast<LwwState>(state);
    return "(" + std::to_string(s.t) + "," + std::to_string(s.v) + ")";
  }

  Value spec_value(const Op& op, const AbstractExec& history) const override {
    switch (op.kind) {
      case OpKind::Write: return Value::unit();
      case OpKind::Read: return Value::of_int(oracle::spec_lww_read(history).second);
      default: reject(name(), op);
    }
  }

  bool simulates(const AbstractExec& history, const StatePtr& state) const override {
    const auto& s = state_cast<LwwState>(state);
    return oracle::rsim_lww(history, s.t, s.v);
  }

  std::vector<Op> operation_menu(std::span<const std::int64_t> values,
                                 std::span<const std::string>) const override {
    std::vector<Op> out;
    for (std::int64_t v : values) out.push_back(Op::write(v));
    out.push_back(Op::read());
    return out;
  }

  std::vector<Op> probe_operations(const ProbeContext&) const override { return {Op::read()}; }
};

class EwFlagType final : public Mrdt {
public:
  std::string_view name() const override { return "ewflag"; }

  StatePtr initial_state() const override { return std::make_shared<EwFlagState>(); }

  DoResult apply(const Op& op, const StatePtr& state, Timestamp now) const override {
    const auto& s = state_cast<EwFlagState>(state);
    switch (op.kind) {
      case OpKind::Enable: {
        auto next = std::make_shared<EwFlagState>(s);
        next->tokens.insert(std::upper_bound(next->tokens.begin(), next->tokens.end(), now), now);
        return {next, Value::unit()};
      }
      case OpKind::Disable:
        return {std::make_shared<EwFlagState>(), Value::unit()};
      case OpKind::Read:
        return {state, Value::of_bool(!s.tokens.empty())};
      default:
        reject(name(), op);
    }
  }

  StatePtr merge(const StatePtr& lca, const StatePtr& left, const StatePtr& right) const override {
    const auto& l = state_cast<EwFlagState>(lca).tokens;
    const auto& a = state_cast<EwFlagState>(left).tokens;
    const auto& b = state_cast<EwFlagState>(right).tokens;
    auto out = std::make_shared<EwFlagState>();
    for (Timestamp t : l)
      if (std::binary_search(a.begin(), a.end(), t) && std::binary_search(b.begin(), b.end(), t))
        out->tokens.push_back(t);
    for (Timestamp t : a)
      if (!std::binary_search(l.begin(), l.end(), t)) out->tokens.push_back(t);
    for (Timestamp t : b)
      if (!std::binary_search(l.begin(), l.end(), t)) out->tokens.push_back(t);
    std::sort(out->tokens.begin(), out->tokens.end());
    return out;
  }

  std::string canonical(const StatePtr& state) const override {
    const auto& s = state_cast<EwFlagState>(state);
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      if (i) out << ',';
      out << s.tokens[i];
    }
    out << '}';
    return out.str();
  }

  Value spec_value(const Op& op, const AbstractExec& history) const override {
    switch (op.kind) {
      case OpKind::Enable:
      case OpKind::Disable: return Value::unit();
      case OpKind::Read: return Value::of_bool(oracle::spec_ewflag_read(history));
      default: reject(name(), op);
    }
  }

  bool simulates(const AbstractExec& history, const StatePtr& state) const override {
    return oracle::rsim_ewflag(history, state_cast<EwFlagState>(state).tokens);
  }

  std::vector<Op> operation_menu(std::span<const std::int64_t>,
                                 std::span<const std::string>) const override {
    return {Op::enable(), Op::disable(), Op::read()};
  }

  std::vector<Op> probe_operations(const ProbeContext&) const override { return {Op::read()}; }
};

class GSetType final : public Mrdt {
public:
  std::string_view name() const override { return "gset"; }

  StatePtr initial_state() const override { return std::make_shared<GSetState>(); }

  DoResult apply(const Op& op, const StatePtr& state, Timestamp) const override {
    const auto& s = state_cast<GSetState>(state);
    switch (op.kind) {
      case OpKind::Add: {
        if (std::binary_search(s.elems.begin(), s.elems.end(), op.value))
          return {state, Value::unit()};
        auto next = std::make_shared<GSetState>(s);
        next->elems.insert(std::upper_bound(next->elems.begin(), next->elems.end(), op.value),
                           op.value);
        return {next, Value::unit()};
      }
      case OpKind::Read:
        return {state, Value::of_set(s.elems)};
      default:
        reject(name(), op);
    }
  }

  StatePtr merge(const StatePtr& lca, const StatePtr& left, const StatePtr& right) const override {
    const auto& l = state_cast<GSetState>(lca).elems;
    const auto& a = state_cast<GSetState>(left).elems;
    const auto& b = state_cast<GSetState>(right).elems;
    auto out = std::make_shared<GSetState>();
    out->elems = l;
    out->elems.insert(out->elems.end(), a.begin(), a.end());
    out->elems.insert(out->elems.end(), b.begin(), b.end());
    std::sort(out->elems.begin(), out->elems.end());
    out->elems.erase(std::unique(out->elems.begin(), out->elems.end()), out->elems.end());
    return out;
  }

  std::string canonical(const StatePtr& state) const override {
    const auto& s = state_cast<GSetState>(state);
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < s.elems.size(); ++i) {
      if (i) out << ',';
      out << s.elems[i];
    }
    out << '}';
    return out.str();
  }

  Value spec_value(const Op& op, const AbstractExec& history) const override {
    switch (op.kind) {
      case OpKind::Add: return Value::unit();
      case OpKind::Read: return Value::of_set(oracle::spec_gset_read(history));
      default: reject(name(), op);
    }
  }

  bool simulates(const AbstractExec& history, const StatePtr& state) const override {
    return oracle::rsim_gset(history, state_cast<GSetState>(state).elems);
  }

  std::vector<Op> operation_menu(std::span<const std::int64_t> values,
                                 std::span<const std::string>) const override {
    std::vector<Op> out;
    for (std::int64_t v : values) out.push_back(Op::add(v));
    out.push_back(Op::read());
    return out;
  }

  std::vector<Op> probe_operations(const ProbeContext&) const override { return {Op::read()}; }
};

} // namespace

MrdtPtr make_counter() { return std::make_shared<CounterType>(); }
MrdtPtr make_pn_counter() { return std::make_shared<PnCounterType>(); }
MrdtPtr make_lww_register() { return std::make_shared<LwwRegisterType>(); }
MrdtPtr make_ew_flag() { return std::make_shared<EwFlagType>(); }
MrdtPtr make_gset() { return std::make_shared<GSetType>(); }

} // namespace mrdt
