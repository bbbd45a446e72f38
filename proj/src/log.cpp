#include "mrdt/log.hpp"

#include "mrdt/oracle.hpp"

#include <algorithm>
#include <memory>
#include <sstream>

namespace mrdt {

namespace {

using Entry = std::pair<Timestamp, std::string>;

/// True when `suffix` equals the trailing entries of `list`.
bool is_suffix(const std::vector<Entry>& suffix, const std::vector<Entry>& list) {
  if (suffix.size() > list.size()) return false;
  return std::equal(suffix.rbegin(), suffix.rend(), list.rbegin());
}

std::string entries_canonical(const std::vector<Entry>& entries) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) out << ',';
    out << '(' << entries[i].first << ",\"";
    for (char c : entries[i].second) {
      if (c == '"' || c == '\\') out << '\\';
      out << c;
    }
    out << "\")";
  }
  out << ']';
  return out.str();
}

class LogType final : public Mrdt {
public:
  std::string_view name() const override { return "log"; }

  StatePtr initial_state() const override { return std::make_shared<LogState>(); }

  DoResult apply(const Op& op, const StatePtr& state, Timestamp now) const override {
    const auto& s = state_cast<LogState>(state);
    switch (op.kind) {
      case OpKind::Append: {
        auto next = std::make_shared<LogState>();
        next->entries.reserve(s.entries.size() + 1);
        next->entries.emplace_back(now, op.text);
        next->entries.insert(next->entries.end(), s.entries.begin(), s.entries.end());
        return {next, Value::unit()};
      }
      case OpKind::Read:
        return {state, Value::of_entries(s.entries)};
      default:
        raise(ErrorCode::UnsupportedOperation, "log does not support " + to_string(op));
    }
  }

  StatePtr merge(const StatePtr& lca, const StatePtr& left, const StatePtr& right) const override {
    const auto& l = state_cast<LogState>(lca).entries;
    const auto& a = state_cast<LogState>(left).entries;
    const auto& b = state_cast<LogState>(right).entries;
    if (!is_suffix(l, a) || !is_suffix(l, b))
      raise(ErrorCode::PreconditionViolated, "log merge: ancestor is not a suffix of both sides");

    // New entries are the leading parts; sort them newest first, then keep
    // the shared ancestor as the tail.
    auto out = std::make_shared<LogState>();
    out->entries.assign(a.begin(), a.end() - static_cast<std::ptrdiff_t>(l.size()));
    out->entries.insert(out->entries.end(), b.begin(),
                        b.end() - static_cast<std::ptrdiff_t>(l.size()));
    std::sort(out->entries.begin(), out->entries.end(),
              [](const Entry& x, const Entry& y) { return x.first > y.first; });
    out->entries.insert(out->entries.end(), l.begin(), l.end());
    return out;
  }

  std::string canonical(const StatePtr& state) const override {
    return entries_canonical(state_cast<LogState>(state).entries);
  }

  Value spec_value(const Op& op, const AbstractExec& history) const override {
    switch (op.kind) {
      case OpKind::Append: return Value::unit();
      case OpKind::Read: return Value::of_entries(oracle::spec_log_read(history));
      default:
        raise(ErrorCode::UnsupportedOperation, "log does not support " + to_string(op));
    }
  }

  bool simulates(const AbstractExec& history, const StatePtr& state) const override {
    return oracle::rsim_log(history, state_cast<LogState>(state).entries);
  }

  std::vector<Op> operation_menu(std::span<const std::int64_t> values,
                                 std::span<const std::string>) const override {
    std::vector<Op> out;
    for (std::int64_t v : values) out.push_back(Op::append("m" + std::to_string(v)));
    out.push_back(Op::read());
    return out;
  }

  std::vector<Op> probe_operations(const ProbeContext&) const override { return {Op::read()}; }
};

} // namespace

MrdtPtr make_log() { return std::make_shared<LogType>(); }

} // namespace mrdt
