#include "mrdt/queue.hpp"

#include "mrdt/oracle.hpp"

#include <memory>
#include <sstream>

namespace mrdt {

namespace {

class QueueType final : public Mrdt {
public:
  std::string_view name() const override { return "queue"; }

  StatePtr initial_state() const override { return std::make_shared<QueueState>(); }

  DoResult apply(const Op& op, const StatePtr& state, Timestamp now) const override {
    const auto& s = state_cast<QueueState>(state);
    switch (op.kind) {
      case OpKind::Enqueue: {
        auto next = std::make_shared<QueueState>();
        next->front = s.front;
        next->back = s.back.pushed_front({now, op.value});
        return {next, Value::unit()};
      }
      case OpKind::Dequeue: {
        if (s.front.empty() && s.back.empty()) return {state, Value::empty()};
        if (!s.front.empty()) {
          QItem head = s.front.front();
          auto next = std::make_shared<QueueState>();
          next->front = s.front.without_front();
          next->back = s.back;
          return {next, Value::timed(head.first, head.second)};
        }
        // Front is empty: reverse back into front, then pop.
        PList<QItem> normalized = s.back.reversed();
        QItem head = normalized.front();
        auto next = std::make_shared<QueueState>();
        next->front = normalized.without_front();
        return {next, Value::timed(head.first, head.second)};
      }
      default:
        raise(ErrorCode::UnsupportedOperation, "queue does not support " + to_string(op));
    }
  }

  StatePtr merge(const StatePtr& lca, const StatePtr& left, const StatePtr& right) const override {
    std::vector<QItem> merged = queue_merge_lists(queue_tolist(state_cast<QueueState>(lca)),
                                                  queue_tolist(state_cast<QueueState>(left)),
                                                  queue_tolist(state_cast<QueueState>(right)));
    auto out = std::make_shared<QueueState>();
    out->front = PList<QItem>::from_vector(merged);
    return out;
  }

  std::string canonical(const StatePtr& state) const override {
    std::vector<QItem> items = queue_tolist(state_cast<QueueState>(state));
    std::ostringstream out;
    out << '[';
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out << ',';
      out << '(' << items[i].first << ',' << items[i].second << ')';
    }
    out << ']';
    return out.str();
  }

  Value spec_value(const Op& op, const AbstractExec& history) const override {
    switch (op.kind) {
      case OpKind::Enqueue: return Value::unit();
      case OpKind::Dequeue: return oracle::spec_queue_dequeue(history);
      default:
        raise(ErrorCode::UnsupportedOperation, "queue does not support " + to_string(op));
    }
  }

  bool simulates(const AbstractExec& history, const StatePtr& state) const override {
    return oracle::rsim_queue(history, queue_tolist(state_cast<QueueState>(state)));
  }

  std::vector<Op> operation_menu(std::span<const std::int64_t> values,
                                 std::span<const std::string>) const override {
    std::vector<Op> out;
    for (std::int64_t v : values) out.push_back(Op::enqueue(v));
    out.push_back(Op::dequeue());
    return out;
  }

  std::vector<Op> probe_operations(const ProbeContext&) const override { return {Op::dequeue()}; }
};

} // namespace

MrdtPtr make_queue() { return std::make_shared<QueueType>(); }

std::vector<QItem> queue_tolist(const QueueState& s) {
  std::vector<QItem> out = s.front.to_vector();
  std::vector<QItem> rear = s.back.to_vector();
  out.insert(out.end(), rear.rbegin(), rear.rend());
  return out;
}

std::vector<QItem> queue_diff(const std::vector<QItem>& a, const std::vector<QItem>& l) {
  std::size_t ia = 0, il = 0;
  while (ia < a.size() && il < l.size()) {
    if (l[il].first < a[ia].first)
      ++il;
    else {
      ++ia;
      ++il;
    }
  }
  return {a.begin() + static_cast<std::ptrdiff_t>(ia), a.end()};
}

std::vector<QItem> queue_intersection(const std::vector<QItem>& l, const std::vector<QItem>& a,
                                      const std::vector<QItem>& b) {
  std::vector<QItem> out;
  std::size_t il = 0, ia = 0, ib = 0;
  while (il < l.size() && ia < a.size() && ib < b.size()) {
    if (l[il].first < a[ia].first || l[il].first < b[ib].first) {
      ++il;  // dequeued on at least one side
    } else {
      out.push_back(l[il]);
      ++il;
      ++ia;
      ++ib;
    }
  }
  return out;
}

std::vector<QItem> queue_union(const std::vector<QItem>& x, const std::vector<QItem>& y) {
  std::vector<QItem> out;
  out.reserve(x.size() + y.size());
  std::size_t ix = 0, iy = 0;
  while (ix < x.size() && iy < y.size()) {
    if (x[ix].first < y[iy].first)
      out.push_back(x[ix++]);
    else
      out.push_back(y[iy++]);
  }
  out.insert(out.end(), x.begin() + static_cast<std::ptrdiff_t>(ix), x.end());
  out.insert(out.end(), y.begin() + static_cast<std::ptrdiff_t>(iy), y.end());
  return out;
}

std::vector<QItem> queue_merge_lists(const std::vector<QItem>& l, const std::vector<QItem>& a,
                                     const std::vector<QItem>& b) {
  std::vector<QItem> survivors = queue_intersection(l, a, b);
  std::vector<QItem> fresh = queue_union(queue_diff(a, l), queue_diff(b, l));
  survivors.insert(survivors.end(), fresh.begin(), fresh.end());
  return survivors;
}

} // namespace mrdt
