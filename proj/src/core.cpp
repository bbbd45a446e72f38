#include "mrdt/core.hpp"

#include <algorithm>
#include <sstream>

namespace mrdt {

bool operator==(const Op& a, const Op& b) {
  if (a.kind != b.kind || a.value != b.value || a.key != b.key || a.text != b.text)
    return false;
  if (!a.inner && !b.inner) return true;
  if (!a.inner || !b.inner) return false;
  return *a.inner == *b.inner;
}

std::string_view op_kind_name(OpKind kind) {
  switch (kind) {
    case OpKind::Inc: return "inc";
    case OpKind::Dec: return "dec";
    case OpKind::Read: return "rd";
    case OpKind::Write: return "wr";
    case OpKind::Enable: return "enable";
    case OpKind::Disable: return "disable";
    case OpKind::Add: return "add";
    case OpKind::Remove: return "remove";
    case OpKind::Append: return "append";
    case OpKind::MapSet: return "set";
    case OpKind::MapGet: return "get";
    case OpKind::Send: return "send";
    case OpKind::ChatRead: return "rd";
    case OpKind::Enqueue: return "enqueue";
    case OpKind::Dequeue: return "dequeue";
  }
  return "?";
}

std::string to_string(const Op& op) {
  std::ostringstream out;
  out << op_kind_name(op.kind);
  switch (op.kind) {
    case OpKind::Write:
    case OpKind::Add:
    case OpKind::Remove:
    case OpKind::Enqueue:
      out << '(' << op.value << ')';
      break;
    case OpKind::Append:
      out << "(\"" << op.text << "\")";
      break;
    case OpKind::MapSet:
    case OpKind::MapGet:
      out << '(' << op.key << ", " << (op.inner ? to_string(*op.inner) : "?") << ')';
      break;
    case OpKind::Send:
      out << '(' << op.key << ", \"" << op.text << "\")";
      break;
    case OpKind::ChatRead:
      out << '(' << op.key << ')';
      break;
    default:
      break;
  }
  return out.str();
}

bool operator==(const Value& a, const Value& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Value::Kind::Unit:
    case Value::Kind::Empty: return true;
    case Value::Kind::Int: return a.num == b.num;
    case Value::Kind::Bool: return a.truth == b.truth;
    case Value::Kind::IntSet: return a.elems == b.elems;
    case Value::Kind::Entries: return a.entries == b.entries;
    case Value::Kind::TimedInt: return a.stamp == b.stamp && a.num == b.num;
  }
  return false;
}

std::string to_string(const Value& v) {
  std::ostringstream out;
  switch (v.kind) {
    case Value::Kind::Unit:
      out << "unit";
      break;
    case Value::Kind::Empty:
      out << "EMPTY";
      break;
    case Value::Kind::Int:
      out << v.num;
      break;
    case Value::Kind::Bool:
      out << (v.truth ? "true" : "false");
      break;
    case Value::Kind::IntSet: {
      out << '{';
      for (std::size_t i = 0; i < v.elems.size(); ++i) {
        if (i) out << ',';
        out << v.elems[i];
      }
      out << '}';
      break;
    }
    case Value::Kind::Entries: {
      out << '[';
      for (std::size_t i = 0; i < v.entries.size(); ++i) {
        if (i) out << ',';
        out << '(' << v.entries[i].first << ",\"" << v.entries[i].second << "\")";
      }
      out << ']';
      break;
    }
    case Value::Kind::TimedInt:
      out << '(' << v.stamp << ',' << v.num << ')';
      break;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// AbstractExec
// ---------------------------------------------------------------------------

AbstractExec AbstractExec::from_parts(std::vector<Event> events,
                                      std::vector<std::pair<EventId, EventId>> vis) {
  AbstractExec out;
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < events.size(); ++i)
    if (events[i].id == events[i - 1].id)
      raise(ErrorCode::DuplicateEvent, "duplicate event id " + std::to_string(events[i].id));
  std::sort(vis.begin(), vis.end());
  vis.erase(std::unique(vis.begin(), vis.end()), vis.end());
  out.events_ = std::move(events);
  out.vis_ = std::move(vis);
  for (const auto& [from, to] : out.vis_)
    if (!out.contains(from) || !out.contains(to))
      raise(ErrorCode::EventConflict, "visibility edge over unknown event");
  return out;
}

const Event* AbstractExec::find(EventId id) const {
  auto it = std::lower_bound(events_.begin(), events_.end(), id,
                             [](const Event& e, EventId v) { return e.id < v; });
  if (it == events_.end() || it->id != id) return nullptr;
  return &*it;
}

bool AbstractExec::sees(EventId from, EventId to) const {
  return std::binary_search(vis_.begin(), vis_.end(), std::make_pair(from, to));
}

std::vector<EventId> AbstractExec::ids() const {
  std::vector<EventId> out;
  out.reserve(events_.size());
  for (const Event& e : events_) out.push_back(e.id);
  return out;
}

bool AbstractExec::same_events(const AbstractExec& a, const AbstractExec& b) {
  for (std::size_t i = 0; i < a.events_.size(); ++i) {
    const Event& x = a.events_[i];
    const Event& y = b.events_[i];
    if (x.id != y.id || x.time != y.time || x.oper != y.oper || x.rval != y.rval)
      return false;
  }
  return true;
}

AbstractExec abs_do(const AbstractExec& exec, Event e) {
  if (exec.contains(e.id))
    raise(ErrorCode::DuplicateEvent, "event id " + std::to_string(e.id) + " already present");

  AbstractExec out = exec;
  // All prior events become visible to the new one; transitivity is preserved
  // because the new event has no successors.
  for (const Event& prior : exec.events())
    out.vis_.emplace_back(prior.id, e.id);
  auto pos = std::lower_bound(out.events_.begin(), out.events_.end(), e.id,
                              [](const Event& x, EventId v) { return x.id < v; });
  out.events_.insert(pos, std::move(e));
  std::sort(out.vis_.begin(), out.vis_.end());
  return out;
}

namespace {

bool same_event_record(const Event& x, const Event& y) {
  return x.time == y.time && x.oper == y.oper && x.rval == y.rval;
}

} // namespace

AbstractExec abs_merge(const AbstractExec& a, const AbstractExec& b) {
  // Shared events must carry identical properties and identical visibility
  // restricted to the shared set.
  for (const Event& e : a.events()) {
    if (const Event* other = b.find(e.id); other && !same_event_record(e, *other))
      raise(ErrorCode::EventConflict,
            "merge inputs disagree on event " + std::to_string(e.id));
  }
  for (const auto& [from, to] : a.vis()) {
    if (b.contains(from) && b.contains(to) && !b.sees(from, to))
      raise(ErrorCode::EventConflict,
            "merge inputs disagree on visibility over shared events");
  }
  for (const auto& [from, to] : b.vis()) {
    if (a.contains(from) && a.contains(to) && !a.sees(from, to))
      raise(ErrorCode::EventConflict,
            "merge inputs disagree on visibility over shared events");
  }

  AbstractExec out;
  out.events_.reserve(a.events().size() + b.events().size());
  std::set_union(a.events().begin(), a.events().end(), b.events().begin(), b.events().end(),
                 std::back_inserter(out.events_),
                 [](const Event& x, const Event& y) { return x.id < y.id; });
  out.vis_.reserve(a.vis().size() + b.vis().size());
  std::set_union(a.vis().begin(), a.vis().end(), b.vis().begin(), b.vis().end(),
                 std::back_inserter(out.vis_));
  return out;
}

AbstractExec abs_lca(const AbstractExec& a, const AbstractExec& b) {
  AbstractExec out;
  for (const Event& e : a.events())
    if (b.contains(e.id)) out.events_.push_back(e);
  for (const auto& edge : a.vis())
    if (out.contains(edge.first) && out.contains(edge.second)) out.vis_.push_back(edge);
  return out;
}

bool check_psi_ts(const AbstractExec& exec) {
  for (const auto& [from, to] : exec.vis()) {
    const Event* e = exec.find(from);
    const Event* f = exec.find(to);
    if (!e || !f || e->time >= f->time) return false;
  }
  std::vector<Timestamp> times;
  times.reserve(exec.size());
  for (const Event& e : exec.events()) times.push_back(e.time);
  std::sort(times.begin(), times.end());
  return std::adjacent_find(times.begin(), times.end()) == times.end();
}

bool check_psi_lca(const AbstractExec& lca, const AbstractExec& a, const AbstractExec& b) {
  // Visibility over the lca's events must agree in all three executions.
  auto restricted = [&lca](const AbstractExec& exec) {
    std::vector<std::pair<EventId, EventId>> out;
    for (const auto& edge : exec.vis())
      if (lca.contains(edge.first) && lca.contains(edge.second)) out.push_back(edge);
    return out;
  };
  if (restricted(a) != lca.vis() || restricted(b) != lca.vis()) return false;

  // Every lca event is visible to every event new on either side.
  for (const Event& mine : lca.events()) {
    for (const AbstractExec* side : {&a, &b}) {
      for (const Event& e : side->events()) {
        if (lca.contains(e.id)) continue;
        if (!a.sees(mine.id, e.id) && !b.sees(mine.id, e.id)) return false;
      }
    }
  }
  return true;
}

bool events_subset(const AbstractExec& inner, const AbstractExec& outer) {
  for (const Event& e : inner.events())
    if (!outer.contains(e.id)) return false;
  return true;
}

bool vis_well_formed(const AbstractExec& exec) {
  for (const auto& [from, to] : exec.vis()) {
    if (from == to) return false;
    if (!exec.contains(from) || !exec.contains(to)) return false;
    if (exec.sees(to, from)) return false;
  }
  for (const auto& [a, b] : exec.vis())
    for (const auto& [c, d] : exec.vis())
      if (b == c && !exec.sees(a, d)) return false;
  return true;
}

} // namespace mrdt
