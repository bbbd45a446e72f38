#include "mrdt/oracle.hpp"

#include <algorithm>
#include <map>

namespace mrdt::oracle {

namespace {

/// True when `add` is an add of `elem` not seen by any remove of `elem`.
bool add_survives(const AbstractExec& history, const Event& add, std::int64_t elem) {
  for (const Event& f : history.events())
    if (f.oper.kind == OpKind::Remove && f.oper.value == elem && history.sees(add.id, f.id))
      return false;
  return true;
}

/// True when `enable` has no visible disable after it.
bool enable_survives(const AbstractExec& history, const Event& enable) {
  for (const Event& f : history.events())
    if (f.oper.kind == OpKind::Disable && history.sees(enable.id, f.id)) return false;
  return true;
}

/// True when enqueue `enq` has no visible matching dequeue.
bool enqueue_unmatched(const AbstractExec& history, const Event& enq) {
  for (const Event& d : history.events())
    if (queue_match(enq, d) && history.sees(enq.id, d.id)) return false;
  return true;
}

} // namespace

std::int64_t spec_counter_read(const AbstractExec& history) {
  std::int64_t n = 0;
  for (const Event& e : history.events())
    if (e.oper.kind == OpKind::Inc) ++n;
  return n;
}

std::int64_t spec_pn_read(const AbstractExec& history) {
  std::int64_t n = 0;
  for (const Event& e : history.events()) {
    if (e.oper.kind == OpKind::Inc) ++n;
    if (e.oper.kind == OpKind::Dec) --n;
  }
  return n;
}

std::pair<Timestamp, std::int64_t> spec_lww_read(const AbstractExec& history) {
  std::pair<Timestamp, std::int64_t> best{0, 0};
  for (const Event& e : history.events())
    if (e.oper.kind == OpKind::Write && e.time > best.first) best = {e.time, e.oper.value};
  return best;
}

bool spec_ewflag_read(const AbstractExec& history) {
  for (const Event& e : history.events())
    if (e.oper.kind == OpKind::Enable && enable_survives(history, e)) return true;
  return false;
}

std::vector<std::int64_t> spec_gset_read(const AbstractExec& history) {
  std::vector<std::int64_t> out;
  for (const Event& e : history.events())
    if (e.oper.kind == OpKind::Add) out.push_back(e.oper.value);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::int64_t> spec_orset_read(const AbstractExec& history) {
  std::vector<std::int64_t> out;
  for (const Event& e : history.events())
    if (e.oper.kind == OpKind::Add && add_survives(history, e, e.oper.value))
      out.push_back(e.oper.value);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::pair<Timestamp, std::string>> spec_log_read(const AbstractExec& history) {
  std::vector<std::pair<Timestamp, std::string>> out;
  for (const Event& e : history.events())
    if (e.oper.kind == OpKind::Append) out.emplace_back(e.time, e.oper.text);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  return out;
}

bool queue_match(const Event& enq, const Event& deq) {
  return enq.oper.kind == OpKind::Enqueue && deq.oper.kind == OpKind::Dequeue &&
         deq.rval == Value::timed(enq.time, enq.oper.value);
}

Value spec_queue_dequeue(const AbstractExec& history) {
  const Event* oldest = nullptr;
  for (const Event& e : history.events()) {
    if (e.oper.kind != OpKind::Enqueue || !enqueue_unmatched(history, e)) continue;
    if (!oldest || e.time < oldest->time) oldest = &e;
  }
  if (!oldest) return Value::empty();
  return Value::timed(oldest->time, oldest->oper.value);
}

std::optional<std::string> violated_queue_axiom(const AbstractExec& history) {
  const auto& events = history.events();

  // AddRem: a dequeue returning a value must match some enqueue.
  for (const Event& d : events) {
    if (d.oper.kind != OpKind::Dequeue || d.rval.kind == Value::Kind::Empty) continue;
    bool matched = false;
    for (const Event& e : events)
      if (queue_match(e, d)) { matched = true; break; }
    if (!matched) return "AddRem";
  }

  // Empty: a dequeue returning EMPTY must not see an unmatched enqueue.
  for (const Event& d : events) {
    if (d.oper.kind != OpKind::Dequeue || d.rval.kind != Value::Kind::Empty) continue;
    for (const Event& e : events) {
      if (e.oper.kind != OpKind::Enqueue || !history.sees(e.id, d.id)) continue;
      bool consumed = false;
      for (const Event& m : events)
        if (queue_match(e, m) && history.sees(m.id, d.id)) { consumed = true; break; }
      if (!consumed) return "Empty";
    }
  }

  // FIFO1: if an enqueue precedes a matched enqueue, it is matched too.
  for (const Event& e1 : events) {
    if (e1.oper.kind != OpKind::Enqueue) continue;
    for (const Event& e2 : events) {
      if (e2.oper.kind != OpKind::Enqueue || !history.sees(e1.id, e2.id)) continue;
      bool e2_matched = false;
      for (const Event& e3 : events)
        if (queue_match(e2, e3)) { e2_matched = true; break; }
      if (!e2_matched) continue;
      bool e1_matched = false;
      for (const Event& e4 : events)
        if (queue_match(e1, e4)) { e1_matched = true; break; }
      if (!e1_matched) return "FIFO1";
    }
  }

  // FIFO2: no pair of matches dequeues a later enqueue before an earlier one.
  for (const Event& e1 : events) {
    if (e1.oper.kind != OpKind::Enqueue) continue;
    for (const Event& e2 : events) {
      if (e2.oper.kind != OpKind::Enqueue || !history.sees(e1.id, e2.id)) continue;
      for (const Event& e3 : events) {
        if (!queue_match(e2, e3)) continue;
        for (const Event& e4 : events)
          if (queue_match(e1, e4) && history.sees(e3.id, e4.id)) return "FIFO2";
      }
    }
  }

  return std::nullopt;
}

bool queue_axioms_hold(const AbstractExec& history) {
  return !violated_queue_axiom(history).has_value();
}

// ---------------------------------------------------------------------------
// Simulation relations
// ---------------------------------------------------------------------------

bool rsim_counter(const AbstractExec& history, std::uint64_t count) {
  return static_cast<std::int64_t>(count) == spec_counter_read(history);
}

bool rsim_pn(const AbstractExec& history, std::uint64_t incs, std::uint64_t decs) {
  std::int64_t i = 0, d = 0;
  for (const Event& e : history.events()) {
    if (e.oper.kind == OpKind::Inc) ++i;
    if (e.oper.kind == OpKind::Dec) ++d;
  }
  return static_cast<std::int64_t>(incs) == i && static_cast<std::int64_t>(decs) == d;
}

bool rsim_lww(const AbstractExec& history, Timestamp t, std::int64_t v) {
  return spec_lww_read(history) == std::make_pair(t, v);
}

bool rsim_ewflag(const AbstractExec& history, const std::vector<Timestamp>& tokens) {
  std::vector<Timestamp> expected;
  for (const Event& e : history.events())
    if (e.oper.kind == OpKind::Enable && enable_survives(history, e))
      expected.push_back(e.time);
  std::sort(expected.begin(), expected.end());
  std::vector<Timestamp> actual = tokens;
  std::sort(actual.begin(), actual.end());
  return expected == actual;
}

bool rsim_gset(const AbstractExec& history, const std::vector<std::int64_t>& elems) {
  std::vector<std::int64_t> actual = elems;
  std::sort(actual.begin(), actual.end());
  actual.erase(std::unique(actual.begin(), actual.end()), actual.end());
  return actual == spec_gset_read(history);
}

bool rsim_orset(const AbstractExec& history,
                const std::vector<std::pair<std::int64_t, Timestamp>>& pairs) {
  // Concrete to abstract: every pair is a surviving add with that timestamp.
  for (const auto& [elem, t] : pairs) {
    bool witnessed = false;
    for (const Event& e : history.events()) {
      if (e.oper.kind == OpKind::Add && e.oper.value == elem && e.time == t &&
          add_survives(history, e, elem)) {
        witnessed = true;
        break;
      }
    }
    if (!witnessed) return false;
  }
  // Abstract to concrete: every surviving add appears as a pair.
  for (const Event& e : history.events()) {
    if (e.oper.kind != OpKind::Add || !add_survives(history, e, e.oper.value)) continue;
    if (std::find(pairs.begin(), pairs.end(), std::make_pair(e.oper.value, e.time)) ==
        pairs.end())
      return false;
  }
  return true;
}

bool rsim_orset_space(const AbstractExec& history,
                      const std::vector<std::pair<std::int64_t, Timestamp>>& pairs) {
  for (const auto& [elem, t] : pairs) {
    bool witnessed = false;
    for (const Event& e : history.events()) {
      if (e.oper.kind == OpKind::Add && e.oper.value == elem && e.time == t &&
          add_survives(history, e, elem)) {
        witnessed = true;
        break;
      }
    }
    if (!witnessed) return false;
    // The stored timestamp dominates every surviving add of the element.
    for (const Event& e : history.events())
      if (e.oper.kind == OpKind::Add && e.oper.value == elem &&
          add_survives(history, e, elem) && t < e.time)
        return false;
  }
  for (const Event& e : history.events()) {
    if (e.oper.kind != OpKind::Add || !add_survives(history, e, e.oper.value)) continue;
    bool present = false;
    for (const auto& [elem, t] : pairs)
      if (elem == e.oper.value) { present = true; break; }
    if (!present) return false;
  }
  return true;
}

bool rsim_log(const AbstractExec& history,
              const std::vector<std::pair<Timestamp, std::string>>& entries) {
  // Membership, both directions.
  for (const auto& [t, m] : entries) {
    bool witnessed = false;
    for (const Event& e : history.events())
      if (e.oper.kind == OpKind::Append && e.time == t && e.oper.text == m) {
        witnessed = true;
        break;
      }
    if (!witnessed) return false;
  }
  for (const Event& e : history.events()) {
    if (e.oper.kind != OpKind::Append) continue;
    if (std::find(entries.begin(), entries.end(), std::make_pair(e.time, e.oper.text)) ==
        entries.end())
      return false;
  }
  // Ordering: positional precedence holds exactly for newer-to-older pairs.
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (std::size_t j = i + 1; j < entries.size(); ++j)
      if (!(entries[i].first > entries[j].first)) return false;
  return true;
}

bool rsim_queue(const AbstractExec& history,
                const std::vector<std::pair<Timestamp, std::int64_t>>& items) {
  // Membership: items are exactly the enqueues with no visible matching
  // dequeue.
  std::map<Timestamp, const Event*> live;
  for (const Event& e : history.events()) {
    if (e.oper.kind != OpKind::Enqueue) continue;
    bool consumed = false;
    for (const Event& d : history.events())
      if (queue_match(e, d) && history.sees(e.id, d.id)) { consumed = true; break; }
    if (!consumed) live.emplace(e.time, &e);
  }
  if (items.size() != live.size()) return false;
  for (const auto& [t, v] : items) {
    auto it = live.find(t);
    if (it == live.end() || it->second->oper.value != v) return false;
  }
  // Ordering: positional order agrees with visibility, falling back to
  // timestamps for concurrent enqueues; checked in both directions.
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      const Event* e1 = live.at(items[i].first);
      const Event* e2 = live.at(items[j].first);
      bool ordered = history.sees(e1->id, e2->id) ||
                     (!history.sees(e1->id, e2->id) && !history.sees(e2->id, e1->id) &&
                      e1->time < e2->time);
      if (!ordered) return false;
    }
  }
  return true;
}

bool obs_equiv(const Mrdt& type, const StatePtr& a, const StatePtr& b,
               const std::vector<Op>& probes) {
  for (const Op& probe : probes) {
    // Probe timestamps are arbitrary; return values may not depend on them.
    Value va = type.apply(probe, a, 1u << 20).second;
    Value vb = type.apply(probe, b, 1u << 21).second;
    if (va != vb) return false;
  }
  return type.canonical(a) == type.canonical(b);
}

} // namespace mrdt::oracle
