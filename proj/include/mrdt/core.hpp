#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mrdt {

/// Logical clock tick. The store issues them strictly increasing, starting at
/// 1, so every event carries a unique positive timestamp.
using Timestamp = std::uint64_t;

/// Unique event identity. In this simulator an event's id equals the
/// timestamp it was issued with; both fields are kept because they play
/// different roles in the predicates.
using EventId = std::uint64_t;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class ErrorCode {
  DuplicateEvent,     // abs_do given an event id already present
  EventConflict,      // merge inputs disagree on a shared event
  UnknownBranch,
  DuplicateBranch,
  NoUniqueLca,        // criss-cross history, no stored version matches
  UnsupportedOperation,
  PreconditionViolated,
  ParseError,
  ReplayError,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

enum class OpKind : std::uint8_t {
  Inc,
  Dec,
  Read,
  Write,     // LWW register write
  Enable,
  Disable,
  Add,
  Remove,
  Append,    // log append
  MapSet,    // map: apply inner op and rebind key
  MapGet,    // map: apply inner op without rebinding
  Send,      // chat: send(channel, message)
  ChatRead,  // chat: rd(channel)
  Enqueue,
  Dequeue,
};

/// One data type operation. A single tagged union covers every bundled type;
/// each type rejects kinds it does not support. Map operations carry a boxed
/// inner operation.
struct Op {
  OpKind kind = OpKind::Read;
  std::int64_t value = 0;   // Add/Remove/Write/Enqueue payload
  std::string key;          // MapSet/MapGet key, Send/ChatRead channel
  std::string text;         // Append/Send message
  std::shared_ptr<const Op> inner;  // MapSet/MapGet inner operation

  static Op of(OpKind kind, std::int64_t value = 0) {
    Op o;
    o.kind = kind;
    o.value = value;
    return o;
  }
  static Op inc() { return of(OpKind::Inc); }
  static Op dec() { return of(OpKind::Dec); }
  static Op read() { return of(OpKind::Read); }
  static Op write(std::int64_t v) { return of(OpKind::Write, v); }
  static Op enable() { return of(OpKind::Enable); }
  static Op disable() { return of(OpKind::Disable); }
  static Op add(std::int64_t v) { return of(OpKind::Add, v); }
  static Op remove(std::int64_t v) { return of(OpKind::Remove, v); }
  static Op append(std::string msg) {
    Op o = of(OpKind::Append);
    o.text = std::move(msg);
    return o;
  }
  static Op map_set(std::string key, Op inner_op) {
    Op o = of(OpKind::MapSet);
    o.key = std::move(key);
    o.inner = std::make_shared<const Op>(std::move(inner_op));
    return o;
  }
  static Op map_get(std::string key, Op inner_op) {
    Op o = of(OpKind::MapGet);
    o.key = std::move(key);
    o.inner = std::make_shared<const Op>(std::move(inner_op));
    return o;
  }
  static Op send(std::string channel, std::string msg) {
    Op o = of(OpKind::Send);
    o.key = std::move(channel);
    o.text = std::move(msg);
    return o;
  }
  static Op chat_read(std::string channel) {
    Op o = of(OpKind::ChatRead);
    o.key = std::move(channel);
    return o;
  }
  static Op enqueue(std::int64_t v) { return of(OpKind::Enqueue, v); }
  static Op dequeue() { return of(OpKind::Dequeue); }
};

bool operator==(const Op& a, const Op& b);
inline bool operator!=(const Op& a, const Op& b) { return !(a == b); }

/// Short mnemonic used in trace files and op-mix weights ("add", "rd", ...).
std::string_view op_kind_name(OpKind kind);
std::string to_string(const Op& op);

// ---------------------------------------------------------------------------
// Return values
// ---------------------------------------------------------------------------

/// Return value of an operation. Unit stands for the no-value result; Empty
/// is the distinguished dequeue-on-empty result (a value, not an error).
struct Value {
  enum class Kind : std::uint8_t { Unit, Int, Bool, IntSet, Entries, TimedInt, Empty };

  Kind kind = Kind::Unit;
  std::int64_t num = 0;
  bool truth = false;
  std::vector<std::int64_t> elems;                        // IntSet, sorted ascending
  std::vector<std::pair<Timestamp, std::string>> entries; // log read, newest first
  Timestamp stamp = 0;                                    // TimedInt timestamp

  static Value unit() { return {}; }
  static Value of_int(std::int64_t v) {
    Value r;
    r.kind = Kind::Int;
    r.num = v;
    return r;
  }
  static Value of_bool(bool b) {
    Value r;
    r.kind = Kind::Bool;
    r.truth = b;
    return r;
  }
  static Value of_set(std::vector<std::int64_t> sorted_elems) {
    Value r;
    r.kind = Kind::IntSet;
    r.elems = std::move(sorted_elems);
    return r;
  }
  static Value of_entries(std::vector<std::pair<Timestamp, std::string>> es) {
    Value r;
    r.kind = Kind::Entries;
    r.entries = std::move(es);
    return r;
  }
  static Value timed(Timestamp t, std::int64_t v) {
    Value r;
    r.kind = Kind::TimedInt;
    r.stamp = t;
    r.num = v;
    return r;
  }
  static Value empty() {
    Value r;
    r.kind = Kind::Empty;
    return r;
  }
};

bool operator==(const Value& a, const Value& b);
inline bool operator!=(const Value& a, const Value& b) { return !(a == b); }
std::string to_string(const Value& v);

// ---------------------------------------------------------------------------
// Abstract executions
// ---------------------------------------------------------------------------

struct Event {
  EventId id = 0;
  Op oper;
  Value rval;
  Timestamp time = 0;
};

/// A set of events plus an irreflexive, asymmetric, transitive visibility
/// relation. Events are kept sorted by id and vis as a sorted pair vector, so
/// structural equality is plain vector equality.
class AbstractExec {
public:
  AbstractExec() = default;

  /// Builds an execution from explicit parts (projections, tests). Sorts
  /// both vectors and rejects duplicate event ids; the caller is responsible
  /// for handing over a transitive relation.
  static AbstractExec from_parts(std::vector<Event> events,
                                 std::vector<std::pair<EventId, EventId>> vis);

  const std::vector<Event>& events() const { return events_; }
  const std::vector<std::pair<EventId, EventId>>& vis() const { return vis_; }

  bool empty() const { return events_.empty(); }
  std::size_t size() const { return events_.size(); }

  bool contains(EventId id) const { return find(id) != nullptr; }
  const Event* find(EventId id) const;

  /// True when `from` is visible to `to`.
  bool sees(EventId from, EventId to) const;

  /// Sorted event ids (used for the equal-event-set premise of convergence).
  std::vector<EventId> ids() const;

  friend bool operator==(const AbstractExec& a, const AbstractExec& b) {
    return a.events_.size() == b.events_.size() && a.vis_ == b.vis_ && same_events(a, b);
  }

  friend AbstractExec abs_do(const AbstractExec& exec, Event e);
  friend AbstractExec abs_merge(const AbstractExec& a, const AbstractExec& b);
  friend AbstractExec abs_lca(const AbstractExec& a, const AbstractExec& b);

private:
  static bool same_events(const AbstractExec& a, const AbstractExec& b);

  std::vector<Event> events_;                      // sorted by id
  std::vector<std::pair<EventId, EventId>> vis_;   // sorted lexicographically
};

/// Adds a fresh event; every event already present becomes visible to it.
/// Rejects duplicate event ids.
AbstractExec abs_do(const AbstractExec& exec, Event e);

/// Union of events and visibility. Shared events must agree on all their
/// properties and on visibility restricted to the shared set.
AbstractExec abs_merge(const AbstractExec& a, const AbstractExec& b);

/// Intersection of events, with visibility restricted to the intersection.
AbstractExec abs_lca(const AbstractExec& a, const AbstractExec& b);

/// Causally related events have increasing timestamps, and timestamps are
/// pairwise distinct.
bool check_psi_ts(const AbstractExec& exec);

/// The lca agrees with both sides on visibility over its events, and every
/// lca event is visible to every event that is new on either side.
bool check_psi_lca(const AbstractExec& lca, const AbstractExec& a, const AbstractExec& b);

/// Brute-force helper: vis equals its own transitive closure and is
/// irreflexive with both endpoints present.
bool vis_well_formed(const AbstractExec& exec);

/// True when every event of `inner` occurs in `outer`.
bool events_subset(const AbstractExec& inner, const AbstractExec& outer);

// ---------------------------------------------------------------------------
// The MRDT contract
// ---------------------------------------------------------------------------

struct StateBase {
  virtual ~StateBase() = default;
};

using StatePtr = std::shared_ptr<const StateBase>;
using DoResult = std::pair<StatePtr, Value>;

template <typename S>
const S& state_cast(const StatePtr& state) {
  return static_cast<const S&>(*state);
}

/// Payload universe observed in an execution, used to build probe operations
/// for observational-equivalence checks.
struct ProbeContext {
  std::vector<std::int64_t> values;
  std::vector<std::string> keys;
};

/// One mergeable replicated data type: initial state, the two methods the
/// store invokes (apply/merge), a canonical form that defines observational
/// equality, the declarative return-value specification evaluated on abstract
/// executions, and the simulation relation between abstract and concrete
/// states. apply and merge are pure: same inputs, same outputs, no side
/// effects.
class Mrdt {
public:
  virtual ~Mrdt() = default;

  virtual std::string_view name() const = 0;
  virtual StatePtr initial_state() const = 0;
  virtual DoResult apply(const Op& op, const StatePtr& state, Timestamp now) const = 0;
  virtual StatePtr merge(const StatePtr& lca, const StatePtr& left, const StatePtr& right) const = 0;
  virtual std::string canonical(const StatePtr& state) const = 0;

  /// The declarative specification: mandated return value of `op` given the
  /// abstract execution visible to it.
  virtual Value spec_value(const Op& op, const AbstractExec& history) const = 0;

  /// The replication-aware simulation relation between an abstract execution
  /// and a concrete state.
  virtual bool simulates(const AbstractExec& history, const StatePtr& state) const = 0;

  /// All operations worth generating over the given payload universe.
  virtual std::vector<Op> operation_menu(std::span<const std::int64_t> values,
                                         std::span<const std::string> keys) const = 0;

  /// Operations whose return values witness observational equality.
  virtual std::vector<Op> probe_operations(const ProbeContext& ctx) const = 0;
};

using MrdtPtr = std::shared_ptr<const Mrdt>;

} // namespace mrdt
