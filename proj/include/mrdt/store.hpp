#pragma once

#include "mrdt/core.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace mrdt {

/// One immutable version: the concrete state and the abstract execution that
/// produced it. Roots have no parents, operations one, merges two.
struct VersionNode {
  std::uint64_t id = 0;
  std::vector<std::uint64_t> parents;
  StatePtr state;
  std::shared_ptr<const AbstractExec> history;
};

/// Branch-consistent store: named branch heads pointing into a DAG of shared
/// immutable versions, plus the global clock that stamps operations. A Store
/// value is single-writer; copies are cheap and independent.
class Store {
public:
  static Store initialize(MrdtPtr type);

  const Mrdt& type() const { return *type_; }
  Timestamp clock() const { return clock_; }

  bool has_branch(const std::string& name) const { return heads_.count(name) > 0; }
  std::vector<std::string> branches() const;

  const VersionNode& head(const std::string& branch) const;
  const AbstractExec& history(const std::string& branch) const;
  StatePtr state(const std::string& branch) const;

  /// New branch `dst` sharing `src`'s head version. The clock is untouched.
  void create_branch(const std::string& src, const std::string& dst);

  /// Applies one operation at `branch` with a freshly issued timestamp,
  /// recording a child version; the clock advances by one.
  Value apply_operation(const std::string& branch, const Op& op);

  /// The most recent stored version both branches descend from: the common
  /// ancestor whose event set equals the intersection of the two heads'.
  /// Criss-cross histories where no such version exists are refused.
  const VersionNode& resolve_lca(const std::string& b1, const std::string& b2) const;

  /// Three-way merge of `from` into `into`; `from` is left untouched and the
  /// clock does not advance.
  void merge_branches(const std::string& into, const std::string& from);

private:
  Store() = default;

  const VersionNode& node(std::uint64_t id) const { return *dag_[id]; }
  std::uint64_t push_node(VersionNode node);

  MrdtPtr type_;
  std::vector<std::shared_ptr<const VersionNode>> dag_;
  std::map<std::string, std::uint64_t> heads_;
  Timestamp clock_ = 0;
};

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

struct TraceAction {
  enum class Kind { Create, Do, Merge };
  Kind kind = Kind::Do;
  std::string source;  // create: src, do: branch, merge: into
  std::string target;  // create: dst, merge: from
  Op op;               // do only

  static TraceAction create(std::string src, std::string dst) {
    return {Kind::Create, std::move(src), std::move(dst), {}};
  }
  static TraceAction perform(std::string branch, Op op) {
    return {Kind::Do, std::move(branch), {}, std::move(op)};
  }
  static TraceAction merge(std::string into, std::string from) {
    return {Kind::Merge, std::move(into), std::move(from), {}};
  }
};

bool operator==(const TraceAction& a, const TraceAction& b);

using Trace = std::vector<TraceAction>;

/// Folds a trace through the store transitions. Deterministic: the same trace
/// always produces the same final store. The first ill-formed action aborts
/// with its zero-based index in the message.
Store replay(const Trace& trace, MrdtPtr type);

/// One action per line: `action=create src=.. dst=..`, `action=do branch=..
/// op=.. [value=..|key=..|channel=..|msg=..]`, `action=merge into=.. from=..`.
/// A msg field extends to the end of the line.
std::string to_line(const TraceAction& action);
TraceAction parse_line(const std::string& line);

Trace read_trace(std::istream& in);
void write_trace(std::ostream& out, const Trace& trace);

} // namespace mrdt
