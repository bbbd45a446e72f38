#include "mrdt/orset.hpp"

#include "mrdt/oracle.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace mrdt {

namespace {

using Pair = std::pair<std::int64_t, Timestamp>;
using Pairs = std::vector<Pair>;
using TreePtr = std::shared_ptr<const OrSetTreeNode>;

[[noreturn]] void reject(std::string_view type, const Op& op) {
  raise(ErrorCode::UnsupportedOperation,
        std::string(type) + " does not support " + to_string(op));
}

std::string pairs_canonical(Pairs pairs) {
  std::sort(pairs.begin(), pairs.end());
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i) out << ',';
    out << '(' << pairs[i].first << ',' << pairs[i].second << ')';
  }
  out << '}';
  return out.str();
}

Value read_elems(const Pairs& pairs) {
  std::vector<std::int64_t> elems;
  elems.reserve(pairs.size());
  for (const Pair& p : pairs) elems.push_back(p.first);
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  return Value::of_set(std::move(elems));
}

Pairs sorted(Pairs p) {
  std::sort(p.begin(), p.end());
  return p;
}

bool has_pair(const Pairs& sorted_pairs, const Pair& p) {
  return std::binary_search(sorted_pairs.begin(), sorted_pairs.end(), p);
}

bool has_elem(const Pairs& pairs, std::int64_t elem) {
  for (const Pair& p : pairs)
    if (p.first == elem) return true;
  return false;
}

/// The unoptimized merge: pairs kept by all three versions plus pairs new on
/// either side.
Pairs orset_merge_pairs(const Pairs& l, const Pairs& a, const Pairs& b) {
  Pairs sl = sorted(l), sa = sorted(a), sb = sorted(b);
  Pairs out;
  for (const Pair& p : sl)
    if (has_pair(sa, p) && has_pair(sb, p)) out.push_back(p);
  for (const Pair& p : sa)
    if (!has_pair(sl, p)) out.push_back(p);
  for (const Pair& p : sb)
    if (!has_pair(sl, p)) out.push_back(p);
  std::sort(out.begin(), out.end());
  return out;
}

/// The five-clause duplicate-free merge: keep the triple intersection, the
/// one-sided additions, and for elements added on both sides the entry with
/// the larger timestamp.
Pairs orset_space_merge_pairs(const Pairs& l, const Pairs& a, const Pairs& b) {
  Pairs sl = sorted(l), sa = sorted(a), sb = sorted(b);
  Pairs da, db;  // pairs new on each side
  for (const Pair& p : sa)
    if (!has_pair(sl, p)) da.push_back(p);
  for (const Pair& p : sb)
    if (!has_pair(sl, p)) db.push_back(p);

  Pairs out;
  for (const Pair& p : sl)
    if (has_pair(sa, p) && has_pair(sb, p)) out.push_back(p);
  for (const Pair& p : da)
    if (!has_elem(db, p.first)) out.push_back(p);
  for (const Pair& p : db)
    if (!has_elem(da, p.first)) out.push_back(p);
  auto dominates = [](const Pair& p, const Pairs& other) {
    for (const Pair& q : other)
      if (q.first == p.first && p.second <= q.second) return false;
    return true;
  };
  for (const Pair& p : da)
    if (has_elem(db, p.first) && dominates(p, db)) out.push_back(p);
  for (const Pair& p : db)
    if (has_elem(da, p.first) && dominates(p, da)) out.push_back(p);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// --- tree helpers ---------------------------------------------------------

TreePtr tree_insert(const TreePtr& node, std::int64_t elem, Timestamp t, bool& added) {
  if (!node) {
    added = true;
    return std::make_shared<OrSetTreeNode>(OrSetTreeNode{elem, t, nullptr, nullptr});
  }
  if (elem < node->elem)
    return std::make_shared<OrSetTreeNode>(
        OrSetTreeNode{node->elem, node->t, tree_insert(node->left, elem, t, added), node->right});
  if (elem > node->elem)
    return std::make_shared<OrSetTreeNode>(
        OrSetTreeNode{node->elem, node->t, node->left, tree_insert(node->right, elem, t, added)});
  added = false;  // refresh the timestamp in place
  return std::make_shared<OrSetTreeNode>(OrSetTreeNode{elem, t, node->left, node->right});
}

const OrSetTreeNode* tree_min(const OrSetTreeNode* node) {
  while (node->left) node = node->left.get();
  return node;
}

TreePtr tree_remove(const TreePtr& node, std::int64_t elem, bool& removed) {
  if (!node) return nullptr;
  if (elem < node->elem)
    return std::make_shared<OrSetTreeNode>(
        OrSetTreeNode{node->elem, node->t, tree_remove(node->left, elem, removed), node->right});
  if (elem > node->elem)
    return std::make_shared<OrSetTreeNode>(
        OrSetTreeNode{node->elem, node->t, node->left, tree_remove(node->right, elem, removed)});
  removed = true;
  if (!node->left) return node->right;
  if (!node->right) return node->left;
  const OrSetTreeNode* successor = tree_min(node->right.get());
  bool ignore = false;
  return std::make_shared<OrSetTreeNode>(OrSetTreeNode{
      successor->elem, successor->t, node->left, tree_remove(node->right, successor->elem, ignore)});
}

void tree_collect(const OrSetTreeNode* node, Pairs& out) {
  if (!node) return;
  tree_collect(node->left.get(), out);
  out.emplace_back(node->elem, node->t);
  tree_collect(node->right.get(), out);
}

TreePtr tree_build_balanced(const Pairs& pairs, std::size_t lo, std::size_t hi) {
  if (lo >= hi) return nullptr;
  std::size_t mid = lo + (hi - lo) / 2;
  return std::make_shared<OrSetTreeNode>(OrSetTreeNode{pairs[mid].first, pairs[mid].second,
                                                       tree_build_balanced(pairs, lo, mid),
                                                       tree_build_balanced(pairs, mid + 1, hi)});
}

/// Linear three-way walk over the element-sorted flattenings. Independent of
/// the set-formula route above; the two are differential-tested against each
/// other.
Pairs tree_merge_pairs(const Pairs& l, const Pairs& a, const Pairs& b) {
  Pairs out;
  std::size_t il = 0, ia = 0, ib = 0;
  while (il < l.size() || ia < a.size() || ib < b.size()) {
    std::int64_t elem = std::numeric_limits<std::int64_t>::max();
    if (il < l.size()) elem = std::min(elem, l[il].first);
    if (ia < a.size()) elem = std::min(elem, a[ia].first);
    if (ib < b.size()) elem = std::min(elem, b[ib].first);

    bool in_l = il < l.size() && l[il].first == elem;
    bool in_a = ia < a.size() && a[ia].first == elem;
    bool in_b = ib < b.size() && b[ib].first == elem;
    Timestamp tl = in_l ? l[il].second : 0;
    Timestamp ta = in_a ? a[ia].second : 0;
    Timestamp tb = in_b ? b[ib].second : 0;

    if (in_a && in_b) {
      bool a_new = !in_l || ta != tl;
      bool b_new = !in_l || tb != tl;
      if (!a_new && !b_new)
        out.emplace_back(elem, tl);           // untouched on both sides
      else if (a_new && !b_new)
        out.emplace_back(elem, ta);           // refreshed or re-added on a only
      else if (!a_new && b_new)
        out.emplace_back(elem, tb);
      else
        out.emplace_back(elem, std::max(ta, tb));  // added on both, newer wins
    } else if (in_a && !in_b) {
      // Dropped if b removed an entry that a left untouched.
      if (!in_l || ta != tl) out.emplace_back(elem, ta);
    } else if (in_b && !in_a) {
      if (!in_l || tb != tl) out.emplace_back(elem, tb);
    }
    // Present only in l: removed on both sides.

    if (in_l) ++il;
    if (in_a) ++ia;
    if (in_b) ++ib;
  }
  return out;
}

int tree_height(const OrSetTreeNode* node) {
  if (!node) return 0;
  return 1 + std::max(tree_height(node->left.get()), tree_height(node->right.get()));
}

// --- the three data types --------------------------------------------------

class OrSetType final : public Mrdt {
public:
  std::string_view name() const override { return "orset"; }

  StatePtr initial_state() const override { return std::make_shared<OrSetState>(); }

  DoResult apply(const Op& op, const StatePtr& state, Timestamp now) const override {
    const auto& s = state_cast<OrSetState>(state);
    switch (op.kind) {
      case OpKind::Add: {
        auto next = std::make_shared<OrSetState>(s);
        next->pairs.emplace_back(op.value, now);
        return {next, Value::unit()};
      }
      case OpKind::Remove: {
        auto next = std::make_shared<OrSetState>();
        for (const Pair& p : s.pairs)
          if (p.first != op.value) next->pairs.push_back(p);
        return {next, Value::unit()};
      }
      case OpKind::Read:
        return {state, read_elems(s.pairs)};
      default:
        reject(name(), op);
    }
  }

  StatePtr merge(const StatePtr& lca, const StatePtr& left, const StatePtr& right) const override {
    auto out = std::make_shared<OrSetState>();
    out->pairs = orset_merge_pairs(state_cast<OrSetState>(lca).pairs,
                                   state_cast<OrSetState>(left).pairs,
                                   state_cast<OrSetState>(right).pairs);
    return out;
  }

  std::string canonical(const StatePtr& state) const override {
    return pairs_canonical(state_cast<OrSetState>(state).pairs);
  }

  Value spec_value(const Op& op, const AbstractExec& history) const override {
    switch (op.kind) {
      case OpKind::Add:
      case OpKind::Remove: return Value::unit();
      case OpKind::Read: return Value::of_set(oracle::spec_orset_read(history));
      default: reject(name(), op);
    }
  }

  bool simulates(const AbstractExec& history, const StatePtr& state) const override {
    return oracle::rsim_orset(history, state_cast<OrSetState>(state).pairs);
  }

  std::vector<Op> operation_menu(std::span<const std::int64_t> values,
                                 std::span<const std::string>) const override {
    std::vector<Op> out;
    for (std::int64_t v : values) {
      out.push_back(Op::add(v));
      out.push_back(Op::remove(v));
    }
    out.push_back(Op::read());
    return out;
  }

  std::vector<Op> probe_operations(const ProbeContext&) const override { return {Op::read()}; }
};

class OrSetSpaceType final : public Mrdt {
public:
  std::string_view name() const override { return "orset-space"; }

  StatePtr initial_state() const override { return std::make_shared<OrSetSpaceState>(); }

  DoResult apply(const Op& op, const StatePtr& state, Timestamp now) const override {
    const auto& s = state_cast<OrSetSpaceState>(state);
    switch (op.kind) {
      case OpKind::Add: {
        auto next = std::make_shared<OrSetSpaceState>(s);
        for (Pair& p : next->pairs) {
          if (p.first == op.value) {
            p.second = now;
            return {next, Value::unit()};
          }
        }
        next->pairs.emplace_back(op.value, now);
        return {next, Value::unit()};
      }
      case OpKind::Remove: {
        auto next = std::make_shared<OrSetSpaceState>();
        for (const Pair& p : s.pairs)
          if (p.first != op.value) next->pairs.push_back(p);
        return {next, Value::unit()};
      }
      case OpKind::Read:
        return {state, read_elems(s.pairs)};
      default:
        reject(name(), op);
    }
  }

  StatePtr merge(const StatePtr& lca, const StatePtr& left, const StatePtr& right) const override {
    auto out = std::make_shared<OrSetSpaceState>();
    out->pairs = orset_space_merge_pairs(state_cast<OrSetSpaceState>(lca).pairs,
                                         state_cast<OrSetSpaceState>(left).pairs,
                                         state_cast<OrSetSpaceState>(right).pairs);
    return out;
  }

  std::string canonical(const StatePtr& state) const override {
    return pairs_canonical(state_cast<OrSetSpaceState>(state).pairs);
  }

  Value spec_value(const Op& op, const AbstractExec& history) const override {
    switch (op.kind) {
      case OpKind::Add:
      case OpKind::Remove: return Value::unit();
      case OpKind::Read: return Value::of_set(oracle::spec_orset_read(history));
      default: reject(name(), op);
    }
  }

  bool simulates(const AbstractExec& history, const StatePtr& state) const override {
    return oracle::rsim_orset_space(history, state_cast<OrSetSpaceState>(state).pairs);
  }

  std::vector<Op> operation_menu(std::span<const std::int64_t> values,
                                 std::span<const std::string>) const override {
    std::vector<Op> out;
    for (std::int64_t v : values) {
      out.push_back(Op::add(v));
      out.push_back(Op::remove(v));
    }
    out.push_back(Op::read());
    return out;
  }

  std::vector<Op> probe_operations(const ProbeContext&) const override { return {Op::read()}; }
};

class OrSetTreeType final : public Mrdt {
public:
  std::string_view name() const override { return "orset-spacetime"; }

  StatePtr initial_state() const override { return std::make_shared<OrSetTreeState>(); }

  DoResult apply(const Op& op, const StatePtr& state, Timestamp now) const override {
    const auto& s = state_cast<OrSetTreeState>(state);
    switch (op.kind) {
      case OpKind::Add: {
        auto next = std::make_shared<OrSetTreeState>();
        bool added = false;
        next->root = tree_insert(s.root, op.value, now, added);
        next->count = s.count + (added ? 1 : 0);
        return {next, Value::unit()};
      }
      case OpKind::Remove: {
        auto next = std::make_shared<OrSetTreeState>();
        bool removed = false;
        next->root = tree_remove(s.root, op.value, removed);
        next->count = s.count - (removed ? 1 : 0);
        return {next, Value::unit()};
      }
      case OpKind::Read: {
        Pairs flat;
        flat.reserve(s.count);
        tree_collect(s.root.get(), flat);
        return {state, read_elems(flat)};
      }
      default:
        reject(name(), op);
    }
  }

  StatePtr merge(const StatePtr& lca, const StatePtr& left, const StatePtr& right) const override {
    Pairs merged = tree_merge_pairs(orset_tree_flatten(state_cast<OrSetTreeState>(lca)),
                                    orset_tree_flatten(state_cast<OrSetTreeState>(left)),
                                    orset_tree_flatten(state_cast<OrSetTreeState>(right)));
    auto out = std::make_shared<OrSetTreeState>();
    out->root = tree_build_balanced(merged, 0, merged.size());
    out->count = merged.size();
    return out;
  }

  std::string canonical(const StatePtr& state) const override {
    return pairs_canonical(orset_tree_flatten(state_cast<OrSetTreeState>(state)));
  }

  Value spec_value(const Op& op, const AbstractExec& history) const override {
    switch (op.kind) {
      case OpKind::Add:
      case OpKind::Remove: return Value::unit();
      case OpKind::Read: return Value::of_set(oracle::spec_orset_read(history));
      default: reject(name(), op);
    }
  }

  bool simulates(const AbstractExec& history, const StatePtr& state) const override {
    return oracle::rsim_orset_space(history,
                                    orset_tree_flatten(state_cast<OrSetTreeState>(state)));
  }

  std::vector<Op> operation_menu(std::span<const std::int64_t> values,
                                 std::span<const std::string>) const override {
    std::vector<Op> out;
    for (std::int64_t v : values) {
      out.push_back(Op::add(v));
      out.push_back(Op::remove(v));
    }
    out.push_back(Op::read());
    return out;
  }

  std::vector<Op> probe_operations(const ProbeContext&) const override { return {Op::read()}; }
};

} // namespace

MrdtPtr make_orset() { return std::make_shared<OrSetType>(); }
MrdtPtr make_orset_space() { return std::make_shared<OrSetSpaceType>(); }
MrdtPtr make_orset_spacetime() { return std::make_shared<OrSetTreeType>(); }

std::vector<std::pair<std::int64_t, Timestamp>> orset_tree_flatten(const OrSetTreeState& s) {
  Pairs out;
  out.reserve(s.count);
  tree_collect(s.root.get(), out);
  return out;
}

int orset_tree_height(const OrSetTreeState& s) { return tree_height(s.root.get()); }

bool orset_contains(const OrSetState& s, std::int64_t elem) { return has_elem(s.pairs, elem); }

bool orset_space_contains(const OrSetSpaceState& s, std::int64_t elem) {
  return has_elem(s.pairs, elem);
}

bool orset_tree_contains(const OrSetTreeState& s, std::int64_t elem) {
  const OrSetTreeNode* node = s.root.get();
  while (node) {
    if (elem == node->elem) return true;
    node = elem < node->elem ? node->left.get() : node->right.get();
  }
  return false;
}

} // namespace mrdt
