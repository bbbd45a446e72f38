#pragma once

#include "mrdt/core.hpp"

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

namespace mrdt {

/// Observed-remove set keeping one pair per add; the same element may appear
/// under several timestamps.
struct OrSetState final : StateBase {
  std::vector<std::pair<std::int64_t, Timestamp>> pairs;  // append order
};

/// Space-efficient variant: one pair per element, add refreshes the
/// timestamp of an existing entry.
struct OrSetSpaceState final : StateBase {
  std::vector<std::pair<std::int64_t, Timestamp>> pairs;  // append order, elems distinct
};

struct OrSetTreeNode {
  std::int64_t elem;
  Timestamp t;
  std::shared_ptr<const OrSetTreeNode> left;
  std::shared_ptr<const OrSetTreeNode> right;
};

/// Space- and time-efficient variant: a binary search tree keyed by element.
/// Operations are ordinary path-copying BST updates; merge rebuilds a
/// perfectly balanced tree from the linearly merged flattened inputs.
struct OrSetTreeState final : StateBase {
  std::shared_ptr<const OrSetTreeNode> root;
  std::size_t count = 0;
};

MrdtPtr make_orset();
MrdtPtr make_orset_space();
MrdtPtr make_orset_spacetime();

/// In-order (element-sorted) flattening of the tree variant.
std::vector<std::pair<std::int64_t, Timestamp>> orset_tree_flatten(const OrSetTreeState& s);

int orset_tree_height(const OrSetTreeState& s);

// Membership probes used by the benchmark workloads; each costs what the
// variant's representation costs (linear scans for the list variants, a
// descent for the tree).
bool orset_contains(const OrSetState& s, std::int64_t elem);
bool orset_space_contains(const OrSetSpaceState& s, std::int64_t elem);
bool orset_tree_contains(const OrSetTreeState& s, std::int64_t elem);

} // namespace mrdt
