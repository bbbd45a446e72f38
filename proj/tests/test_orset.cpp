#include "mrdt/orset.hpp"

#include "mrdt/registry.hpp"
#include "mrdt/store.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <functional>

using namespace mrdt;

namespace {

StatePtr pairs_state(std::vector<std::pair<std::int64_t, Timestamp>> pairs) {
  auto s = std::make_shared<OrSetState>();
  s->pairs = std::move(pairs);
  return s;
}

StatePtr space_state(std::vector<std::pair<std::int64_t, Timestamp>> pairs) {
  auto s = std::make_shared<OrSetSpaceState>();
  s->pairs = std::move(pairs);
  return s;
}

} // namespace

TEST_CASE("or-set: add appends a pair, remove drops every occurrence") {
  MrdtPtr orset = make_orset();
  StatePtr s = orset->apply(Op::add(1), orset->initial_state(), 1).first;
  CHECK(orset->canonical(s) == "{(1,1)}");

  StatePtr crowded = pairs_state({{1, 1}, {1, 4}, {2, 2}});
  StatePtr cleaned = orset->apply(Op::remove(1), crowded, 5).first;
  CHECK(orset->canonical(cleaned) == "{(2,2)}");

  CHECK(orset->apply(Op::read(), crowded, 6).second == Value::of_set({1, 2}));
}

TEST_CASE("or-set merge: keeps survivors, one-sided additions, and add-wins") {
  MrdtPtr orset = make_orset();
  CHECK(orset->canonical(orset->merge(pairs_state({}), pairs_state({{1, 1}}),
                                      pairs_state({{2, 2}}))) == "{(1,1),(2,2)}");
  // b removed the shared element.
  CHECK(orset->canonical(orset->merge(pairs_state({{1, 1}}), pairs_state({{1, 1}}),
                                      pairs_state({}))) == "{}");
  // Concurrent re-add on a beats the remove on b.
  CHECK(orset->canonical(orset->merge(pairs_state({{1, 1}}), pairs_state({{1, 1}, {1, 3}}),
                                      pairs_state({}))) == "{(1,3)}");
}

TEST_CASE("space-efficient or-set: add refreshes the timestamp in place") {
  MrdtPtr space = make_orset_space();
  StatePtr s = space->apply(Op::add(1), space_state({{1, 2}}), 5).first;
  CHECK(space->canonical(s) == "{(1,5)}");
  StatePtr fresh = space->apply(Op::add(1), space->initial_state(), 5).first;
  CHECK(space->canonical(fresh) == "{(1,5)}");
}

TEST_CASE("space-efficient or-set: every short op sequence stays duplicate-free") {
  MrdtPtr space = make_orset_space();
  std::vector<Op> menu = {Op::add(0), Op::add(1), Op::remove(0), Op::remove(1), Op::read()};

  std::function<void(StatePtr, Timestamp, int)> walk = [&](StatePtr s, Timestamp t, int depth) {
    const auto& pairs = state_cast<OrSetSpaceState>(s).pairs;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      for (std::size_t j = i + 1; j < pairs.size(); ++j)
        REQUIRE(pairs[i].first != pairs[j].first);
    if (depth == 0) return;
    for (const Op& op : menu) walk(space->apply(op, s, t).first, t + 1, depth - 1);
  };
  walk(space->initial_state(), 1, 4);
}

TEST_CASE("space-efficient or-set merge follows the five-clause union") {
  MrdtPtr space = make_orset_space();
  CHECK(space->canonical(space->merge(space_state({}), space_state({{1, 1}}),
                                      space_state({{2, 2}}))) == "{(1,1),(2,2)}");
  // Added on both sides: the newer stamp survives.
  CHECK(space->canonical(space->merge(space_state({}), space_state({{1, 3}}),
                                      space_state({{1, 5}}))) == "{(1,5)}");
  // Refresh on a beats removal on b.
  CHECK(space->canonical(space->merge(space_state({{1, 1}}), space_state({{1, 4}}),
                                      space_state({}))) == "{(1,4)}");
}

TEST_CASE("tree or-set: reads in element order and ignores absent removals") {
  MrdtPtr tree = make_orset_spacetime();
  StatePtr s = tree->initial_state();
  Timestamp t = 1;
  for (std::int64_t v : {3, 1, 2}) s = tree->apply(Op::add(v), s, t++).first;
  CHECK(tree->apply(Op::read(), s, t).second == Value::of_set({1, 2, 3}));

  StatePtr same = tree->apply(Op::remove(9), s, t).first;
  CHECK(tree->canonical(same) == tree->canonical(s));
}

TEST_CASE("tree and list variants agree after identical operation histories") {
  MrdtPtr tree = make_type("orset-spacetime");
  MrdtPtr space = make_type("orset-space");
  for (const Trace& trace : test::sample_traces(*tree, 30, 14, 41)) {
    Store t_store = replay(trace, tree);
    Store s_store = replay(trace, space);
    for (const std::string& branch : t_store.branches())
      CHECK(t_store.type().canonical(t_store.state(branch)) ==
            s_store.type().canonical(s_store.state(branch)));
  }
}

TEST_CASE("tree merge agrees with the space merge formula on flattened inputs") {
  MrdtPtr tree = make_type("orset-spacetime");
  MrdtPtr space = make_type("orset-space");
  for (const Trace& trace : test::sample_traces(*tree, 30, 12, 43)) {
    Store store = replay(trace, tree);
    std::vector<std::string> names = store.branches();
    if (names.size() < 2) continue;

    Store mirror = replay(trace, space);
    Store merged_tree = store;
    Store merged_space = mirror;
    try {
      merged_tree.merge_branches(names[0], names[1]);
    } catch (const Error&) {
      continue;  // criss-cross, nothing to compare
    }
    merged_space.merge_branches(names[0], names[1]);
    CHECK(merged_tree.type().canonical(merged_tree.state(names[0])) ==
          merged_space.type().canonical(merged_space.state(names[0])));
  }
}

TEST_CASE("tree merge of two large sets stays height balanced") {
  MrdtPtr tree = make_orset_spacetime();
  StatePtr lca = tree->initial_state();
  Timestamp t = 1;
  for (std::int64_t v = 0; v < 1024; ++v) lca = tree->apply(Op::add(v), lca, t++).first;
  StatePtr a = lca;
  StatePtr b = lca;
  for (std::int64_t v = 1024; v < 1536; ++v) a = tree->apply(Op::add(v), a, t++).first;
  for (std::int64_t v = 1536; v < 2048; ++v) b = tree->apply(Op::add(v), b, t++).first;

  StatePtr merged = tree->merge(lca, a, b);
  const auto& ts = state_cast<OrSetTreeState>(merged);
  CHECK(ts.count == 2048);
  CHECK(orset_tree_height(ts) <= 20);
}

TEST_CASE("membership probes match the read value") {
  MrdtPtr tree = make_orset_spacetime();
  StatePtr s = tree->initial_state();
  Timestamp t = 1;
  for (std::int64_t v : {5, 9, 2}) s = tree->apply(Op::add(v), s, t++).first;
  const auto& ts = state_cast<OrSetTreeState>(s);
  CHECK(orset_tree_contains(ts, 5));
  CHECK(orset_tree_contains(ts, 2));
  CHECK_FALSE(orset_tree_contains(ts, 7));

  OrSetState plain;
  plain.pairs = {{5, 1}, {5, 4}};
  CHECK(orset_contains(plain, 5));
  CHECK_FALSE(orset_contains(plain, 4));

  OrSetSpaceState compact;
  compact.pairs = {{5, 4}};
  CHECK(orset_space_contains(compact, 5));
  CHECK_FALSE(orset_space_contains(compact, 1));
}
