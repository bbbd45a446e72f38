#include "mrdt/basic_types.hpp"

#include "mrdt/registry.hpp"
#include "mrdt/store.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace mrdt;

namespace {

StatePtr do_state(const Mrdt& type, const StatePtr& s, const Op& op, Timestamp t) {
  return type.apply(op, s, t).first;
}

} // namespace

TEST_CASE("counter: inc bumps, read reports, merge adds deltas") {
  MrdtPtr ctr = make_counter();
  StatePtr zero = ctr->initial_state();
  StatePtr one = do_state(*ctr, zero, Op::inc(), 1);
  CHECK(ctr->apply(Op::read(), one, 2).second == Value::of_int(1));
  CHECK(ctr->apply(Op::read(), zero, 2).second == Value::of_int(0));

  auto mk = [](std::uint64_t n) {
    auto s = std::make_shared<CtrState>();
    s->count = n;
    return StatePtr(s);
  };
  CHECK(state_cast<CtrState>(ctr->merge(mk(0), mk(3), mk(2))).count == 5);
  CHECK(state_cast<CtrState>(ctr->merge(mk(2), mk(2), mk(2))).count == 2);
  CHECK(state_cast<CtrState>(ctr->merge(mk(2), mk(5), mk(2))).count == 5);
  CHECK_THROWS_AS(ctr->merge(mk(3), mk(1), mk(3)), Error);
}

TEST_CASE("counter: a replayed execution reads the number of inc events") {
  MrdtPtr ctr = make_type("ctr");
  for (const Trace& trace : test::sample_traces(*ctr, 20, 12, 5)) {
    Store store = replay(trace, ctr);
    for (const std::string& branch : store.branches()) {
      std::int64_t incs = 0;
      for (const Event& e : store.history(branch).events())
        if (e.oper.kind == OpKind::Inc) ++incs;
      CHECK(store.apply_operation(branch, Op::read()) == Value::of_int(incs));
    }
  }
}

TEST_CASE("pn-counter: read is incs minus decs and may go negative") {
  MrdtPtr pn = make_pn_counter();
  StatePtr s = pn->initial_state();
  s = do_state(*pn, s, Op::inc(), 1);
  s = do_state(*pn, s, Op::inc(), 2);
  for (Timestamp t = 3; t <= 5; ++t) s = do_state(*pn, s, Op::dec(), t);
  CHECK(pn->apply(Op::read(), s, 6).second == Value::of_int(-1));

  auto mk = [](std::uint64_t i, std::uint64_t d) {
    auto st = std::make_shared<PnState>();
    st->incs = i;
    st->decs = d;
    return StatePtr(st);
  };
  StatePtr merged = pn->merge(mk(1, 0), mk(2, 0), mk(1, 1));
  CHECK(state_cast<PnState>(merged).incs == 2);
  CHECK(state_cast<PnState>(merged).decs == 1);
  StatePtr same = pn->merge(mk(1, 1), mk(1, 1), mk(1, 1));
  CHECK(state_cast<PnState>(same).incs == 1);
  CHECK(state_cast<PnState>(same).decs == 1);
}

TEST_CASE("lww register: the later write wins") {
  MrdtPtr lww = make_lww_register();
  StatePtr s = do_state(*lww, lww->initial_state(), Op::write(7), 4);
  CHECK(state_cast<LwwState>(s).t == 4);
  CHECK(lww->apply(Op::read(), s, 9).second == Value::of_int(7));

  auto mk = [](Timestamp t, std::int64_t v) {
    auto st = std::make_shared<LwwState>();
    st->t = t;
    st->v = v;
    return StatePtr(st);
  };
  CHECK(state_cast<LwwState>(lww->merge(mk(1, 0), mk(3, 10), mk(5, 20))).v == 20);
  CHECK(state_cast<LwwState>(lww->merge(mk(1, 0), mk(3, 10), mk(3, 10))).v == 10);
  CHECK(state_cast<LwwState>(lww->merge(mk(3, 10), mk(3, 10), mk(8, 9))).v == 9);
}

TEST_CASE("lww register: concurrent writes resolve to the larger timestamp") {
  Store store = Store::initialize(make_type("lww"));
  store.create_branch("b0", "b1");
  store.apply_operation("b0", Op::write(5));  // t=1
  store.apply_operation("b1", Op::write(7));  // t=2
  store.merge_branches("b0", "b1");
  CHECK(store.apply_operation("b0", Op::read()) == Value::of_int(7));
}

TEST_CASE("enable-wins flag: enable beats a concurrent disable") {
  MrdtPtr flag = make_ew_flag();
  StatePtr on = do_state(*flag, flag->initial_state(), Op::enable(), 1);
  CHECK(flag->apply(Op::read(), on, 2).second == Value::of_bool(true));
  StatePtr off = do_state(*flag, on, Op::disable(), 2);
  CHECK(flag->apply(Op::read(), off, 3).second == Value::of_bool(false));

  Store store = Store::initialize(make_type("ewflag"));
  store.create_branch("b0", "b1");
  store.apply_operation("b0", Op::enable());
  store.apply_operation("b1", Op::disable());
  store.merge_branches("b0", "b1");
  CHECK(store.apply_operation("b0", Op::read()) == Value::of_bool(true));
}

TEST_CASE("enable-wins flag: merge keeps survivors and new tokens") {
  MrdtPtr flag = make_ew_flag();
  auto mk = [](std::vector<Timestamp> tokens) {
    auto st = std::make_shared<EwFlagState>();
    st->tokens = std::move(tokens);
    return StatePtr(st);
  };
  CHECK(flag->canonical(flag->merge(mk({}), mk({1}), mk({}))) == "{1}");
  CHECK(flag->canonical(flag->merge(mk({1}), mk({1}), mk({}))) == "{}");
  CHECK(flag->canonical(flag->merge(mk({1}), mk({1, 2}), mk({1, 3}))) == "{1,2,3}");
}

TEST_CASE("g-set: grow-only reads and union merge") {
  MrdtPtr gset = make_gset();
  StatePtr s = do_state(*gset, gset->initial_state(), Op::add(4), 1);
  s = do_state(*gset, s, Op::add(4), 2);
  CHECK(gset->apply(Op::read(), s, 3).second == Value::of_set({4}));

  auto mk = [](std::vector<std::int64_t> elems) {
    auto st = std::make_shared<GSetState>();
    st->elems = std::move(elems);
    return StatePtr(st);
  };
  CHECK(gset->canonical(gset->merge(mk({}), mk({1}), mk({2}))) == "{1,2}");
}

TEST_CASE("g-set: a replayed execution reads all add payloads") {
  MrdtPtr gset = make_type("gset");
  for (const Trace& trace : test::sample_traces(*gset, 20, 12, 17)) {
    Store store = replay(trace, gset);
    for (const std::string& branch : store.branches()) {
      std::vector<std::int64_t> expected;
      for (const Event& e : store.history(branch).events())
        if (e.oper.kind == OpKind::Add) expected.push_back(e.oper.value);
      std::sort(expected.begin(), expected.end());
      expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
      CHECK(store.apply_operation(branch, Op::read()) == Value::of_set(expected));
    }
  }
}

TEST_CASE("basic types reject operations outside their signature") {
  CHECK_THROWS_AS(make_counter()->apply(Op::add(1), make_counter()->initial_state(), 1), Error);
  CHECK_THROWS_AS(make_gset()->apply(Op::remove(1), make_gset()->initial_state(), 1), Error);
  CHECK_THROWS_AS(make_lww_register()->apply(Op::inc(), make_lww_register()->initial_state(), 1),
                  Error);
}
