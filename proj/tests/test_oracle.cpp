#include "mrdt/oracle.hpp"

#include "mrdt/checker.hpp"
#include "mrdt/orset.hpp"
#include "mrdt/queue.hpp"
#include "mrdt/registry.hpp"
#include "mrdt/store.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace mrdt;
using test::ev;
using test::exec_of;

TEST_CASE("or-set specification: a visible remove cancels the add") {
  AbstractExec seen = exec_of({ev(1, Op::add(1), Value::unit(), 1),
                               ev(2, Op::remove(1), Value::unit(), 2)},
                              {{1, 2}});
  CHECK(oracle::spec_orset_read(seen).empty());

  AbstractExec concurrent = exec_of({ev(1, Op::add(1), Value::unit(), 1),
                                     ev(2, Op::remove(1), Value::unit(), 2)},
                                    {});
  CHECK(oracle::spec_orset_read(concurrent) == std::vector<std::int64_t>{1});
}

TEST_CASE("queue specification: dequeue takes the oldest unconsumed enqueue") {
  AbstractExec one = exec_of({ev(1, Op::enqueue(7), Value::unit(), 1)}, {});
  CHECK(oracle::spec_queue_dequeue(one) == Value::timed(1, 7));
  CHECK(oracle::spec_queue_dequeue({}) == Value::empty());

  AbstractExec consumed = exec_of({ev(1, Op::enqueue(7), Value::unit(), 1),
                                   ev(2, Op::dequeue(), Value::timed(1, 7), 2)},
                                  {{1, 2}});
  CHECK(oracle::spec_queue_dequeue(consumed) == Value::empty());
}

TEST_CASE("queue axioms: empty history passes, dangling dequeues fail") {
  CHECK(oracle::queue_axioms_hold({}));

  AbstractExec dangling = exec_of({ev(1, Op::dequeue(), Value::timed(9, 9), 1)}, {});
  CHECK(oracle::violated_queue_axiom(dangling) == std::string("AddRem"));

  // A dequeue claiming EMPTY while an unconsumed enqueue is visible.
  AbstractExec blind = exec_of({ev(1, Op::enqueue(7), Value::unit(), 1),
                                ev(2, Op::dequeue(), Value::empty(), 2)},
                               {{1, 2}});
  CHECK(oracle::violated_queue_axiom(blind) == std::string("Empty"));
}

TEST_CASE("queue axioms: dequeuing past an older visible enqueue breaks FIFO") {
  AbstractExec skipped = exec_of({ev(1, Op::enqueue(1), Value::unit(), 1),
                                  ev(2, Op::enqueue(2), Value::unit(), 2),
                                  ev(3, Op::dequeue(), Value::timed(2, 2), 3)},
                                 {{1, 2}, {1, 3}, {2, 3}});
  CHECK(oracle::violated_queue_axiom(skipped) == std::string("FIFO1"));
}

TEST_CASE("observational equivalence ignores representation differences") {
  MrdtPtr orset = make_orset();
  auto pairs_state = [](std::vector<std::pair<std::int64_t, Timestamp>> pairs) {
    auto s = std::make_shared<OrSetState>();
    s->pairs = std::move(pairs);
    return StatePtr(s);
  };
  StatePtr one = pairs_state({{1, 1}, {1, 4}});
  StatePtr other = pairs_state({{1, 4}, {1, 1}});
  CHECK(oracle::obs_equiv(*orset, one, one, {Op::read()}));
  CHECK(oracle::obs_equiv(*orset, one, other, {Op::read()}));
  CHECK_FALSE(oracle::obs_equiv(*orset, one, pairs_state({{1, 1}}), {Op::read()}));

  // Two trees holding the same pairs in different shapes.
  MrdtPtr tree = make_orset_spacetime();
  StatePtr chain = tree->initial_state();
  for (Timestamp t : {1, 2, 3})
    chain = tree->apply(Op::add(static_cast<std::int64_t>(t)), chain, t).first;
  StatePtr bushy = tree->initial_state();
  bushy = tree->apply(Op::add(2), bushy, 2).first;
  bushy = tree->apply(Op::add(1), bushy, 1).first;
  bushy = tree->apply(Op::add(3), bushy, 3).first;
  CHECK(oracle::obs_equiv(*tree, chain, bushy, {Op::read()}));
}

TEST_CASE("every type starts with the simulation relation satisfied") {
  for (std::string_view name : type_names()) {
    MrdtPtr type = make_type(name);
    CHECK(type->simulates({}, type->initial_state()));
  }
}

TEST_CASE("or-set simulation relation spots a pair that should be gone") {
  MrdtPtr orset = make_orset();
  auto state = std::make_shared<OrSetState>();
  state->pairs = {{1, 1}};
  AbstractExec removed = exec_of({ev(1, Op::add(1), Value::unit(), 1),
                                  ev(2, Op::remove(1), Value::unit(), 2)},
                                 {{1, 2}});
  CHECK_FALSE(orset->simulates(removed, state));

  AbstractExec live = exec_of({ev(1, Op::add(1), Value::unit(), 1)}, {});
  CHECK(orset->simulates(live, state));
}

TEST_CASE("queue simulation relation accepts the surviving suffix") {
  MrdtPtr queue = make_queue();
  AbstractExec history = exec_of({ev(1, Op::enqueue(7), Value::unit(), 1),
                                  ev(2, Op::enqueue(8), Value::unit(), 2),
                                  ev(3, Op::dequeue(), Value::timed(1, 7), 3)},
                                 {{1, 2}, {1, 3}, {2, 3}});
  StatePtr survivor = queue->apply(Op::enqueue(8), queue->initial_state(), 2).first;
  CHECK(queue->simulates(history, survivor));
  CHECK_FALSE(queue->simulates(history, queue->initial_state()));
}

TEST_CASE("timestamp order is a linear extension of visibility") {
  MrdtPtr type = make_type("queue");
  for (const Trace& trace : test::sample_traces(*type, 20, 10, 71)) {
    Store store = replay(trace, type);
    for (const std::string& branch : store.branches()) {
      const AbstractExec& history = store.history(branch);
      REQUIRE(check_psi_ts(history));
      for (const Event& e : history.events()) {
        for (const Event& f : history.events()) {
          if (history.sees(e.id, f.id)) CHECK(e.time < f.time);
          // Related events in either direction order by timestamp.
          if ((history.sees(e.id, f.id) || history.sees(f.id, e.id)) && e.time < f.time)
            CHECK(history.sees(e.id, f.id));
        }
      }
    }
  }
}

TEST_CASE("appending the mandated dequeue keeps every reachable history lawful") {
  MrdtPtr queue = make_type("queue");
  EnumBounds bounds;
  bounds.max_branches = 2;
  bounds.max_actions = 4;
  int histories = 0;
  int total_ordered = 0;

  enumerate_traces(*queue, bounds, [&](const Trace& trace) {
    Store store = replay(trace, queue);
    for (const std::string& branch : store.branches()) {
      const AbstractExec& history = store.history(branch);
      Value answer = oracle::spec_queue_dequeue(history);
      Timestamp next = store.clock() + 1;
      AbstractExec extended = abs_do(history, ev(next, Op::dequeue(), answer, next));
      CHECK(oracle::queue_axioms_hold(extended));
      ++histories;

      // On totally ordered histories the mandated value is the only
      // admissible one among the unconsumed enqueues and EMPTY.
      bool totally_ordered = true;
      for (const Event& e : history.events())
        for (const Event& f : history.events())
          if (e.id != f.id && !history.sees(e.id, f.id) && !history.sees(f.id, e.id))
            totally_ordered = false;
      if (!totally_ordered) continue;
      ++total_ordered;

      std::vector<Value> candidates{Value::empty()};
      for (const Event& e : history.events()) {
        if (e.oper.kind != OpKind::Enqueue) continue;
        bool consumed = false;
        for (const Event& d : history.events())
          if (oracle::queue_match(e, d) && history.sees(e.id, d.id)) consumed = true;
        if (!consumed) candidates.push_back(Value::timed(e.time, e.oper.value));
      }
      int admissible = 0;
      for (const Value& candidate : candidates) {
        AbstractExec attempt = abs_do(history, ev(next, Op::dequeue(), candidate, next));
        if (oracle::queue_axioms_hold(attempt)) {
          ++admissible;
          CHECK(candidate == answer);
        }
      }
      CHECK(admissible == 1);
    }
  });
  CHECK(histories > 1000);
  CHECK(total_ordered > 100);
}
