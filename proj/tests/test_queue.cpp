#include "mrdt/queue.hpp"

#include "mrdt/oracle.hpp"
#include "mrdt/plist.hpp"
#include "mrdt/registry.hpp"
#include "mrdt/store.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace mrdt;

namespace {

StatePtr queue_of(std::vector<QItem> front, std::vector<QItem> back_newest_first) {
  auto s = std::make_shared<QueueState>();
  s->front = PList<QItem>::from_vector(front);
  s->back = PList<QItem>::from_vector(back_newest_first);
  return s;
}

} // namespace

TEST_CASE("plist: sharing, reversal and bulk construction") {
  PList<int> xs;
  CHECK(xs.empty());
  xs = xs.pushed_front(3).pushed_front(2).pushed_front(1);
  CHECK(xs.size() == 3);
  CHECK(xs.front() == 1);
  CHECK(xs.to_vector() == std::vector<int>{1, 2, 3});
  CHECK(xs.without_front().to_vector() == std::vector<int>{2, 3});
  CHECK(xs.reversed().to_vector() == std::vector<int>{3, 2, 1});

  PList<int> bulk = PList<int>::from_vector({4, 5, 6});
  CHECK(bulk.to_vector() == std::vector<int>{4, 5, 6});
  PList<int> shared = bulk.without_front();
  CHECK(shared.to_vector() == std::vector<int>{5, 6});
  CHECK(bulk.to_vector() == std::vector<int>{4, 5, 6});
}

TEST_CASE("plist: releasing a very long list does not recurse") {
  PList<int> xs;
  for (int i = 0; i < 200000; ++i) xs = xs.pushed_front(i);
  CHECK(xs.size() == 200000);
  xs = {};  // must not overflow the stack
  CHECK(xs.empty());
}

TEST_CASE("queue: enqueue conses onto back, front untouched") {
  MrdtPtr queue = make_queue();
  StatePtr s = queue->apply(Op::enqueue(7), queue->initial_state(), 1).first;
  const auto& q = state_cast<QueueState>(s);
  CHECK(q.front.empty());
  CHECK(q.back.to_vector() == std::vector<QItem>{{1, 7}});
  CHECK(queue_tolist(q) == std::vector<QItem>{{1, 7}});
}

TEST_CASE("queue: dequeue returns the oldest element, EMPTY when drained") {
  MrdtPtr queue = make_queue();
  StatePtr s = queue->initial_state();
  auto [unchanged, none] = queue->apply(Op::dequeue(), s, 1);
  CHECK(none == Value::empty());
  CHECK(state_cast<QueueState>(unchanged).front.empty());

  s = queue->apply(Op::enqueue(7), s, 1).first;
  s = queue->apply(Op::enqueue(8), s, 2).first;
  auto [rest, head] = queue->apply(Op::dequeue(), s, 3);
  CHECK(head == Value::timed(1, 7));
  CHECK(queue_tolist(state_cast<QueueState>(rest)) == std::vector<QItem>{{2, 8}});
}

TEST_CASE("queue: the back reverses into the front exactly when the front runs dry") {
  MrdtPtr queue = make_queue();
  StatePtr s = queue->initial_state();
  for (std::int64_t v = 1; v <= 3; ++v)
    s = queue->apply(Op::enqueue(v), s, static_cast<Timestamp>(v)).first;
  CHECK(state_cast<QueueState>(s).front.empty());
  CHECK(state_cast<QueueState>(s).back.size() == 3);

  auto [after, head] = queue->apply(Op::dequeue(), s, 4);
  CHECK(head == Value::timed(1, 1));
  CHECK(state_cast<QueueState>(after).front.size() == 2);  // reversed remainder
  CHECK(state_cast<QueueState>(after).back.empty());

  // With a non-empty front, dequeue pops without touching the back.
  StatePtr mixed = queue_of({{1, 1}}, {{3, 3}, {2, 2}});
  auto [popped, first] = queue->apply(Op::dequeue(), mixed, 5);
  CHECK(first == Value::timed(1, 1));
  CHECK(state_cast<QueueState>(popped).back.size() == 2);
  CHECK(state_cast<QueueState>(popped).front.empty());
}

TEST_CASE("tolist flattens front then reversed back") {
  CHECK(queue_tolist(state_cast<QueueState>(queue_of({}, {}))).empty());
  StatePtr s = queue_of({{1, 10}}, {{3, 30}, {2, 20}});
  CHECK(queue_tolist(state_cast<QueueState>(s)) ==
        std::vector<QItem>{{1, 10}, {2, 20}, {3, 30}});
}

TEST_CASE("diff finds the newly enqueued suffix") {
  std::vector<QItem> l{{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}};
  std::vector<QItem> a{{3, 3}, {4, 4}, {5, 5}, {8, 8}, {9, 9}};
  CHECK(queue_diff(a, l) == std::vector<QItem>{{8, 8}, {9, 9}});
  CHECK(queue_diff(l, l).empty());
  CHECK(queue_diff(a, {}) == a);
}

TEST_CASE("intersection keeps ancestor elements dequeued on neither side") {
  std::vector<QItem> l{{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}};
  std::vector<QItem> a{{3, 3}, {4, 4}, {5, 5}, {8, 8}, {9, 9}};
  std::vector<QItem> b{{3, 3}, {4, 4}, {5, 5}, {6, 6}, {7, 7}};
  CHECK(queue_intersection(l, a, b) == std::vector<QItem>{{3, 3}, {4, 4}, {5, 5}});
  CHECK(queue_intersection(l, l, l) == l);
  CHECK(queue_intersection(l, {}, b).empty());
}

TEST_CASE("union merges two sorted suffixes by timestamp") {
  std::vector<QItem> x{{8, 8}, {9, 9}};
  std::vector<QItem> y{{6, 6}, {7, 7}};
  CHECK(queue_union(x, y) == std::vector<QItem>{{6, 6}, {7, 7}, {8, 8}, {9, 9}});
  CHECK(queue_union(x, {}) == x);
}

TEST_CASE("the flattened three-way merge reproduces the worked example") {
  std::vector<QItem> l{{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}};
  std::vector<QItem> a{{3, 3}, {4, 4}, {5, 5}, {8, 8}, {9, 9}};
  std::vector<QItem> b{{3, 3}, {4, 4}, {5, 5}, {6, 6}, {7, 7}};
  CHECK(queue_merge_lists(l, a, b) ==
        std::vector<QItem>{{3, 3}, {4, 4}, {5, 5}, {6, 6}, {7, 7}, {8, 8}, {9, 9}});
  CHECK(queue_merge_lists(l, l, l) == l);
}

TEST_CASE("every reachable queue flattens strictly ascending in timestamp") {
  MrdtPtr queue = make_type("queue");
  for (const Trace& trace : test::sample_traces(*queue, 30, 14, 61)) {
    Store store = replay(trace, queue);
    for (const std::string& branch : store.branches()) {
      std::vector<QItem> items = queue_tolist(state_cast<QueueState>(store.state(branch)));
      for (std::size_t i = 1; i < items.size(); ++i)
        CHECK(items[i - 1].first < items[i].first);
    }
  }
}

TEST_CASE("an element dequeued on both branches stays dequeued after merge") {
  Store store = Store::initialize(make_type("queue"));
  store.apply_operation("b0", Op::enqueue(1));
  store.apply_operation("b0", Op::enqueue(2));
  store.create_branch("b0", "b1");
  CHECK(store.apply_operation("b0", Op::dequeue()) == Value::timed(1, 1));
  CHECK(store.apply_operation("b1", Op::dequeue()) == Value::timed(1, 1));
  store.merge_branches("b0", "b1");
  CHECK(store.type().canonical(store.state("b0")) == "[(2,2)]");
  CHECK(oracle::queue_axioms_hold(store.history("b0")));
}
