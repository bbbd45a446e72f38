#include "mrdt/checker.hpp"

#include "mrdt/registry.hpp"
#include "mrdt/store.hpp"
#include "helpers.hpp"
#include "mutants.hpp"

#include <doctest.h>

using namespace mrdt;

TEST_CASE("trace generation is a pure function of the configuration") {
  MrdtPtr orset = make_type("orset");
  GenConfig cfg;
  cfg.seed = 99;
  cfg.ops_per_trial = 25;
  cfg.merge_probability = 0.3;
  Trace first = generate_trace(*orset, cfg);
  Trace second = generate_trace(*orset, cfg);
  CHECK(first == second);

  cfg.seed = 100;
  CHECK(generate_trace(*orset, cfg) != first);
}

TEST_CASE("generated traces carry exactly the requested operation count") {
  MrdtPtr queue = make_type("queue");
  GenConfig cfg;
  cfg.seed = 3;
  cfg.ops_per_trial = 40;
  cfg.merge_probability = 0.25;
  Trace trace = generate_trace(*queue, cfg);
  int dos = 0;
  for (const TraceAction& action : trace)
    if (action.kind == TraceAction::Kind::Do) ++dos;
  CHECK(dos == 40);
}

TEST_CASE("zero merge probability produces a linear single-branch trace") {
  MrdtPtr ctr = make_type("ctr");
  GenConfig cfg;
  cfg.seed = 5;
  cfg.ops_per_trial = 30;
  cfg.merge_probability = 0;
  Trace trace = generate_trace(*ctr, cfg);
  CHECK(trace.size() == 30);
  for (const TraceAction& action : trace) {
    CHECK(action.kind == TraceAction::Kind::Do);
    CHECK(action.source == "b0");
  }
}

TEST_CASE("an operation mix of all weight on one kind generates only that kind") {
  MrdtPtr orset = make_type("orset");
  GenConfig cfg;
  cfg.seed = 8;
  cfg.ops_per_trial = 20;
  cfg.merge_probability = 0;
  cfg.op_mix = {{"add", 1.0}};
  for (const TraceAction& action : generate_trace(*orset, cfg))
    CHECK(action.op.kind == OpKind::Add);

  cfg.op_mix = {{"nonexistent", 1.0}};
  CHECK_THROWS_AS(generate_trace(*orset, cfg), Error);
}

TEST_CASE("single-action enumeration lists one trace per menu entry") {
  EnumBounds bounds;
  bounds.max_branches = 1;
  bounds.max_actions = 1;
  bounds.values = {0};

  auto count = [&bounds](std::string_view name) {
    int n = 0;
    MrdtPtr type = make_type(name);
    enumerate_traces(*type, bounds, [&n](const Trace&) { ++n; });
    return n;
  };
  CHECK(count("ctr") == 2);     // inc, rd
  CHECK(count("orset") == 3);   // add 0, remove 0, rd
  CHECK(count("queue") == 2);   // enqueue 0, dequeue
}

TEST_CASE("two-action two-branch enumeration matches the hand count for the counter") {
  // Depth 1: inc, rd, create = 3. Depth 2: 3 after each single op, and after
  // the create: two ops on two branches plus two merge directions = 8.
  EnumBounds bounds;
  bounds.max_branches = 2;
  bounds.max_actions = 2;
  bounds.values = {0};
  int n = 0;
  MrdtPtr ctr = make_type("ctr");
  enumerate_traces(*ctr, bounds, [&n](const Trace&) { ++n; });
  CHECK(n == 15);
}

TEST_CASE("every enumerated trace replays cleanly") {
  EnumBounds bounds;
  bounds.max_branches = 2;
  bounds.max_actions = 3;
  MrdtPtr orset = make_type("orset");
  int n = 0;
  enumerate_traces(*orset, bounds, [&](const Trace& trace) {
    ++n;
    CHECK_NOTHROW(replay(trace, orset));
  });
  CHECK(n > 100);
}

TEST_CASE("check_execution flags nothing on the bundled types") {
  MrdtPtr queue = make_type("queue");
  for (const Trace& trace : test::sample_traces(*queue, 10, 15, 81)) {
    CheckReport report = check_execution(*queue, trace);
    CHECK(report.passed());
    CHECK(report.transitions_checked == trace.size());
  }
}

TEST_CASE("a broken or-set merge is caught in the small scope and minimized") {
  MrdtPtr mutant = test::make_mutant("orset");
  EnumBounds bounds;
  bounds.max_actions = 4;
  CheckReport report = run_exhaustive(*mutant, bounds, 1);
  REQUIRE_FALSE(report.passed());
  const Failure& failure = report.failures.front();
  CHECK(failure.predicate == "rsim");

  // Local minimality: the shrunken trace still fails, and dropping any single
  // action either breaks replay or loses the failure.
  auto fails = [&mutant, &failure](const Trace& trace) {
    try {
      CheckReport r = check_execution(*mutant, trace, 0);
      return !r.failures.empty() && r.failures.front().predicate == failure.predicate;
    } catch (const Error&) {
      return false;
    }
  };
  CHECK(fails(failure.trace));
  for (std::size_t i = 0; i < failure.trace.size(); ++i) {
    Trace dropped = failure.trace;
    dropped.erase(dropped.begin() + static_cast<std::ptrdiff_t>(i));
    CHECK_FALSE(fails(dropped));
  }
}

TEST_CASE("shrinking keeps the failure and never grows the trace") {
  MrdtPtr mutant = test::make_mutant("gset");
  GenConfig cfg;
  cfg.seed = 21;
  cfg.ops_per_trial = 30;
  cfg.merge_probability = 0.35;
  Trace trace = generate_trace(*mutant, cfg);
  CheckReport report = check_execution(*mutant, trace, 1);
  REQUIRE_FALSE(report.passed());
  CHECK(report.failures.front().trace.size() <= trace.size());
}

TEST_CASE("reports are identical with and without trial parallelism") {
  MrdtPtr orset = make_type("orset-space");
  GenConfig cfg;
  cfg.seed = 31;
  cfg.ops_per_trial = 20;
  CheckReport serial = run_random(*orset, cfg, 50, false);
  CheckReport parallel = run_random(*orset, cfg, 50, true);
  CHECK(serial.summary_line("orset-space", "random") ==
        parallel.summary_line("orset-space", "random"));
  CHECK(serial.trials == 50);
  CHECK(serial.passed());
}

TEST_CASE("the machine-readable summary carries the verdict") {
  CheckReport report;
  report.trials = 3;
  report.transitions_checked = 17;
  CHECK(report.summary_line("ctr", "random") ==
        "RESULT type=ctr mode=random trials=3 transitions=17 failures=0 verdict=PASS");
  report.failures.push_back(Failure{{}, "rsim", "detail"});
  CHECK(report.summary_line("ctr", "random") ==
        "RESULT type=ctr mode=random trials=3 transitions=17 failures=1 verdict=FAIL");
}
