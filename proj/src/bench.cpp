#include "mrdt/bench.hpp"

#include "mrdt/checker.hpp"
#include "mrdt/orset.hpp"
#include "mrdt/queue.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#ifdef __GLIBC__
#include <malloc.h>
#endif

namespace mrdt::bench {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ns(Clock::time_point from, Clock::time_point to) {
  return static_cast<double>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(to - from).count());
}

StatePtr drive_queue_ops(const Mrdt& queue, StatePtr state, std::uint64_t ops, SplitMix& rng,
                         Timestamp& clock) {
  for (std::uint64_t i = 0; i < ops; ++i) {
    Op op = rng.unit() < 0.75 ? Op::enqueue(rng.in_range(0, 1000)) : Op::dequeue();
    state = queue.apply(op, state, ++clock).first;
  }
  return state;
}

} // namespace

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows, bool with_header) {
  if (with_header) out << "workload,n,metric,value\n";
  for (const BenchRow& row : rows)
    out << row.workload << ',' << row.n << ',' << row.metric << ',' << row.value << '\n';
}

QueueMergeResult bench_queue_merge(const std::vector<std::uint64_t>& sizes, std::uint64_t seed,
                                   int reps) {
#ifdef __GLIBC__
  // Keep large merge results in the arena and stop the arena from being
  // trimmed between iterations; otherwise every merge can fault its result
  // in afresh, which times the kernel, not the merge.
  mallopt(M_MMAP_THRESHOLD, 512 * 1024 * 1024);
  mallopt(M_TRIM_THRESHOLD, 512 * 1024 * 1024);
#endif
  MrdtPtr queue = make_queue();
  QueueMergeResult result;

  // Build the merge inputs for every size up front.
  struct Inputs {
    StatePtr lca, a, b;
  };
  std::vector<Inputs> inputs;
  for (std::uint64_t n : sizes) {
    SplitMix rng(seed + n);
    Timestamp clock = 0;
    Inputs in;
    in.lca = drive_queue_ops(*queue, queue->initial_state(), n, rng, clock);
    // Interleave the two branches' operations so their new suffixes carry
    // interleaved timestamps.
    in.a = in.lca;
    in.b = in.lca;
    for (std::uint64_t i = 0; i < 2 * n; ++i) {
      StatePtr& side = (i % 2 == 0) ? in.a : in.b;
      side = drive_queue_ops(*queue, side, 1, rng, clock);
    }
    // Repack each spine into one contiguous segment so the measurement
    // reflects the merge, not the allocation pattern of the build phase.
    auto repack = [](const StatePtr& s) -> StatePtr {
      auto compact = std::make_shared<QueueState>();
      compact->front = PList<QItem>::from_vector(queue_tolist(state_cast<QueueState>(s)));
      return compact;
    };
    in.lca = repack(in.lca);
    in.a = repack(in.a);
    in.b = repack(in.b);
    inputs.push_back(std::move(in));
  }

  // One repetition times a burst of merges and reports the per-merge mean;
  // the median across repetitions discards repetitions hit by scheduler
  // steals. The warmup repetition sizes the burst to run a few milliseconds.
  int repetitions = std::max(reps, 9);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    Clock::time_point t0 = Clock::now();
    for (int warm = 0; warm < 3; ++warm) {
      StatePtr merged = queue->merge(inputs[i].lca, inputs[i].a, inputs[i].b);
      (void)merged;
    }
    double approx_ns = elapsed_ns(t0, Clock::now()) / 3.0;
    std::uint64_t burst = std::clamp<std::uint64_t>(
        static_cast<std::uint64_t>(2e6 / std::max(approx_ns, 1.0)), 5, 2000);

    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(repetitions));
    for (int rep = 0; rep < repetitions; ++rep) {
      Clock::time_point start = Clock::now();
      for (std::uint64_t k = 0; k < burst; ++k) {
        StatePtr merged = queue->merge(inputs[i].lca, inputs[i].a, inputs[i].b);
        (void)merged;
      }
      Clock::time_point stop = Clock::now();
      samples.push_back(elapsed_ns(start, stop) / static_cast<double>(burst));
    }
    std::sort(samples.begin(), samples.end());
    double median = samples[samples.size() / 2];
    result.rows.push_back({"queue-merge-75-25", sizes[i], "merge_ns", median});
    result.merge_ns.emplace_back(sizes[i], median);
  }
  return result;
}

namespace {

struct OrsetOp {
  int kind;  // 0 lookup, 1 add, 2 remove
  std::int64_t value;
  int side;  // 0 or 1
};

struct VariantHooks {
  bool (*contains)(const StateBase&, std::int64_t);
  std::uint64_t (*size)(const StateBase&);
  int (*height)(const StateBase&);  // nullptr unless tree-shaped
};

VariantHooks hooks_for(const std::string& variant) {
  if (variant == "orset")
    return {[](const StateBase& s, std::int64_t v) {
              return orset_contains(static_cast<const OrSetState&>(s), v);
            },
            [](const StateBase& s) {
              return static_cast<std::uint64_t>(static_cast<const OrSetState&>(s).pairs.size());
            },
            nullptr};
  if (variant == "orset-space")
    return {[](const StateBase& s, std::int64_t v) {
              return orset_space_contains(static_cast<const OrSetSpaceState&>(s), v);
            },
            [](const StateBase& s) {
              return static_cast<std::uint64_t>(
                  static_cast<const OrSetSpaceState&>(s).pairs.size());
            },
            nullptr};
  if (variant == "orset-spacetime")
    return {[](const StateBase& s, std::int64_t v) {
              return orset_tree_contains(static_cast<const OrSetTreeState&>(s), v);
            },
            [](const StateBase& s) {
              return static_cast<std::uint64_t>(static_cast<const OrSetTreeState&>(s).count);
            },
            [](const StateBase& s) {
              return orset_tree_height(static_cast<const OrSetTreeState&>(s));
            }};
  raise(ErrorCode::PreconditionViolated, "unknown OR-set variant: " + variant);
}

MrdtPtr variant_type(const std::string& variant) {
  if (variant == "orset") return make_orset();
  if (variant == "orset-space") return make_orset_space();
  return make_orset_spacetime();
}

} // namespace

OrsetResult bench_orset(const std::vector<std::string>& variants, std::uint64_t ops,
                        std::array<int, 3> mix, std::uint64_t merge_every,
                        std::pair<std::int64_t, std::int64_t> range, std::uint64_t seed) {
  const std::string workload = "orset-" + std::to_string(mix[0]) + "-" + std::to_string(mix[1]) +
                               "-" + std::to_string(mix[2]);
  int total_weight = mix[0] + mix[1] + mix[2];
  if (total_weight <= 0)
    raise(ErrorCode::PreconditionViolated, "op mix must have positive weight");

  // One script for every variant.
  SplitMix rng(seed);
  std::vector<OrsetOp> script;
  script.reserve(ops);
  for (std::uint64_t i = 0; i < ops; ++i) {
    int roll = static_cast<int>(rng.below(static_cast<std::uint64_t>(total_weight)));
    int kind = roll < mix[0] ? 0 : (roll < mix[0] + mix[1] ? 1 : 2);
    script.push_back({kind, rng.in_range(range.first, range.second), static_cast<int>(i % 2)});
  }

  OrsetResult result;
  for (const std::string& name : variants) {
    VariantHooks hooks = hooks_for(name);
    MrdtPtr type = variant_type(name);
    OrsetVariantResult vr;
    vr.variant = name;

    Timestamp clock = 0;
    StatePtr lca = type->initial_state();
    StatePtr a = lca;
    StatePtr b = lca;

    auto track = [&vr, &hooks](const StatePtr& s) {
      vr.max_size = std::max(vr.max_size, hooks.size(*s));
    };
    auto apply_one = [&](StatePtr& side, const OrsetOp& op) {
      switch (op.kind) {
        case 0:
          (void)hooks.contains(*side, op.value);
          break;
        case 1:
          side = type->apply(Op::add(op.value), side, ++clock).first;
          track(side);
          break;
        default:
          side = type->apply(Op::remove(op.value), side, ++clock).first;
          break;
      }
    };
    auto merge_all = [&]() {
      StatePtr merged = type->merge(lca, a, b);
      lca = a = b = merged;
      track(merged);
      if (hooks.height) vr.merge_heights.emplace_back(hooks.size(*merged), hooks.height(*merged));
    };

    Clock::time_point start = Clock::now();
    if (merge_every > 0) {
      for (std::uint64_t i = 0; i < script.size(); ++i) {
        apply_one(script[i].side == 0 ? a : b, script[i]);
        if ((i + 1) % merge_every == 0) merge_all();
      }
      merge_all();
    } else {
      // Three-phase shape: the whole script builds the ancestor, then each
      // branch replays its half of a second pass, then one merge.
      for (const OrsetOp& op : script) apply_one(lca, op);
      a = b = lca;
      for (const OrsetOp& op : script) apply_one(op.side == 0 ? a : b, op);
      merge_all();
    }
    Clock::time_point stop = Clock::now();
    vr.total_ms = elapsed_ns(start, stop) / 1e6;

    result.rows.push_back({workload, ops, "total_ms", vr.total_ms});
    result.rows.push_back({workload, ops, "max_size", static_cast<double>(vr.max_size)});
    if (hooks.height) {
      int worst = 0;
      for (const auto& [size, height] : vr.merge_heights) worst = std::max(worst, height);
      result.rows.push_back({workload, ops, "tree_height", static_cast<double>(worst)});
    }
    result.variants.push_back(std::move(vr));
  }
  return result;
}

} // namespace mrdt::bench
