#include "mrdt/checker.hpp"

#include "mrdt/oracle.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mrdt {

namespace {

void note_value(std::vector<std::int64_t>& values, std::int64_t v) {
  auto it = std::lower_bound(values.begin(), values.end(), v);
  if (it == values.end() || *it != v) values.insert(it, v);
}

void note_key(std::vector<std::string>& keys, const std::string& k) {
  auto it = std::lower_bound(keys.begin(), keys.end(), k);
  if (it == keys.end() || *it != k) keys.insert(it, k);
}

/// A merge is schedulable when it fast-forwards, or when it has a resolvable
/// lca satisfying the lca property. Criss-cross shapes and merges outside the
/// lca property's envelope are skipped, never scheduled.
bool merge_schedulable(const Store& store, const std::string& into, const std::string& from) {
  const AbstractExec& into_history = store.history(into);
  const AbstractExec& from_history = store.history(from);
  if (events_subset(from_history, into_history) || events_subset(into_history, from_history))
    return true;
  try {
    const VersionNode& lca = store.resolve_lca(into, from);
    return check_psi_lca(*lca.history, into_history, from_history);
  } catch (const Error&) {
    return false;
  }
}

/// Replays a trace action by action, evaluating every store-level predicate
/// as it goes. Owns the probe universe gathered from the operations seen.
class ExecutionChecker {
public:
  explicit ExecutionChecker(MrdtPtr type) : type_(type), store_(Store::initialize(type)) {}

  const Store& store() const { return store_; }

  /// Applies one action; returns the first violated predicate, if any.
  std::optional<std::pair<std::string, std::string>> step(const TraceAction& action) {
    switch (action.kind) {
      case TraceAction::Kind::Create:
        store_.create_branch(action.source, action.target);
        break;

      case TraceAction::Kind::Do: {
        note_op(action.op);
        Value expected = type_->spec_value(action.op, store_.history(action.source));
        Value actual = store_.apply_operation(action.source, action.op);
        if (actual != expected)
          return std::make_pair("phi_spec", to_string(action.op) + " returned " +
                                                to_string(actual) + ", specification mandates " +
                                                to_string(expected));
        if (auto bad = branch_checks(action.source)) return bad;
        break;
      }

      case TraceAction::Kind::Merge: {
        // Ancestor-related heads fast-forward in the store; the lca property
        // applies only to genuine three-way merges.
        const AbstractExec& into_history = store_.history(action.source);
        const AbstractExec& from_history = store_.history(action.target);
        if (!events_subset(from_history, into_history) &&
            !events_subset(into_history, from_history)) {
          const VersionNode& lca = store_.resolve_lca(action.source, action.target);
          if (!check_psi_lca(*lca.history, into_history, from_history))
            return std::make_pair("psi_lca", "lca property violated merging " + action.target +
                                                 " into " + action.source);
        }
        store_.merge_branches(action.source, action.target);
        if (auto bad = branch_checks(action.source)) return bad;
        break;
      }
    }
    return convergence_check();
  }

private:
  std::optional<std::pair<std::string, std::string>> branch_checks(const std::string& branch) {
    if (!check_psi_ts(store_.history(branch)))
      return std::make_pair("psi_ts", "timestamp property violated at " + branch);
    if (!type_->simulates(store_.history(branch), store_.state(branch)))
      return std::make_pair("rsim", "simulation relation broken at " + branch);
    return std::nullopt;
  }

  std::optional<std::pair<std::string, std::string>> convergence_check() {
    std::vector<std::string> names = store_.branches();
    std::vector<Op> probes = type_->probe_operations(probe_ctx_);
    for (std::size_t i = 0; i < names.size(); ++i) {
      for (std::size_t j = i + 1; j < names.size(); ++j) {
        if (store_.history(names[i]).ids() != store_.history(names[j]).ids()) continue;
        if (!oracle::obs_equiv(*type_, store_.state(names[i]), store_.state(names[j]), probes))
          return std::make_pair("convergence", names[i] + " and " + names[j] +
                                                   " share a history but differ observably");
      }
    }
    return std::nullopt;
  }

  void note_op(const Op& op) {
    switch (op.kind) {
      case OpKind::Write:
      case OpKind::Add:
      case OpKind::Remove:
      case OpKind::Enqueue:
        note_value(probe_ctx_.values, op.value);
        break;
      case OpKind::MapSet:
      case OpKind::MapGet:
        note_key(probe_ctx_.keys, op.key);
        if (op.inner) note_op(*op.inner);
        break;
      case OpKind::Send:
      case OpKind::ChatRead:
        note_key(probe_ctx_.keys, op.key);
        break;
      default:
        break;
    }
  }

  MrdtPtr type_;
  Store store_;
  ProbeContext probe_ctx_;
};

/// Runs the battery over a trace without shrinking; stops at the first
/// failure.
CheckReport check_once(MrdtPtr type, const Trace& trace) {
  CheckReport report;
  report.trials = 1;
  ExecutionChecker checker(type);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    std::optional<std::pair<std::string, std::string>> bad;
    try {
      bad = checker.step(trace[i]);
    } catch (const Error& e) {
      raise(ErrorCode::ReplayError, "action " + std::to_string(i) + ": " + e.what());
    }
    ++report.transitions_checked;
    if (bad) {
      Trace prefix(trace.begin(), trace.begin() + static_cast<std::ptrdiff_t>(i) + 1);
      report.failures.push_back(Failure{std::move(prefix), bad->first, bad->second});
      return report;
    }
  }
  return report;
}

MrdtPtr share(const Mrdt& type) {
  // The checker entry points take references for convenience; internally the
  // store wants shared ownership. Aliasing constructor: no copy, no delete.
  return MrdtPtr(MrdtPtr{}, &type);
}

Failure minimized(MrdtPtr type, Failure failure) {
  const std::string predicate = failure.predicate;
  failure.trace = shrink_trace(failure.trace, [&type, &predicate](const Trace& candidate) {
    try {
      CheckReport r = check_once(type, candidate);
      return !r.failures.empty() && r.failures.front().predicate == predicate;
    } catch (const Error&) {
      return false;
    }
  });
  return failure;
}

} // namespace

void CheckReport::absorb(CheckReport other) {
  trials += other.trials;
  transitions_checked += other.transitions_checked;
  for (Failure& f : other.failures) failures.push_back(std::move(f));
}

std::string CheckReport::summary_line(std::string_view type_name, std::string_view mode) const {
  std::ostringstream out;
  out << "RESULT type=" << type_name << " mode=" << mode << " trials=" << trials
      << " transitions=" << transitions_checked << " failures=" << failures.size()
      << " verdict=" << (passed() ? "PASS" : "FAIL");
  return out.str();
}

std::string CheckReport::to_text() const {
  std::ostringstream out;
  out << trials << " trial(s), " << transitions_checked << " transition(s) checked, "
      << failures.size() << " failure(s)\n";
  for (const Failure& f : failures) {
    out << "violated " << f.predicate << ": " << f.detail << "\n";
    out << "minimized trace:\n";
    for (const TraceAction& action : f.trace) out << "  " << to_line(action) << "\n";
  }
  return out.str();
}

Trace generate_trace(const Mrdt& type, const GenConfig& cfg) {
  SplitMix rng(cfg.seed);
  Store sim = Store::initialize(share(type));
  Trace trace;
  int done = 0;
  int created = 1;

  while (done < cfg.ops_per_trial) {
    double roll = rng.unit();
    if (roll < cfg.merge_probability) {
      std::vector<std::string> names = sim.branches();
      bool may_create = created < cfg.max_branches;
      bool may_merge = names.size() >= 2;
      if (may_create && (!may_merge || rng.unit() < 0.4)) {
        const std::string& src = names[rng.below(names.size())];
        std::string dst = "b" + std::to_string(created++);
        sim.create_branch(src, dst);
        trace.push_back(TraceAction::create(src, dst));
      } else if (may_merge) {
        std::size_t i = rng.below(names.size());
        std::size_t j = rng.below(names.size() - 1);
        if (j >= i) ++j;
        if (!merge_schedulable(sim, names[i], names[j])) continue;
        sim.merge_branches(names[i], names[j]);
        trace.push_back(TraceAction::merge(names[i], names[j]));
      }
      continue;
    }

    std::vector<std::string> names = sim.branches();
    const std::string& branch = names[rng.below(names.size())];
    std::int64_t value = rng.in_range(cfg.value_range.first, cfg.value_range.second);
    std::vector<Op> menu = type.operation_menu(std::span(&value, 1), cfg.keys);

    double total = 0;
    std::vector<double> weights(menu.size(), 0);
    for (std::size_t k = 0; k < menu.size(); ++k) {
      if (cfg.op_mix.empty()) {
        weights[k] = 1;
      } else {
        auto it = cfg.op_mix.find(std::string(op_kind_name(menu[k].kind)));
        weights[k] = it == cfg.op_mix.end() ? 0 : it->second;
      }
      total += weights[k];
    }
    if (total <= 0)
      raise(ErrorCode::PreconditionViolated, "op mix assigns no weight to any operation");
    double pick = rng.unit() * total;
    std::size_t chosen = 0;
    for (; chosen + 1 < menu.size(); ++chosen) {
      pick -= weights[chosen];
      if (pick < 0) break;
    }

    sim.apply_operation(branch, menu[chosen]);
    trace.push_back(TraceAction::perform(branch, menu[chosen]));
    ++done;
  }
  return trace;
}

namespace {

std::vector<TraceAction> legal_actions(const Store& store, const Mrdt& type,
                                       const EnumBounds& bounds, int created) {
  std::vector<TraceAction> out;
  std::vector<std::string> names = store.branches();
  std::vector<Op> menu = type.operation_menu(bounds.values, bounds.keys);

  for (const std::string& branch : names)
    for (const Op& op : menu) out.push_back(TraceAction::perform(branch, op));

  if (created < bounds.max_branches) {
    std::string dst = "b" + std::to_string(created);
    for (const std::string& src : names) out.push_back(TraceAction::create(src, dst));
  }

  for (const std::string& into : names)
    for (const std::string& from : names)
      if (into != from && merge_schedulable(store, into, from))
        out.push_back(TraceAction::merge(into, from));
  return out;
}

void enumerate_from(const Store& store, const Mrdt& type, const EnumBounds& bounds, int created,
                    Trace& prefix, const std::function<void(const Trace&)>& yield) {
  if (prefix.size() >= static_cast<std::size_t>(bounds.max_actions)) return;
  for (const TraceAction& action : legal_actions(store, type, bounds, created)) {
    Store next = store;
    int next_created = created;
    switch (action.kind) {
      case TraceAction::Kind::Create:
        next.create_branch(action.source, action.target);
        ++next_created;
        break;
      case TraceAction::Kind::Do:
        next.apply_operation(action.source, action.op);
        break;
      case TraceAction::Kind::Merge:
        next.merge_branches(action.source, action.target);
        break;
    }
    prefix.push_back(action);
    yield(prefix);
    enumerate_from(next, type, bounds, next_created, prefix, yield);
    prefix.pop_back();
  }
}

bool exhaustive_from(const ExecutionChecker& checker, MrdtPtr type, const EnumBounds& bounds,
                     int created, Trace& prefix, int max_failures, CheckReport& report) {
  if (prefix.size() >= static_cast<std::size_t>(bounds.max_actions)) return true;
  for (const TraceAction& action : legal_actions(checker.store(), *type, bounds, created)) {
    ExecutionChecker next = checker;
    int next_created = created + (action.kind == TraceAction::Kind::Create ? 1 : 0);
    prefix.push_back(action);
    std::optional<std::pair<std::string, std::string>> bad = next.step(action);
    ++report.transitions_checked;
    ++report.trials;
    if (bad) {
      report.failures.push_back(
          minimized(type, Failure{prefix, std::move(bad->first), std::move(bad->second)}));
      if (static_cast<int>(report.failures.size()) >= max_failures) {
        prefix.pop_back();
        return false;
      }
    } else if (!exhaustive_from(next, type, bounds, next_created, prefix, max_failures, report)) {
      prefix.pop_back();
      return false;
    }
    prefix.pop_back();
  }
  return true;
}

} // namespace

void enumerate_traces(const Mrdt& type, const EnumBounds& bounds,
                      const std::function<void(const Trace&)>& yield) {
  Store root = Store::initialize(share(type));
  Trace prefix;
  enumerate_from(root, type, bounds, 1, prefix, yield);
}

CheckReport check_execution(const Mrdt& type, const Trace& trace, int max_failures) {
  MrdtPtr shared = share(type);
  CheckReport report = check_once(shared, trace);
  if (!report.failures.empty() && max_failures > 0)
    report.failures.front() = minimized(shared, std::move(report.failures.front()));
  return report;
}

CheckReport run_random(const Mrdt& type, const GenConfig& cfg, int trials, bool parallel,
                       int max_failures) {
  MrdtPtr shared = share(type);
  std::vector<CheckReport> results(static_cast<std::size_t>(trials));

  auto run_trial = [&](int i) {
    GenConfig trial_cfg = cfg;
    trial_cfg.seed = SplitMix(cfg.seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(i + 1))
                         .next();
    Trace trace = generate_trace(type, trial_cfg);
    CheckReport r = check_once(shared, trace);
    if (!r.failures.empty())
      r.failures.front() = minimized(shared, std::move(r.failures.front()));
    results[static_cast<std::size_t>(i)] = std::move(r);
  };

  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < trials; ++i) run_trial(i);
#else
    for (int i = 0; i < trials; ++i) run_trial(i);
#endif
  } else {
    for (int i = 0; i < trials; ++i) run_trial(i);
  }

  // Reports merge in trial order, so the outcome is independent of scheduling.
  CheckReport report;
  for (CheckReport& r : results) {
    bool full = static_cast<int>(report.failures.size()) >= max_failures;
    if (full) r.failures.clear();
    report.absorb(std::move(r));
  }
  if (static_cast<int>(report.failures.size()) > max_failures)
    report.failures.resize(static_cast<std::size_t>(max_failures));
  return report;
}

CheckReport run_exhaustive(const Mrdt& type, const EnumBounds& bounds, int max_failures) {
  MrdtPtr shared = share(type);
  CheckReport report;
  ExecutionChecker root(shared);
  Trace prefix;
  exhaustive_from(root, shared, bounds, 1, prefix, max_failures, report);
  return report;
}

Trace shrink_trace(const Trace& trace, const std::function<bool(const Trace&)>& still_fails) {
  Trace current = trace;
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i < current.size(); ++i) {
      Trace candidate = current;
      candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(i));
      if (still_fails(candidate)) {
        current = std::move(candidate);
        improved = true;
        break;
      }
    }
  }
  return current;
}

} // namespace mrdt
