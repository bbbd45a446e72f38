#pragma once

#include "mrdt/core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mrdt::oracle {

// Declarative return-value specifications, evaluated on abstract executions.
// These are the ground truth the checker compares implementations against;
// they never look at concrete states.

std::int64_t spec_counter_read(const AbstractExec& history);
std::int64_t spec_pn_read(const AbstractExec& history);
std::pair<Timestamp, std::int64_t> spec_lww_read(const AbstractExec& history);
bool spec_ewflag_read(const AbstractExec& history);
std::vector<std::int64_t> spec_gset_read(const AbstractExec& history);

/// Add-wins read: elements with an add not visible to any remove of the same
/// element.
std::vector<std::int64_t> spec_orset_read(const AbstractExec& history);

/// Append events ordered newest first.
std::vector<std::pair<Timestamp, std::string>> spec_log_read(const AbstractExec& history);

/// Dequeue result mandated for a queue whose visible history is `history`:
/// the minimum-timestamp enqueue with no matching dequeue, or Empty.
Value spec_queue_dequeue(const AbstractExec& history);

/// match(e1, e2): e1 enqueued the tagged element that dequeue e2 returned.
bool queue_match(const Event& enq, const Event& deq);

/// Returns the name of the first violated queue axiom (AddRem, Empty, FIFO1,
/// FIFO2), or nullopt when the execution satisfies all four.
std::optional<std::string> violated_queue_axiom(const AbstractExec& history);
bool queue_axioms_hold(const AbstractExec& history);

// Simulation relations between an abstract execution and the flattened
// concrete state, evaluated literally in both directions.

bool rsim_counter(const AbstractExec& history, std::uint64_t count);
bool rsim_pn(const AbstractExec& history, std::uint64_t incs, std::uint64_t decs);
bool rsim_lww(const AbstractExec& history, Timestamp t, std::int64_t v);
bool rsim_ewflag(const AbstractExec& history, const std::vector<Timestamp>& tokens);
bool rsim_gset(const AbstractExec& history, const std::vector<std::int64_t>& elems);
bool rsim_orset(const AbstractExec& history,
                const std::vector<std::pair<std::int64_t, Timestamp>>& pairs);
bool rsim_orset_space(const AbstractExec& history,
                      const std::vector<std::pair<std::int64_t, Timestamp>>& pairs);
bool rsim_log(const AbstractExec& history,
              const std::vector<std::pair<Timestamp, std::string>>& entries);
bool rsim_queue(const AbstractExec& history,
                const std::vector<std::pair<Timestamp, std::int64_t>>& items);

/// Observational equivalence: every probe returns the same value on both
/// states, and the canonical forms are equal. Canonical equality is the
/// decisive check; probing is a redundant differential one.
bool obs_equiv(const Mrdt& type, const StatePtr& a, const StatePtr& b,
               const std::vector<Op>& probes);

} // namespace mrdt::oracle
