#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wdsched/rational.hpp"
#include "wdsched/schedule.hpp"
#include "wdsched/traffic.hpp"

namespace wdsched {

/// Slot contract. In slot t, volume relayed in slot t-1 lands downstream,
/// then the source receives lambda (cohort t), then every active link
/// serves min(w, Q) FCFS from each slice. Volume leaving the last hop in
/// slot t is delivered at t+1; a cohort's delay is the delivery time of its
/// last fraction minus t.
struct SimOptions {
  std::int64_t horizon_periods = 10;       // cohorts measured up to onset + horizon_periods*K
  std::optional<std::int64_t> horizon;     // explicit cohort window [0, horizon)
  std::int64_t max_slots = 50000000;       // hard stop per flow
  bool record_queues = false;
  /// Keep the per-hop exit slot of every cohort when cohorts*hops stays below this.
  std::int64_t exit_record_limit = 4000000;
  /// When positive, a flow stops as soon as some cohort is known to take at
  /// least this long (the trace is then marked aborted).
  std::int64_t abort_delay = 0;
  bool check_interference = true;
};

inline constexpr std::int64_t kUndelivered = -1;

struct FlowTrace {
  int flow = 0;
  std::size_t hops = 0;
  Rational unit;                          // volume quantum of this flow
  bool stable = true;                     // activation-rate condition on every hop
  bool steady = false;                    // exact recurrence observed
  bool aborted = false;
  std::int64_t onset = 0;                 // start of the periodic regime
  std::int64_t cohorts = 0;               // measured cohorts [0, cohorts)
  std::int64_t slots = 0;                 // slots simulated
  std::vector<std::int64_t> delay;        // per cohort, kUndelivered if never delivered
  std::int64_t max_delay = 0;
  /// exit[j][c]: slot after the last fraction of cohort c left hop j. Empty
  /// when the window exceeds SimOptions::exit_record_limit.
  std::vector<std::vector<std::int64_t>> exit;
  /// Per hop: largest (exit - arrival) over measured cohorts, and that cohort.
  std::vector<std::int64_t> max_age;
  std::vector<std::int64_t> max_age_cohort;
  /// Largest in-network volume at the start of a slot (after arrivals), in
  /// quanta, over slots [0, cohorts + tau).
  __int128 max_backlog = 0;
  std::vector<std::vector<__int128>> queue_log;  // per slot, per hop (after service)
};

struct SimTrace {
  std::int64_t period = 0;
  bool steady = true;
  std::int64_t onset = 0;
  std::vector<FlowTrace> flows;
};

/// Exact fluid simulation of every flow. Throws std::invalid_argument when a
/// slot activates conflicting links.
SimTrace simulate(const Scenario& scn, const CyclicSchedule& schedule, const SliceAssignment& slices,
                  const SimOptions& options = {});

struct SupportVerdict {
  int flow = 0;
  bool supported = false;
  std::int64_t max_delay = 0;
  Rational max_backlog;      // max over slots of the flow's total queued volume
  Rational backlog_limit;    // lambda * tau
};

/// Deadline verdict per flow. The per-cohort test and the backlog test
/// (max volume in network <= lambda*tau) are both evaluated; disagreement
/// throws std::logic_error. Throws std::invalid_argument on a non-steady
/// trace of a flow with traffic.
std::vector<SupportVerdict> verify_support(const SimTrace& trace, const Scenario& scn);

struct DeficitViolation {
  std::int64_t cohort;
  std::size_t hop;
  std::int64_t deficit;
};

struct FlowDeficit {
  int flow = 0;
  bool width_bound_holds = true;            // w >= lambda * kbar on every hop
  std::vector<std::int64_t> kbar;          // per hop
  std::int64_t kbar_sum = 0;
  std::vector<std::int64_t> worst;         // max deficit per hop arrival
  std::vector<DeficitViolation> violations;
};

/// Deficit of a cohort when its last fraction reaches the next link (or the
/// destination) after hop j: age minus the sum of kbar over hops 0..j.
std::vector<FlowDeficit> delay_deficit_trace(const SimTrace& trace, const Scenario& scn,
                                             const CyclicSchedule& schedule, const SliceAssignment& slices);

/// Delay of a unit impulse arriving in slot `phase` of an empty network.
std::int64_t impulse_delay(const CyclicSchedule& schedule, const std::vector<LinkId>& route, std::int64_t phase);

/// Worst impulse delay over all arrival phases of one period.
std::int64_t worst_impulse_delay(const CyclicSchedule& schedule, const std::vector<LinkId>& route);

/// Worst-case stabilizing block schedule for a single flow on a line with
/// slices `widths`. Hop j is active for eta_j = K*lambda/w_j consecutive
/// slots; the block of hop j starts where the block of hop j+1 ends.
/// `scale` stretches every block (and K) by that factor.
CyclicSchedule block_policy(const Scenario& line_scn, const std::vector<Rational>& widths, int scale = 1);

/// K * sum(1 - mu_bar) for a schedule and route.
Rational block_delay_formula(const CyclicSchedule& schedule, const std::vector<LinkId>& route);

}  // namespace wdsched
