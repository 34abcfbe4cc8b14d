#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wdsched/pinwheel.hpp"
#include "wdsched/schedule.hpp"
#include "wdsched/traffic.hpp"

namespace wdsched {

struct ExhaustivePinwheel {
  enum class Status { Schedulable, Unschedulable, Unknown };
  Status status = Status::Unknown;
  std::optional<PinwheelSchedule> witness;
  std::uint64_t states = 0;  // states expanded
};

/// Exact decision by search over the slack-vector state graph: state
/// d_i = slots left before task i must run. Any cycle reachable from the
/// all-k state is a valid cyclic schedule and conversely, so the answer is
/// exact for every period. Unknown once more than `state_cap` states are visited.
ExhaustivePinwheel exhaustive_pinwheel(const PinwheelVector& k, std::uint64_t state_cap = 10000000);

enum class OracleMode {
  Impulse,  // worst delay of a single unit impulse over all arrival phases
  Steady,   // steady-state max cohort delay under the given slices
};

struct OracleOptions {
  OracleMode mode = OracleMode::Impulse;
  std::int64_t period_bound = 12;
  /// Steady mode: only periods that are multiples of this base are searched.
  std::int64_t period_base = 1;
  std::uint64_t guard = 100000000;  // max candidate sequences examined
};

struct OracleResult {
  bool found = false;
  CyclicSchedule best;
  std::int64_t best_delay = kInfiniteGap;
  std::uint64_t examined = 0;
};

/// Exhaustive search over cyclic schedules whose slots are maximal
/// independent sets of the used links' conflict graph. Sequences equal up to
/// rotation are examined once. Throws std::length_error past the guard.
OracleResult min_deadline_oracle(const Scenario& scn, const SliceAssignment& slices, const OracleOptions& options);

struct ThroughputResult {
  double lambda = 0;          // largest common per-flow rate
  std::string source;         // "lp" or "clique" (upper bound)
  std::size_t sets = 0;       // independent sets (or cliques) used
};

/// Largest common rate such that some convex combination of maximal
/// independent sets activates every used link e at least
/// lambda * (flows on e) / c_e of the time. Falls back to the clique upper
/// bound when the sets cannot be enumerated within `max_sets`.
ThroughputResult throughput_lp(const Scenario& scn, std::size_t max_sets = 200000);

/// Dense simplex for max c.x s.t. A x <= b, x >= 0, b >= 0 (Bland's rule).
/// Returns the optimal x.
std::vector<double> simplex_max(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                                const std::vector<double>& c);

}  // namespace wdsched
