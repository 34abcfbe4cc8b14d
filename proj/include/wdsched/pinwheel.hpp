#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wdsched/rational.hpp"
#include "wdsched/schedule.hpp"

namespace wdsched {

using PinwheelVector = std::vector<std::int64_t>;

struct PinwheelVerdict {
  bool ok = true;
  int task = -1;               // first violating task
  std::int64_t gap = 0;        // its gap (kInfiniteGap when never scheduled)
  std::int64_t slot = 0;       // slot where the violating gap starts
  std::vector<std::int64_t> min_gap;
  std::vector<std::int64_t> max_gap;
};

/// Cyclic task sequence; -1 marks an idle slot. Long schedules are exposed
/// through `generator` with `slots` left empty.
struct PinwheelSchedule {
  std::int64_t period = 0;
  std::vector<int> slots;
  std::function<int(std::int64_t)> generator;
  /// Gap certificate for schedules too long to scan: returns a verdict
  /// whose max_gap bounds every task's true cyclic gap.
  std::function<PinwheelVerdict(const PinwheelVector&)> certificate;
  std::string method;

  bool materialized() const { return !slots.empty(); }
  int at(std::int64_t t) const;
};

Rational density(const PinwheelVector& k);

/// Ascending sort where each value divides its successor.
bool is_step_down(const PinwheelVector& k);

/// Throws std::invalid_argument when `k` is not step-down. Returns nullopt
/// when the density exceeds one.
std::optional<PinwheelSchedule> schedule_step_down(const PinwheelVector& k);

/// Throws std::invalid_argument when `k` has more than two distinct values.
std::optional<PinwheelSchedule> schedule_two_values(const PinwheelVector& k);

/// Two-class specialization scheduler. Sound, not complete.
std::optional<PinwheelSchedule> schedule_sxy(const PinwheelVector& k, std::int64_t period_cap = 1000000);

/// Tries the two-class scheduler, then the step-down and two-value special
/// cases, then exact state-graph search. Schedules whose period fits
/// `period_cap` are preferred over generator-only ones.
std::optional<PinwheelSchedule> schedule_pinwheel(const PinwheelVector& k, std::int64_t period_cap = 1000000,
                                                  std::uint64_t exhaustive_cap = 10000000);

/// Cyclic gap audit against `k`. Scans the period when it is at most
/// `scan_cap` slots, otherwise falls back to the schedule's certificate.
PinwheelVerdict verify_pinwheel(const PinwheelSchedule& schedule, const PinwheelVector& k,
                                std::int64_t scan_cap = 50000000);

/// Materialized task sequence as link activations: task s activates `sets[s]`.
CyclicSchedule to_cyclic(const PinwheelSchedule& schedule, const std::vector<std::vector<LinkId>>& sets);

}  // namespace wdsched
