#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wdsched/rational.hpp"
#include "wdsched/schedule.hpp"
#include "wdsched/traffic.hpp"

namespace wdsched {

/// A single flow viewed as a line of hops, source first.
struct LineInstance {
  std::vector<Rational> w;
  int phi = 0;
  Rational lambda;
};

/// Line network 1..n+1 whose forward links carry ids 0..n-1 (capacity w[j])
/// and whose reverse links carry ids n..2n-1. One flow 1 -> n+1 with rate
/// `lambda` and deadline `tau` routed over links 0..n-1.
Scenario line_scenario(const std::vector<Rational>& w, int phi, const Rational& lambda, int tau);

/// Largest rate a solitary flow can sustain: the minimum over windows of
/// phi+1 consecutive hops of 1 / sum(1/w).
Rational lambda_star(const std::vector<Rational>& w, int phi);

/// Ordered round robin over hops 0..n-1: slot t activates {j : j = t mod (phi+1)}.
CyclicSchedule orr_schedule(int n_links, int phi);

/// Smallest widths w' <= w supporting `lambda` under phi-hop interference.
/// Exact rationals; every window constraint is re-checked exactly.
/// Throws std::domain_error when lambda exceeds lambda_star(w, phi).
std::vector<Rational> bottleneck_widths(const std::vector<Rational>& w, const Rational& lambda, int phi);

/// One greedy decision. Scans from the destination hop toward the source,
/// activating every hop whose queue holds at least a full slice and skipping
/// the phi hops upstream of it. The source is activated when it is reachable
/// and no full queue was found on the way to it.
template <typename Volume>
std::vector<std::size_t> greedy_step(const std::vector<Volume>& queues, const std::vector<Volume>& widths,
                                     int phi) {
  std::vector<std::size_t> active;
  long j = static_cast<long>(queues.size()) - 1;
  while (j >= 0) {
    if (queues[static_cast<std::size_t>(j)] >= widths[static_cast<std::size_t>(j)]) {
      active.push_back(static_cast<std::size_t>(j));
      j -= phi + 1;
    } else {
      --j;
    }
  }
  bool source_blocked = !active.empty() && active.back() <= static_cast<std::size_t>(phi);
  if (!source_blocked && !queues.empty()) active.push_back(0);
  return active;
}

struct GreedyResult {
  std::int64_t max_delay = 0;
  Rational zeta;               // lambda * max_delay / sum(w')
  bool steady = false;         // exact state recurrence found
  std::int64_t onset = 0;      // first slot of the recurrent segment
  std::int64_t period = 0;     // recurrence length (0 when not steady)
  std::int64_t horizon = 0;    // cohorts measured: [0, horizon)
  CyclicSchedule cycle;        // activations over the recurrent segment (hop indices)
};

/// Runs the greedy policy from an empty line with slices `widths` at rate
/// `lambda`. Stops at the first exact recurrence of the queue state, or after
/// a finite horizon of max(2000, 50 * sum(w)/lambda) slots when
/// `max_state_slots` is exceeded.
GreedyResult greedy_run(const std::vector<Rational>& widths, int phi, const Rational& lambda,
                        std::int64_t max_state_slots = 200000);

/// Greedy delay ratio under bottleneck slices of `inst`.
GreedyResult greedy_delay_ratio(const LineInstance& inst);

enum class WidthDistribution {
  Normal,   // mean 55, sd 15
  Uniform,  // [10, 100]
  Bimodal   // mean 20 or 100 with equal odds, sd 10
};

std::string to_string(WidthDistribution d);
WidthDistribution width_distribution_from_string(const std::string& name);

/// `n` integer widths, each at least 1, drawn from `d`.
std::vector<Rational> random_widths(std::size_t n, WidthDistribution d, std::mt19937_64& rng);

}  // namespace wdsched
