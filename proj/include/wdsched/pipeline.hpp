#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wdsched/coloring.hpp"
#include "wdsched/pinwheel.hpp"
#include "wdsched/simulator.hpp"
#include "wdsched/topology.hpp"
#include "wdsched/traffic.hpp"

namespace wdsched {

enum class Stage { None, Validation, Relaxation, Integer, Pinwheel, Simulation };

std::string to_string(Stage stage);
Stage stage_from_string(const std::string& name);

struct SolveOptions {
  std::int64_t period_cap = 200000;   // longest pinwheel period accepted for simulation
  std::uint64_t exhaustive_cap = 100000;
  SimOptions sim;

  SolveOptions() { sim.horizon_periods = 3; }
};

struct SolveResult {
  bool feasible = false;
  Stage failed = Stage::None;
  std::string message;
  std::vector<Violation> violations;
  std::vector<int> binding_flows;

  ColoringInstance instance;
  WgcResult wgc;
  PinwheelSchedule pinwheel;
  CyclicSchedule schedule;
  SliceAssignment slices;
  SimTrace trace;
  std::vector<SupportVerdict> support;
  std::vector<FlowDeficit> deficits;
};

/// Coloring, integer k, pinwheel schedule, simulation and certification of
/// one scenario. Stage failures are reported in the result, not thrown.
SolveResult solve(const Scenario& scn, const SolveOptions& options = {});

/// Re-checks a persisted schedule: conflict freedom, then simulation and
/// support verdicts under the given slices.
std::vector<SupportVerdict> certify(const Scenario& scn, const CyclicSchedule& schedule,
                                    const SliceAssignment& slices, const SimOptions& options = {});

enum class FlowPattern {
  Random,       // `flow_count` distinct random pairs per seed
  LeavesToSink  // one flow from every leaf to node 1
};

struct SweepConfig {
  TopologyKind topology = topo::Grid{4, 4};
  int phi = 1;
  FlowPattern pattern = FlowPattern::Random;
  std::size_t flow_count = 32;
  std::vector<Rational> lambda_fractions;  // of the per-instance throughput bound
  std::vector<int> taus;
  std::vector<std::uint64_t> seeds;
  unsigned threads = 1;
  SolveOptions solve;
};

struct SweepRow {
  Rational fraction;
  Rational lambda;
  Rational lambda_star;
  std::string lambda_star_source;
  int tau = 0;
  std::uint64_t seed = 0;
  bool feasible = false;
  Stage stage = Stage::None;
  std::int64_t max_delay = 0;
  std::size_t colors = 0;
  std::int64_t period = 0;
  std::string message;
};

/// Flows of one sweep instance at unit rate and the given deadline.
Scenario sweep_scenario(const SweepConfig& config, std::uint64_t seed, int tau);

/// Every (fraction, tau, seed) point in that nesting order. Points run on
/// `threads` workers; `emit` receives rows in grid order.
std::vector<SweepRow> run_sweep(const SweepConfig& config,
                                const std::function<void(const SweepRow&)>& emit = {});

struct CurvePoint {
  int tau = 0;
  double rate = 0;  // mean over seeds of the largest feasible fraction
};

/// Normalized feasible rate per deadline.
std::vector<CurvePoint> feasibility_curve(const std::vector<SweepRow>& rows);

/// Smallest deadline whose rate is within `tol` of the curve maximum.
int plateau_tau(const std::vector<CurvePoint>& curve, double tol = 1e-9);

}  // namespace wdsched
