#include "wdsched/pipeline.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "wdsched/oracle.hpp"

namespace wdsched {

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::None: return "none";
    case Stage::Validation: return "validation";
    case Stage::Relaxation: return "relaxation";
    case Stage::Integer: return "integer";
    case Stage::Pinwheel: return "pinwheel";
    case Stage::Simulation: return "simulation";
  }
  return "none";
}

Stage stage_from_string(const std::string& name) {
  for (Stage s : {Stage::None, Stage::Validation, Stage::Relaxation, Stage::Integer, Stage::Pinwheel,
                  Stage::Simulation}) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument("unknown stage '" + name + "'");
}

namespace {

SolveResult fail(SolveResult r, Stage stage, std::string message) {
  r.feasible = false;
  r.failed = stage;
  r.message = std::move(message);
  return r;
}

}  // namespace

SolveResult solve(const Scenario& scn, const SolveOptions& options) {
  SolveResult r;
  r.violations = validate_scenario(scn);
  if (!r.violations.empty()) {
    for (const auto& v : r.violations) {
      if (v.flow >= 0 && std::find(r.binding_flows.begin(), r.binding_flows.end(), v.flow) == r.binding_flows.end()) {
        r.binding_flows.push_back(v.flow);
      }
    }
    std::string first = r.violations.front().message;
    return fail(std::move(r), Stage::Validation, first);
  }
  if (scn.flows.empty()) return fail(std::move(r), Stage::Validation, "scenario has no flows");

  try {
    r.instance = make_coloring_instance(scn);
    r.wgc = wgc_coloring(r.instance, scn);
  } catch (const std::exception& e) {
    return fail(std::move(r), Stage::Relaxation, e.what());
  }
  try {
    r.wgc.assignment = solve_integer(r.instance, scn, r.wgc.coloring);
  } catch (const IntegerInfeasible& e) {
    r.binding_flows = e.flows();
    return fail(std::move(r), Stage::Integer, e.what());
  } catch (const std::runtime_error& e) {
    return fail(std::move(r), Stage::Integer, e.what());
  }

  const PinwheelVector k = r.wgc.assignment.k_set;
  const Rational rho = density(k);
  if (rho > 1) return fail(std::move(r), Stage::Pinwheel, "density " + to_string(rho) + " exceeds one");
  auto pw = schedule_pinwheel(k, options.period_cap, options.exhaustive_cap);
  if (!pw) return fail(std::move(r), Stage::Pinwheel, "no pinwheel schedule found");
  if (!pw->materialized() || pw->period > options.period_cap) {
    return fail(std::move(r), Stage::Pinwheel,
                "schedule period " + std::to_string(pw->period) + " exceeds the cap");
  }
  PinwheelVerdict pv = verify_pinwheel(*pw, k);
  if (!pv.ok) throw std::logic_error("pinwheel schedule violates task " + std::to_string(pv.task));
  r.pinwheel = std::move(*pw);
  r.schedule = to_cyclic(r.pinwheel, class_links(r.instance, r.wgc.coloring));
  check_conflict_free(r.schedule, scn.net, scn.model);
  r.slices = slice_widths(r.instance, scn, r.wgc.assignment);

  try {
    r.trace = simulate(scn, r.schedule, r.slices, options.sim);
  } catch (const std::length_error& e) {
    return fail(std::move(r), Stage::Simulation, e.what());
  }
  if (!r.trace.steady) return fail(std::move(r), Stage::Simulation, "no steady state within the slot budget");
  r.support = verify_support(r.trace, scn);
  r.deficits = delay_deficit_trace(r.trace, scn, r.schedule, r.slices);
  for (const auto& v : r.support) {
    if (!v.supported) r.binding_flows.push_back(v.flow);
  }
  if (!r.binding_flows.empty()) {
    std::string msg = "deadline missed by flow " + std::to_string(r.binding_flows.front());
    return fail(std::move(r), Stage::Simulation, msg);
  }
  r.feasible = true;
  return r;
}

std::vector<SupportVerdict> certify(const Scenario& scn, const CyclicSchedule& schedule,
                                    const SliceAssignment& slices, const SimOptions& options) {
  check_conflict_free(schedule, scn.net, scn.model);
  SimTrace trace = simulate(scn, schedule, slices, options);
  if (!trace.steady) throw std::runtime_error("no steady state within the slot budget");
  return verify_support(trace, scn);
}

Scenario sweep_scenario(const SweepConfig& config, std::uint64_t seed, int tau) {
  Scenario scn{generate_topology(config.topology), InterferenceModel{config.phi}, {}};
  if (config.pattern == FlowPattern::Random) {
    scn.flows = random_flows(scn.net, config.flow_count, seed, Rational(1), tau);
  } else {
    std::set<NodeId> has_child;
    for (const Link& l : scn.net.links()) {
      if (l.src < l.dst) has_child.insert(l.src);
    }
    int id = 1;
    for (NodeId v : scn.net.nodes()) {
      if (v == 1 || has_child.count(v)) continue;
      Flow f;
      f.id = id++;
      f.src = v;
      f.dst = 1;
      f.lambda = 1;
      f.tau = tau;
      f.route = shortest_route(scn.net, v, 1);
      scn.flows.push_back(std::move(f));
    }
  }
  return scn;
}

namespace {

struct Bound {
  Rational lambda_star;
  std::string source;
};

Bound throughput_bound(const SweepConfig& config, std::uint64_t seed) {
  Scenario scn = sweep_scenario(config, seed, 1);
  ThroughputResult t = throughput_lp(scn);
  return {rationalize(t.lambda, 10000), t.source};
}

SweepRow run_point(const SweepConfig& config, const Rational& fraction, int tau, std::uint64_t seed,
                   const Bound& bound) {
  SweepRow row;
  row.fraction = fraction;
  row.lambda_star = bound.lambda_star;
  row.lambda_star_source = bound.source;
  row.lambda = fraction * bound.lambda_star;
  row.tau = tau;
  row.seed = seed;
  Scenario scn = sweep_scenario(config, seed, tau);
  for (Flow& f : scn.flows) f.lambda = row.lambda;
  try {
    SolveResult r = solve(scn, config.solve);
    row.feasible = r.feasible;
    row.stage = r.failed;
    row.message = r.message;
    row.colors = r.wgc.coloring.sets.size();
    row.period = r.schedule.period();
    for (const auto& v : r.support) row.max_delay = std::max(row.max_delay, v.max_delay);
  } catch (const std::exception& e) {
    row.feasible = false;
    row.stage = Stage::Simulation;
    row.message = std::string("internal: ") + e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& config, const std::function<void(const SweepRow&)>& emit) {
  if (config.lambda_fractions.empty() || config.taus.empty() || config.seeds.empty()) {
    throw std::invalid_argument("sweep grids must be nonempty");
  }
  std::map<std::uint64_t, Bound> bounds;
  for (std::uint64_t seed : config.seeds) bounds.emplace(seed, throughput_bound(config, seed));

  struct Point {
    Rational fraction;
    int tau;
    std::uint64_t seed;
  };
  std::vector<Point> points;
  for (const Rational& f : config.lambda_fractions) {
    for (int tau : config.taus) {
      for (std::uint64_t seed : config.seeds) points.push_back({f, tau, seed});
    }
  }
  std::vector<std::optional<SweepRow>> done(points.size());
  std::size_t next_task = 0;
  std::size_t next_emit = 0;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next_task == points.size()) return;
        i = next_task++;
      }
      SweepRow row = run_point(config, points[i].fraction, points[i].tau, points[i].seed, bounds.at(points[i].seed));
      std::lock_guard<std::mutex> lock(mu);
      done[i] = std::move(row);
      while (next_emit < points.size() && done[next_emit]) {
        if (emit) emit(*done[next_emit]);
        ++next_emit;
      }
    }
  };
  unsigned n = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(points.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<SweepRow> rows;
  rows.reserve(points.size());
  for (auto& r : done) rows.push_back(std::move(*r));
  return rows;
}

std::vector<CurvePoint> feasibility_curve(const std::vector<SweepRow>& rows) {
  std::map<int, std::map<std::uint64_t, double>> best;
  for (const SweepRow& r : rows) {
    double& b = best[r.tau][r.seed];
    if (r.feasible) b = std::max(b, to_double(r.fraction));
  }
  std::vector<CurvePoint> curve;
  for (const auto& [tau, per_seed] : best) {
    double sum = 0;
    for (const auto& [seed, v] : per_seed) sum += v;
    curve.push_back({tau, sum / static_cast<double>(per_seed.size())});
  }
  return curve;
}

int plateau_tau(const std::vector<CurvePoint>& curve, double tol) {
  if (curve.empty()) throw std::invalid_argument("empty curve");
  double top = 0;
  for (const auto& p : curve) top = std::max(top, p.rate);
  for (const auto& p : curve) {
    if (p.rate >= top - tol) return p.tau;
  }
  return curve.back().tau;
}

}  // namespace wdsched
