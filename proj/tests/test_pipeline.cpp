#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "wdsched/io.hpp"
#include "wdsched/pipeline.hpp"

using namespace wdsched;

namespace {

Scenario conflicting_single_hops(int tau) {
  Scenario scn{generate_topology(topo::Line{4}, Rational(10)), InterferenceModel{2}, {}};
  for (NodeId v = 1; v <= 3; ++v) {
    scn.flows.push_back({static_cast<int>(v), v, v + 1, Rational(1), tau, shortest_route(scn.net, v, v + 1)});
  }
  return scn;
}

SweepConfig small_sweep() {
  SweepConfig cfg;
  cfg.topology = topo::Grid{3, 3};
  cfg.flow_count = 4;
  cfg.lambda_fractions = {Rational(1, 4), Rational(1, 2)};
  cfg.taus = {6, 12};
  cfg.seeds = {1, 2};
  return cfg;
}

std::string csv_of(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  write_sweep_header(os);
  for (const auto& r : rows) write_sweep_row(os, r);
  return os.str();
}

}  // namespace

TEST_CASE("stage names round trip") {
  for (Stage s : {Stage::None, Stage::Validation, Stage::Relaxation, Stage::Integer, Stage::Pinwheel,
                  Stage::Simulation}) {
    CHECK(stage_from_string(to_string(s)) == s);
  }
  CHECK_THROWS_AS(stage_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("two-hop scenario at equal deadlines exceeds pinwheel density") {
  SolveResult r = solve(fixtures::two_hop(10, 10));
  CHECK_FALSE(r.feasible);
  CHECK(r.failed == Stage::Pinwheel);
  CHECK(r.wgc.assignment.k_set == std::vector<std::int64_t>{3, 3, 5, 5});
  CHECK(density(r.wgc.assignment.k_set) == Rational(16, 15));
}

TEST_CASE("two-hop scenario solves and certifies") {
  Scenario scn = fixtures::two_hop(10, 12);
  SolveResult r = solve(scn);
  REQUIRE(r.feasible);
  CHECK(r.failed == Stage::None);
  REQUIRE(r.support.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(r.support[i].supported);
    CHECK(r.support[i].max_delay <= scn.flows[i].tau);
  }
  check_conflict_free(r.schedule, scn.net, scn.model);
  for (const auto& v : certify(scn, r.schedule, r.slices)) CHECK(v.supported);
}

TEST_CASE("short deadline fails validation") {
  SolveResult r = solve(fixtures::two_hop(1, 10));
  CHECK_FALSE(r.feasible);
  CHECK(r.failed == Stage::Validation);
  CHECK(r.binding_flows == std::vector<int>{1});
}

TEST_CASE("overfull pinwheel vectors fail at the pinwheel stage") {
  SolveResult r = solve(conflicting_single_hops(2));
  CHECK_FALSE(r.feasible);
  CHECK(r.failed == Stage::Pinwheel);
  CHECK(r.wgc.assignment.k_set == std::vector<std::int64_t>{2, 2, 2});

  SolveResult tight = solve(fixtures::two_hop(2, 2));
  CHECK(tight.failed == Stage::Pinwheel);

  SolveResult ok = solve(conflicting_single_hops(3));
  CHECK(ok.feasible);
}

TEST_CASE("sweep scenarios") {
  SweepConfig cfg = small_sweep();
  Scenario a = sweep_scenario(cfg, 7, 9);
  Scenario b = sweep_scenario(cfg, 7, 9);
  REQUIRE(a.flows.size() == 4);
  for (std::size_t i = 0; i < a.flows.size(); ++i) {
    CHECK(a.flows[i].route == b.flows[i].route);
    CHECK(a.flows[i].tau == 9);
    CHECK(a.flows[i].lambda == 1);
  }

  cfg.topology = topo::SinkTree{2, 2};
  cfg.pattern = FlowPattern::LeavesToSink;
  Scenario tree = sweep_scenario(cfg, 0, 5);
  CHECK(tree.flows.size() == 4);
  for (const Flow& f : tree.flows) CHECK(f.dst == 1);
}

TEST_CASE("rates above the throughput bound are never feasible") {
  SweepConfig cfg = small_sweep();
  cfg.lambda_fractions = {Rational(3, 2)};
  for (const SweepRow& r : run_sweep(cfg)) {
    CHECK_FALSE(r.feasible);
    CHECK(r.stage != Stage::None);
  }
}

TEST_CASE("sweep output is deterministic and ordered") {
  SweepConfig cfg = small_sweep();
  std::vector<SweepRow> streamed;
  auto rows = run_sweep(cfg, [&](const SweepRow& r) { streamed.push_back(r); });
  REQUIRE(rows.size() == 8);
  CHECK(csv_of(rows) == csv_of(streamed));
  cfg.threads = 3;
  CHECK(csv_of(run_sweep(cfg)) == csv_of(rows));
  CHECK(rows[0].fraction == Rational(1, 4));
  CHECK(rows[0].tau == 6);
  CHECK(rows[1].seed == 2);
  CHECK(rows[2].tau == 12);
  CHECK(rows[4].fraction == Rational(1, 2));
  for (const auto& r : rows) CHECK(r.lambda == r.fraction * r.lambda_star);
}

TEST_CASE("feasibility curve and plateau") {
  std::vector<SweepRow> rows;
  auto add = [&](Rational f, int tau, std::uint64_t seed, bool ok) {
    SweepRow r;
    r.fraction = f;
    r.tau = tau;
    r.seed = seed;
    r.feasible = ok;
    rows.push_back(r);
  };
  add(Rational(1, 2), 4, 1, true);
  add(Rational(1, 2), 4, 2, false);
  add(Rational(1), 4, 1, false);
  add(Rational(1), 4, 2, false);
  add(Rational(1, 2), 8, 1, true);
  add(Rational(1, 2), 8, 2, true);
  add(Rational(1), 8, 1, true);
  add(Rational(1), 8, 2, false);
  add(Rational(1, 2), 12, 1, true);
  add(Rational(1, 2), 12, 2, true);
  add(Rational(1), 12, 1, true);
  add(Rational(1), 12, 2, false);
  auto curve = feasibility_curve(rows);
  REQUIRE(curve.size() == 3);
  CHECK(curve[0].rate == doctest::Approx(0.25));
  CHECK(curve[1].rate == doctest::Approx(0.75));
  CHECK(curve[2].rate == doctest::Approx(0.75));
  CHECK(plateau_tau(curve) == 8);
}
