#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "wdsched/oracle.hpp"
#include "wdsched/simulator.hpp"
#include "wdsched/solitary.hpp"

using namespace wdsched;

namespace {

SliceAssignment line_slices(const std::vector<Rational>& w) {
  SliceAssignment s;
  for (std::size_t j = 0; j < w.size(); ++j) s.set(0, j, w[j]);
  return s;
}

}  // namespace

TEST_CASE("oracle matches greedy on a two-hop line") {
  std::vector<Rational> w{Rational(3), Rational(2)};
  Rational lambda = lambda_star(w, 1);
  auto wp = bottleneck_widths(w, lambda, 1);
  GreedyResult g = greedy_run(wp, 1, lambda);
  Scenario scn = line_scenario(wp, 1, lambda, 100);
  OracleOptions opt;
  opt.mode = OracleMode::Steady;
  opt.period_bound = 10;
  OracleResult r = min_deadline_oracle(scn, line_slices(wp), opt);
  REQUIRE(r.found);
  CHECK(r.best_delay == g.max_delay);
}

TEST_CASE("oracle at vanishing rate finds route length plus phi") {
  Scenario scn = line_scenario(std::vector<Rational>(3, Rational(1)), 1, Rational(1), 10);
  OracleOptions opt;
  opt.period_bound = 8;
  OracleResult r = min_deadline_oracle(scn, line_slices(std::vector<Rational>(3, Rational(1))), opt);
  REQUIRE(r.found);
  CHECK(r.best_delay == 4);
  CHECK(worst_impulse_delay(r.best, scn.flows[0].route) == 4);
}

TEST_CASE("oracle on a single link") {
  Scenario scn = line_scenario({Rational(2)}, 0, Rational(1), 5);
  OracleOptions opt;
  opt.period_bound = 4;
  OracleResult r = min_deadline_oracle(scn, line_slices({Rational(2)}), opt);
  REQUIRE(r.found);
  CHECK(r.best_delay == 1);
}

TEST_CASE("oracle guard fails loudly") {
  Scenario scn = line_scenario(std::vector<Rational>(4, Rational(1)), 3, Rational(1), 10);
  OracleOptions opt;
  opt.period_bound = 12;
  opt.guard = 100;
  CHECK_THROWS_AS(min_deadline_oracle(scn, line_slices(std::vector<Rational>(4, Rational(1))), opt),
                  std::length_error);
}

TEST_CASE("throughput LP agrees with the closed form on lines") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> width(1, 30);
  for (int rep = 0; rep < 30; ++rep) {
    std::size_t n = 1 + static_cast<std::size_t>(rep % 6);
    std::vector<Rational> w(n);
    for (auto& x : w) x = width(rng);
    int phi = rep % static_cast<int>(n);
    Scenario scn = line_scenario(w, phi, Rational(1), 100);
    ThroughputResult t = throughput_lp(scn);
    CHECK(t.source == "lp");
    double exact = to_double(lambda_star(w, phi));
    CHECK(std::abs(t.lambda - exact) <= 1e-9 * exact);
  }
}

TEST_CASE("throughput LP trivial cases") {
  NetworkGraph single({1, 2}, {{1, 2, Rational(6)}});
  Scenario shared{single, InterferenceModel{0}, {}};
  for (int i = 1; i <= 3; ++i) shared.flows.push_back({i, 1, 2, Rational(1), 1, {0}});
  CHECK(throughput_lp(shared).lambda == doctest::Approx(2.0).epsilon(1e-12));

  NetworkGraph two({1, 2, 3, 4}, {{1, 2, Rational(5)}, {2, 3, Rational(1)}, {3, 4, Rational(3)}});
  Scenario apart{two, InterferenceModel{0}, {}};
  apart.flows.push_back({1, 1, 2, Rational(1), 1, {0}});
  apart.flows.push_back({2, 3, 4, Rational(1), 1, {2}});
  CHECK(throughput_lp(apart).lambda == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("sink tree throughput and the clique fallback") {
  NetworkGraph tree = generate_topology(topo::SinkTree{3, 4});
  Scenario scn{tree, InterferenceModel{1}, {}};
  int id = 1;
  for (NodeId v = 22; v <= 85; ++v) {
    scn.flows.push_back({id++, v, 1, Rational(1), 10, shortest_route(tree, v, 1)});
  }
  ThroughputResult t = throughput_lp(scn);
  CHECK(t.lambda == doctest::Approx(1.0 / 64).epsilon(1e-12));
  ThroughputResult c = throughput_lp(scn, 2);
  CHECK(c.source == "clique");
  CHECK(c.lambda == doctest::Approx(1.0 / 64).epsilon(1e-12));
}

TEST_CASE("simplex") {
  auto x = simplex_max({{1, 1}, {1, 3}}, {4, 6}, {3, 2});
  CHECK(x[0] == doctest::Approx(4));
  CHECK(x[1] == doctest::Approx(0));
  auto y = simplex_max({{1, 0}, {0, 1}, {1, 1}}, {2, 2, 3}, {1, 1});
  CHECK(y[0] + y[1] == doctest::Approx(3));
}

TEST_CASE("exhaustive pinwheel decisions") {
  auto a = exhaustive_pinwheel({3, 4, 8, 8, 8});
  CHECK(a.status == ExhaustivePinwheel::Status::Schedulable);
  REQUIRE(a.witness);
  CHECK(verify_pinwheel(*a.witness, {3, 4, 8, 8, 8}).ok);

  auto b = exhaustive_pinwheel({3, 5, 7, 8, 8});
  CHECK(b.status == ExhaustivePinwheel::Status::Schedulable);
  REQUIRE(b.witness);
  CHECK(verify_pinwheel(*b.witness, {3, 5, 7, 8, 8}).ok);

  CHECK(exhaustive_pinwheel({2, 2, 2}).status == ExhaustivePinwheel::Status::Unschedulable);
  CHECK(exhaustive_pinwheel({2, 3, 40}).status == ExhaustivePinwheel::Status::Unschedulable);
  CHECK(exhaustive_pinwheel({2, 3, 40}, 3).status == ExhaustivePinwheel::Status::Unknown);
  CHECK_THROWS_AS(exhaustive_pinwheel({2, 0}), std::invalid_argument);

  const PinwheelVector wide{5, 6, 8, 8, 12, 20, 25, 25};
  auto c = exhaustive_pinwheel(wide, 100000);
  REQUIRE(c.status == ExhaustivePinwheel::Status::Schedulable);
  CHECK(verify_pinwheel(*c.witness, wide).ok);
  CHECK(schedule_pinwheel(wide, 200000, 100000).has_value());
}

TEST_CASE("exhaustive pinwheel agrees with the special-case schedulers") {
  for (std::int64_t a = 2; a <= 6; ++a) {
    for (std::int64_t b = a; b <= 8; ++b) {
      for (std::size_t nb = 1; nb <= 4; ++nb) {
        PinwheelVector k{a};
        k.insert(k.end(), nb, b);
        bool exact = exhaustive_pinwheel(k).status == ExhaustivePinwheel::Status::Schedulable;
        CHECK(exact == schedule_two_values(k).has_value());
        if (is_step_down(k)) CHECK(exact == schedule_step_down(k).has_value());
      }
    }
  }
}
