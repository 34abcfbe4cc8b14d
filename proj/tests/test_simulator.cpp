#include <doctest.h>

#include "fixtures.hpp"
#include "wdsched/pinwheel.hpp"
#include "wdsched/simulator.hpp"
#include "wdsched/solitary.hpp"

using namespace wdsched;

namespace {

std::vector<std::int64_t> max_delays(const SimTrace& tr) {
  std::vector<std::int64_t> out;
  for (const auto& f : tr.flows) out.push_back(f.max_delay);
  return out;
}

}  // namespace

TEST_CASE("two-hop golden delays") {
  Scenario scn = fixtures::two_hop();
  SliceAssignment slices = capacity_slices(scn);

  SimTrace a = simulate(scn, fixtures::pi1(scn.net), slices);
  CHECK(a.steady);
  CHECK(max_delays(a) == std::vector<std::int64_t>{4, 9});

  SimTrace b = simulate(scn, fixtures::pi2(scn.net), slices);
  CHECK(max_delays(b) == std::vector<std::int64_t>{9, 11});
}

TEST_CASE("support verdicts") {
  Scenario loose = fixtures::two_hop(10, 10);
  SliceAssignment slices = capacity_slices(loose);
  auto v = verify_support(simulate(loose, fixtures::pi1(loose.net), slices), loose);
  CHECK(v[0].supported);
  CHECK(v[1].supported);

  Scenario tight = fixtures::two_hop(8, 8);
  auto w = verify_support(simulate(tight, fixtures::pi1(tight.net), slices), tight);
  CHECK(w[0].supported);
  CHECK_FALSE(w[1].supported);
  CHECK(w[1].max_delay == 9);
  CHECK(w[1].max_backlog > w[1].backlog_limit);

  auto x = verify_support(simulate(loose, fixtures::pi2(loose.net), slices), loose);
  CHECK_FALSE(x[1].supported);
}

TEST_CASE("zero-traffic flow is trivially supported") {
  Scenario scn = fixtures::two_hop();
  scn.flows.resize(1);
  Flow idle{2, 3, 1, Rational(0), 2, shortest_route(scn.net, 3, 1)};
  scn.flows.push_back(idle);
  auto v = verify_support(simulate(scn, fixtures::pi1(scn.net), capacity_slices(scn)), scn);
  CHECK(v[1].supported);
}

TEST_CASE("conflicting schedule is rejected") {
  Scenario scn = fixtures::two_hop();
  CyclicSchedule bad;
  bad.slots = {{0, 2}};
  CHECK_THROWS_AS(simulate(scn, bad, capacity_slices(scn)), std::invalid_argument);
}

TEST_CASE("queue log conserves volume") {
  Scenario scn = fixtures::two_hop();
  SimOptions opt;
  opt.record_queues = true;
  SimTrace tr = simulate(scn, fixtures::pi1(scn.net), capacity_slices(scn), opt);
  for (const auto& f : tr.flows) {
    CHECK_FALSE(f.queue_log.empty());
    for (const auto& row : f.queue_log) {
      for (auto q : row) CHECK(q >= 0);
    }
  }
}

TEST_CASE("impulse delay under ORR is route length plus phi") {
  for (int n = 1; n <= 6; ++n) {
    for (int phi = 0; phi < n; ++phi) {
      Scenario scn = line_scenario(std::vector<Rational>(static_cast<std::size_t>(n), Rational(1)), phi, Rational(1), n + phi);
      CHECK(worst_impulse_delay(orr_schedule(n, phi), scn.flows[0].route) == n + phi);
    }
  }
}

TEST_CASE("inter-scheduling times") {
  InterSchedulingTimes orr(orr_schedule(6, 2), {0, 1, 2, 3, 4, 5});
  for (LinkId e = 0; e < 6; ++e) {
    CHECK(orr.link(e).min == 3);
    CHECK(orr.link(e).max == 3);
    if (e + 1 < 6) CHECK(orr.pair(e, e + 1).max == 1);
  }
  Scenario scn = fixtures::two_hop();
  auto id = [&](NodeId a, NodeId b) { return *scn.net.find_link(a, b); };
  InterSchedulingTimes p1(fixtures::pi1(scn.net), used_links(scn));
  CHECK(p1.link(id(1, 2)).max == 3);
  CHECK(p1.link(id(2, 1)).max == 6);
  CHECK(p1.link(id(3, 2)).max == 6);

  InterSchedulingTimes single(schedule_from_sequence({0}), {0});
  CHECK(single.link(0).min == 1);
  CHECK(single.link(0).max == 1);
  InterSchedulingTimes absent(schedule_from_sequence({0}), {0, 1});
  CHECK(absent.link(1).max == kInfiniteGap);
}

TEST_CASE("delay sandwich at vanishing rate") {
  Scenario scn = fixtures::two_hop();
  for (const CyclicSchedule& s : {fixtures::pi1(scn.net), fixtures::pi2(scn.net)}) {
    InterSchedulingTimes ist(s, used_links(scn));
    for (const Flow& f : scn.flows) {
      std::int64_t lo = ist.link(f.route[0]).min;
      std::int64_t hi = ist.link(f.route[0]).max;
      for (std::size_t j = 0; j + 1 < f.route.size(); ++j) {
        lo += ist.pair(f.route[j], f.route[j + 1]).min;
        hi += ist.pair(f.route[j], f.route[j + 1]).max;
      }
      std::int64_t worst = worst_impulse_delay(s, f.route);
      CHECK(worst >= lo);
      CHECK(worst <= hi);
    }
  }
}

TEST_CASE("delay deficit stays nonpositive when slices cover kbar") {
  Scenario scn = line_scenario({Rational(3), Rational(4)}, 1, Rational(1), 7);
  auto pw = schedule_pinwheel({3, 4});
  REQUIRE(pw);
  CyclicSchedule s = to_cyclic(*pw, {{0}, {1}});
  SliceAssignment slices;
  slices.set(0, 0, Rational(3));
  slices.set(0, 1, Rational(4));
  SimTrace tr = simulate(scn, s, slices);
  auto d = delay_deficit_trace(tr, scn, s, slices);
  REQUIRE(d.size() == 1);
  CHECK(d[0].width_bound_holds);
  CHECK(d[0].violations.empty());
  CHECK(tr.flows[0].max_delay <= d[0].kbar_sum);
  CHECK(tr.flows[0].max_delay >= 2);

  Scenario orr_scn = line_scenario(std::vector<Rational>(4, Rational(1)), 2, Rational(1, 1000), 6);
  CyclicSchedule orr = orr_schedule(4, 2);
  SliceAssignment unit;
  for (LinkId e = 0; e < 4; ++e) unit.set(0, e, Rational(3, 1000));
  SimTrace otr = simulate(orr_scn, orr, unit);
  auto od = delay_deficit_trace(otr, orr_scn, orr, unit);
  CHECK(od[0].width_bound_holds);
  CHECK(od[0].violations.empty());
}

TEST_CASE("undersized slice produces a positive deficit") {
  Scenario scn = line_scenario({Rational(5), Rational(5)}, 0, Rational(3), 50);
  CyclicSchedule s;
  s.slots = {{1}, {0, 1}, {1}, {0}, {0}};
  SliceAssignment slices;
  slices.set(0, 0, Rational(5));
  slices.set(0, 1, Rational(5));
  SimTrace tr = simulate(scn, s, slices);
  REQUIRE(tr.steady);
  auto d = delay_deficit_trace(tr, scn, s, slices);
  CHECK_FALSE(d[0].width_bound_holds);
  REQUIRE_FALSE(d[0].violations.empty());
  CHECK(d[0].violations.front().hop == 0);
  CHECK(d[0].violations.front().deficit > 0);
}

TEST_CASE("block policy construction") {
  Scenario scn = line_scenario({Rational(2), Rational(2)}, 1, Rational(1), 20);
  std::vector<Rational> w{Rational(2), Rational(2)};
  CyclicSchedule b = block_policy(scn, w);
  CHECK(b.period() == 2);
  CyclicSchedule b2 = block_policy(scn, w, 2);
  CHECK(b2.period() == 4);
  CHECK(b2.activations(0) == 2);
  CHECK(b2.activations(1) == 2);
  CHECK(b2.slots == std::vector<std::vector<LinkId>>{{1}, {1}, {0}, {0}});
  CHECK(block_delay_formula(b2, scn.flows[0].route) == 4);
  check_conflict_free(b2, scn.net, scn.model);

  Scenario one = line_scenario({Rational(3)}, 0, Rational(1), 20);
  CyclicSchedule s1 = block_policy(one, {Rational(3)});
  CHECK(s1.period() == 3);
  CHECK(block_delay_formula(s1, one.flows[0].route) == 2);
  CHECK_THROWS_AS(block_policy(fixtures::two_hop(), {Rational(1)}), std::invalid_argument);
}

TEST_CASE("measured block delay is the block formula plus one") {
  Scenario scn = line_scenario({Rational(2), Rational(2)}, 1, Rational(1), 20);
  for (int m : {1, 2, 4}) {
    CyclicSchedule b = block_policy(scn, {Rational(2), Rational(2)}, m);
    SimTrace tr = simulate(scn, b, capacity_slices(scn));
    REQUIRE(tr.steady);
    CHECK(Rational(tr.flows[0].max_delay) == block_delay_formula(b, scn.flows[0].route) + 1);
  }
}

TEST_CASE("unstable schedule is flagged") {
  Scenario scn = line_scenario({Rational(1), Rational(1)}, 1, Rational(1), 20);
  SliceAssignment slices;
  slices.set(0, 0, Rational(1));
  slices.set(0, 1, Rational(1));
  SimTrace tr = simulate(scn, schedule_from_sequence({0, 1}), slices);
  CHECK_FALSE(tr.flows[0].stable);
  CHECK_FALSE(tr.steady);
  CHECK_THROWS_AS(verify_support(tr, scn), std::invalid_argument);
}
