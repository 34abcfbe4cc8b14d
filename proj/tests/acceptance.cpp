#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "wdsched/io.hpp"
#include "wdsched/oracle.hpp"
#include "wdsched/solitary.hpp"

using namespace wdsched;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Every steady simulation below goes through `support`, which counts the
// calls; verify_support itself throws std::logic_error when the per-cohort
// and backlog verdicts disagree.
std::uint64_t g_support_checks = 0;
std::vector<std::string> g_equivalence_breaks;

std::vector<SupportVerdict> support(const SimTrace& tr, const Scenario& scn) {
  ++g_support_checks;
  return verify_support(tr, scn);
}

SliceAssignment line_slices(const std::vector<Rational>& w) {
  SliceAssignment s;
  for (std::size_t j = 0; j < w.size(); ++j) s.set(0, j, w[j]);
  return s;
}

std::string join(const std::vector<Rational>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
  return s + ")";
}

std::string join(const PinwheelVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

// ------------------------------------------------------------------ 1

Outcome two_hop_golden() {
  Scenario scn = fixtures::two_hop(10, 10);
  auto delays = [&](const CyclicSchedule& s, int t1, int t2) {
    Scenario c = fixtures::two_hop(t1, t2);
    SimTrace tr = simulate(c, s, capacity_slices(c));
    auto v = support(tr, c);
    return std::make_pair(std::make_pair(tr.flows[0].max_delay, tr.flows[1].max_delay),
                          v[0].supported && v[1].supported);
  };
  auto [d1, ok1_10] = delays(fixtures::pi1(scn.net), 10, 10);
  auto [d1b, ok1_8] = delays(fixtures::pi1(scn.net), 8, 8);
  auto [d2, ok2_10] = delays(fixtures::pi2(scn.net), 10, 10);
  std::ostringstream os;
  os << "pi1 delays (" << d1.first << "," << d1.second << "), pi2 delays (" << d2.first << "," << d2.second
     << "); pi1 supports (10,10): " << ok1_10 << ", (8,8): " << ok1_8 << "; pi2 supports (10,10): " << ok2_10;
  bool pass = d1 == std::make_pair<std::int64_t, std::int64_t>(4, 9) &&
              d2 == std::make_pair<std::int64_t, std::int64_t>(9, 11) && ok1_10 && !ok1_8 && !ok2_10 && d1b == d1;
  return {pass, os.str()};
}

// ------------------------------------------------------------------ 2

Outcome closed_form_vs_lp() {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> len(1, 8);
  std::uniform_int_distribution<int> num(1, 60);
  std::uniform_int_distribution<int> den(1, 4);
  double worst = 0;
  int bad = 0;
  for (int rep = 0; rep < 100; ++rep) {
    int n = len(rng);
    std::vector<Rational> w(static_cast<std::size_t>(n));
    for (auto& x : w) x = make_rational(num(rng), den(rng));
    int phi = std::uniform_int_distribution<int>(0, n - 1)(rng);
    double exact = to_double(lambda_star(w, phi));
    ThroughputResult t = throughput_lp(line_scenario(w, phi, Rational(1), 100));
    double err = std::abs(t.lambda - exact) / exact;
    worst = std::max(worst, err);
    if (err > 1e-9 || t.source != "lp") ++bad;
  }
  std::ostringstream os;
  os << "100 lines, worst relative error " << std::scientific << std::setprecision(2) << worst << ", " << bad
     << " outside 1e-9";
  return {bad == 0, os.str()};
}

// ------------------------------------------------------------------ 3

Outcome orr_optimality() {
  int orr_bad = 0, oracle_bad = 0, oracle_runs = 0;
  for (int n = 1; n <= 10; ++n) {
    for (int phi = 0; phi < n; ++phi) {
      std::vector<Rational> w(static_cast<std::size_t>(n), Rational(1));
      Scenario scn = line_scenario(w, phi, Rational(1), 100);
      if (worst_impulse_delay(orr_schedule(n, phi), scn.flows[0].route) != n + phi) ++orr_bad;
      if (n <= 4) {
        OracleOptions opt;
        opt.period_bound = 12;
        OracleResult r = min_deadline_oracle(scn, line_slices(w), opt);
        ++oracle_runs;
        if (!r.found || r.best_delay != n + phi) ++oracle_bad;
      }
    }
  }
  std::ostringstream os;
  os << "ORR worst impulse delay != n+phi in " << orr_bad << " of 55 cases; oracle (period <= 12) below n+phi in "
     << oracle_bad << " of " << oracle_runs;
  return {orr_bad == 0 && oracle_bad == 0, os.str()};
}

// ------------------------------------------------------------------ 4

Outcome greedy_optimality() {
  int cases = 0;
  std::vector<std::string> mismatches;
  for (int n = 1; n <= 3; ++n) {
    int count = 1;
    for (int i = 0; i < n; ++i) count *= 4;
    for (int c = 0; c < count; ++c) {
      std::vector<Rational> w;
      for (int i = 0, x = c; i < n; ++i, x /= 4) w.push_back(Rational(1 + x % 4));
      const int phi = n - 1;
      Rational lambda = lambda_star(w, phi);
      std::vector<Rational> wp = bottleneck_widths(w, lambda, phi);
      GreedyResult g = greedy_run(wp, phi, lambda);
      Scenario scn = line_scenario(wp, phi, lambda, 1000);
      SliceAssignment slices = line_slices(wp);
      if (g.steady) {
        SimTrace tr = simulate(scn, g.cycle, slices);
        if (tr.steady) support(tr, scn);
      }
      std::int64_t base = 1;
      for (const auto& x : wp) base = std::lcm(base, to_int64(Rational(lambda / x).get_den()));
      OracleOptions opt;
      opt.mode = OracleMode::Steady;
      opt.period_base = base;
      opt.period_bound = std::max(base, g.period);
      OracleResult r = min_deadline_oracle(scn, slices, opt);
      ++cases;
      if (!r.found || r.best_delay != g.max_delay) {
        std::ostringstream m;
        m << "w=" << join(w) << " greedy " << g.max_delay << " oracle " << r.best_delay;
        mismatches.push_back(m.str());
      }
    }
  }
  std::ostringstream os;
  os << cases - static_cast<int>(mismatches.size()) << " of " << cases << " instances equal";
  for (const auto& m : mismatches) os << "; " << m;
  return {mismatches.empty(), os.str()};
}

// ------------------------------------------------------------------ 5

Outcome greedy_ratio() {
  std::mt19937_64 rng(5);
  bool pass = true;
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  for (auto d : {WidthDistribution::Normal, WidthDistribution::Uniform, WidthDistribution::Bimodal}) {
    int below_one = 0, below_one_shifted = 0;
    double max_total = 0, mean_phi1 = 0;
    for (int i = 0; i < 1000; ++i) {
      std::vector<Rational> w = random_widths(6, d, rng);
      Rational lambda = lambda_star(w, 5);
      GreedyResult g = greedy_delay_ratio({w, 5, lambda});
      double z = to_double(g.zeta);
      if (z <= 1.0) ++below_one;
      // Same ratio with the delivering slot left out of the delay.
      if (g.zeta * (g.max_delay - 1) <= g.max_delay) ++below_one_shifted;
      max_total = std::max(max_total, z);
      mean_phi1 += to_double(greedy_delay_ratio({w, 1, lambda_star(w, 1)}).zeta);
    }
    mean_phi1 /= 1000;
    double frac = below_one / 1000.0;
    pass = pass && frac >= 0.95 && max_total <= 1.2 && mean_phi1 <= 1.5;
    os << to_string(d) << ": share<=1 " << frac << " (" << below_one_shifted / 1000.0
       << " without the delivering slot), max " << max_total << ", mean(phi=1) " << mean_phi1 << "; ";
  }
  std::string s = os.str();
  return {pass, s.substr(0, s.size() - 2)};
}

// ------------------------------------------------------------------ 6

Outcome pinwheel_golden() {
  std::vector<std::string> problems;
  for (PinwheelVector k : {PinwheelVector{3, 3, 3}, PinwheelVector{2, 4, 4}, PinwheelVector{3, 4, 8, 8, 8},
                           PinwheelVector{2, 6, 6, 12, 12}, PinwheelVector{4, 4, 6, 6, 6}}) {
    auto s = schedule_pinwheel(k);
    if (!s || !verify_pinwheel(*s, k).ok) problems.push_back(join(k) + " not scheduled");
  }
  for (std::int64_t x = 4; x <= 100; ++x) {
    PinwheelVector k{2, 3, x};
    if (schedule_sxy(k) || schedule_pinwheel(k) ||
        exhaustive_pinwheel(k).status != ExhaustivePinwheel::Status::Unschedulable) {
      problems.push_back(join(k) + " accepted");
    }
  }
  PinwheelVector hard{3, 5, 7, 8, 8};
  if (schedule_sxy(hard)) problems.push_back("two-class scheduler accepts (3,5,7,8,8)");
  auto ex = exhaustive_pinwheel(hard);
  if (ex.status != ExhaustivePinwheel::Status::Unschedulable) {
    std::string w;
    if (ex.witness && verify_pinwheel(*ex.witness, hard).ok) {
      for (int t : ex.witness->slots) w += std::to_string(t);
      problems.push_back("(3,5,7,8,8) is schedulable: verified witness " + w + " of period " +
                         std::to_string(ex.witness->period));
    } else {
      problems.push_back("(3,5,7,8,8) not proven unschedulable");
    }
  }
  std::string detail = "golden vectors scheduled, (2,3,x) rejected for x in 4..100, two-class scheduler rejects (3,5,7,8,8)";
  if (!problems.empty()) {
    detail.clear();
    for (const auto& p : problems) detail += (detail.empty() ? "" : "; ") + p;
  }
  return {problems.empty(), detail};
}

// ------------------------------------------------------------------ 7

Outcome sxy_density() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len(3, 10);
  std::uniform_int_distribution<std::int64_t> val(2, 64);
  int tested = 0, failed = 0, certified = 0;
  while (tested < 1000) {
    PinwheelVector k(static_cast<std::size_t>(len(rng)));
    for (auto& x : k) x = val(rng);
    if (density(k) > Rational(7, 10)) continue;
    ++tested;
    auto s = schedule_sxy(k);
    if (!s || !verify_pinwheel(*s, k).ok) ++failed;
    if (s && !s->materialized()) ++certified;
  }
  std::ostringstream os;
  os << tested << " vectors, " << failed << " failures, " << certified << " verified by certificate";
  return {failed == 0, os.str()};
}

// ------------------------------------------------------------------ 8

Outcome block_policy_delay() {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> width(1, 6);
  const std::vector<Rational> fractions{Rational(1, 3), Rational(1, 2), Rational(3, 4), Rational(1)};
  int cases = 0, equal = 0, plus_one = 0, doubled = 0;
  for (int n = 2; n <= 4; ++n) {
    for (const Rational& f : fractions) {
      std::vector<Rational> w(static_cast<std::size_t>(n));
      for (auto& x : w) x = width(rng);
      Rational lambda = f * lambda_star(w, n - 1);
      Scenario scn = line_scenario(w, n - 1, lambda, 10000);
      SliceAssignment slices = line_slices(w);
      std::int64_t measured[2];
      Rational formula[2];
      for (int m = 1; m <= 2; ++m) {
        CyclicSchedule b = block_policy(scn, w, m);
        check_conflict_free(b, scn.net, scn.model);
        SimTrace tr = simulate(scn, b, slices);
        if (!tr.steady) throw std::runtime_error("block schedule did not settle");
        support(tr, scn);
        measured[m - 1] = tr.flows[0].max_delay;
        formula[m - 1] = block_delay_formula(b, scn.flows[0].route);
      }
      ++cases;
      if (Rational(measured[0]) == formula[0]) ++equal;
      if (Rational(measured[0]) == formula[0] + 1) ++plus_one;
      if (measured[1] == 2 * measured[0]) ++doubled;
    }
  }
  std::ostringstream os;
  os << cases << " lines: measured equals K*sum(1-mu) in " << equal << ", equals it plus one slot in " << plus_one
     << "; doubling K doubles the measured delay in " << doubled;
  return {equal == cases && doubled == cases, os.str()};
}

// ------------------------------------------------------------------ 9

Outcome pipeline_certification() {
  SweepConfig cfg;
  int feasible = 0, deficit = 0, delay_bad = 0, kbar_bad = 0, unsupported = 0, inapplicable = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const int tau = 30 + 10 * static_cast<int>(seed % 4);
    Scenario scn = sweep_scenario(cfg, seed, tau);
    Rational ls = rationalize(throughput_lp(scn).lambda, 10000);
    for (Flow& f : scn.flows) f.lambda = ls / 2;
    SolveResult r = solve(scn);
    if (!r.support.empty()) ++g_support_checks;
    if (!r.feasible) continue;
    ++feasible;
    auto again = support(r.trace, scn);
    for (std::size_t i = 0; i < scn.flows.size(); ++i) {
      const FlowDeficit& d = r.deficits[i];
      if (!d.width_bound_holds) ++inapplicable;
      deficit += static_cast<int>(d.violations.size());
      if (again[i].max_delay > d.kbar_sum) ++delay_bad;
      if (d.kbar_sum > scn.flows[i].tau) ++kbar_bad;
      if (!again[i].supported) ++unsupported;
    }
  }
  std::ostringstream os;
  os << feasible << " of 200 instances feasible; deficit violations " << deficit << ", delay > sum kbar " << delay_bad
     << ", sum kbar > tau " << kbar_bad << ", unsupported flows " << unsupported << ", flows below the lambda*kbar width bound "
     << inapplicable;
  return {feasible > 0 && deficit == 0 && delay_bad == 0 && kbar_bad == 0 && unsupported == 0, os.str()};
}

// ----------------------------------------------------------------- 11

std::vector<Rational> fraction_grid() {
  std::vector<Rational> f;
  for (int i = 1; i <= 20; ++i) f.push_back(make_rational(i, 20));
  return f;
}

Outcome curve_shape(std::size_t instances) {
  SweepConfig grid;
  grid.lambda_fractions = fraction_grid();
  for (int t = 4; t <= 120; t += 4) grid.taus.push_back(t);
  for (std::uint64_t s = 1; s <= instances; ++s) grid.seeds.push_back(s);
  std::vector<SweepRow> grid_rows = run_sweep(grid);

  SweepConfig tree = grid;
  tree.topology = topo::SinkTree{3, 4};
  tree.pattern = FlowPattern::LeavesToSink;
  tree.seeds = {1};
  std::vector<SweepRow> tree_rows = run_sweep(tree);

  for (const auto* rows : {&grid_rows, &tree_rows}) {
    for (const auto& r : *rows) {
      if (r.message.rfind("internal", 0) == 0) throw std::runtime_error("sweep point failed: " + r.message);
    }
  }
  auto gc = feasibility_curve(grid_rows);
  auto tc = feasibility_curve(tree_rows);
  int drops = 0;
  double worst = 0;
  for (std::size_t i = 1; i < gc.size(); ++i) {
    if (gc[i].rate < gc[i - 1].rate - 1e-12) ++drops;
    worst = std::max(worst, gc[i - 1].rate - gc[i].rate);
  }
  int gp = plateau_tau(gc), tp = plateau_tau(tc);
  std::ostringstream os;
  os << std::setprecision(3) << "grid: " << instances << " instances per point, " << drops
     << " decreases over " << gc.size() << " deadlines (largest " << worst << "), plateau at tau " << gp << " (" << slots_to_ms(gp) << " ms, rate "
     << gc.back().rate << "); sink tree plateau at tau " << tp << " (" << slots_to_ms(tp) << " ms, rate "
     << tc.back().rate << ")";
  return {drops == 0 && tp < gp && gc.back().rate > 0, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::size_t instances = 50;
  std::vector<int> only;
  app.add_option("--instances", instances, "Instances per sweep point for the curve-shape criterion");
  app.add_option("--only", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);

  // Criteria whose failure is understood and recorded; they still print FAIL.
  const std::set<int> known_red{4, 5, 6, 8, 11};

  std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, two_hop_golden},         {2, closed_form_vs_lp},     {3, orr_optimality},
      {4, greedy_optimality},      {5, greedy_ratio},          {6, pinwheel_golden},
      {7, sxy_density},            {8, block_policy_delay},    {9, pipeline_certification},
      {11, [&] { return curve_shape(instances); }},
  };
  const char* names[] = {"",
                         "two-hop golden delays",
                         "solitary throughput closed form vs LP",
                         "ORR delay optimality",
                         "greedy delay optimality under total interference",
                         "greedy delay ratio",
                         "pinwheel golden vectors",
                         "two-class scheduler density guarantee",
                         "block policy delay",
                         "pipeline certification",
                         "deadline verdict equivalence",
                         "feasibility curve shape"};

  bool unexpected = false;
  auto report = [&](int id, const Outcome& o, double secs) {
    std::cout << "criterion " << id << " [" << (o.pass ? "PASS" : "FAIL") << "] " << names[id] << ": " << o.detail
              << " (" << std::fixed << std::setprecision(1) << secs << " s)" << std::defaultfloat << std::endl;
    if (!o.pass && !known_red.count(id)) unexpected = true;
  };
  auto wanted = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };

  for (auto& [id, fn] : criteria) {
    if (!wanted(id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::logic_error& e) {
      g_equivalence_breaks.push_back("criterion " + std::to_string(id) + ": " + e.what());
      o = {false, std::string("aborted: ") + e.what()};
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    report(id, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  if (wanted(10)) {
    Outcome o;
    o.pass = g_equivalence_breaks.empty();
    o.detail = std::to_string(g_support_checks) + " steady simulations checked, " +
               std::to_string(g_equivalence_breaks.size()) + " disagreements";
    for (const auto& b : g_equivalence_breaks) o.detail += "; " + b;
    report(10, o, 0.0);
  }
  return unexpected ? 1 : 0;
}
