#include "wdsched/solitary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <unordered_map>

#include "wdsched/convex.hpp"

namespace wdsched {

Scenario line_scenario(const std::vector<Rational>& w, int phi, const Rational& lambda, int tau) {
  if (w.empty()) throw std::invalid_argument("line needs at least one hop");
  const int n = static_cast<int>(w.size());
  std::vector<NodeId> nodes;
  for (int i = 1; i <= n + 1; ++i) nodes.push_back(i);
  std::vector<Link> links;
  for (int j = 0; j < n; ++j) links.push_back({j + 1, j + 2, w[static_cast<std::size_t>(j)]});
  for (int j = 0; j < n; ++j) links.push_back({j + 2, j + 1, w[static_cast<std::size_t>(j)]});
  Scenario scn{NetworkGraph(nodes, links), InterferenceModel{phi}, {}};
  Flow f;
  f.id = 1;
  f.src = 1;
  f.dst = n + 1;
  f.lambda = lambda;
  f.tau = tau;
  for (int j = 0; j < n; ++j) f.route.push_back(static_cast<LinkId>(j));
  scn.flows.push_back(std::move(f));
  return scn;
}

namespace {

std::size_t window_size(std::size_t n, int phi) {
  if (phi < 0) throw std::invalid_argument("phi must be nonnegative");
  return std::min(n, static_cast<std::size_t>(phi) + 1);
}

Rational max_window_inverse_sum(const std::vector<Rational>& w, int phi) {
  const std::size_t m = window_size(w.size(), phi);
  Rational worst = 0;
  for (std::size_t j = 0; j + m <= w.size(); ++j) {
    Rational s = 0;
    for (std::size_t h = j; h < j + m; ++h) s += 1 / w[h];
    worst = std::max(worst, s);
  }
  return worst;
}

bool windows_hold(const std::vector<Rational>& w, const Rational& lambda, int phi) {
  return max_window_inverse_sum(w, phi) * lambda <= 1;
}

}  // namespace

Rational lambda_star(const std::vector<Rational>& w, int phi) {
  if (w.empty()) throw std::invalid_argument("lambda_star needs at least one width");
  for (const auto& x : w) {
    if (x <= 0) throw std::invalid_argument("widths must be positive");
  }
  return 1 / max_window_inverse_sum(w, phi);
}

CyclicSchedule orr_schedule(int n_links, int phi) {
  if (n_links < 1 || phi < 0 || phi > n_links - 1) {
    throw std::invalid_argument("orr_schedule needs n >= 1 and 0 <= phi <= n-1");
  }
  CyclicSchedule s;
  s.slots.resize(static_cast<std::size_t>(phi) + 1);
  for (int j = 0; j < n_links; ++j) s.slots[static_cast<std::size_t>(j % (phi + 1))].push_back(static_cast<LinkId>(j));
  return s;
}

std::vector<Rational> bottleneck_widths(const std::vector<Rational>& w, const Rational& lambda, int phi) {
  if (lambda <= 0) throw std::invalid_argument("rate must be positive");
  Rational ls = lambda_star(w, phi);
  if (lambda > ls) {
    throw std::domain_error("rate " + to_string(lambda) + " exceeds the solitary limit " + to_string(ls));
  }
  const std::size_t n = w.size();
  const std::size_t m = window_size(n, phi);
  if (m == 1) return std::vector<Rational>(n, lambda);

  // Reciprocal variables u = 1/w': minimize sum 1/u, window sums of u <= 1/lambda.
  SeparableProblem pb;
  const double inv_rate = 1.0 / to_double(lambda);
  for (std::size_t j = 0; j < n; ++j) {
    pb.a.push_back(1.0);
    pb.lo.push_back(1.0 / to_double(w[j]));
    pb.hi.push_back(inv_rate);
  }
  for (std::size_t j = 0; j + m <= n; ++j) {
    std::vector<std::pair<std::size_t, double>> row;
    for (std::size_t h = j; h < j + m; ++h) row.emplace_back(h, 1.0);
    pb.rows.push_back(std::move(row));
    pb.b.push_back(inv_rate);
  }
  SeparableSolution sol = solve_separable(pb, 1e-12);
  const double continuous = std::accumulate(sol.x.begin(), sol.x.end(), 0.0,
                                            [](double acc, double u) { return acc + 1.0 / u; });

  auto finish = [&](std::vector<Rational> cand) -> std::optional<std::vector<Rational>> {
    for (std::size_t j = 0; j < n; ++j) cand[j] = std::clamp(cand[j], lambda, w[j]);
    if (!windows_hold(cand, lambda, phi)) return std::nullopt;
    return cand;
  };

  // Small-denominator candidate first: exact optima of symmetric instances are simple rationals.
  {
    std::vector<Rational> cand;
    for (double u : sol.x) cand.push_back(rationalize(1.0 / u, 10000));
    if (auto ok = finish(cand)) {
      double total = 0;
      for (const auto& v : *ok) total += to_double(v);
      if (total <= continuous * (1 + 1e-9)) return *ok;
    }
  }
  constexpr std::int64_t kDen = std::int64_t{1} << 20;
  for (double theta : {0.0, 1e-9, 1e-7, 1e-5, 1e-3, 1e-1, 1.0}) {
    std::vector<Rational> cand;
    for (std::size_t j = 0; j < n; ++j) {
      double u = sol.x[j] - theta * (sol.x[j] - pb.lo[j]);
      cand.push_back(theta == 1.0 ? w[j] : round_up(Rational(1.0 / u), kDen));
    }
    if (auto ok = finish(cand)) return *ok;
  }
  throw std::logic_error("bottleneck_widths: exact repair failed");
}

namespace {

using Vol = __int128;

struct VecHash {
  std::size_t operator()(const std::vector<Vol>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (Vol x : v) {
      auto lo = static_cast<unsigned long long>(x);
      auto hi = static_cast<unsigned long long>(static_cast<unsigned __int128>(x) >> 64);
      h = (h ^ lo) * 1099511628211ull;
      h = (h ^ hi) * 1099511628211ull;
    }
    return h;
  }
};

Rational gcd_all(const Rational& first, const std::vector<Rational>& rest) {
  Rational g = first;
  for (const auto& r : rest) g = rational_gcd(g, r);
  return g;
}

Vol as_quanta(const Rational& v, const Rational& unit) {
  Rational q = v / unit;
  if (q.get_den() != 1) throw std::logic_error("value is not a multiple of the quantum");
  return to_int128(q.get_num());
}

}  // namespace

GreedyResult greedy_run(const std::vector<Rational>& widths, int phi, const Rational& lambda,
                        std::int64_t max_state_slots) {
  if (widths.empty()) throw std::invalid_argument("greedy needs at least one hop");
  if (lambda <= 0) throw std::invalid_argument("rate must be positive");
  const std::size_t n = widths.size();
  const Rational unit = gcd_all(lambda, widths);
  const Vol L = as_quanta(lambda, unit);
  std::vector<Vol> W(n);
  Rational total_width = 0;
  for (std::size_t j = 0; j < n; ++j) {
    W[j] = as_quanta(widths[j], unit);
    total_width += widths[j];
  }
  const std::int64_t horizon = std::max<std::int64_t>(
      2000, to_int64(ceil(50 * total_width / lambda)));
  const std::int64_t search_limit = std::min(horizon, max_state_slots);

  GreedyResult res;
  std::vector<Vol> q(n, 0), pending(n, 0);
  std::unordered_map<std::vector<Vol>, std::int64_t, VecHash> seen;
  std::vector<std::vector<LinkId>> history;
  Vol delivered = 0;
  std::int64_t target = -1;
  std::int64_t next_cohort = 0;
  const std::int64_t cap = 20 * horizon + 100000;

  for (std::int64_t t = 0;; ++t) {
    if (target < 0) {
      if (t <= search_limit) {
        std::vector<Vol> key(q);
        key.insert(key.end(), pending.begin(), pending.end());
        auto [it, fresh] = seen.emplace(std::move(key), t);
        if (!fresh) {
          res.steady = true;
          res.onset = it->second;
          res.period = t - it->second;
          target = t;
          res.cycle.slots.assign(history.begin() + res.onset, history.end());
          seen.clear();
        }
      }
      if (target < 0 && t >= horizon) target = horizon;
    }
    if (target >= 0 && next_cohort >= target) break;
    if (t > cap) throw std::runtime_error("greedy run did not drain: the rate is not supported");

    q[0] += L;
    for (std::size_t j = 1; j < n; ++j) {
      q[j] += pending[j];
      pending[j] = 0;
    }
    std::vector<std::size_t> active = greedy_step(q, W, phi);
    std::vector<LinkId> act;
    for (std::size_t j : active) {
      Vol s = std::min(W[j], q[j]);
      q[j] -= s;
      if (j + 1 < n) {
        pending[j + 1] += s;
      } else {
        delivered += s;
      }
      act.push_back(j);
    }
    std::sort(act.begin(), act.end());
    if (target < 0) history.push_back(std::move(act));
    // Cohort c is complete once L*(c+1) quanta have left the last hop; it counts as delivered at t+1.
    while (delivered >= L * static_cast<Vol>(next_cohort + 1) && (target < 0 || next_cohort < target)) {
      res.max_delay = std::max(res.max_delay, t + 1 - next_cohort);
      ++next_cohort;
    }
  }
  res.horizon = target;
  res.zeta = lambda * make_rational(res.max_delay) / total_width;
  return res;
}

GreedyResult greedy_delay_ratio(const LineInstance& inst) {
  std::vector<Rational> wp = bottleneck_widths(inst.w, inst.lambda, inst.phi);
  return greedy_run(wp, inst.phi, inst.lambda);
}

std::string to_string(WidthDistribution d) {
  switch (d) {
    case WidthDistribution::Normal: return "normal";
    case WidthDistribution::Uniform: return "uniform";
    case WidthDistribution::Bimodal: return "bimodal";
  }
  return "normal";
}

WidthDistribution width_distribution_from_string(const std::string& name) {
  for (auto d : {WidthDistribution::Normal, WidthDistribution::Uniform, WidthDistribution::Bimodal}) {
    if (to_string(d) == name) return d;
  }
  throw std::invalid_argument("unknown width distribution '" + name + "'");
}

std::vector<Rational> random_widths(std::size_t n, WidthDistribution d, std::mt19937_64& rng) {
  std::vector<Rational> w;
  for (std::size_t i = 0; i < n; ++i) {
    double x = 0;
    switch (d) {
      case WidthDistribution::Normal:
        x = std::normal_distribution<double>(55.0, 15.0)(rng);
        break;
      case WidthDistribution::Uniform:
        x = std::uniform_real_distribution<double>(10.0, 100.0)(rng);
        break;
      case WidthDistribution::Bimodal: {
        double mean = std::bernoulli_distribution(0.5)(rng) ? 20.0 : 100.0;
        x = std::normal_distribution<double>(mean, 10.0)(rng);
        break;
      }
    }
    w.push_back(make_rational(std::max<std::int64_t>(1, std::llround(x))));
  }
  return w;
}

}  // namespace wdsched
