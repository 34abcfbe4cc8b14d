#include "wdsched/convex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wdsched {

namespace {

double best_response(double a, double p, double lo, double hi) {
  if (p <= 0) return hi;
  return std::clamp(std::sqrt(a / p), lo, hi);
}

struct State {
  const SeparableProblem& pb;
  std::vector<double> p;
  std::vector<double> nu;
  std::vector<double> x;

  explicit State(const SeparableProblem& problem)
      : pb(problem), p(problem.a.size(), 0.0), nu(problem.rows.size(), 0.0), x(problem.hi) {}

  double row_value(std::size_t i, double candidate) const {
    double s = 0;
    for (auto [j, aij] : pb.rows[i]) {
      double q = std::max(0.0, p[j] - nu[i] * aij);
      s += aij * best_response(pb.a[j], q + candidate * aij, pb.lo[j], pb.hi[j]);
    }
    return s;
  }

  void set_nu(std::size_t i, double value) {
    for (auto [j, aij] : pb.rows[i]) {
      p[j] = std::max(0.0, p[j] + (value - nu[i]) * aij);
    }
    nu[i] = value;
    for (auto [j, aij] : pb.rows[i]) {
      (void)aij;
      x[j] = best_response(pb.a[j], p[j], pb.lo[j], pb.hi[j]);
    }
  }

  void update_row(std::size_t i) {
    double floor_value = 0;
    for (auto [j, aij] : pb.rows[i]) floor_value += aij * pb.lo[j];
    const double b = std::max(pb.b[i], floor_value);
    if (row_value(i, 0.0) <= b) {
      if (nu[i] != 0.0) set_nu(i, 0.0);
      return;
    }
    double lo = 0.0, hi = std::max(nu[i], 1e-12);
    while (row_value(i, hi) > b) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) throw std::runtime_error("separable solver: multiplier diverged");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
      double mid = 0.5 * (lo + hi);
      if (row_value(i, mid) > b) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    set_nu(i, hi);
  }

  double residual() const {
    double objective = 0;
    for (std::size_t j = 0; j < x.size(); ++j) objective += pb.a[j] / x[j];
    double r = 0;
    for (std::size_t i = 0; i < pb.rows.size(); ++i) {
      double ax = 0;
      for (auto [j, aij] : pb.rows[i]) ax += aij * x[j];
      double scale = std::max(1.0, std::abs(pb.b[i]));
      r = std::max(r, (ax - pb.b[i]) / scale);
      r = std::max(r, nu[i] * std::abs(pb.b[i] - ax) / std::max(1.0, objective));
    }
    return r;
  }
};

}  // namespace

SeparableSolution solve_separable(const SeparableProblem& pb, double tolerance, int max_sweeps) {
  const std::size_t n = pb.a.size();
  if (pb.lo.size() != n || pb.hi.size() != n || pb.b.size() != pb.rows.size()) {
    throw std::invalid_argument("separable problem dimensions disagree");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!(pb.a[j] > 0) || !(pb.lo[j] > 0) || !(pb.hi[j] >= pb.lo[j]) || !std::isfinite(pb.hi[j])) {
      throw std::invalid_argument("separable problem has invalid bounds at variable " + std::to_string(j));
    }
  }
  for (std::size_t i = 0; i < pb.rows.size(); ++i) {
    double alo = 0;
    for (auto [j, aij] : pb.rows[i]) {
      if (aij < 0 || j >= n) throw std::invalid_argument("separable problem has an invalid row");
      alo += aij * pb.lo[j];
    }
    if (alo > pb.b[i] * (1 + 1e-12) + 1e-12) {
      throw std::domain_error("constraint " + std::to_string(i) + " cannot hold at the lower bounds");
    }
  }

  State st(pb);
  SeparableSolution sol;
  double r = st.residual();
  int sweep = 0;
  while (r > tolerance && sweep < max_sweeps) {
    for (std::size_t i = 0; i < pb.rows.size(); ++i) st.update_row(i);
    ++sweep;
    r = st.residual();
  }
  if (r > tolerance) {
    throw std::runtime_error("separable solver stalled at KKT residual " + std::to_string(r));
  }
  sol.x = st.x;
  sol.nu = st.nu;
  sol.sweeps = sweep;
  sol.kkt_residual = r;
  double g = 0;
  for (std::size_t j = 0; j < n; ++j) {
    sol.objective += pb.a[j] / sol.x[j];
    g += pb.a[j] / sol.x[j] + st.p[j] * sol.x[j];
  }
  for (std::size_t i = 0; i < pb.rows.size(); ++i) g -= st.nu[i] * pb.b[i];
  sol.dual_bound = g;
  return sol;
}

}  // namespace wdsched
