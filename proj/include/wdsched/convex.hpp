#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace wdsched {

/// minimize  sum_j a_j / x_j
/// s.t.      A x <= b   (A nonnegative, stored by rows)
///           lo <= x <= hi,  lo > 0, hi finite
struct SeparableProblem {
  std::vector<double> a;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;
  std::vector<double> b;
};

struct SeparableSolution {
  std::vector<double> x;
  std::vector<double> nu;     // row multipliers
  double objective = 0;
  double dual_bound = 0;      // g(nu), a certified lower bound on the optimum
  double kkt_residual = 0;
  int sweeps = 0;
};

/// Dual coordinate ascent. Throws std::domain_error when A*lo > b, and
/// std::runtime_error when the residual target is not reached.
SeparableSolution solve_separable(const SeparableProblem& problem, double tolerance = 1e-10,
                                  int max_sweeps = 200000);

}  // namespace wdsched
