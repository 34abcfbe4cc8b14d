#include "wdsched/coloring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wdsched/convex.hpp"

namespace wdsched {

Coloring greedy_color(const ConflictGraph& cg, const std::vector<std::size_t>& order) {
  const std::size_t n = cg.size();
  if (order.size() != n) throw std::invalid_argument("order must be a permutation of the vertices");
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  Coloring col;
  col.set_of.assign(n, none);
  for (std::size_t v : order) {
    if (v >= n || col.set_of[v] != none) throw std::invalid_argument("order must be a permutation of the vertices");
    std::vector<bool> taken(col.sets.size(), false);
    for (std::size_t u : cg.neighbors(v)) {
      if (col.set_of[u] != none) taken[col.set_of[u]] = true;
    }
    std::size_t c = 0;
    while (c < taken.size() && taken[c]) ++c;
    if (c == col.sets.size()) col.sets.emplace_back();
    col.sets[c].push_back(v);
    col.set_of[v] = c;
  }
  for (auto& s : col.sets) std::sort(s.begin(), s.end());
  return col;
}

ColoringInstance make_coloring_instance(const Scenario& scn) {
  ColoringInstance inst;
  inst.links = used_links(scn);
  inst.cg = build_conflict_graph(scn.net, scn.model, inst.links);
  for (LinkId e : inst.links) {
    Rational load = link_load(scn, e);
    inst.load.push_back(load);
    inst.cap_ratio.push_back(scn.net.link(e).capacity / load);
  }
  for (const Flow& f : scn.flows) {
    std::vector<std::size_t> r;
    for (LinkId e : f.route) {
      auto pos = static_cast<std::size_t>(std::lower_bound(inst.links.begin(), inst.links.end(), e) - inst.links.begin());
      if (std::find(r.begin(), r.end(), pos) != r.end()) throw std::logic_error("route revisits a link");
      r.push_back(pos);
    }
    inst.routes.push_back(std::move(r));
  }
  return inst;
}

std::vector<double> solve_relaxation(const ColoringInstance& inst, const Scenario& scn,
                                     const std::vector<double>& omega_hat) {
  const std::size_t n = inst.links.size();
  if (omega_hat.size() != n) throw std::invalid_argument("one weight per vertex is required");
  SeparableProblem pb;
  for (std::size_t v = 0; v < n; ++v) {
    if (inst.cap_ratio[v] < 1) {
      throw std::domain_error("link " + std::to_string(inst.links[v]) + " is overloaded");
    }
    if (!(omega_hat[v] >= 1)) throw std::invalid_argument("weights must be at least one");
    pb.a.push_back(1.0 / omega_hat[v]);
    pb.lo.push_back(1.0);
    pb.hi.push_back(to_double(inst.cap_ratio[v]));
  }
  for (std::size_t i = 0; i < scn.flows.size(); ++i) {
    if (static_cast<std::size_t>(scn.flows[i].tau) < inst.routes[i].size()) {
      throw std::domain_error("flow " + std::to_string(scn.flows[i].id) + " deadline is shorter than its route");
    }
    std::vector<std::pair<std::size_t, double>> row;
    for (std::size_t v : inst.routes[i]) row.emplace_back(v, 1.0);
    pb.rows.push_back(std::move(row));
    pb.b.push_back(static_cast<double>(scn.flows[i].tau));
  }
  return solve_separable(pb, 1e-10).x;
}

namespace {

// Dual lower bound of min sum 1/k_s s.t. sum n_s k_s <= budget, 1 <= k_s <= hi_s.
double single_row_bound(const std::vector<double>& n, const std::vector<double>& hi, double budget) {
  if (n.empty()) return 0;
  double at_hi = 0;
  for (std::size_t s = 0; s < n.size(); ++s) at_hi += n[s] * hi[s];
  auto k_of = [&](std::size_t s, double nu) { return std::clamp(1.0 / std::sqrt(nu * n[s]), 1.0, hi[s]); };
  auto g = [&](double nu) {
    double v = -nu * budget;
    for (std::size_t s = 0; s < n.size(); ++s) {
      double k = k_of(s, nu);
      v += 1.0 / k + nu * n[s] * k;
    }
    return v;
  };
  if (at_hi <= budget) {
    double v = 0;
    for (double h : hi) v += 1.0 / h;
    return v;
  }
  double lo = 0, up = 1;
  auto used = [&](double nu) {
    double s = 0;
    for (std::size_t j = 0; j < n.size(); ++j) s += n[j] * k_of(j, nu);
    return s;
  };
  while (used(up) > budget && up < 1e300) up *= 2;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + up);
    if (used(mid) > budget) {
      lo = mid;
    } else {
      up = mid;
    }
  }
  return g(up);
}

struct BranchAndBound {
  std::size_t S = 0;
  std::size_t F = 0;
  std::vector<std::int64_t> kmax;
  std::vector<std::vector<std::int64_t>> n;  // [flow][set]
  std::vector<std::int64_t> tau;
  std::vector<std::int64_t> k;
  std::vector<std::int64_t> spent;           // per flow: sum over assigned sets of n*k
  std::vector<std::int64_t> min_rest;        // per flow: sum over unassigned sets of n
  std::vector<double> tail_quick;            // sum over sets >= pos of 1/kmax
  std::vector<double> nu;                    // per flow: root relaxation multipliers
  std::vector<double> lagrange_tail;         // sum over sets >= pos of min_k 1/k + k * sum_i nu_i n_is
  std::vector<std::int64_t> best_k;
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t nodes = 0;
  std::uint64_t node_limit = 0;

  Rational exact(const std::vector<std::int64_t>& v) const {
    Rational r = 0;
    for (auto x : v) r += make_rational(1, x);
    return r;
  }

  double lagrange_bound(std::size_t pos) const {
    if (nu.empty()) return 0;
    double v = lagrange_tail[pos];
    for (std::size_t i = 0; i < F; ++i) v -= nu[i] * static_cast<double>(tau[i] - spent[i]);
    return v - 1e-9 * (1.0 + std::abs(v));
  }

  double rest_bound(std::size_t pos) const {
    double bound = std::max(tail_quick[pos], lagrange_bound(pos));
    for (std::size_t i = 0; i < F; ++i) {
      std::vector<double> ns, hs;
      double other = 0;
      for (std::size_t s = pos; s < S; ++s) {
        if (n[i][s] > 0) {
          ns.push_back(static_cast<double>(n[i][s]));
          hs.push_back(static_cast<double>(kmax[s]));
        } else {
          other += 1.0 / static_cast<double>(kmax[s]);
        }
      }
      if (ns.empty()) continue;
      double budget = static_cast<double>(tau[i] - spent[i]);
      bound = std::max(bound, other + single_row_bound(ns, hs, budget));
    }
    return bound;
  }

  bool fits(const std::vector<std::int64_t>& v) const {
    for (std::size_t i = 0; i < F; ++i) {
      std::int64_t u = 0;
      for (std::size_t s = 0; s < S; ++s) u += n[i][s] * v[s];
      if (u > tau[i]) return false;
    }
    return true;
  }

  // Root relaxation supplies the multipliers and, rounded down, an upper
  // bound. Only the bound's value is kept so that ties still resolve in
  // search order.
  void seed() {
    SeparableProblem pb;
    for (std::size_t s = 0; s < S; ++s) {
      pb.a.push_back(1.0);
      pb.lo.push_back(1.0);
      pb.hi.push_back(static_cast<double>(kmax[s]));
    }
    for (std::size_t i = 0; i < F; ++i) {
      std::vector<std::pair<std::size_t, double>> row;
      for (std::size_t s = 0; s < S; ++s) {
        if (n[i][s] > 0) row.emplace_back(s, static_cast<double>(n[i][s]));
      }
      pb.rows.push_back(std::move(row));
      pb.b.push_back(static_cast<double>(tau[i]));
    }
    SeparableSolution sol;
    try {
      sol = solve_separable(pb, 1e-9);
    } catch (const std::runtime_error&) {
      return;
    }
    nu = sol.nu;
    lagrange_tail.assign(S + 1, 0.0);
    for (std::size_t s = S; s-- > 0;) {
      double c = 0;
      for (std::size_t i = 0; i < F; ++i) c += nu[i] * static_cast<double>(n[i][s]);
      double term = 1.0 + c;
      if (c > 0) {
        auto kf = static_cast<std::int64_t>(std::floor(1.0 / std::sqrt(c)));
        for (std::int64_t kv : {kf, kf + 1}) {
          kv = std::clamp<std::int64_t>(kv, 1, kmax[s]);
          term = std::min(term, 1.0 / static_cast<double>(kv) + c * static_cast<double>(kv));
        }
      } else {
        term = 1.0 / static_cast<double>(kmax[s]);
      }
      lagrange_tail[s] = lagrange_tail[s + 1] + term;
    }

    std::vector<std::int64_t> guess(S);
    for (std::size_t s = 0; s < S; ++s) {
      guess[s] = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(sol.x[s] + 1e-9)), 1, kmax[s]);
    }
    if (!fits(guess)) {
      for (std::size_t s = 0; s < S; ++s) guess[s] = std::max<std::int64_t>(1, guess[s] - 1);
      if (!fits(guess)) return;
    }
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t s = 0; s < S; ++s) {
        if (guess[s] >= kmax[s]) continue;
        ++guess[s];
        if (fits(guess)) {
          grew = true;
        } else {
          --guess[s];
        }
      }
    }
    double v = 0;
    for (auto x : guess) v += 1.0 / static_cast<double>(x);
    best = v * (1 + 1e-9);
  }

  void dfs(std::size_t pos, double partial) {
    if (++nodes > node_limit) throw std::runtime_error("integer search exceeds its node limit");
    if (pos == S) {
      bool better = partial < best - 1e-12 * std::max(1.0, best);
      if (!better && best_k.size() == S && std::abs(partial - best) <= 1e-12 * std::max(1.0, best)) {
        better = exact(k) < exact(best_k);
      }
      if (better) {
        best = partial;
        best_k = k;
      }
      return;
    }
    // Largest k keeping every flow feasible with the remaining sets at k = 1.
    std::int64_t hi = kmax[pos];
    for (std::size_t i = 0; i < F; ++i) {
      if (n[i][pos] == 0) continue;
      std::int64_t slack = tau[i] - spent[i] - min_rest[i];
      hi = std::min(hi, 1 + slack / n[i][pos]);
    }
    for (std::size_t i = 0; i < F; ++i) min_rest[i] -= n[i][pos];
    for (std::int64_t kv = hi; kv >= 1; --kv) {
      double part = partial + 1.0 / static_cast<double>(kv);
      double tol = 1e-12 * std::max(1.0, best);
      if (part + tail_quick[pos + 1] >= best - tol) break;
      k[pos] = kv;
      for (std::size_t i = 0; i < F; ++i) spent[i] += n[i][pos] * kv;
      if (part + rest_bound(pos + 1) < best - tol) dfs(pos + 1, part);
      for (std::size_t i = 0; i < F; ++i) spent[i] -= n[i][pos] * kv;
    }
    for (std::size_t i = 0; i < F; ++i) min_rest[i] += n[i][pos];
  }
};

}  // namespace

KAssignment solve_integer(const ColoringInstance& inst, const Scenario& scn, const Coloring& coloring,
                          std::uint64_t node_limit) {
  BranchAndBound bb;
  bb.S = coloring.sets.size();
  bb.F = scn.flows.size();
  bb.node_limit = node_limit;
  for (const auto& set : coloring.sets) {
    if (set.empty()) throw std::invalid_argument("empty color class");
    Rational lim = inst.cap_ratio[set.front()];
    for (std::size_t v : set) lim = std::min(lim, inst.cap_ratio[v]);
    BigInt f = floor(lim);
    if (f < 1) throw IntegerInfeasible("color class cannot be activated at the offered load", {});
    bb.kmax.push_back(to_int64(f));
  }
  bb.n.assign(bb.F, std::vector<std::int64_t>(bb.S, 0));
  std::vector<int> binding;
  for (std::size_t i = 0; i < bb.F; ++i) {
    for (std::size_t v : inst.routes[i]) ++bb.n[i][coloring.set_of.at(v)];
    bb.tau.push_back(scn.flows[i].tau);
    std::int64_t minimum = std::accumulate(bb.n[i].begin(), bb.n[i].end(), std::int64_t{0});
    if (minimum > bb.tau[i]) binding.push_back(scn.flows[i].id);
    bb.min_rest.push_back(minimum);
  }
  if (!binding.empty()) {
    std::string names;
    for (int f : binding) names += (names.empty() ? "" : ",") + std::to_string(f);
    throw IntegerInfeasible("deadline cannot hold for flows " + names, binding);
  }
  bb.spent.assign(bb.F, 0);
  bb.k.assign(bb.S, 1);
  bb.tail_quick.assign(bb.S + 1, 0.0);
  for (std::size_t s = bb.S; s-- > 0;) bb.tail_quick[s] = bb.tail_quick[s + 1] + 1.0 / static_cast<double>(bb.kmax[s]);
  bb.seed();
  bb.dfs(0, 0.0);
  if (bb.best_k.empty()) throw std::logic_error("integer search lost its incumbent");

  KAssignment a;
  a.k_set = bb.best_k;
  a.nodes = bb.nodes;
  a.objective = bb.exact(a.k_set);
  for (std::size_t v = 0; v < inst.links.size(); ++v) a.k_vertex.push_back(a.k_set[coloring.set_of[v]]);

  // Exact re-check of every constraint and of the per-vertex objective identity.
  for (std::size_t i = 0; i < bb.F; ++i) {
    std::int64_t s = 0;
    for (std::size_t v : inst.routes[i]) s += a.k_vertex[v];
    if (s > bb.tau[i]) throw std::logic_error("integer solution breaks a deadline");
  }
  Rational per_vertex = 0;
  for (std::size_t v = 0; v < inst.links.size(); ++v) {
    if (make_rational(a.k_vertex[v]) > inst.cap_ratio[v]) throw std::logic_error("integer solution breaks a capacity");
    per_vertex += make_rational(1, static_cast<std::int64_t>(coloring.sets[coloring.set_of[v]].size()) * a.k_vertex[v]);
  }
  if (per_vertex != a.objective) throw std::logic_error("objective identity does not hold");
  return a;
}

WgcResult wgc_coloring(const ColoringInstance& inst, const Scenario& scn) {
  const std::size_t n = inst.links.size();
  WgcResult res;
  if (n == 0) throw std::invalid_argument("no links to color");
  std::vector<double> omega(n, 1.0);
  std::vector<double> k = solve_relaxation(inst, scn, omega);
  double best_rho = std::numeric_limits<double>::infinity();
  bool have_best = false;
  for (std::size_t iter = 0; iter < n; ++iter) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return k[a] < k[b]; });
    Coloring col = greedy_color(inst.cg, order);
    for (std::size_t v = 0; v < n; ++v) omega[v] = static_cast<double>(col.sets[col.set_of[v]].size());
    k = solve_relaxation(inst, scn, omega);
    double rho = 0;
    for (std::size_t v = 0; v < n; ++v) rho += 1.0 / (omega[v] * k[v]);
    res.rho_history.push_back(rho);
    ++res.iterations;
    if (!have_best || rho < best_rho - 1e-12 * best_rho) {
      best_rho = rho;
      res.coloring = std::move(col);
      have_best = true;
    } else {
      break;
    }
  }
  return res;
}

WgcResult wgc(const ColoringInstance& inst, const Scenario& scn) {
  WgcResult res = wgc_coloring(inst, scn);
  res.assignment = solve_integer(inst, scn, res.coloring);
  return res;
}

SliceAssignment slice_widths(const ColoringInstance& inst, const Scenario& scn, const KAssignment& a) {
  SliceAssignment s;
  for (std::size_t i = 0; i < scn.flows.size(); ++i) {
    for (std::size_t v : inst.routes[i]) s.set(i, inst.links[v], scn.flows[i].lambda * a.k_vertex[v]);
  }
  for (LinkId e : inst.links) {
    if (s.link_total(e) > scn.net.link(e).capacity) {
      throw std::logic_error("slice widths exceed the capacity of link " + std::to_string(e));
    }
  }
  return s;
}

std::map<std::pair<std::size_t, LinkId>, Rational> slack_widths(const ColoringInstance& inst, const Scenario& scn,
                                                                  const KAssignment& a,
                                                                  const CyclicSchedule& schedule) {
  std::map<std::pair<std::size_t, LinkId>, Rational> out;
  for (std::size_t i = 0; i < scn.flows.size(); ++i) {
    for (std::size_t v : inst.routes[i]) {
      LinkId e = inst.links[v];
      Rational mu = schedule.activation_rate(e);
      if (mu == 0) throw std::invalid_argument("link " + std::to_string(e) + " is never activated");
      out[{i, e}] = scn.flows[i].lambda * (make_rational(a.k_vertex[v]) - 1 / mu);
    }
  }
  return out;
}

std::vector<std::vector<LinkId>> class_links(const ColoringInstance& inst, const Coloring& coloring) {
  std::vector<std::vector<LinkId>> out;
  for (const auto& set : coloring.sets) {
    std::vector<LinkId> links;
    for (std::size_t v : set) links.push_back(inst.links[v]);
    std::sort(links.begin(), links.end());
    out.push_back(std::move(links));
  }
  return out;
}

}  // namespace wdsched
