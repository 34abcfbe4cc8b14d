#include "wdsched/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include <boost/container_hash/hash.hpp>

#include "wdsched/simulator.hpp"

namespace wdsched {

namespace {

using GapState = std::vector<std::int64_t>;

struct PackedHash {
  std::size_t operator()(unsigned __int128 v) const {
    std::size_t seed = 0;
    boost::hash_combine(seed, static_cast<std::uint64_t>(v));
    boost::hash_combine(seed, static_cast<std::uint64_t>(v >> 64));
    return seed;
  }
};

// Depth-first search in earliest-deadline order over slack vectors. A move is
// legal when every other task keeps slack >= 1; a back edge closes a schedule
// and states that owe more services than slots are pruned.
template <class Key, class Hash, class Encode>
void search_gaps(const PinwheelVector& k, std::uint64_t state_cap, Encode encode, ExhaustivePinwheel& res) {
  const std::size_t n = k.size();
  std::unordered_map<Key, std::uint8_t, Hash> color;  // 1 on stack, 2 exhausted
  struct Frame {
    GapState d;
    Key key;
    std::vector<std::size_t> opts;
    std::size_t next = 0;
    std::size_t chosen = 0;
  };
  auto frame = [&](GapState d) {
    Frame f;
    f.key = encode(d);
    std::size_t urgent = n, count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i] == 1) urgent = i, ++count;
    }
    if (count == 1) {
      f.opts = {urgent};
    } else if (count == 0) {
      f.opts.resize(n);
      std::iota(f.opts.begin(), f.opts.end(), 0);
      std::stable_sort(f.opts.begin(), f.opts.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    }
    f.d = std::move(d);
    return f;
  };
  // Services owed within the next t slots can never exceed t.
  const std::int64_t kmax = *std::max_element(k.begin(), k.end());
  auto dead = [&](const GapState& d) {
    for (std::int64_t t = 1; t <= kmax; ++t) {
      std::int64_t owed = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (d[i] <= t) owed += 1 + (t - d[i]) / k[i];
      }
      if (owed > t) return true;
    }
    return false;
  };
  std::vector<Frame> stack;
  stack.push_back(frame(GapState(k.begin(), k.end())));
  color.emplace(stack.back().key, 1);
  GapState nd(n);
  while (!stack.empty()) {
    Frame& fr = stack.back();
    if (fr.next >= fr.opts.size()) {
      color[fr.key] = 2;
      stack.pop_back();
      continue;
    }
    std::size_t j = fr.opts[fr.next++];
    fr.chosen = j;
    for (std::size_t i = 0; i < n; ++i) nd[i] = i == j ? k[i] : fr.d[i] - 1;
    Key child = encode(nd);
    auto [it, fresh] = color.try_emplace(child, 1);
    if (!fresh && it->second == 1) {
      auto top = std::find_if(stack.begin(), stack.end(), [&](const Frame& f) { return f.key == child; });
      PinwheelSchedule s;
      for (auto f = top; f != stack.end(); ++f) s.slots.push_back(static_cast<int>(f->chosen));
      s.period = static_cast<std::int64_t>(s.slots.size());
      s.method = "exhaustive";
      res.status = ExhaustivePinwheel::Status::Schedulable;
      res.witness = std::move(s);
      return;
    }
    if (fresh) {
      if (++res.states > state_cap) return;
      if (dead(nd)) {
        it->second = 2;
        continue;
      }
      stack.push_back(frame(nd));
    }
  }
  res.status = ExhaustivePinwheel::Status::Unschedulable;
}

}  // namespace

ExhaustivePinwheel exhaustive_pinwheel(const PinwheelVector& k, std::uint64_t state_cap) {
  ExhaustivePinwheel res;
  const std::size_t n = k.size();
  if (n == 0) {
    res.status = ExhaustivePinwheel::Status::Schedulable;
    PinwheelSchedule s;
    s.period = 1;
    s.slots = {-1};
    s.method = "exhaustive";
    res.witness = s;
    return res;
  }
  if (std::any_of(k.begin(), k.end(), [](std::int64_t v) { return v < 1; })) {
    throw std::invalid_argument("pinwheel gaps must be positive");
  }
  if (density(k) > 1) {
    res.status = ExhaustivePinwheel::Status::Unschedulable;
    return res;
  }
  using Packed = unsigned __int128;
  const Packed limit = ~Packed{0};
  Packed total = 1;
  bool packs = true;
  for (std::int64_t v : k) {
    if (total > limit / static_cast<Packed>(v)) {
      packs = false;
      break;
    }
    total *= static_cast<Packed>(v);
  }
  if (packs) {
    auto encode = [&](const GapState& d) {
      Packed code = 0;
      for (std::size_t i = n; i-- > 0;) code = code * static_cast<Packed>(k[i]) + static_cast<Packed>(d[i] - 1);
      return code;
    };
    search_gaps<Packed, PackedHash>(k, state_cap, encode, res);
  } else {
    search_gaps<GapState, boost::hash<GapState>>(k, state_cap, [](const GapState& d) { return d; }, res);
  }
  return res;
}

namespace {

bool canonical_rotation(const std::vector<std::size_t>& s) {
  const std::size_t P = s.size();
  for (std::size_t r = 1; r < P; ++r) {
    for (std::size_t i = 0; i < P; ++i) {
      std::size_t a = s[i], b = s[(i + r) % P];
      if (a < b) break;
      if (a > b) return false;
    }
  }
  return true;
}

bool primitive(const std::vector<std::size_t>& s) {
  const std::size_t P = s.size();
  for (std::size_t d = 1; d < P; ++d) {
    if (P % d != 0) continue;
    bool same = true;
    for (std::size_t i = d; i < P && same; ++i) same = s[i] == s[i - d];
    if (same) return false;
  }
  return true;
}

struct Search {
  const Scenario& scn;
  const SliceAssignment& slices;
  const OracleOptions& opt;
  std::vector<std::vector<LinkId>> sets;
  std::vector<LinkId> used;
  std::vector<std::vector<std::size_t>> set_links;   // positions in `used`
  std::vector<std::vector<std::size_t>> cliques;     // positions in `used`
  std::vector<std::int64_t> need;
  std::vector<std::int64_t> have;
  std::vector<std::size_t> seq;
  OracleResult result;

  CyclicSchedule build() const {
    CyclicSchedule s;
    for (std::size_t m : seq) s.slots.push_back(sets[m]);
    return s;
  }

  std::int64_t evaluate() {
    CyclicSchedule s = build();
    const std::int64_t best = result.best_delay;
    if (opt.mode == OracleMode::Impulse) {
      std::int64_t worst = 0;
      for (const Flow& f : scn.flows) {
        for (std::int64_t p = 0; p < s.period(); ++p) {
          worst = std::max(worst, impulse_delay(s, f.route, p));
          if (worst >= best) return worst;
        }
      }
      return worst;
    }
    SimOptions so;
    so.horizon_periods = 1;
    so.check_interference = false;
    so.abort_delay = best == kInfiniteGap ? 0 : best;
    SimTrace tr = simulate(scn, s, slices, so);
    std::int64_t worst = 0;
    for (const auto& ft : tr.flows) {
      if (ft.aborted || !ft.steady) return kInfiniteGap;
      worst = std::max(worst, ft.max_delay);
    }
    verify_support(tr, scn);
    return worst;
  }

  bool feasible_remaining(std::size_t remaining) const {
    for (std::size_t e = 0; e < need.size(); ++e) {
      if (need[e] - have[e] > static_cast<std::int64_t>(remaining)) return false;
    }
    for (const auto& c : cliques) {
      std::int64_t s = 0;
      for (std::size_t e : c) s += std::max<std::int64_t>(0, need[e] - have[e]);
      if (s > static_cast<std::int64_t>(remaining)) return false;
    }
    return true;
  }

  void dfs(std::size_t pos, std::size_t P) {
    if (pos == P) {
      if (!canonical_rotation(seq)) return;
      if (opt.mode == OracleMode::Impulse && !primitive(seq)) return;
      if (++result.examined > opt.guard) {
        throw std::length_error("schedule search exceeds the guard of " + std::to_string(opt.guard));
      }
      std::int64_t d = evaluate();
      if (d < result.best_delay) {
        result.best_delay = d;
        result.best = build();
        result.found = true;
      }
      return;
    }
    for (std::size_t m = pos == 0 ? 0 : seq[0]; m < sets.size(); ++m) {
      seq.push_back(m);
      for (std::size_t e : set_links[m]) ++have[e];
      if (feasible_remaining(P - pos - 1)) dfs(pos + 1, P);
      for (std::size_t e : set_links[m]) --have[e];
      seq.pop_back();
    }
  }
};

}  // namespace

OracleResult min_deadline_oracle(const Scenario& scn, const SliceAssignment& slices, const OracleOptions& opt) {
  if (opt.period_bound < 1 || opt.period_base < 1) throw std::invalid_argument("period bounds must be positive");
  Search s{scn, slices, opt, {}, used_links(scn), {}, {}, {}, {}, {}, {}};
  ConflictGraph cg = build_conflict_graph(scn.net, scn.model, s.used);
  for (const auto& mis : maximal_independent_sets(cg)) {
    std::vector<LinkId> links;
    for (std::size_t v : mis) links.push_back(cg.link_of(v));
    std::sort(links.begin(), links.end());
    s.sets.push_back(std::move(links));
    s.set_links.push_back(mis);
  }
  s.cliques = maximal_cliques(cg);
  s.have.assign(s.used.size(), 0);

  for (std::int64_t P = opt.period_base; P <= opt.period_bound; P += opt.mode == OracleMode::Steady ? opt.period_base : 1) {
    s.need.assign(s.used.size(), opt.mode == OracleMode::Impulse ? 1 : 0);
    if (opt.mode == OracleMode::Steady) {
      for (std::size_t i = 0; i < scn.flows.size(); ++i) {
        const Flow& f = scn.flows[i];
        for (LinkId e : f.route) {
          std::size_t pos = static_cast<std::size_t>(std::find(s.used.begin(), s.used.end(), e) - s.used.begin());
          Rational w = slices.width(i, e);
          if (w == 0) throw std::invalid_argument("flow without a slice on its route");
          s.need[pos] = std::max(s.need[pos], to_int64(ceil(f.lambda * P / w)));
        }
      }
    }
    if (s.feasible_remaining(static_cast<std::size_t>(P))) s.dfs(0, static_cast<std::size_t>(P));
  }
  return s.result;
}

std::vector<double> simplex_max(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                                const std::vector<double>& c) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  const std::size_t width = n + m + 1;
  constexpr double eps = 1e-12;
  std::vector<std::vector<double>> T(m + 1, std::vector<double>(width, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (A[i].size() != n || b[i] < 0) throw std::invalid_argument("simplex needs b >= 0 and consistent rows");
    std::copy(A[i].begin(), A[i].end(), T[i].begin());
    T[i][n + i] = 1.0;
    T[i][width - 1] = b[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) T[m][j] = -c[j];
  for (std::size_t iter = 0;; ++iter) {
    if (iter > 1000000) throw std::runtime_error("simplex iteration limit reached");
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (T[m][j] < -eps) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = m;
    double best = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (T[i][enter] > eps) {
        double ratio = T[i][width - 1] / T[i][enter];
        if (leave == m || ratio < best - eps || (std::abs(ratio - best) <= eps && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave == m) throw std::runtime_error("linear program is unbounded");
    double piv = T[leave][enter];
    for (double& v : T[leave]) v /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      double f = T[i][enter];
      if (f == 0) continue;
      for (std::size_t j = 0; j < width; ++j) T[i][j] -= f * T[leave][j];
    }
    basis[leave] = enter;
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) x[basis[i]] = T[i][width - 1];
  }
  return x;
}

ThroughputResult throughput_lp(const Scenario& scn, std::size_t max_sets) {
  std::vector<LinkId> used = used_links(scn);
  if (used.empty()) throw std::invalid_argument("no flow uses any link");
  ConflictGraph cg = build_conflict_graph(scn.net, scn.model, used);
  const std::size_t n = cg.size();
  std::vector<double> demand(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::int64_t flows = 0;
    for (const Flow& f : scn.flows) flows += std::count(f.route.begin(), f.route.end(), used[v]);
    demand[v] = to_double(make_rational(flows) / scn.net.link(used[v]).capacity);
  }

  // True twins (equal closed neighbourhoods) never share a slot and are interchangeable.
  std::vector<std::size_t> cls(n);
  std::vector<std::size_t> reps;
  for (std::size_t v = 0; v < n; ++v) {
    cls[v] = reps.size();
    for (std::size_t r = 0; r < reps.size(); ++r) {
      std::size_t u = reps[r];
      bool twin = cg.adjacent(u, v);
      for (std::size_t w = 0; w < n && twin; ++w) {
        if (w != u && w != v && cg.adjacent(u, w) != cg.adjacent(v, w)) twin = false;
      }
      if (twin) {
        cls[v] = r;
        break;
      }
    }
    if (cls[v] == reps.size()) reps.push_back(v);
  }
  ConflictGraph q = cg.induced(reps);
  std::vector<double> qd(reps.size(), 0.0);
  for (std::size_t v = 0; v < n; ++v) qd[cls[v]] += demand[v];

  ThroughputResult res;
  std::vector<std::vector<std::size_t>> sets;
  try {
    sets = maximal_independent_sets(q, std::numeric_limits<std::size_t>::max(), max_sets);
  } catch (const std::length_error&) {
    double worst = 0;
    auto cliques = maximal_cliques(q, std::max<std::size_t>(max_sets, 1000000));
    for (const auto& c : cliques) {
      double s = 0;
      for (std::size_t v : c) s += qd[v];
      worst = std::max(worst, s);
    }
    res.lambda = 1.0 / worst;
    res.source = "clique";
    res.sets = cliques.size();
    return res;
  }
  const std::size_t m = sets.size();
  std::vector<std::vector<double>> A(reps.size() + 1, std::vector<double>(m + 1, 0.0));
  std::vector<double> b(reps.size() + 1, 0.0);
  for (std::size_t s = 0; s < m; ++s) A[0][s] = 1.0;
  b[0] = 1.0;
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t v : sets[s]) A[v + 1][s] = -1.0;
  }
  for (std::size_t v = 0; v < reps.size(); ++v) A[v + 1][m] = qd[v];
  std::vector<double> c(m + 1, 0.0);
  c[m] = 1.0;
  std::vector<double> x = simplex_max(A, b, c);
  res.lambda = x[m];
  res.source = "lp";
  res.sets = m;
  return res;
}

}  // namespace wdsched
