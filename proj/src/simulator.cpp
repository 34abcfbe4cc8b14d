#include "wdsched/simulator.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace wdsched {

namespace {

using Vol = __int128;

Vol quanta(const Rational& v, const Rational& unit) {
  Rational q = v / unit;
  if (q.get_den() != 1) throw std::logic_error("volume is not a multiple of the flow quantum");
  return to_int128(q.get_num());
}

FlowTrace simulate_flow(const Flow& f, std::size_t index, const CyclicSchedule& schedule,
                        const SliceAssignment& slices, const SimOptions& opt) {
  FlowTrace tr;
  tr.flow = f.id;
  const std::size_t n = f.route.size();
  tr.hops = n;
  const std::int64_t K = schedule.period();
  if (n == 0) throw std::invalid_argument("flow " + std::to_string(f.id) + " has an empty route");
  tr.max_age.assign(n, 0);
  tr.max_age_cohort.assign(n, 0);
  if (f.lambda == 0) {
    tr.steady = true;
    return tr;
  }

  std::vector<Rational> widths(n);
  Rational unit = f.lambda;
  for (std::size_t j = 0; j < n; ++j) {
    widths[j] = slices.width(index, f.route[j]);
    if (widths[j] > 0) unit = rational_gcd(unit, widths[j]);
  }
  tr.unit = unit;
  const Vol L = quanta(f.lambda, unit);
  std::vector<Vol> W(n);
  for (std::size_t j = 0; j < n; ++j) W[j] = quanta(widths[j], unit);

  std::map<LinkId, std::size_t> hop_of;
  for (std::size_t j = 0; j < n; ++j) hop_of[f.route[j]] = j;
  std::vector<std::vector<std::size_t>> active(static_cast<std::size_t>(K));
  std::vector<std::int64_t> count(n, 0);
  for (std::int64_t t = 0; t < K; ++t) {
    for (LinkId e : schedule.slots[static_cast<std::size_t>(t)]) {
      auto it = hop_of.find(e);
      if (it != hop_of.end()) {
        active[static_cast<std::size_t>(t)].push_back(it->second);
        ++count[it->second];
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (static_cast<Vol>(count[j]) * W[j] < L * static_cast<Vol>(K)) tr.stable = false;
  }

  std::int64_t cohort_end = -1;
  if (opt.horizon) {
    cohort_end = *opt.horizon;
  } else if (!tr.stable) {
    cohort_end = opt.horizon_periods * K;
  }
  const std::int64_t unstable_stop =
      tr.stable ? 0 : cohort_end + f.tau + K * static_cast<std::int64_t>(n + 1);

  std::vector<Vol> q(n, 0), pending(n, 0), served(n, 0);
  std::vector<std::int64_t> next_cohort(n, 0);
  std::vector<std::vector<std::int64_t>> exits(n);
  std::vector<Vol> backlog;
  std::vector<Vol> prev_snapshot;
  bool have_prev = false;

  std::int64_t t = 0;
  for (;; ++t) {
    if (tr.stable && !tr.steady && t % K == 0) {
      std::vector<Vol> snap(q);
      snap.insert(snap.end(), pending.begin(), pending.end());
      if (have_prev && snap == prev_snapshot) {
        tr.steady = true;
        tr.onset = t - K;
        if (!opt.horizon) cohort_end = tr.onset + opt.horizon_periods * K;
      }
      prev_snapshot = std::move(snap);
      have_prev = true;
    }
    if (cohort_end >= 0 && t >= cohort_end + f.tau) {
      if (tr.stable && tr.steady && next_cohort[n - 1] >= cohort_end) break;
      if (!tr.stable && t >= unstable_stop) break;
    }
    if (t >= opt.max_slots) break;

    for (std::size_t j = 1; j < n; ++j) {
      q[j] += pending[j];
      pending[j] = 0;
    }
    q[0] += L;
    Vol total = 0;
    for (Vol v : q) total += v;
    backlog.push_back(total);

    for (std::size_t j : active[static_cast<std::size_t>(t % K)]) {
      Vol s = std::min(W[j], q[j]);
      if (s == 0) continue;
      q[j] -= s;
      served[j] += s;
      if (j + 1 < n) pending[j + 1] += s;
      while (served[j] >= L * static_cast<Vol>(next_cohort[j] + 1)) {
        std::int64_t c = next_cohort[j];
        exits[j].push_back(t + 1);
        ++next_cohort[j];
        if (opt.abort_delay > 0 && j + 1 == n && t + 1 - c >= opt.abort_delay) tr.aborted = true;
      }
    }
    Vol in_network = served[n - 1];
    for (std::size_t j = 0; j < n; ++j) in_network += q[j] + pending[j];
    if (in_network != L * static_cast<Vol>(t + 1)) {
      throw std::logic_error("volume conservation broken for flow " + std::to_string(f.id));
    }
    if (opt.record_queues) tr.queue_log.emplace_back(q);
    if (opt.abort_delay > 0 && next_cohort[n - 1] <= t && t + 2 - next_cohort[n - 1] >= opt.abort_delay) {
      tr.aborted = true;
    }
    if (tr.aborted) {
      ++t;
      break;
    }
  }
  tr.slots = t;
  if (cohort_end < 0) cohort_end = std::min<std::int64_t>(t, static_cast<std::int64_t>(exits[n - 1].size()));
  tr.cohorts = cohort_end;

  tr.delay.assign(static_cast<std::size_t>(cohort_end), kUndelivered);
  for (std::int64_t c = 0; c < cohort_end; ++c) {
    if (c < static_cast<std::int64_t>(exits[n - 1].size())) {
      tr.delay[static_cast<std::size_t>(c)] = exits[n - 1][static_cast<std::size_t>(c)] - c;
      tr.max_delay = std::max(tr.max_delay, tr.delay[static_cast<std::size_t>(c)]);
    } else {
      tr.max_delay = kInfiniteGap;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto m = std::min<std::int64_t>(cohort_end, static_cast<std::int64_t>(exits[j].size()));
    for (std::int64_t c = 0; c < m; ++c) {
      std::int64_t age = exits[j][static_cast<std::size_t>(c)] - c;
      if (age > tr.max_age[j]) {
        tr.max_age[j] = age;
        tr.max_age_cohort[j] = c;
      }
    }
    exits[j].resize(static_cast<std::size_t>(m));
  }
  if (cohort_end * static_cast<std::int64_t>(n) <= opt.exit_record_limit) tr.exit = std::move(exits);

  const auto window = std::min<std::int64_t>(static_cast<std::int64_t>(backlog.size()), cohort_end + f.tau);
  for (std::int64_t s = 0; s < window; ++s) tr.max_backlog = std::max(tr.max_backlog, backlog[static_cast<std::size_t>(s)]);
  return tr;
}

}  // namespace

SimTrace simulate(const Scenario& scn, const CyclicSchedule& schedule, const SliceAssignment& slices,
                  const SimOptions& options) {
  if (schedule.period() < 1) throw std::invalid_argument("schedule has an empty period");
  if (options.check_interference) check_conflict_free(schedule, scn.net, scn.model);
  SimTrace trace;
  trace.period = schedule.period();
  for (std::size_t i = 0; i < scn.flows.size(); ++i) {
    trace.flows.push_back(simulate_flow(scn.flows[i], i, schedule, slices, options));
    const FlowTrace& ft = trace.flows.back();
    if (!ft.steady) trace.steady = false;
    trace.onset = std::max(trace.onset, ft.onset);
  }
  return trace;
}

std::vector<SupportVerdict> verify_support(const SimTrace& trace, const Scenario& scn) {
  if (trace.flows.size() != scn.flows.size()) throw std::invalid_argument("trace does not match scenario");
  std::vector<SupportVerdict> out;
  for (std::size_t i = 0; i < scn.flows.size(); ++i) {
    const Flow& f = scn.flows[i];
    const FlowTrace& ft = trace.flows[i];
    SupportVerdict v;
    v.flow = f.id;
    v.backlog_limit = f.lambda * f.tau;
    if (f.lambda == 0) {
      v.supported = true;
      out.push_back(v);
      continue;
    }
    if (!ft.steady || ft.aborted) {
      throw std::invalid_argument("flow " + std::to_string(f.id) + " trace is not steady");
    }
    bool by_delay = true;
    for (auto d : ft.delay) {
      if (d == kUndelivered || d > f.tau) by_delay = false;
    }
    v.max_delay = ft.max_delay;
    v.max_backlog = Rational(from_int128(ft.max_backlog)) * ft.unit;
    bool by_backlog = v.max_backlog <= v.backlog_limit;
    if (by_delay != by_backlog) {
      throw std::logic_error("flow " + std::to_string(f.id) +
                             ": cohort deadline verdict and backlog verdict disagree");
    }
    v.supported = by_delay;
    out.push_back(v);
  }
  return out;
}

std::vector<FlowDeficit> delay_deficit_trace(const SimTrace& trace, const Scenario& scn,
                                             const CyclicSchedule& schedule, const SliceAssignment& slices) {
  std::vector<FlowDeficit> out;
  std::vector<LinkId> links = used_links(scn);
  InterSchedulingTimes gaps(schedule, links);
  for (std::size_t i = 0; i < scn.flows.size(); ++i) {
    const Flow& f = scn.flows[i];
    const FlowTrace& ft = trace.flows.at(i);
    FlowDeficit d;
    d.flow = f.id;
    const std::size_t n = f.route.size();
    std::vector<std::int64_t> prefix(n + 1, 0);
    for (std::size_t j = 0; j < n; ++j) {
      std::int64_t kb = gaps.link(f.route[j]).max;
      d.kbar.push_back(kb);
      if (kb == kInfiniteGap || slices.width(i, f.route[j]) < f.lambda * kb) d.width_bound_holds = false;
      prefix[j + 1] = kb == kInfiniteGap || prefix[j] == kInfiniteGap ? kInfiniteGap : prefix[j] + kb;
    }
    d.kbar_sum = prefix[n];
    d.worst.assign(n, std::numeric_limits<std::int64_t>::min());
    for (std::size_t j = 0; j < n; ++j) {
      if (prefix[j + 1] == kInfiniteGap) continue;
      if (!ft.exit.empty()) {
        for (std::size_t c = 0; c < ft.exit[j].size(); ++c) {
          std::int64_t delta = ft.exit[j][c] - static_cast<std::int64_t>(c) - prefix[j + 1];
          d.worst[j] = std::max(d.worst[j], delta);
          if (delta > 0) d.violations.push_back({static_cast<std::int64_t>(c), j, delta});
        }
      } else if (ft.cohorts > 0) {
        std::int64_t delta = ft.max_age[j] - prefix[j + 1];
        d.worst[j] = delta;
        if (delta > 0) d.violations.push_back({ft.max_age_cohort[j], j, delta});
      }
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::int64_t impulse_delay(const CyclicSchedule& schedule, const std::vector<LinkId>& route, std::int64_t phase) {
  const std::int64_t K = schedule.period();
  std::int64_t cur = phase;
  for (LinkId e : route) {
    std::int64_t s = cur;
    for (; s < cur + K; ++s) {
      const auto& set = schedule.at(s);
      if (std::find(set.begin(), set.end(), e) != set.end()) break;
    }
    if (s == cur + K) return kInfiniteGap;
    cur = s + 1;
  }
  return cur - phase;
}

std::int64_t worst_impulse_delay(const CyclicSchedule& schedule, const std::vector<LinkId>& route) {
  std::int64_t worst = 0;
  for (std::int64_t p = 0; p < schedule.period(); ++p) {
    worst = std::max(worst, impulse_delay(schedule, route, p));
    if (worst == kInfiniteGap) break;
  }
  return worst;
}

CyclicSchedule block_policy(const Scenario& line_scn, const std::vector<Rational>& widths, int scale) {
  if (line_scn.flows.size() != 1) throw std::invalid_argument("block policy needs exactly one flow");
  const Flow& f = line_scn.flows.front();
  const std::size_t n = f.route.size();
  if (widths.size() != n) throw std::invalid_argument("one width per hop is required");
  if (scale < 1) throw std::invalid_argument("scale must be positive");
  for (std::size_t j = 0; j + 1 < n; ++j) {
    if (line_scn.net.link(f.route[j]).dst != line_scn.net.link(f.route[j + 1]).src) {
      throw std::invalid_argument("route is not a line");
    }
  }
  std::vector<Rational> mu(n);
  BigInt K = 1;
  for (std::size_t j = 0; j < n; ++j) {
    mu[j] = f.lambda / widths[j];
    if (mu[j] <= 0 || mu[j] > 1) throw std::invalid_argument("slice cannot carry the rate");
    K = lcm(K, mu[j].get_den());
  }
  K *= scale;
  const std::int64_t k = to_int64(K);
  std::vector<std::int64_t> eta(n);
  for (std::size_t j = 0; j < n; ++j) eta[j] = to_int64(Rational(mu[j] * Rational(K)).get_num());
  const std::size_t m = std::min<std::size_t>(n, static_cast<std::size_t>(line_scn.model.phi) + 1);
  for (std::size_t j = 0; j + m <= n; ++j) {
    std::int64_t s = 0;
    for (std::size_t h = j; h < j + m; ++h) s += eta[h];
    if (s > k) throw std::invalid_argument("blocks of one interference window exceed the period");
  }
  std::vector<std::int64_t> start(n, 0);
  for (std::size_t j = n - 1; j-- > 0;) start[j] = (start[j + 1] + eta[j + 1]) % k;
  CyclicSchedule s;
  s.slots.resize(static_cast<std::size_t>(k));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::int64_t x = 0; x < eta[j]; ++x) s.slots[static_cast<std::size_t>((start[j] + x) % k)].push_back(f.route[j]);
  }
  for (auto& slot : s.slots) std::sort(slot.begin(), slot.end());
  return s;
}

Rational block_delay_formula(const CyclicSchedule& schedule, const std::vector<LinkId>& route) {
  Rational sum = 0;
  for (LinkId e : route) sum += 1 - schedule.activation_rate(e);
  return sum * schedule.period();
}

}  // namespace wdsched
