#include "wdsched/pinwheel.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "wdsched/oracle.hpp"

namespace wdsched {

int PinwheelSchedule::at(std::int64_t t) const {
  if (period <= 0) throw std::logic_error("pinwheel schedule has no period");
  std::int64_t r = t % period;
  if (!slots.empty()) return slots[static_cast<std::size_t>(r)];
  return generator(r);
}

Rational density(const PinwheelVector& k) {
  Rational rho = 0;
  for (auto v : k) {
    if (v < 1) throw std::invalid_argument("pinwheel entries must be positive");
    rho += make_rational(1, v);
  }
  return rho;
}

bool is_step_down(const PinwheelVector& k) {
  PinwheelVector s = k;
  std::sort(s.begin(), s.end());
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] % s[i - 1] != 0) return false;
  }
  return true;
}

namespace {

std::vector<std::size_t> ascending_order(const PinwheelVector& k) {
  std::vector<std::size_t> order(k.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return k[a] < k[b]; });
  return order;
}

// Calendar of length max(k); each task takes the first offset whose progression is free.
std::optional<std::vector<int>> step_down_calendar(const PinwheelVector& k) {
  if (k.empty()) return std::vector<int>{-1};
  std::int64_t len = *std::max_element(k.begin(), k.end());
  std::vector<int> cal(static_cast<std::size_t>(len), -1);
  for (std::size_t task : ascending_order(k)) {
    std::int64_t step = k[task];
    bool placed = false;
    for (std::int64_t o = 0; o < step && !placed; ++o) {
      bool free = true;
      for (std::int64_t t = o; t < len; t += step) {
        if (cal[static_cast<std::size_t>(t)] != -1) {
          free = false;
          break;
        }
      }
      if (free) {
        for (std::int64_t t = o; t < len; t += step) cal[static_cast<std::size_t>(t)] = static_cast<int>(task);
        placed = true;
      }
    }
    if (!placed) return std::nullopt;
  }
  return cal;
}

PinwheelSchedule materialized(std::vector<int> slots, std::string method) {
  PinwheelSchedule s;
  s.period = static_cast<std::int64_t>(slots.size());
  s.slots = std::move(slots);
  s.method = std::move(method);
  return s;
}

// a < b (or only a when n == 0). a-tasks keep a fixed frame position; b-tasks
// share the remaining positions round robin.
std::optional<std::vector<int>> two_value_sequence(std::int64_t a, const std::vector<int>& a_tasks, std::int64_t b,
                                                   const std::vector<int>& b_tasks) {
  const auto m = static_cast<std::int64_t>(a_tasks.size());
  const auto n = static_cast<std::int64_t>(b_tasks.size());
  if (m > a) return std::nullopt;
  const std::int64_t r = a - m;
  if (n > 0 && r == 0) return std::nullopt;
  if (n > 0 && (n * a + r - 1) / r > b) return std::nullopt;
  std::vector<bool> free_pos(static_cast<std::size_t>(a), false);
  for (std::int64_t j = 0; j < r; ++j) free_pos[static_cast<std::size_t>(j * a / r)] = true;
  std::vector<int> frame(static_cast<std::size_t>(a), -1);
  {
    std::size_t next = 0;
    for (std::int64_t p = 0; p < a; ++p) {
      if (!free_pos[static_cast<std::size_t>(p)]) frame[static_cast<std::size_t>(p)] = a_tasks[next++];
    }
  }
  const std::int64_t frames = n == 0 ? 1 : std::lcm(r, n) / r;
  std::vector<int> seq;
  seq.reserve(static_cast<std::size_t>(frames * a));
  std::int64_t f = 0;
  for (std::int64_t fr = 0; fr < frames; ++fr) {
    for (std::int64_t p = 0; p < a; ++p) {
      if (free_pos[static_cast<std::size_t>(p)]) {
        seq.push_back(n == 0 ? -1 : b_tasks[static_cast<std::size_t>(f % n)]);
        ++f;
      } else {
        seq.push_back(frame[static_cast<std::size_t>(p)]);
      }
    }
  }
  return seq;
}

}  // namespace

std::optional<PinwheelSchedule> schedule_step_down(const PinwheelVector& k) {
  if (!is_step_down(k)) throw std::invalid_argument("vector is not step-down");
  if (density(k) > 1) return std::nullopt;
  auto cal = step_down_calendar(k);
  if (!cal) throw std::logic_error("step-down placement failed at density <= 1");
  return materialized(std::move(*cal), "step-down");
}

std::optional<PinwheelSchedule> schedule_two_values(const PinwheelVector& k) {
  std::set<std::int64_t> values(k.begin(), k.end());
  if (values.size() > 2) throw std::invalid_argument("vector has more than two distinct values");
  if (k.empty()) return materialized({-1}, "two-value");
  if (density(k) > 1) return std::nullopt;
  std::int64_t a = *values.begin();
  std::int64_t b = *values.rbegin();
  std::vector<int> at, bt;
  for (std::size_t i = 0; i < k.size(); ++i) (k[i] == a ? at : bt).push_back(static_cast<int>(i));
  auto seq = two_value_sequence(a, at, b, bt);
  if (!seq) throw std::logic_error("two-value construction failed at density <= 1");
  return materialized(std::move(*seq), "two-value");
}

namespace {

struct Specialization {
  std::int64_t x = 0, y = 0;
  std::vector<std::int64_t> value;  // specialized k'
  std::vector<bool> in_x;
};

// Largest base * 2^j not exceeding k, or 0 when base > k.
std::int64_t largest_power_multiple(std::int64_t base, std::int64_t k) {
  if (base > k) return 0;
  std::int64_t v = base;
  while (v <= k / 2) v *= 2;
  return v;
}

std::optional<Specialization> find_split(const PinwheelVector& k) {
  const std::int64_t kmin = *std::min_element(k.begin(), k.end());
  const std::int64_t kmax = *std::max_element(k.begin(), k.end());
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
  for (std::int64_t x = 1; x <= kmin; ++x) {
    for (std::int64_t y = x; y <= kmax; ++y) pairs.emplace_back(x, y);
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& p, const auto& q) {
    return p.first + p.second != q.first + q.second ? p.first + p.second < q.first + q.second : p.first < q.first;
  });
  for (auto [x, y] : pairs) {
    Specialization s{x, y, {}, {}};
    Rational rx = 0, ry = 0;
    for (auto v : k) {
      std::int64_t vx = largest_power_multiple(x, v);
      std::int64_t vy = largest_power_multiple(y, v);
      bool use_x = vx >= vy;
      s.value.push_back(use_x ? vx : vy);
      s.in_x.push_back(use_x);
      (use_x ? rx : ry) += make_rational(1, use_x ? vx : vy);
    }
    Rational lhs = Rational(ceil(rx * x)) / x + Rational(ceil(ry * y)) / y;
    if (lhs <= 1) return s;
  }
  return std::nullopt;
}

struct Channel {
  std::int64_t bound;               // max gap between channel occurrences
  std::vector<int> tasks;           // original task ids
  std::vector<std::int64_t> sub;    // sub-periods (powers of two)
  std::vector<int> calendar;        // step-down sub-schedule over channel occurrences
};

}  // namespace

std::optional<PinwheelSchedule> schedule_sxy(const PinwheelVector& k, std::int64_t period_cap) {
  if (k.empty()) return materialized({-1}, "sxy");
  if (density(k) > 1) return std::nullopt;
  auto split = find_split(k);
  if (!split) return std::nullopt;
  const std::int64_t x = split->x, y = split->y;

  // Items per class as (sub-period, task), packed first-fit decreasing by size 1/sub.
  auto pack = [&](bool cls, std::int64_t base) {
    std::vector<std::pair<std::int64_t, int>> items;
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (split->in_x[i] == cls) items.emplace_back(split->value[i] / base, static_cast<int>(i));
    }
    std::stable_sort(items.begin(), items.end());
    std::vector<Channel> chans;
    std::vector<Rational> load;
    for (auto [sub, task] : items) {
      Rational size = make_rational(1, sub);
      std::size_t c = 0;
      while (c < chans.size() && load[c] + size > 1) ++c;
      if (c == chans.size()) {
        chans.push_back({base, {}, {}, {}});
        load.push_back(0);
      }
      chans[c].tasks.push_back(task);
      chans[c].sub.push_back(sub);
      load[c] += size;
    }
    return chans;
  };
  std::vector<Channel> channels = pack(true, x);
  const std::size_t px = channels.size();
  for (auto& c : pack(false, y)) channels.push_back(std::move(c));

  for (auto& c : channels) {
    auto cal = step_down_calendar(c.sub);
    if (!cal) throw std::logic_error("channel sub-schedule failed");
    c.calendar = std::move(*cal);
  }

  // Top level: channels as tasks of a two-value vector.
  std::vector<int> xs, ys;
  for (std::size_t c = 0; c < channels.size(); ++c) (c < px || x == y ? xs : ys).push_back(static_cast<int>(c));
  auto top = two_value_sequence(x, xs, y, ys);
  if (!top) return std::nullopt;
  const std::int64_t T = static_cast<std::int64_t>(top->size());

  std::vector<std::int64_t> per_period(channels.size(), 0);
  for (int c : *top) {
    if (c >= 0) ++per_period[static_cast<std::size_t>(c)];
  }
  BigInt mult = 1;
  for (std::size_t c = 0; c < channels.size(); ++c) {
    std::int64_t P = static_cast<std::int64_t>(channels[c].calendar.size());
    mult = lcm(mult, BigInt(std::to_string(P / std::gcd(per_period[c], P))));
  }
  BigInt total = mult * T;

  // prefix[c][t]: occurrences of channel c in top[0, t).
  std::vector<std::vector<std::int64_t>> prefix(channels.size(), std::vector<std::int64_t>(static_cast<std::size_t>(T) + 1, 0));
  for (std::int64_t t = 0; t < T; ++t) {
    for (std::size_t c = 0; c < channels.size(); ++c) {
      prefix[c][static_cast<std::size_t>(t) + 1] = prefix[c][static_cast<std::size_t>(t)] + ((*top)[static_cast<std::size_t>(t)] == static_cast<int>(c));
    }
  }
  auto gen = [top = *top, channels, prefix, per_period, T](std::int64_t t) -> int {
    int c = top[static_cast<std::size_t>(t % T)];
    if (c < 0) return -1;
    const auto cc = static_cast<std::size_t>(c);
    std::int64_t occ = (t / T) * per_period[cc] + prefix[cc][static_cast<std::size_t>(t % T)];
    const auto& cal = channels[cc].calendar;
    int local = cal[static_cast<std::size_t>(occ % static_cast<std::int64_t>(cal.size()))];
    return local < 0 ? -1 : channels[cc].tasks[static_cast<std::size_t>(local)];
  };

  PinwheelSchedule out;
  out.method = "sxy(" + std::to_string(x) + "," + std::to_string(y) + ")";
  if (total <= period_cap) {
    out.period = to_int64(total);
    out.slots.resize(static_cast<std::size_t>(out.period));
    for (std::int64_t t = 0; t < out.period; ++t) out.slots[static_cast<std::size_t>(t)] = gen(t);
    return out;
  }
  if (!total.fits_slong_p()) throw std::overflow_error("two-class schedule period exceeds int64");
  out.period = to_int64(total);
  out.generator = gen;
  // Gap of a task <= (occurrences it waits in its channel) * (max channel gap).
  out.certificate = [top = *top, channels, T, n = k.size()](const PinwheelVector&) {
    PinwheelVerdict v;
    v.min_gap.assign(n, 1);
    v.max_gap.assign(n, kInfiniteGap);
    for (std::size_t c = 0; c < channels.size(); ++c) {
      std::vector<std::int64_t> pos;
      for (std::int64_t t = 0; t < T; ++t) {
        if (top[static_cast<std::size_t>(t)] == static_cast<int>(c)) pos.push_back(t);
      }
      std::int64_t chan_gap = 0;
      for (std::size_t i = 0; i < pos.size(); ++i) {
        std::int64_t next = i + 1 < pos.size() ? pos[i + 1] : pos[0] + T;
        chan_gap = std::max(chan_gap, next - pos[i]);
      }
      const auto& cal = channels[c].calendar;
      const auto P = static_cast<std::int64_t>(cal.size());
      for (std::size_t local = 0; local < channels[c].tasks.size(); ++local) {
        std::vector<std::int64_t> occ;
        for (std::int64_t s = 0; s < P; ++s) {
          if (cal[static_cast<std::size_t>(s)] == static_cast<int>(local)) occ.push_back(s);
        }
        std::int64_t sub_gap = 0;
        for (std::size_t i = 0; i < occ.size(); ++i) {
          std::int64_t next = i + 1 < occ.size() ? occ[i + 1] : occ[0] + P;
          sub_gap = std::max(sub_gap, next - occ[i]);
        }
        if (!occ.empty() && chan_gap > 0) {
          v.max_gap[static_cast<std::size_t>(channels[c].tasks[local])] = sub_gap * chan_gap;
        }
      }
    }
    return v;
  };
  return out;
}

std::optional<PinwheelSchedule> schedule_pinwheel(const PinwheelVector& k, std::int64_t period_cap,
                                                  std::uint64_t exhaustive_cap) {
  if (k.empty()) return materialized({-1}, "empty");
  if (density(k) > 1) return std::nullopt;
  std::optional<PinwheelSchedule> fallback = schedule_sxy(k, period_cap);
  if (fallback && fallback->materialized()) return fallback;
  std::optional<PinwheelSchedule> s;
  if (is_step_down(k)) {
    s = schedule_step_down(k);
  } else if (std::set<std::int64_t>(k.begin(), k.end()).size() <= 2) {
    s = schedule_two_values(k);
  }
  if (s && s->period <= period_cap) return s;
  ExhaustivePinwheel ex = exhaustive_pinwheel(k, exhaustive_cap);
  if (ex.status == ExhaustivePinwheel::Status::Schedulable) return ex.witness;
  if (fallback) return fallback;
  return s;
}

PinwheelVerdict verify_pinwheel(const PinwheelSchedule& schedule, const PinwheelVector& k, std::int64_t scan_cap) {
  if (schedule.period < 1) throw std::invalid_argument("schedule period must be positive");
  const std::size_t n = k.size();
  PinwheelVerdict v;
  if (schedule.period > scan_cap) {
    if (!schedule.certificate) throw std::length_error("schedule too long to scan and has no certificate");
    v = schedule.certificate(k);
  } else {
    std::vector<std::int64_t> first(n, -1), last(n, -1);
    v.min_gap.assign(n, kInfiniteGap);
    v.max_gap.assign(n, 0);
    std::vector<std::int64_t> worst_start(n, 0);
    auto record = [&](std::size_t task, std::int64_t from, std::int64_t gap) {
      v.min_gap[task] = std::min(v.min_gap[task], gap);
      if (gap > v.max_gap[task]) {
        v.max_gap[task] = gap;
        worst_start[task] = from;
      }
    };
    for (std::int64_t t = 0; t < schedule.period; ++t) {
      int task = schedule.at(t);
      if (task < 0) continue;
      if (static_cast<std::size_t>(task) >= n) throw std::invalid_argument("schedule names an unknown task");
      auto ti = static_cast<std::size_t>(task);
      if (first[ti] < 0) {
        first[ti] = t;
      } else {
        record(ti, last[ti], t - last[ti]);
      }
      last[ti] = t;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (first[i] < 0) {
        v.max_gap[i] = kInfiniteGap;
        v.min_gap[i] = kInfiniteGap;
      } else {
        record(i, last[i], first[i] + schedule.period - last[i]);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (v.max_gap[i] > k[i]) {
        v.ok = false;
        v.task = static_cast<int>(i);
        v.gap = v.max_gap[i];
        v.slot = first[i] < 0 ? 0 : worst_start[i];
        return v;
      }
    }
    return v;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (v.max_gap[i] > k[i]) {
      v.ok = false;
      v.task = static_cast<int>(i);
      v.gap = v.max_gap[i];
      return v;
    }
  }
  return v;
}

CyclicSchedule to_cyclic(const PinwheelSchedule& schedule, const std::vector<std::vector<LinkId>>& sets) {
  if (schedule.period > 50000000) throw std::length_error("schedule too long to materialize");
  CyclicSchedule out;
  out.slots.resize(static_cast<std::size_t>(schedule.period));
  for (std::int64_t t = 0; t < schedule.period; ++t) {
    int task = schedule.at(t);
    if (task >= 0) out.slots[static_cast<std::size_t>(t)] = sets.at(static_cast<std::size_t>(task));
  }
  return out;
}

}  // namespace wdsched
