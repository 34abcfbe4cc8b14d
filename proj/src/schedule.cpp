#include "wdsched/schedule.hpp"

#include <algorithm>
#include <stdexcept>

namespace wdsched {

std::int64_t CyclicSchedule::activations(LinkId link) const {
  std::int64_t n = 0;
  for (const auto& s : slots) n += std::count(s.begin(), s.end(), link);
  return n;
}

Rational CyclicSchedule::activation_rate(LinkId link) const {
  if (slots.empty()) throw std::logic_error("empty schedule");
  return make_rational(activations(link), period());
}

CyclicSchedule CyclicSchedule::repeated(int times) const {
  if (times < 1) throw std::invalid_argument("repeat count must be positive");
  CyclicSchedule out;
  out.slots.reserve(slots.size() * static_cast<std::size_t>(times));
  for (int r = 0; r < times; ++r) out.slots.insert(out.slots.end(), slots.begin(), slots.end());
  return out;
}

CyclicSchedule schedule_from_sequence(const std::vector<LinkId>& sequence) {
  CyclicSchedule s;
  for (LinkId e : sequence) s.slots.push_back({e});
  return s;
}

void check_conflict_free(const CyclicSchedule& schedule, const NetworkGraph& net,
                         const InterferenceModel& model) {
  if (schedule.slots.empty()) throw std::invalid_argument("schedule has an empty period");
  ConflictGraph cg = build_conflict_graph(net, model);
  for (std::size_t t = 0; t < schedule.slots.size(); ++t) {
    const auto& set = schedule.slots[t];
    for (LinkId e : set) {
      if (e >= net.num_links()) {
        throw std::invalid_argument("slot " + std::to_string(t) + " activates unknown link " + std::to_string(e));
      }
    }
    if (!cg.is_independent(set)) {
      throw std::invalid_argument("slot " + std::to_string(t) + " activates conflicting links");
    }
  }
}

InterSchedulingTimes::InterSchedulingTimes(const CyclicSchedule& schedule, const std::vector<LinkId>& links)
    : period_(schedule.period()) {
  if (period_ < 1) throw std::invalid_argument("schedule has an empty period");
  for (LinkId e : links) times_[e];
  for (std::int64_t t = 0; t < period_; ++t) {
    for (LinkId e : schedule.slots[static_cast<std::size_t>(t)]) {
      auto it = times_.find(e);
      if (it != times_.end()) it->second.push_back(t);
    }
  }
}

GapStats InterSchedulingTimes::link(LinkId e) const { return pair(e, e); }

GapStats InterSchedulingTimes::pair(LinkId e, LinkId f) const {
  const auto& from = times_.at(e);
  const auto& to = times_.at(f);
  GapStats g;
  if (from.empty() || to.empty()) return g;
  g.max = 0;
  for (std::int64_t t1 : from) {
    // First t2 with ((t2 - t1 - 1) mod K) minimal, i.e. first activation strictly after t1.
    auto it = std::upper_bound(to.begin(), to.end(), t1);
    std::int64_t t2 = it == to.end() ? to.front() + period_ : *it;
    std::int64_t gap = t2 - t1;
    g.min = std::min(g.min, gap);
    g.max = std::max(g.max, gap);
  }
  return g;
}

}  // namespace wdsched
