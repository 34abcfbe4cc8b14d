#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wdsched/rational.hpp"
#include "wdsched/topology.hpp"

namespace wdsched {

/// Periodic activation pattern: slot t activates slots[t mod period].
struct CyclicSchedule {
  std::vector<std::vector<LinkId>> slots;

  std::int64_t period() const { return static_cast<std::int64_t>(slots.size()); }
  const std::vector<LinkId>& at(std::int64_t t) const {
    return slots[static_cast<std::size_t>(t % period())];
  }
  /// Number of activations of a link per period.
  std::int64_t activations(LinkId link) const;
  /// Long-run activation fraction (mu bar).
  Rational activation_rate(LinkId link) const;
  /// The schedule repeated `times` times back to back.
  CyclicSchedule repeated(int times) const;
};

/// Sequence of link ids, one per slot.
CyclicSchedule schedule_from_sequence(const std::vector<LinkId>& sequence);

/// Throws std::invalid_argument naming the first slot whose activation set
/// contains conflicting (or repeated, or unknown) links.
void check_conflict_free(const CyclicSchedule& schedule, const NetworkGraph& net,
                         const InterferenceModel& model);

inline constexpr std::int64_t kInfiniteGap = std::numeric_limits<std::int64_t>::max();

struct GapStats {
  std::int64_t min = kInfiniteGap;
  std::int64_t max = kInfiniteGap;
};

/// Cyclic inter-scheduling statistics. Gaps lie in [1, K]: a link active
/// once per period has gap K.
class InterSchedulingTimes {
 public:
  InterSchedulingTimes(const CyclicSchedule& schedule, const std::vector<LinkId>& links);

  GapStats link(LinkId e) const;
  /// From each activation of e to the next activation of f.
  GapStats pair(LinkId e, LinkId f) const;

 private:
  std::int64_t period_;
  std::map<LinkId, std::vector<std::int64_t>> times_;
};

}  // namespace wdsched
