#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wdsched/rational.hpp"
#include "wdsched/topology.hpp"

namespace wdsched {

struct Flow {
  int id = 0;
  NodeId src = 0;
  NodeId dst = 0;
  Rational lambda;            // packets per slot
  int tau = 0;                // deadline in slots
  std::vector<LinkId> route;  // source to destination
};

struct Scenario {
  NetworkGraph net;
  InterferenceModel model;
  std::vector<Flow> flows;
};

/// Per-(flow, link) slice widths. Absent entries are zero.
class SliceAssignment {
 public:
  void set(std::size_t flow, LinkId link, Rational width);
  Rational width(std::size_t flow, LinkId link) const;
  /// Sum of widths reserved on a link.
  Rational link_total(LinkId link) const;
  const std::map<std::pair<std::size_t, LinkId>, Rational>& entries() const { return widths_; }

 private:
  std::map<std::pair<std::size_t, LinkId>, Rational> widths_;
};

/// Every flow gets the full link capacity on each of its links. Only valid
/// when no link is shared between flows.
SliceAssignment capacity_slices(const Scenario& scn);

/// Minimum-hop directed path, ties broken by the lexicographically smallest
/// node sequence. Throws std::invalid_argument when no path exists.
std::vector<LinkId> shortest_route(const NetworkGraph& net, NodeId src, NodeId dst);

/// `count` distinct random (src,dst) pairs drawn with mt19937_64(seed), routed
/// with shortest_route. Rates and deadlines are left at the given defaults.
std::vector<Flow> random_flows(const NetworkGraph& net, std::size_t count, std::uint64_t seed,
                               const Rational& lambda = Rational(1), int tau = 1);

struct Violation {
  enum class Kind { Route, Overload, Deadline, Rate };
  Kind kind;
  int flow = -1;  // flow id, -1 when the violation concerns a link
  long link = -1;
  std::string message;
};

std::string to_string(Violation::Kind kind);

/// Necessary-condition audit. An empty result means the scenario passed.
std::vector<Violation> validate_scenario(const Scenario& scn);

/// Aggregate rate sum over flows crossing a link.
Rational link_load(const Scenario& scn, LinkId link);

/// Links used by at least one flow, ascending.
std::vector<LinkId> used_links(const Scenario& scn);

}  // namespace wdsched
