#pragma once

#include <utility>
#include <vector>

#include "wdsched/schedule.hpp"
#include "wdsched/topology.hpp"
#include "wdsched/traffic.hpp"

namespace wdsched::fixtures {

/// Nodes 1-2-3, capacity 27 everywhere, one link active at a time.
/// Flow 1 goes 1 -> 3 at rate 9, flow 2 goes 3 -> 1 at rate 1.
inline Scenario two_hop(int tau1 = 10, int tau2 = 10) {
  Scenario scn{generate_topology(topo::Line{3}, Rational(27)), InterferenceModel{3}, {}};
  scn.flows.push_back({1, 1, 3, Rational(9), tau1, shortest_route(scn.net, 1, 3)});
  scn.flows.push_back({2, 3, 1, Rational(1), tau2, shortest_route(scn.net, 3, 1)});
  return scn;
}

inline CyclicSchedule by_endpoints(const NetworkGraph& net, const std::vector<std::pair<NodeId, NodeId>>& seq) {
  std::vector<LinkId> ids;
  for (auto [a, b] : seq) ids.push_back(*net.find_link(a, b));
  return schedule_from_sequence(ids);
}

inline CyclicSchedule pi1(const NetworkGraph& net) {
  return by_endpoints(net, {{1, 2}, {2, 3}, {3, 2}, {1, 2}, {2, 3}, {2, 1}});
}

inline CyclicSchedule pi2(const NetworkGraph& net) {
  return by_endpoints(net, {{2, 3}, {2, 3}, {1, 2}, {1, 2}, {2, 1}, {3, 2}});
}

}  // namespace wdsched::fixtures
