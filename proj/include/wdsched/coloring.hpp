#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wdsched/rational.hpp"
#include "wdsched/schedule.hpp"
#include "wdsched/traffic.hpp"

namespace wdsched {

/// Partition of conflict-graph vertices into independent sets.
struct Coloring {
  std::vector<std::vector<std::size_t>> sets;
  std::vector<std::size_t> set_of;
};

/// First-fit coloring in the given vertex order.
Coloring greedy_color(const ConflictGraph& cg, const std::vector<std::size_t>& order);

/// The coloring problem derived from a scenario: vertices are the links used
/// by at least one flow, in ascending link order.
struct ColoringInstance {
  std::vector<LinkId> links;
  ConflictGraph cg;
  std::vector<Rational> load;                      // lambda_v
  std::vector<Rational> cap_ratio;                 // c_v / lambda_v
  std::vector<std::vector<std::size_t>> routes;    // per flow, vertex indices
};

ColoringInstance make_coloring_instance(const Scenario& scn);

/// Convex relaxation with weights 1/omega_hat: real k per vertex.
/// Throws std::domain_error when the constraint set is empty.
std::vector<double> solve_relaxation(const ColoringInstance& inst, const Scenario& scn,
                                     const std::vector<double>& omega_hat);

struct KAssignment {
  std::vector<std::int64_t> k_set;     // per color class
  std::vector<std::int64_t> k_vertex;  // per vertex, k of its class
  Rational objective;                  // sum over classes of 1/k
  std::uint64_t nodes = 0;             // branch-and-bound nodes
};

class IntegerInfeasible : public std::runtime_error {
 public:
  IntegerInfeasible(const std::string& what, std::vector<int> flows)
      : std::runtime_error(what), flows_(std::move(flows)) {}
  const std::vector<int>& flows() const { return flows_; }

 private:
  std::vector<int> flows_;
};

/// Exact minimum of sum 1/k_s over integer k_s in [1, floor(min c/lambda)]
/// subject to every flow's deadline. Among optima the lexicographically
/// largest vector wins. Throws IntegerInfeasible naming the flows whose
/// deadline cannot hold even at k = 1.
KAssignment solve_integer(const ColoringInstance& inst, const Scenario& scn, const Coloring& coloring,
                          std::uint64_t node_limit = 200000000);

struct WgcResult {
  Coloring coloring;
  KAssignment assignment;
  int iterations = 0;
  std::vector<double> rho_history;   // relaxed density per explored coloring
};

/// Weighted greedy coloring loop alone; `assignment` is left empty.
WgcResult wgc_coloring(const ColoringInstance& inst, const Scenario& scn);

/// Weighted greedy coloring followed by the integer stage.
WgcResult wgc(const ColoringInstance& inst, const Scenario& scn);

/// w_{i,e} = lambda_i * k_e. Throws std::logic_error on a capacity breach.
SliceAssignment slice_widths(const ColoringInstance& inst, const Scenario& scn, const KAssignment& a);

/// Extra width over the bottleneck width: lambda_i * (k_e - 1/mu_bar_e).
std::map<std::pair<std::size_t, LinkId>, Rational> slack_widths(const ColoringInstance& inst, const Scenario& scn,
                                                                  const KAssignment& a,
                                                                  const CyclicSchedule& schedule);

/// Color classes as link-id sets.
std::vector<std::vector<LinkId>> class_links(const ColoringInstance& inst, const Coloring& coloring);

}  // namespace wdsched
