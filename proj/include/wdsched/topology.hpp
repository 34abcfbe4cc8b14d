#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wdsched/rational.hpp"

namespace wdsched {

using NodeId = int;
using LinkId = std::size_t;

struct Link {
  NodeId src;
  NodeId dst;
  Rational capacity;  // packets per slot
};

/// Directed network G=(V,E). Immutable after construction.
class NetworkGraph {
 public:
  NetworkGraph() = default;
  /// Throws std::invalid_argument when a link endpoint is unknown, a capacity
  /// is not positive, a (src,dst) pair repeats, or the undirected support is
  /// disconnected.
  NetworkGraph(std::vector<NodeId> nodes, std::vector<Link> links);

  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const Link& link(LinkId id) const;
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_links() const { return links_.size(); }

  bool has_node(NodeId node) const;
  /// Dense index of a node id in nodes(); throws on unknown ids.
  std::size_t node_index(NodeId node) const;
  std::optional<LinkId> find_link(NodeId src, NodeId dst) const;
  /// Outgoing links of a node, in link order.
  const std::vector<LinkId>& out_links(NodeId node) const;
  /// Hop distance between two nodes on the undirected support.
  int hop_distance(NodeId a, NodeId b) const;

 private:
  std::vector<NodeId> nodes_;
  std::vector<Link> links_;
  std::vector<std::vector<LinkId>> out_;
  std::vector<std::vector<int>> dist_;  // all-pairs undirected hop distance
};

/// phi-hop interference: links fewer than phi hops apart conflict.
struct InterferenceModel {
  int phi = 1;
};

/// Undirected interference graph whose vertices are network links.
class ConflictGraph {
 public:
  ConflictGraph() = default;
  /// Vertex v stands for network link `links[v]`.
  ConflictGraph(std::vector<LinkId> links, std::vector<std::vector<bool>> adjacency);

  std::size_t size() const { return links_.size(); }
  LinkId link_of(std::size_t vertex) const { return links_.at(vertex); }
  const std::vector<LinkId>& links() const { return links_; }
  std::optional<std::size_t> vertex_of(LinkId link) const;
  bool adjacent(std::size_t u, std::size_t v) const { return adj_[u][v]; }
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return nbrs_[v]; }
  std::size_t degree(std::size_t v) const { return nbrs_[v].size(); }
  std::size_t max_degree() const;
  std::size_t num_edges() const;
  /// Undirected edge list (u < v), lexicographic.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  /// Subgraph induced by the given vertices (in the given order).
  ConflictGraph induced(const std::vector<std::size_t>& vertices) const;
  /// True when no two members of `vertices` are adjacent.
  bool is_independent(const std::vector<std::size_t>& vertices) const;

 private:
  std::vector<LinkId> links_;
  std::vector<std::vector<bool>> adj_;
  std::vector<std::vector<std::size_t>> nbrs_;
};

/// Minimum undirected hop distance between the endpoint sets of two links.
int link_distance(const NetworkGraph& net, LinkId a, LinkId b);

/// Conflict graph over all links of `net` (vertex v == link v).
ConflictGraph build_conflict_graph(const NetworkGraph& net, const InterferenceModel& model);

/// Conflict graph restricted to the given links (vertex order follows `links`).
ConflictGraph build_conflict_graph(const NetworkGraph& net, const InterferenceModel& model,
                                   const std::vector<LinkId>& links);

namespace topo {
struct Line {
  int n;
};
struct SinkTree {
  int depth;
  int degree;
};
struct Grid {
  int rows;
  int cols;
};
struct GridRandom {
  int rows;
  int cols;
  double fail_probability;
  std::uint64_t seed;
};
}  // namespace topo

using TopologyKind = std::variant<topo::Line, topo::SinkTree, topo::Grid, topo::GridRandom>;

/// Generated topologies use node ids 1..N (row-major for grids, BFS order for
/// trees) and emit both directions of every undirected adjacency, forward
/// (lower id -> higher id) first.
NetworkGraph generate_topology(const TopologyKind& kind, const Rational& capacity = Rational(1));

std::string describe(const TopologyKind& kind);

/// Exact enumeration of all maximal independent sets. Throws
/// std::length_error when the graph exceeds `max_vertices` or more than
/// `max_sets` sets exist.
std::vector<std::vector<std::size_t>> maximal_independent_sets(const ConflictGraph& cg,
                                                               std::size_t max_vertices = 64,
                                                               std::size_t max_sets = 200000);

/// All maximal cliques (used for the clique throughput bound).
std::vector<std::vector<std::size_t>> maximal_cliques(const ConflictGraph& cg,
                                                      std::size_t max_sets = 200000);

}  // namespace wdsched
