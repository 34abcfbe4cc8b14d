#include "wdsched/topology.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include <boost/dynamic_bitset.hpp>

namespace wdsched {

namespace {

constexpr int kUnreachable = std::numeric_limits<int>::max();

}  // namespace

NetworkGraph::NetworkGraph(std::vector<NodeId> nodes, std::vector<Link> links)
    : nodes_(std::move(nodes)), links_(std::move(links)) {
  if (nodes_.empty()) {
    throw std::invalid_argument("network has no nodes");
  }
  {
    std::vector<NodeId> sorted = nodes_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("duplicate node id");
    }
  }
  out_.assign(nodes_.size(), {});
  std::map<std::pair<NodeId, NodeId>, LinkId> seen;
  for (LinkId id = 0; id < links_.size(); ++id) {
    const Link& l = links_[id];
    if (!has_node(l.src) || !has_node(l.dst)) {
      throw std::invalid_argument("link " + std::to_string(id) + " has an unknown endpoint");
    }
    if (l.src == l.dst) {
      throw std::invalid_argument("link " + std::to_string(id) + " is a self-loop");
    }
    if (l.capacity <= 0) {
      throw std::invalid_argument("link " + std::to_string(id) + " has non-positive capacity");
    }
    if (!seen.emplace(std::make_pair(l.src, l.dst), id).second) {
      throw std::invalid_argument("duplicate link (" + std::to_string(l.src) + "," +
                                  std::to_string(l.dst) + ")");
    }
    out_[node_index(l.src)].push_back(id);
  }

  const std::size_t n = nodes_.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const Link& l : links_) {
    std::size_t a = node_index(l.src), b = node_index(l.dst);
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  dist_.assign(n, std::vector<int>(n, kUnreachable));
  for (std::size_t s = 0; s < n; ++s) {
    std::deque<std::size_t> frontier{s};
    dist_[s][s] = 0;
    while (!frontier.empty()) {
      std::size_t u = frontier.front();
      frontier.pop_front();
      for (std::size_t v : adj[u]) {
        if (dist_[s][v] == kUnreachable) {
          dist_[s][v] = dist_[s][u] + 1;
          frontier.push_back(v);
        }
      }
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (dist_[0][v] == kUnreachable) {
      throw std::invalid_argument("network is disconnected");
    }
  }
}

const Link& NetworkGraph::link(LinkId id) const {
  if (id >= links_.size()) {
    throw std::out_of_range("unknown link id " + std::to_string(id));
  }
  return links_[id];
}

bool NetworkGraph::has_node(NodeId node) const {
  return std::find(nodes_.begin(), nodes_.end(), node) != nodes_.end();
}

std::size_t NetworkGraph::node_index(NodeId node) const {
  auto it = std::find(nodes_.begin(), nodes_.end(), node);
  if (it == nodes_.end()) {
    throw std::out_of_range("unknown node id " + std::to_string(node));
  }
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::optional<LinkId> NetworkGraph::find_link(NodeId src, NodeId dst) const {
  if (!has_node(src)) return std::nullopt;
  for (LinkId id : out_[node_index(src)]) {
    if (links_[id].dst == dst) return id;
  }
  return std::nullopt;
}

const std::vector<LinkId>& NetworkGraph::out_links(NodeId node) const {
  return out_[node_index(node)];
}

int NetworkGraph::hop_distance(NodeId a, NodeId b) const {
  return dist_[node_index(a)][node_index(b)];
}

ConflictGraph::ConflictGraph(std::vector<LinkId> links, std::vector<std::vector<bool>> adjacency)
    : links_(std::move(links)), adj_(std::move(adjacency)) {
  const std::size_t n = links_.size();
  if (adj_.size() != n) {
    throw std::invalid_argument("conflict adjacency size mismatch");
  }
  nbrs_.assign(n, {});
  for (std::size_t u = 0; u < n; ++u) {
    if (adj_[u].size() != n) {
      throw std::invalid_argument("conflict adjacency is not square");
    }
    if (adj_[u][u]) {
      throw std::invalid_argument("conflict graph has a self-loop");
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (adj_[u][v] != adj_[v][u]) {
        throw std::invalid_argument("conflict adjacency is not symmetric");
      }
      if (adj_[u][v]) nbrs_[u].push_back(v);
    }
  }
}

std::optional<std::size_t> ConflictGraph::vertex_of(LinkId link) const {
  auto it = std::find(links_.begin(), links_.end(), link);
  if (it == links_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - links_.begin());
}

std::size_t ConflictGraph::max_degree() const {
  std::size_t d = 0;
  for (const auto& nb : nbrs_) d = std::max(d, nb.size());
  return d;
}

std::size_t ConflictGraph::num_edges() const {
  std::size_t twice = 0;
  for (const auto& nb : nbrs_) twice += nb.size();
  return twice / 2;
}

std::vector<std::pair<std::size_t, std::size_t>> ConflictGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t u = 0; u < size(); ++u) {
    for (std::size_t v : nbrs_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

ConflictGraph ConflictGraph::induced(const std::vector<std::size_t>& vertices) const {
  std::vector<LinkId> links;
  std::vector<std::vector<bool>> adj(vertices.size(), std::vector<bool>(vertices.size(), false));
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    links.push_back(links_.at(vertices[i]));
    for (std::size_t j = 0; j < vertices.size(); ++j) {
      adj[i][j] = adj_[vertices[i]][vertices[j]];
    }
  }
  return ConflictGraph(std::move(links), std::move(adj));
}

bool ConflictGraph::is_independent(const std::vector<std::size_t>& vertices) const {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      if (vertices[i] == vertices[j] || adj_[vertices[i]][vertices[j]]) return false;
    }
  }
  return true;
}

int link_distance(const NetworkGraph& net, LinkId a, LinkId b) {
  const Link& la = net.link(a);
  const Link& lb = net.link(b);
  int best = kUnreachable;
  for (NodeId x : {la.src, la.dst}) {
    for (NodeId y : {lb.src, lb.dst}) {
      best = std::min(best, net.hop_distance(x, y));
    }
  }
  return best;
}

ConflictGraph build_conflict_graph(const NetworkGraph& net, const InterferenceModel& model,
                                   const std::vector<LinkId>& links) {
  if (model.phi < 0) {
    throw std::invalid_argument("phi must be nonnegative");
  }
  const std::size_t n = links.size();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      bool conflict = model.phi >= static_cast<int>(net.num_links()) - 1 && net.num_links() > 1
                          ? true
                          : link_distance(net, links[u], links[v]) < model.phi;
      adj[u][v] = adj[v][u] = conflict;
    }
  }
  return ConflictGraph(links, std::move(adj));
}

ConflictGraph build_conflict_graph(const NetworkGraph& net, const InterferenceModel& model) {
  std::vector<LinkId> all(net.num_links());
  for (LinkId i = 0; i < all.size(); ++i) all[i] = i;
  return build_conflict_graph(net, model, all);
}

namespace {

struct EdgeListBuilder {
  std::vector<NodeId> nodes;
  std::vector<std::pair<NodeId, NodeId>> undirected;

  NetworkGraph build(const Rational& capacity) const {
    std::vector<Link> links;
    links.reserve(undirected.size() * 2);
    for (auto [a, b] : undirected) {
      links.push_back({a, b, capacity});
      links.push_back({b, a, capacity});
    }
    return NetworkGraph(nodes, std::move(links));
  }
};

EdgeListBuilder line_edges(int n) {
  if (n < 2) throw std::invalid_argument("line topology needs at least 2 nodes");
  EdgeListBuilder b;
  for (int i = 1; i <= n; ++i) b.nodes.push_back(i);
  for (int i = 1; i < n; ++i) b.undirected.emplace_back(i, i + 1);
  return b;
}

EdgeListBuilder tree_edges(int depth, int degree) {
  if (depth < 1 || degree < 1) throw std::invalid_argument("sink tree needs depth >= 1 and degree >= 1");
  EdgeListBuilder b;
  b.nodes.push_back(1);
  std::vector<NodeId> level{1};
  NodeId next = 2;
  for (int d = 0; d < depth; ++d) {
    std::vector<NodeId> children;
    for (NodeId parent : level) {
      for (int c = 0; c < degree; ++c) {
        b.nodes.push_back(next);
        b.undirected.emplace_back(parent, next);
        children.push_back(next++);
      }
    }
    level = std::move(children);
  }
  return b;
}

EdgeListBuilder grid_edges(int rows, int cols) {
  if (rows < 1 || cols < 1 || rows * cols < 2) throw std::invalid_argument("grid needs at least 2 nodes");
  EdgeListBuilder b;
  auto id = [cols](int r, int c) { return r * cols + c + 1; };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) b.nodes.push_back(id(r, c));
  }
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) b.undirected.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) b.undirected.emplace_back(id(r, c), id(r + 1, c));
    }
  }
  std::sort(b.undirected.begin(), b.undirected.end());
  return b;
}

bool connected(const std::vector<NodeId>& nodes, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  std::map<NodeId, std::vector<NodeId>> adj;
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::map<NodeId, bool> seen;
  std::deque<NodeId> q{nodes.front()};
  seen[nodes.front()] = true;
  std::size_t count = 1;
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop_front();
    for (NodeId v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        q.push_back(v);
      }
    }
  }
  return count == nodes.size();
}

}  // namespace

NetworkGraph generate_topology(const TopologyKind& kind, const Rational& capacity) {
  return std::visit(
      [&](const auto& k) -> NetworkGraph {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, topo::Line>) {
          return line_edges(k.n).build(capacity);
        } else if constexpr (std::is_same_v<T, topo::SinkTree>) {
          return tree_edges(k.depth, k.degree).build(capacity);
        } else if constexpr (std::is_same_v<T, topo::Grid>) {
          return grid_edges(k.rows, k.cols).build(capacity);
        } else {
          if (!(k.fail_probability >= 0.0 && k.fail_probability <= 1.0)) {
            throw std::invalid_argument("failure probability must lie in [0,1]");
          }
          EdgeListBuilder full = grid_edges(k.rows, k.cols);
          std::mt19937_64 rng(k.seed);
          std::bernoulli_distribution fail(k.fail_probability);
          for (int attempt = 0; attempt < 100000; ++attempt) {
            EdgeListBuilder b;
            b.nodes = full.nodes;
            for (const auto& e : full.undirected) {
              if (!fail(rng)) b.undirected.push_back(e);
            }
            if (connected(b.nodes, b.undirected)) return b.build(capacity);
          }
          throw std::runtime_error("grid_random: no connected sample after 100000 draws");
        }
      },
      kind);
}

std::string describe(const TopologyKind& kind) {
  std::ostringstream os;
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, topo::Line>) {
          os << "line(" << k.n << ")";
        } else if constexpr (std::is_same_v<T, topo::SinkTree>) {
          os << "sink_tree(" << k.depth << "," << k.degree << ")";
        } else if constexpr (std::is_same_v<T, topo::Grid>) {
          os << "grid(" << k.rows << "," << k.cols << ")";
        } else {
          os << "grid_random(" << k.rows << "," << k.cols << "," << k.fail_probability << ","
             << k.seed << ")";
        }
      },
      kind);
  return os.str();
}

namespace {

using Bits = boost::dynamic_bitset<>;

// Bron-Kerbosch with pivoting over an adjacency given as bitsets.
class CliqueEnumerator {
 public:
  CliqueEnumerator(std::vector<Bits> adj, std::size_t max_sets)
      : adj_(std::move(adj)), max_sets_(max_sets) {}

  std::vector<std::vector<std::size_t>> run() {
    const std::size_t n = adj_.size();
    Bits p(n), x(n), r(n);
    p.set();
    if (n == 0) return {{}};
    expand(r, p, x);
    std::sort(out_.begin(), out_.end());
    return std::move(out_);
  }

 private:
  void expand(Bits& r, Bits p, Bits x) {
    if (p.none() && x.none()) {
      if (out_.size() >= max_sets_) {
        throw std::length_error("set enumeration exceeds guard of " + std::to_string(max_sets_));
      }
      std::vector<std::size_t> set;
      for (auto i = r.find_first(); i != Bits::npos; i = r.find_next(i)) set.push_back(i);
      out_.push_back(std::move(set));
      return;
    }
    Bits px = p | x;
    std::size_t pivot = px.find_first();
    std::size_t best = 0;
    for (auto u = px.find_first(); u != Bits::npos; u = px.find_next(u)) {
      std::size_t c = (p & adj_[u]).count();
      if (c > best || u == pivot) {
        if (c >= best) {
          best = c;
          pivot = u;
        }
      }
    }
    Bits candidates = p - adj_[pivot];
    for (auto v = candidates.find_first(); v != Bits::npos; v = candidates.find_next(v)) {
      r.set(v);
      expand(r, p & adj_[v], x & adj_[v]);
      r.reset(v);
      p.reset(v);
      x.set(v);
    }
  }

  std::vector<Bits> adj_;
  std::size_t max_sets_;
  std::vector<std::vector<std::size_t>> out_;
};

std::vector<Bits> bit_adjacency(const ConflictGraph& cg, bool complement) {
  const std::size_t n = cg.size();
  std::vector<Bits> adj(n, Bits(n));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u != v && cg.adjacent(u, v) != complement) adj[u].set(v);
    }
  }
  return adj;
}

}  // namespace

std::vector<std::vector<std::size_t>> maximal_independent_sets(const ConflictGraph& cg,
                                                               std::size_t max_vertices,
                                                               std::size_t max_sets) {
  if (cg.size() > max_vertices) {
    throw std::length_error("conflict graph with " + std::to_string(cg.size()) +
                            " vertices exceeds the enumeration guard of " +
                            std::to_string(max_vertices));
  }
  return CliqueEnumerator(bit_adjacency(cg, true), max_sets).run();
}

std::vector<std::vector<std::size_t>> maximal_cliques(const ConflictGraph& cg, std::size_t max_sets) {
  return CliqueEnumerator(bit_adjacency(cg, false), max_sets).run();
}

}  // namespace wdsched
