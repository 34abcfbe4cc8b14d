#include "wdsched/traffic.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

namespace wdsched {

void SliceAssignment::set(std::size_t flow, LinkId link, Rational width) {
  if (width < 0) throw std::invalid_argument("negative slice width");
  widths_[{flow, link}] = std::move(width);
}

Rational SliceAssignment::width(std::size_t flow, LinkId link) const {
  auto it = widths_.find({flow, link});
  return it == widths_.end() ? Rational(0) : it->second;
}

Rational SliceAssignment::link_total(LinkId link) const {
  Rational total = 0;
  for (const auto& [key, w] : widths_) {
    if (key.second == link) total += w;
  }
  return total;
}

SliceAssignment capacity_slices(const Scenario& scn) {
  SliceAssignment s;
  for (std::size_t i = 0; i < scn.flows.size(); ++i) {
    for (LinkId e : scn.flows[i].route) s.set(i, e, scn.net.link(e).capacity);
  }
  return s;
}

std::vector<LinkId> shortest_route(const NetworkGraph& net, NodeId src, NodeId dst) {
  if (src == dst) throw std::invalid_argument("route endpoints coincide");
  const std::size_t n = net.num_nodes();
  const std::size_t s = net.node_index(src), d = net.node_index(dst);
  constexpr int inf = std::numeric_limits<int>::max();
  // Directed distance of every node to dst, over reversed links.
  std::vector<std::vector<LinkId>> in(n);
  for (LinkId id = 0; id < net.num_links(); ++id) in[net.node_index(net.link(id).dst)].push_back(id);
  std::vector<int> dist(n, inf);
  dist[d] = 0;
  std::deque<std::size_t> q{d};
  while (!q.empty()) {
    std::size_t v = q.front();
    q.pop_front();
    for (LinkId id : in[v]) {
      std::size_t u = net.node_index(net.link(id).src);
      if (dist[u] == inf) {
        dist[u] = dist[v] + 1;
        q.push_back(u);
      }
    }
  }
  if (dist[s] == inf) {
    throw std::invalid_argument("no directed path from " + std::to_string(src) + " to " +
                                std::to_string(dst));
  }
  std::vector<LinkId> route;
  NodeId cur = src;
  while (cur != dst) {
    int here = dist[net.node_index(cur)];
    std::optional<LinkId> best;
    for (LinkId id : net.out_links(cur)) {
      NodeId next = net.link(id).dst;
      if (dist[net.node_index(next)] == here - 1 && (!best || next < net.link(*best).dst)) best = id;
    }
    route.push_back(*best);
    cur = net.link(*best).dst;
  }
  return route;
}

std::vector<Flow> random_flows(const NetworkGraph& net, std::size_t count, std::uint64_t seed,
                               const Rational& lambda, int tau) {
  if (count == 0) throw std::invalid_argument("flow count must be positive");
  const std::size_t n = net.num_nodes();
  const std::size_t pairs = n * (n - 1);
  if (count > pairs) {
    throw std::invalid_argument("requested " + std::to_string(count) + " flows but only " +
                                std::to_string(pairs) + " ordered pairs exist");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pairs - 1);
  std::set<std::size_t> chosen;
  std::vector<Flow> flows;
  while (flows.size() < count) {
    std::size_t p = pick(rng);
    if (!chosen.insert(p).second) continue;
    std::size_t a = p / (n - 1), b = p % (n - 1);
    if (b >= a) ++b;
    Flow f;
    f.id = static_cast<int>(flows.size());
    f.src = net.nodes()[a];
    f.dst = net.nodes()[b];
    f.lambda = lambda;
    f.tau = tau;
    f.route = shortest_route(net, f.src, f.dst);
    flows.push_back(std::move(f));
  }
  return flows;
}

std::string to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::Route: return "route";
    case Violation::Kind::Overload: return "overload";
    case Violation::Kind::Deadline: return "deadline";
    case Violation::Kind::Rate: return "rate";
  }
  return "unknown";
}

std::vector<Violation> validate_scenario(const Scenario& scn) {
  std::vector<Violation> out;
  for (const Flow& f : scn.flows) {
    if (f.lambda <= 0) {
      out.push_back({Violation::Kind::Rate, f.id, -1, "flow " + std::to_string(f.id) + " has non-positive rate"});
    }
    bool route_ok = !f.route.empty();
    NodeId at = f.src;
    std::set<NodeId> visited{at};
    for (LinkId e : f.route) {
      if (e >= scn.net.num_links()) {
        route_ok = false;
        break;
      }
      const Link& l = scn.net.link(e);
      if (l.src != at || !visited.insert(l.dst).second) {
        route_ok = false;
        break;
      }
      at = l.dst;
    }
    if (!route_ok || at != f.dst) {
      out.push_back({Violation::Kind::Route, f.id, -1,
                     "flow " + std::to_string(f.id) + " route is not a simple path from source to destination"});
      continue;
    }
    if (f.tau < static_cast<int>(f.route.size())) {
      out.push_back({Violation::Kind::Deadline, f.id, -1,
                     "flow " + std::to_string(f.id) + " deadline " + std::to_string(f.tau) +
                         " is shorter than its route of " + std::to_string(f.route.size()) + " hops"});
    }
  }
  if (!out.empty() && std::any_of(out.begin(), out.end(), [](const Violation& v) {
        return v.kind == Violation::Kind::Route;
      })) {
    return out;
  }
  for (LinkId e = 0; e < scn.net.num_links(); ++e) {
    Rational load = link_load(scn, e);
    if (load > scn.net.link(e).capacity) {
      out.push_back({Violation::Kind::Overload, -1, static_cast<long>(e),
                     "link " + std::to_string(e) + " load " + to_string(load) + " exceeds capacity " +
                         to_string(scn.net.link(e).capacity)});
    }
  }
  return out;
}

Rational link_load(const Scenario& scn, LinkId link) {
  Rational load = 0;
  for (const Flow& f : scn.flows) {
    if (std::find(f.route.begin(), f.route.end(), link) != f.route.end()) load += f.lambda;
  }
  return load;
}

std::vector<LinkId> used_links(const Scenario& scn) {
  std::set<LinkId> s;
  for (const Flow& f : scn.flows) s.insert(f.route.begin(), f.route.end());
  return {s.begin(), s.end()};
}

}  // namespace wdsched
