#include "htap/metric_tsp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>

#include "htap/errors.hpp"

namespace htap {

double walk_cost(const Instance& inst, std::span<const NodeIndex> nodes) {
  double cost = 0.0;
  for (std::size_t i = 1; i < nodes.size(); ++i) cost += inst.distance(nodes[i - 1], nodes[i]);
  return cost;
}

Tour make_tour(const Instance& inst, std::span<const NodeIndex> task_order) {
  Tour tour;
  tour.nodes.clear();
  tour.nodes.push_back(kDepot);
  if (task_order.empty()) return tour;
  tour.nodes.insert(tour.nodes.end(), task_order.begin(), task_order.end());
  tour.nodes.push_back(kDepot);
  tour.cost = walk_cost(inst, tour.nodes);
  return tour;
}

std::optional<std::string> check_tour(const Instance& inst, const Tour& tour) {
  if (tour.nodes.empty()) return "tour has no nodes";
  if (tour.nodes.size() == 1) {
    if (tour.nodes[0] != kDepot) return "empty tour must consist of the depot alone";
    if (tour.cost != 0.0) return "empty tour must cost 0";
    return std::nullopt;
  }
  if (tour.nodes.front() != kDepot || tour.nodes.back() != kDepot) return "tour must start and end at the depot";
  if (tour.nodes.size() == 2) return "tour [depot, depot] is not canonical; use [depot]";
  std::set<NodeIndex> seen;
  for (NodeIndex v : tour.interior()) {
    if (v == kDepot || v >= inst.node_count()) return "tour interior contains a non-task node " + std::to_string(v);
    if (!seen.insert(v).second) return "tour visits node " + std::to_string(v) + " twice";
  }
  const double recomputed = walk_cost(inst, tour.nodes);
  if (std::abs(recomputed - tour.cost) > 1e-9 * recomputed + inst.tolerance()) {
    return "tour cost " + std::to_string(tour.cost) + " differs from recomputed " + std::to_string(recomputed);
  }
  return std::nullopt;
}

namespace {

std::vector<NodeIndex> normalized_subset(const Instance& inst, std::span<const NodeIndex> subset) {
  std::vector<NodeIndex> nodes(subset.begin(), subset.end());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  for (NodeIndex v : nodes) {
    if (v == kDepot || v >= inst.node_count()) {
      throw ArgumentError("subset contains node " + std::to_string(v) + ", which is not a task");
    }
  }
  return nodes;
}

}  // namespace

TourBuilderReport christofides_tour(const Instance& inst, std::span<const NodeIndex> subset,
                                    const ChristofidesOptions& options) {
  const std::vector<NodeIndex> nodes = normalized_subset(inst, subset);
  TourBuilderReport report;
  report.method = TourMethod::kChristofides;
  if (nodes.empty()) return report;

  // Collapse co-located nodes. Location 0 is the depot.
  const double eps = inst.tolerance();
  std::vector<NodeIndex> reps{kDepot};
  std::vector<std::vector<NodeIndex>> members{{}};
  for (NodeIndex v : nodes) {
    std::size_t loc = 0;
    while (loc < reps.size() && inst.distance(reps[loc], v) > eps) ++loc;
    if (loc == reps.size()) {
      reps.push_back(v);
      members.push_back({});
    }
    members[loc].push_back(v);
  }
  const std::size_t n = reps.size();
  auto dist = [&](std::size_t a, std::size_t b) { return inst.distance(reps[a], reps[b]); };

  // Prim from the depot; the lowest index wins among equal keys.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> key(n, inf);
  std::vector<std::size_t> parent(n, 0);
  std::vector<bool> in_tree(n, false);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  key[0] = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_tree[v] && (pick == n || key[v] < key[pick])) pick = v;
    }
    in_tree[pick] = true;
    if (pick != 0) {
      edges.emplace_back(parent[pick], pick);
      report.mst_weight += dist(parent[pick], pick);
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_tree[v] && dist(pick, v) < key[v]) {
        key[v] = dist(pick, v);
        parent[v] = pick;
      }
    }
  }

  std::vector<std::size_t> degree(n, 0);
  for (auto [a, b] : edges) {
    ++degree[a];
    ++degree[b];
  }
  std::vector<std::size_t> odd;
  for (std::size_t v = 0; v < n; ++v) {
    if (degree[v] % 2 == 1) odd.push_back(v);
  }
  report.odd_vertex_count = odd.size();
  const Pairing pairing = min_weight_perfect_matching(
      odd.size(), [&](std::size_t a, std::size_t b) { return dist(odd[a], odd[b]); }, options.matching);
  report.matching_weight = pairing.weight;
  report.exact_matching = pairing.exact;
  for (auto [a, b] : pairing.pairs) edges.emplace_back(odd[a], odd[b]);

  // Hierholzer over the multigraph, always leaving by the lowest-index
  // neighbour (then lowest edge id).
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    adj[edges[e].first].emplace_back(edges[e].second, e);
    adj[edges[e].second].emplace_back(edges[e].first, e);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  std::vector<bool> used(edges.size(), false);
  std::vector<std::size_t> cursor(n, 0);
  std::vector<std::size_t> stack{0};
  std::vector<std::size_t> circuit;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    auto& list = adj[v];
    while (cursor[v] < list.size() && used[list[cursor[v]].second]) ++cursor[v];
    if (cursor[v] == list.size()) {
      circuit.push_back(v);
      stack.pop_back();
    } else {
      const auto [w, e] = list[cursor[v]];
      used[e] = true;
      stack.push_back(w);
    }
  }
  std::reverse(circuit.begin(), circuit.end());

  std::vector<bool> visited(n, false);
  std::vector<NodeIndex> order;
  order.reserve(nodes.size());
  for (std::size_t loc : circuit) {
    if (visited[loc]) continue;
    visited[loc] = true;
    order.insert(order.end(), members[loc].begin(), members[loc].end());
  }
  report.tour = make_tour(inst, order);
  return report;
}

Tour held_karp_tour(const Instance& inst, std::span<const NodeIndex> subset, std::size_t limit) {
  const std::vector<NodeIndex> nodes = normalized_subset(inst, subset);
  const std::size_t n = nodes.size();
  if (n > limit) {
    throw LimitExceeded("exact tour limited to " + std::to_string(limit) + " tasks, got " + std::to_string(n));
  }
  if (n > 20) throw LimitExceeded("exact tour cannot exceed 20 tasks");
  if (n == 0) return Tour{};

  const std::size_t full = (std::size_t{1} << n) - 1;
  const double inf = std::numeric_limits<double>::infinity();
  // cost[mask * n + j]: cheapest path from the depot through `mask`, ending at j.
  std::vector<double> cost((full + 1) * n, inf);
  std::vector<std::uint8_t> prev((full + 1) * n, 0);
  for (std::size_t j = 0; j < n; ++j) cost[(std::size_t{1} << j) * n + j] = inst.distance(kDepot, nodes[j]);
  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!(mask & (std::size_t{1} << j))) continue;
      const double here = cost[mask * n + j];
      if (here == inf) continue;
      for (std::size_t next = 0; next < n; ++next) {
        if (mask & (std::size_t{1} << next)) continue;
        const std::size_t grown = mask | (std::size_t{1} << next);
        const double cand = here + inst.distance(nodes[j], nodes[next]);
        if (cand < cost[grown * n + next]) {
          cost[grown * n + next] = cand;
          prev[grown * n + next] = static_cast<std::uint8_t>(j);
        }
      }
    }
  }
  std::size_t last = 0;
  double best = inf;
  for (std::size_t j = 0; j < n; ++j) {
    const double cand = cost[full * n + j] + inst.distance(nodes[j], kDepot);
    if (cand < best) {
      best = cand;
      last = j;
    }
  }
  std::vector<NodeIndex> order;
  std::size_t mask = full;
  std::size_t at = last;
  while (true) {
    order.push_back(nodes[at]);
    const std::size_t without = mask & ~(std::size_t{1} << at);
    if (without == 0) break;
    at = prev[mask * n + at];
    mask = without;
  }
  std::reverse(order.begin(), order.end());
  return make_tour(inst, order);
}

}  // namespace htap
