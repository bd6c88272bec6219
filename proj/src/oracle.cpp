#include "htap/oracle.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "htap/errors.hpp"
#include "htap/metric_tsp.hpp"

namespace htap {

namespace {

// best[mask]: optimal tour cost through the depot and the tasks in `mask`
// (bit i is node i + 1). One Held-Karp table serves every subset.
std::vector<double> all_subset_tour_costs(const Instance& inst) {
  const std::size_t n = inst.task_count();
  const std::size_t subsets = std::size_t{1} << n;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> path(subsets * std::max<std::size_t>(n, 1), inf);
  std::vector<double> best(subsets, inf);
  best[0] = 0.0;
  for (std::size_t j = 0; j < n; ++j) path[(std::size_t{1} << j) * n + j] = inst.distance(kDepot, j + 1);
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    for (std::size_t j = 0; j < n; ++j) {
      const double here = path[mask * n + j];
      if (!(mask >> j & 1) || here == inf) continue;
      best[mask] = std::min(best[mask], here + inst.distance(j + 1, kDepot));
      for (std::size_t next = 0; next < n; ++next) {
        if (mask >> next & 1) continue;
        double& slot = path[(mask | std::size_t{1} << next) * n + next];
        slot = std::min(slot, here + inst.distance(j + 1, next + 1));
      }
    }
  }
  return best;
}

}  // namespace

ExactResult exact_minmax(const Instance& inst, const OracleLimits& limits) {
  const auto started = std::chrono::steady_clock::now();
  const std::size_t n = inst.task_count();
  const std::size_t k = inst.agent_count();
  if (n > limits.max_tasks || n > 20) {
    throw LimitExceeded("exact solver limited to " + std::to_string(std::min<std::size_t>(limits.max_tasks, 20)) +
                        " tasks, instance has " + std::to_string(n));
  }
  if (k > limits.max_agents) {
    throw LimitExceeded("exact solver limited to " + std::to_string(limits.max_agents) + " agents, instance has " +
                        std::to_string(k));
  }
  if (k == 0) throw ArgumentError("instance has no agents");

  const std::vector<double> cost = all_subset_tour_costs(inst);
  const std::vector<Agent>& agents = inst.agents();

  // candidates[i]: agent positions allowed to take task i.
  std::vector<std::vector<std::size_t>> candidates(n);
  for (std::size_t i = 0; i < n; ++i) {
    const TypeId type = inst.tasks()[i].type;
    for (std::size_t j = 0; j < k; ++j) {
      if (type == kGenericType || agents[j].type == type) candidates[i].push_back(j);
    }
    if (candidates[i].empty()) {
      throw ValidationError("task " + std::to_string(inst.tasks()[i].id.value) + " has no compatible agent");
    }
  }

  ExactResult result;
  std::vector<std::size_t> held(k, 0);
  std::vector<std::size_t> best_held;
  double best = std::numeric_limits<double>::infinity();

  // Task order: generic tasks first by id, then typed tasks by id.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const bool ga = inst.tasks()[a].type == kGenericType;
    const bool gb = inst.tasks()[b].type == kGenericType;
    if (ga != gb) return ga;
    return inst.tasks()[a].id < inst.tasks()[b].id;
  });

  auto search = [&](auto& self, std::size_t depth, double running) -> void {
    if (running >= best) return;
    if (depth == n) {
      ++result.partitions_examined;
      best = running;
      best_held = held;
      return;
    }
    const std::size_t task = order[depth];
    for (std::size_t j : candidates[task]) {
      // An empty agent is interchangeable with any earlier empty agent of the
      // same type; only the first one is tried.
      if (held[j] == 0) {
        bool earlier_empty = false;
        for (std::size_t e = 0; e < j && !earlier_empty; ++e) {
          earlier_empty = held[e] == 0 && agents[e].type == agents[j].type;
        }
        if (earlier_empty) continue;
      }
      held[j] |= std::size_t{1} << task;
      self(self, depth + 1, std::max(running, cost[held[j]]));
      held[j] &= ~(std::size_t{1} << task);
    }
  };
  search(search, 0, 0.0);

  Allocation& alloc = result.allocation;
  alloc.algorithm = "exact";
  for (std::size_t j = 0; j < k; ++j) {
    AgentAssignment a{agents[j].id, agents[j].type, {}, {}, Tour{}};
    std::vector<NodeIndex> nodes;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(best_held[j] >> i & 1)) continue;
      const NodeIndex v = Instance::node_of(i);
      nodes.push_back(v);
      (inst.tasks()[i].type == kGenericType ? a.generic : a.specific).push_back(v);
    }
    a.tour = held_karp_tour(inst, nodes, 20);
    alloc.agents.push_back(std::move(a));
  }
  alloc.update_minmax();
  result.minmax = alloc.minmax;
  result.elapsed = std::chrono::steady_clock::now() - started;
  return result;
}

}  // namespace htap
