#include "htap/allocators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "htap/tour_split.hpp"

namespace htap {

std::vector<NodeIndex> AgentAssignment::tasks() const {
  std::vector<NodeIndex> all(specific);
  all.insert(all.end(), generic.begin(), generic.end());
  std::sort(all.begin(), all.end());
  return all;
}

void Allocation::update_minmax() {
  minmax = 0.0;
  for (const AgentAssignment& a : agents) minmax = std::max(minmax, a.tour.cost);
}

namespace {

std::vector<AgentAssignment> empty_assignments(const Instance& inst) {
  std::vector<AgentAssignment> out;
  out.reserve(inst.agent_count());
  for (const Agent& a : inst.agents()) out.push_back({a.id, a.type, {}, {}, Tour{}});
  return out;
}

// Splits `nodes` by task type into the specific and generic lists.
void distribute(const Instance& inst, std::span<const NodeIndex> nodes, AgentAssignment& into) {
  into.specific.clear();
  into.generic.clear();
  for (NodeIndex v : nodes) {
    (inst.task_at(v).type == kGenericType ? into.generic : into.specific).push_back(v);
  }
  std::sort(into.specific.begin(), into.specific.end());
  std::sort(into.generic.begin(), into.generic.end());
}

Tour christofides_of(const Instance& inst, const AgentAssignment& a, const ChristofidesOptions& options) {
  const std::vector<NodeIndex> all = a.tasks();
  return christofides_tour(inst, all, options).tour;
}

// Type-specific phase shared by CycleSplit and HeteroSplit: per type, a
// Christofides tour on T_i split among that type's agents in id order.
// Returns the largest subtour cost.
double assign_type_specific(const Instance& inst, std::vector<AgentAssignment>& agents,
                            const ChristofidesOptions& options) {
  double largest = 0.0;
  for (std::int64_t type = 1; type <= inst.type_count(); ++type) {
    const std::vector<std::size_t> members = inst.agents_of_type(TypeId(type));
    if (members.empty()) continue;
    const std::vector<NodeIndex> pool = inst.task_nodes_of_type(TypeId(type));
    const Tour tour = christofides_tour(inst, pool, options).tour;
    const SplitResult split = splitour(tour, members.size(), inst);
    for (std::size_t s = 0; s < members.size(); ++s) {
      const auto part = split.subtours[s].interior();
      agents[members[s]].specific.assign(part.begin(), part.end());
      std::sort(agents[members[s]].specific.begin(), agents[members[s]].specific.end());
      largest = std::max(largest, split.subtours[s].cost);
    }
  }
  return largest;
}

}  // namespace

std::vector<std::string> verify_allocation(const Instance& inst, const Allocation& alloc) {
  std::vector<std::string> problems;
  if (alloc.agents.size() != inst.agent_count()) {
    problems.push_back("allocation lists " + std::to_string(alloc.agents.size()) + " agents, instance has " +
                       std::to_string(inst.agent_count()));
    return problems;
  }
  std::vector<int> times_covered(inst.node_count(), 0);
  double worst = 0.0;
  for (std::size_t j = 0; j < alloc.agents.size(); ++j) {
    const AgentAssignment& a = alloc.agents[j];
    const Agent& expected = inst.agents()[j];
    const std::string who = "agent " + std::to_string(a.agent.value);
    if (a.agent != expected.id || a.type != expected.type) {
      problems.push_back(who + " does not match instance agent " + std::to_string(expected.id.value));
      continue;
    }
    for (NodeIndex v : a.specific) {
      if (v == kDepot || v >= inst.node_count()) {
        problems.push_back(who + " holds non-task node " + std::to_string(v));
      } else if (inst.task_at(v).type != a.type && (alloc.partition || j != 0)) {
        // The non-partition naive allocation gives its first agent every task.
        problems.push_back(who + " holds task " + std::to_string(inst.task_at(v).id.value) +
                           " of another type as specific work");
      }
    }
    for (NodeIndex v : a.generic) {
      if (v == kDepot || v >= inst.node_count()) {
        problems.push_back(who + " holds non-task node " + std::to_string(v));
      } else if (inst.task_at(v).type != kGenericType) {
        problems.push_back(who + " holds typed task " + std::to_string(inst.task_at(v).id.value) +
                           " as generic work");
      }
    }
    const std::vector<NodeIndex> held = a.tasks();
    if (std::adjacent_find(held.begin(), held.end()) != held.end()) {
      problems.push_back(who + " holds a task twice");
    }
    for (NodeIndex v : held) {
      if (v != kDepot && v < inst.node_count()) ++times_covered[v];
    }
    if (auto bad = check_tour(inst, a.tour)) problems.push_back(who + ": " + *bad);
    std::vector<NodeIndex> visited(a.tour.interior().begin(), a.tour.interior().end());
    std::sort(visited.begin(), visited.end());
    if (visited != held) problems.push_back(who + "'s tour does not visit exactly its tasks");
    worst = std::max(worst, a.tour.cost);
  }
  for (NodeIndex v = 1; v < inst.node_count(); ++v) {
    if (times_covered[v] == 0) {
      problems.push_back("task " + std::to_string(inst.task_at(v).id.value) + " is not allocated");
    } else if (alloc.partition && times_covered[v] > 1) {
      problems.push_back("task " + std::to_string(inst.task_at(v).id.value) + " is allocated " +
                         std::to_string(times_covered[v]) + " times");
    }
  }
  if (std::abs(worst - alloc.minmax) > 1e-9 * worst + inst.tolerance()) {
    problems.push_back("recorded minmax " + std::to_string(alloc.minmax) + " differs from largest tour cost " +
                       std::to_string(worst));
  }
  return problems;
}

Allocation naive_allocation(const Instance& inst, const ChristofidesOptions& options) {
  Allocation out;
  out.algorithm = "naive";
  out.partition = false;
  out.agents = empty_assignments(inst);
  for (std::size_t j = 0; j < out.agents.size(); ++j) {
    AgentAssignment& a = out.agents[j];
    if (j == 0) {
      distribute(inst, inst.all_task_nodes(), a);
    } else {
      a.specific = inst.task_nodes_of_type(a.type);
    }
    a.tour = christofides_of(inst, a, options);
  }
  out.update_minmax();
  return out;
}

Allocation cycle_split(const Instance& inst, const ChristofidesOptions& options) {
  Allocation out;
  out.algorithm = "cyclesplit";
  out.agents = empty_assignments(inst);
  assign_type_specific(inst, out.agents, options);

  const std::vector<NodeIndex> generic = inst.task_nodes_of_type(kGenericType);
  const Tour generic_tour = christofides_tour(inst, generic, options).tour;
  const SplitResult split = splitour(generic_tour, out.agents.size(), inst);
  for (std::size_t j = 0; j < out.agents.size(); ++j) {
    const auto part = split.subtours[j].interior();
    out.agents[j].generic.assign(part.begin(), part.end());
    std::sort(out.agents[j].generic.begin(), out.agents[j].generic.end());
    out.agents[j].tour = christofides_of(inst, out.agents[j], options);
  }
  out.update_minmax();
  return out;
}

RebalanceOutcome rebalance_within_types(const Instance& inst, const Allocation& alloc, bool guard,
                                        const ChristofidesOptions& options) {
  RebalanceOutcome out{alloc, {}};
  const double eps = inst.tolerance();
  std::set<std::int64_t> types;
  for (const AgentAssignment& a : alloc.agents) types.insert(a.type.value);
  for (std::int64_t type : types) {
    std::vector<std::size_t> members;
    std::vector<NodeIndex> pool;
    double before = 0.0;
    for (std::size_t j = 0; j < alloc.agents.size(); ++j) {
      if (alloc.agents[j].type.value != type) continue;
      members.push_back(j);
      const std::vector<NodeIndex> held = alloc.agents[j].tasks();
      pool.insert(pool.end(), held.begin(), held.end());
      before = std::max(before, alloc.agents[j].tour.cost);
    }
    const Tour tour = christofides_tour(inst, pool, options).tour;
    const SplitResult split = splitour(tour, members.size(), inst);
    const double after = split.max_subtour_cost();
    if (guard && after > before + eps) {
      out.guarded_types.push_back(TypeId(type));
      out.allocation.notes.push_back("rebalancing type " + std::to_string(type) + " would raise its largest tour from " +
                                     std::to_string(before) + " to " + std::to_string(after) +
                                     "; kept the earlier assignment");
      continue;
    }
    for (std::size_t s = 0; s < members.size(); ++s) {
      AgentAssignment& a = out.allocation.agents[members[s]];
      distribute(inst, split.subtours[s].interior(), a);
      a.tour = split.subtours[s];
    }
  }
  out.allocation.update_minmax();
  return out;
}

HeteroSplitResult hetero_split(const Instance& inst, double lambda, const HeteroSplitOptions& options) {
  if (!(lambda > 0.0)) throw ArgumentError("hetero_split needs lambda > 0");
  HeteroSplitResult result;
  result.lambda = lambda;
  const double eps = inst.tolerance();
  const double budget = lambda + eps;

  Allocation alloc;
  alloc.algorithm = "heterosplit";
  alloc.agents = empty_assignments(inst);
  assign_type_specific(inst, alloc.agents, options.christofides);

  // Christofides cost depends only on the task set, so one cache serves
  // every agent.
  std::map<std::vector<NodeIndex>, double> cache;
  auto cost_of = [&](std::vector<NodeIndex> set) {
    std::sort(set.begin(), set.end());
    auto it = cache.find(set);
    if (it != cache.end()) return it->second;
    const double c = christofides_tour(inst, set, options.christofides).tour.cost;
    cache.emplace(std::move(set), c);
    return c;
  };
  auto cost_with = [&](const AgentAssignment& a, NodeIndex extra) {
    std::vector<NodeIndex> set = a.tasks();
    set.push_back(extra);
    return cost_of(std::move(set));
  };

  for (const AgentAssignment& a : alloc.agents) {
    const double c = cost_of(a.tasks());
    if (c > budget) {
      result.infeasibility = Infeasibility{"agent " + std::to_string(a.agent.value) +
                                               "'s type-specific tour alone costs " + std::to_string(c),
                                           std::nullopt,
                                           {{a.agent, c}}};
      return result;
    }
  }

  const std::vector<NodeIndex> generic = inst.task_nodes_of_type(kGenericType);
  const Tour walk = christofides_tour(inst, generic, options.christofides).tour;
  const auto order = walk.interior();
  std::vector<bool> free(alloc.agents.size(), true);
  std::size_t next = 0;
  while (next < order.size()) {
    const NodeIndex t = order[next];
    std::size_t chosen = alloc.agents.size();
    double chosen_cost = 0.0;
    std::vector<std::pair<AgentId, double>> candidates;
    for (std::size_t j = 0; j < alloc.agents.size(); ++j) {
      if (!free[j]) continue;
      const double c = cost_with(alloc.agents[j], t);
      candidates.emplace_back(alloc.agents[j].agent, c);
      if (chosen == alloc.agents.size() || c < chosen_cost) {
        chosen = j;
        chosen_cost = c;
      }
    }
    if (chosen == alloc.agents.size()) {
      result.infeasibility = Infeasibility{"generic tasks remain but every agent is busy", t, {}};
      return result;
    }
    if (chosen_cost > budget) {
      result.infeasibility =
          Infeasibility{"no free agent can take task " + std::to_string(inst.task_at(t).id.value) + " within budget",
                        t, std::move(candidates)};
      return result;
    }
    AgentAssignment& a = alloc.agents[chosen];
    a.generic.push_back(t);
    ++next;
    while (next < order.size() && cost_with(a, order[next]) <= budget) {
      a.generic.push_back(order[next]);
      ++next;
    }
    std::sort(a.generic.begin(), a.generic.end());
    free[chosen] = false;
  }

  for (AgentAssignment& a : alloc.agents) a.tour = christofides_of(inst, a, options.christofides);
  alloc.update_minmax();

  if (options.rebalance) {
    RebalanceOutcome rebalanced = rebalance_within_types(inst, alloc, true, options.christofides);
    alloc = std::move(rebalanced.allocation);
  }
  alloc.algorithm = "heterosplit";
  result.allocation = std::move(alloc);
  return result;
}

HeteroMinMaxResult hetero_minmax_split(const Instance& inst, const MinMaxOptions& options) {
  LambdaSearch search;
  const ChristofidesOptions& copts = options.split.christofides;

  search.lo = 2.0 * inst.max_depot_distance();
  double hi = 0.0;
  for (std::int64_t type = 1; type <= inst.type_count(); ++type) {
    const auto pool = inst.task_nodes_of_type(TypeId(type));
    hi = std::max(hi, christofides_tour(inst, pool, copts).tour.cost);
  }
  const auto generic = inst.task_nodes_of_type(kGenericType);
  const Tour generic_tour = christofides_tour(inst, generic, copts).tour;
  hi += generic_tour.cost;
  search.hi_initial = hi;
  search.tolerance = options.tolerance > 0.0 ? options.tolerance : 1e-6 * hi;

  {
    std::vector<AgentAssignment> scratch = empty_assignments(inst);
    search.lambda1 = assign_type_specific(inst, scratch, copts);
    const SplitResult split = splitour(generic_tour, inst.agent_count(), inst);
    search.generic_tour_cost = split.tour_cost;
    search.generic_c_max = split.c_max;
    search.guarantee_lambda = search.lambda1 + split.bound;
  }

  if (inst.task_count() == 0) {
    Allocation empty;
    empty.algorithm = "heterominmax";
    empty.agents = empty_assignments(inst);
    search.hi_final = search.result_lambda = search.bracket_feasible = search.bracket_infeasible = 0.0;
    return {std::move(empty), std::move(search)};
  }

  std::optional<Allocation> best;
  double best_lambda = 0.0;
  auto probe = [&](double lambda) {
    HeteroSplitResult r = hetero_split(inst, lambda, options.split);
    LambdaProbe record{lambda, r.feasible(), std::nullopt};
    if (r.feasible()) {
      record.minmax = r.allocation->minmax;
      if (!best || r.allocation->minmax < best->minmax ||
          (r.allocation->minmax == best->minmax && lambda < best_lambda)) {
        best = std::move(*r.allocation);
        best_lambda = lambda;
      }
    }
    search.probes.push_back(record);
    return record.feasible;
  };

  double infeasible = search.lo;
  double feasible = hi;
  if (probe(search.lo)) {
    feasible = search.lo;
  } else {
    while (!probe(hi)) {
      if (search.expansions == options.max_expansions) {
        search.hi_final = hi;
        search.bracket_infeasible = hi;
        throw SearchFailure("no feasible budget found up to " + std::to_string(hi), std::move(search));
      }
      infeasible = hi;
      hi *= 2.0;
      ++search.expansions;
    }
    feasible = hi;
    while (feasible - infeasible > search.tolerance) {
      // Nothing can beat the lower bound, so stop once it is reached.
      if (best->minmax <= search.lo + search.tolerance) break;
      const double mid = 0.5 * (infeasible + feasible);
      if (probe(mid)) {
        feasible = mid;
      } else {
        infeasible = mid;
      }
    }
  }
  search.hi_final = hi;
  search.bracket_feasible = feasible;
  search.bracket_infeasible = infeasible;
  search.result_lambda = best_lambda;

  Allocation alloc = std::move(*best);
  alloc.algorithm = "heterominmax";
  return {std::move(alloc), std::move(search)};
}

std::string allocation_to_json(const Instance& inst, const Allocation& alloc, const LambdaSearch* search) {
  using nlohmann::json;
  json doc;
  doc["algorithm"] = alloc.algorithm;
  doc["minmax"] = alloc.minmax;
  doc["partition"] = alloc.partition;
  json agents = json::array();
  for (const AgentAssignment& a : alloc.agents) {
    auto ids = [&](const std::vector<NodeIndex>& nodes) {
      json list = json::array();
      for (NodeIndex v : nodes) list.push_back(inst.task_at(v).id.value);
      return list;
    };
    agents.push_back({{"id", a.agent.value},
                      {"type", a.type.value},
                      {"tasks", ids(a.tasks())},
                      {"specific", ids(a.specific)},
                      {"generic", ids(a.generic)},
                      {"tour", a.tour.nodes},
                      {"cost", a.tour.cost}});
  }
  doc["agents"] = std::move(agents);
  doc["notes"] = alloc.notes;
  if (search) {
    json probes = json::array();
    for (const LambdaProbe& p : search->probes) {
      json jp = {{"lambda", p.lambda}, {"feasible", p.feasible}};
      jp["minmax"] = p.minmax ? json(*p.minmax) : json(nullptr);
      probes.push_back(std::move(jp));
    }
    doc["lambda_trace"] = {{"lo", search->lo},
                           {"hi_initial", search->hi_initial},
                           {"hi_final", search->hi_final},
                           {"tolerance", search->tolerance},
                           {"expansions", search->expansions},
                           {"result_lambda", search->result_lambda},
                           {"bracket_feasible", search->bracket_feasible},
                           {"bracket_infeasible", search->bracket_infeasible},
                           {"lambda1", search->lambda1},
                           {"generic_tour_cost", search->generic_tour_cost},
                           {"generic_c_max", search->generic_c_max},
                           {"guarantee_lambda", search->guarantee_lambda},
                           {"probes", std::move(probes)}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace htap
