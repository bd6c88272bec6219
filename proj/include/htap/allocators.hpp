#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "htap/errors.hpp"
#include "htap/instance.hpp"
#include "htap/metric_tsp.hpp"
#include "htap/types.hpp"

namespace htap {

/// What one agent ends up doing.
struct AgentAssignment {
  AgentId agent;
  TypeId type;
  std::vector<NodeIndex> specific;  ///< V_j, tasks of the agent's own type
  std::vector<NodeIndex> generic;   ///< R_j, generic tasks
  Tour tour;

  /// S_j = V_j ∪ R_j, ascending.
  std::vector<NodeIndex> tasks() const;
};

struct Allocation {
  std::string algorithm;
  /// False only for the naive allocation, which hands agent 1 every task
  /// and duplicates type-specific work.
  bool partition = true;
  std::vector<AgentAssignment> agents;  ///< in ascending agent id order
  double minmax = 0.0;
  /// Free-form diagnostics (e.g. when the rebalancing guard kept a type's
  /// earlier assignment).
  std::vector<std::string> notes;

  void update_minmax();
};

/// Lists every broken Allocation invariant: agent coverage, type
/// compatibility, partition (or cover, for non-partitions), tour contents
/// and costs, and the recorded min-max.
std::vector<std::string> verify_allocation(const Instance& inst, const Allocation& alloc);

/// Every task in one agent's tour: agent 1 tours all of T; every other agent
/// tours its own type's tasks.
Allocation naive_allocation(const Instance& inst, const ChristofidesOptions& options = {});

/// Type-specific tours split among agents of each type, the generic tour
/// split among all agents, then one Christofides tour per agent.
Allocation cycle_split(const Instance& inst, const ChristofidesOptions& options = {});

struct HeteroSplitOptions {
  ChristofidesOptions christofides;
  /// Run the per-type rebalancing phase.
  bool rebalance = true;
};

/// Why a budget could not be met.
struct Infeasibility {
  std::string reason;
  std::optional<NodeIndex> blocking_task;
  /// Cost each free agent would have had with the blocking task.
  std::vector<std::pair<AgentId, double>> candidate_costs;
};

struct HeteroSplitResult {
  double lambda = 0.0;
  std::optional<Allocation> allocation;
  std::optional<Infeasibility> infeasibility;

  bool feasible() const { return allocation.has_value(); }
};

/// Allocation in which every agent's tour costs at most `lambda`, or an
/// infeasibility verdict. Throws ArgumentError for lambda <= 0.
HeteroSplitResult hetero_split(const Instance& inst, double lambda, const HeteroSplitOptions& options = {});

struct RebalanceOutcome {
  Allocation allocation;
  /// Types whose pooled re-split was worse than before and was discarded.
  std::vector<TypeId> guarded_types;
};

/// Pools the tasks held by each type's agents, rebuilds one tour and splits
/// it among them. With `guard`, a type keeps its previous assignment when
/// the re-split would raise that type's largest tour cost.
RebalanceOutcome rebalance_within_types(const Instance& inst, const Allocation& alloc, bool guard = true,
                                        const ChristofidesOptions& options = {});

struct LambdaProbe {
  double lambda = 0.0;
  bool feasible = false;
  std::optional<double> minmax;
};

/// Trace of the budget search.
struct LambdaSearch {
  double lo = 0.0;          ///< 2 * max direct depot distance
  double hi_initial = 0.0;  ///< max over types of C(T_i) plus C(T_0)
  double hi_final = 0.0;    ///< top of the window after any expansions
  double tolerance = 0.0;
  std::size_t expansions = 0;
  std::vector<LambdaProbe> probes;
  double result_lambda = 0.0;
  /// Smallest feasible and largest infeasible budgets probed when the
  /// search stopped (the infeasible side is `lo` if never probed infeasible).
  double bracket_feasible = 0.0;
  double bracket_infeasible = 0.0;

  // Quantities from the approximation argument: the largest type-specific
  // subtour after the first phase, and the split of the generic tour into k.
  double lambda1 = 0.0;
  double generic_tour_cost = 0.0;
  double generic_c_max = 0.0;
  /// lambda1 + (L - 2 c_max)/k + 2 c_max, a budget the argument says is feasible.
  double guarantee_lambda = 0.0;
};

class SearchFailure : public Error {
 public:
  SearchFailure(const std::string& what, LambdaSearch trace) : Error(what), trace_(std::move(trace)) {}
  const LambdaSearch& trace() const { return trace_; }

 private:
  LambdaSearch trace_;
};

struct MinMaxOptions {
  /// Absolute search tolerance; <= 0 selects 1e-6 times the initial window top.
  double tolerance = 0.0;
  std::size_t max_expansions = 8;
  HeteroSplitOptions split;
};

struct HeteroMinMaxResult {
  Allocation allocation;
  LambdaSearch search;
};

/// Binary search over the budget; returns the best feasible allocation seen.
/// Throws SearchFailure if even the expanded window top is infeasible.
HeteroMinMaxResult hetero_minmax_split(const Instance& inst, const MinMaxOptions& options = {});

/// Allocation document: {"algorithm", "minmax", "partition", "agents": [...],
/// "notes", "lambda_trace"?}. Task lists hold task ids; tours hold node
/// indices (0 is the depot).
std::string allocation_to_json(const Instance& inst, const Allocation& alloc,
                               const LambdaSearch* search = nullptr);

}  // namespace htap
