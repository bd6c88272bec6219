#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "htap/instance.hpp"
#include "htap/matching.hpp"
#include "htap/types.hpp"

namespace htap {

enum class TourMethod { kChristofides, kExact };

struct TourBuilderReport {
  Tour tour;
  double mst_weight = 0.0;
  double matching_weight = 0.0;
  std::size_t odd_vertex_count = 0;
  TourMethod method = TourMethod::kChristofides;
  /// False when a greedy matching was used; the 3/2 guarantee is then void.
  bool exact_matching = true;
};

struct ChristofidesOptions {
  MatchingMethod matching = MatchingMethod::kAuto;
};

/// Christofides tour rooted at the depot through `subset` (task nodes).
///
/// Deterministic: nodes at zero distance from each other are collapsed onto
/// the lowest-index representative and visited consecutively; MST by Prim
/// from the depot (ties to the lowest index); exact odd-vertex matching;
/// Hierholzer walk taking the lowest-index unused edge; shortcut in
/// first-visit order.
TourBuilderReport christofides_tour(const Instance& inst, std::span<const NodeIndex> subset,
                                    const ChristofidesOptions& options = {});

inline constexpr std::size_t kDefaultExactTspLimit = 15;

/// Optimal tour through {depot} ∪ subset by Held-Karp dynamic programming.
/// Throws LimitExceeded when |subset| > limit.
Tour held_karp_tour(const Instance& inst, std::span<const NodeIndex> subset,
                    std::size_t limit = kDefaultExactTspLimit);

/// Sum of consecutive distances along `nodes`.
double walk_cost(const Instance& inst, std::span<const NodeIndex> nodes);

/// Builds a Tour from the task nodes in visiting order (depot added at both
/// ends) with its cost.
Tour make_tour(const Instance& inst, std::span<const NodeIndex> task_order);

/// Describes the first broken Tour invariant, if any: depot endpoints,
/// distinct task interior, stored cost matching the recomputed cost.
std::optional<std::string> check_tour(const Instance& inst, const Tour& tour);

}  // namespace htap
