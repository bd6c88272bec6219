#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

namespace htap {

/// Weight function over positions 0..n-1 of the point set being matched.
using PairWeight = std::function<double(std::size_t, std::size_t)>;

enum class MatchingMethod {
  kAuto,         ///< exhaustive for small sets, blossom beyond
  kExhaustive,   ///< memoized pairing enumeration, at most kExhaustiveLimit points
  kBlossom,      ///< Edmonds' weighted blossom algorithm
  kGreedy,       ///< cheapest-pair-first; not optimal
};

/// Largest point count `kAuto` hands to exhaustive enumeration.
inline constexpr std::size_t kExhaustiveLimit = 12;

struct Pairing {
  /// Pairs (a, b) with a < b, sorted by a.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  double weight = 0.0;
  bool exact = true;
};

/// Minimum-weight perfect matching on the complete graph over `n` points.
/// Throws ArgumentError for odd n. Among equal-weight optima the exhaustive
/// route pairs the lowest unmatched point with its lowest-index partner.
Pairing min_weight_perfect_matching(std::size_t n, const PairWeight& weight,
                                    MatchingMethod method = MatchingMethod::kAuto);

/// Maximum-weight matching on a general graph (Edmonds' blossom algorithm
/// with integer duals). Edges are (u, v, weight); returns mate[v] or -1.
/// With `max_cardinality`, maximizes weight among maximum-cardinality
/// matchings.
std::vector<long> max_weight_matching(std::size_t n_vertices,
                                      std::span<const std::tuple<std::size_t, std::size_t, long long>> edges,
                                      bool max_cardinality);

}  // namespace htap
