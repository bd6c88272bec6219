#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "htap/instance.hpp"
#include "htap/types.hpp"

namespace htap {

/// Output of splitting one rooted tour into k subtours.
struct SplitResult {
  std::vector<Tour> subtours;
  double tour_cost = 0.0;   ///< L, cost of the input tour
  double c_max = 0.0;       ///< largest direct depot distance over the tour's tasks
  double bound = 0.0;       ///< (L - 2 c_max) / k + 2 c_max
  /// For j = 1..k-1, the 1-based position along the tour of the last task
  /// in subtour j (0 when subtour j and all before it are empty).
  std::vector<std::size_t> split_positions;

  double max_subtour_cost() const;
};

/// Splits `tour` into exactly k subtours. Subtour j ends at the furthest
/// task whose cost along the tour from the depot is at most
/// (j/k)(L - 2 c_max) + c_max; a task landing exactly on a threshold stays
/// in the earlier subtour. Trailing or middle subtours may be empty.
///
/// Every split is checked against the bound; a violation throws
/// InvariantViolation. The bound follows from the thresholds alone, so a
/// violation means a bug rather than bad input.
SplitResult splitour(const Tour& tour, std::size_t k, const Instance& inst);

/// Number of splits whose bound check has run in this process.
std::uint64_t checked_split_count();

}  // namespace htap
