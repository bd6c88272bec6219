#include "htap/tour_split.hpp"

#include <algorithm>
#include <atomic>
#include <string>

#include "htap/errors.hpp"
#include "htap/metric_tsp.hpp"

namespace htap {

namespace {
std::atomic<std::uint64_t> g_checked_splits{0};
}

std::uint64_t checked_split_count() { return g_checked_splits.load(std::memory_order_relaxed); }

double SplitResult::max_subtour_cost() const {
  double best = 0.0;
  for (const Tour& t : subtours) best = std::max(best, t.cost);
  return best;
}

SplitResult splitour(const Tour& tour, std::size_t k, const Instance& inst) {
  if (k < 1) throw ArgumentError("splitour needs k >= 1");
  if (tour.nodes.empty() || tour.nodes.front() != kDepot || tour.nodes.back() != kDepot ||
      tour.nodes.size() == 2) {
    throw ArgumentError("splitour needs a tour rooted at the depot");
  }

  const auto tasks = tour.interior();
  const std::size_t n = tasks.size();
  SplitResult out;
  out.tour_cost = walk_cost(inst, tour.nodes);
  for (NodeIndex v : tasks) out.c_max = std::max(out.c_max, inst.distance(kDepot, v));
  const double span = out.tour_cost - 2.0 * out.c_max;
  out.bound = span / static_cast<double>(k) + 2.0 * out.c_max;

  // prefix[i]: cost along the tour from the depot to the i-th task (1-based).
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    prefix[i] = prefix[i - 1] + inst.distance(i == 1 ? kDepot : tasks[i - 2], tasks[i - 1]);
  }

  const double eps = inst.tolerance();
  std::size_t last = 0;
  for (std::size_t j = 1; j < k; ++j) {
    const double threshold = static_cast<double>(j) / static_cast<double>(k) * span + out.c_max;
    std::size_t p = last;
    while (p < n && prefix[p + 1] <= threshold + eps) ++p;
    out.split_positions.push_back(p);
    last = p;
  }

  out.subtours.reserve(k);
  std::size_t begin = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t end = j + 1 < k ? out.split_positions[j] : n;
    out.subtours.push_back(make_tour(inst, tasks.subspan(begin, end - begin)));
    begin = end;
  }

  g_checked_splits.fetch_add(1, std::memory_order_relaxed);
  const double worst = out.max_subtour_cost();
  if (worst > out.bound + 1e-9 * out.bound + eps) {
    throw InvariantViolation("split bound violated: subtour cost " + std::to_string(worst) + " exceeds " +
                             std::to_string(out.bound));
  }
  return out;
}

}  // namespace htap
