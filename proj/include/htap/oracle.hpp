#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>

#include "htap/allocators.hpp"
#include "htap/instance.hpp"

namespace htap {

struct OracleLimits {
  std::size_t max_tasks = 9;
  std::size_t max_agents = 3;
};

struct ExactResult {
  Allocation allocation;
  double minmax = 0.0;
  std::uint64_t partitions_examined = 0;
  std::chrono::duration<double> elapsed{0.0};
};

/// Optimal allocation by enumerating every compatible assignment of tasks to
/// agents, scoring each agent with an optimal tour. Agents of one type are
/// interchangeable, so only one labelling of each partition is visited.
/// Throws LimitExceeded when the instance exceeds `limits` (at most 20 tasks
/// regardless of limits).
ExactResult exact_minmax(const Instance& inst, const OracleLimits& limits = {});

}  // namespace htap
