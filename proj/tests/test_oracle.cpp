#include <doctest.h>

#include <algorithm>

#include "htap/allocators.hpp"
#include "htap/errors.hpp"
#include "htap/metric_tsp.hpp"
#include "htap/oracle.hpp"
#include "support/oracles.hpp"

using namespace htap;

TEST_CASE("example layouts") {
  CHECK(exact_minmax(generate_paper_example(3)).minmax == 2.0);
  CHECK(exact_minmax(generate_paper_example(1, {4.0, 3.0, 3})).minmax == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(exact_minmax(generate_paper_example(4, {4.0, 3.0, 3})).minmax == 2.0);
}

TEST_CASE("single agent is one optimal tour") {
  const Instance inst = generate_euclidean(3, 7, 1, 1, 0.5);
  const ExactResult r = exact_minmax(inst);
  CHECK(r.minmax == doctest::Approx(testing::brute_tour(inst, inst.all_task_nodes())).epsilon(1e-12));
  CHECK(r.partitions_examined >= 1);
}

TEST_CASE("fixed ring with two generic agents") {
  std::vector<Task> tasks;
  const Point spots[] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {0, -2}};
  for (std::int64_t i = 0; i < 6; ++i) tasks.push_back({TaskId(i + 1), kGenericType, spots[i]});
  const Instance inst =
      Instance::from_points("ring", tasks, {{AgentId(1), TypeId(1)}, {AgentId(2), TypeId(1)}}, Point{0, 0});
  CHECK(exact_minmax(inst).minmax == doctest::Approx(5.414213562373095).epsilon(1e-12));
}

TEST_CASE("agrees with unpruned enumeration") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const std::size_t k = 1 + seed % 3;
    const std::size_t m = 1 + (seed / 3) % k;
    const Instance inst = generate_euclidean(seed, 3 + seed % 5, k, m, 0.5);
    const ExactResult r = exact_minmax(inst);
    CAPTURE(seed);
    CHECK(r.minmax == doctest::Approx(testing::brute_minmax(inst)).epsilon(1e-12));
    CHECK(verify_allocation(inst, r.allocation).empty());
  }
}

TEST_CASE("relabeling does not change the optimum") {
  const Instance inst = generate_euclidean(17, 8, 3, 2, 0.5);
  const double base = exact_minmax(inst).minmax;

  // Reverse the task order with fresh ids.
  std::vector<Task> tasks(inst.tasks().rbegin(), inst.tasks().rend());
  for (std::size_t i = 0; i < tasks.size(); ++i) tasks[i].id = TaskId(static_cast<std::int64_t>(100 - i));
  // Swap the ids of the two type-1 agents.
  std::vector<Agent> agents = inst.agents();
  std::swap(agents[0].id, agents[2].id);
  const Instance shuffled = Instance::from_points("shuffled", tasks, agents, inst.depot_position());
  CHECK(exact_minmax(shuffled).minmax == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("limits") {
  CHECK_THROWS_AS(exact_minmax(generate_euclidean(1, 10, 2, 1, 0.5)), LimitExceeded);
  CHECK_THROWS_AS(exact_minmax(generate_euclidean(1, 5, 4, 1, 0.5)), LimitExceeded);
  CHECK_NOTHROW(exact_minmax(generate_euclidean(1, 10, 2, 1, 0.5), {10, 3}));
}
