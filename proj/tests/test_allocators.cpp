#include <doctest.h>

#include "htap/allocators.hpp"
#include "htap/errors.hpp"
#include "htap/metric_tsp.hpp"
#include "htap/oracle.hpp"
#include "support/oracles.hpp"

using namespace htap;

namespace {

std::vector<std::vector<NodeIndex>> task_sets(const Allocation& alloc) {
  std::vector<std::vector<NodeIndex>> out;
  for (const AgentAssignment& a : alloc.agents) out.push_back(a.tasks());
  return out;
}

using Sets = std::vector<std::vector<NodeIndex>>;

}  // namespace

TEST_CASE("example 1") {
  const Instance inst = generate_paper_example(1, {4.0, 3.0, 3});
  const Allocation cycle = cycle_split(inst);
  CHECK(verify_allocation(inst, cycle).empty());
  CHECK(cycle.minmax == doctest::Approx(11.0).epsilon(1e-9));
  CHECK(task_sets(cycle) == Sets{{1, 2, 7}, {3, 4, 8}, {5, 6, 9}});

  const HeteroSplitResult at10 = hetero_split(inst, 10.0);
  REQUIRE(at10.feasible());
  CHECK(verify_allocation(inst, *at10.allocation).empty());
  CHECK(at10.allocation->minmax == doctest::Approx(10.0).epsilon(1e-9));
  // Each typed task stays with its only compatible agent.
  CHECK(at10.allocation->agents[0].specific == std::vector<NodeIndex>{7});
  CHECK(at10.allocation->agents[1].specific == std::vector<NodeIndex>{8});
  CHECK(at10.allocation->agents[2].tasks() == std::vector<NodeIndex>{9});
  CHECK_FALSE(hetero_split(inst, 9.9).feasible());

  const HeteroMinMaxResult best = hetero_minmax_split(inst);
  CHECK(best.allocation.minmax == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(best.search.lo == 8.0);
  CHECK(best.allocation.minmax <= best.search.result_lambda + inst.tolerance());
}

TEST_CASE("example 1 scales with its parameters") {
  // The closed form needs the V2-C road to be the shortest way there (d <= 2d' + 1).
  for (auto [d, dp] : {std::pair{4.5, 2.5}, std::pair{6.0, 5.0}, std::pair{7.0, 3.5}}) {
    const Instance inst = generate_paper_example(1, {d, dp, 3});
    CAPTURE(d);
    CHECK(cycle_split(inst).minmax == doctest::Approx(2 * dp + d + 1).epsilon(1e-9));
    CHECK(hetero_minmax_split(inst).allocation.minmax <= 2 * dp + 4 + 1e-6 * (2 * dp + 4));
  }
}

TEST_CASE("example 2 rebalancing") {
  const Instance inst = generate_paper_example(2);
  // The state before rebalancing: each agent holds one task at A and one at B.
  Allocation before;
  before.algorithm = "heterosplit";
  for (std::int64_t j = 0; j < 2; ++j) {
    AgentAssignment a{inst.agents()[j].id, inst.agents()[j].type, {NodeIndex(1 + j)}, {NodeIndex(3 + j)}, {}};
    a.tour = christofides_tour(inst, a.tasks()).tour;
    before.agents.push_back(a);
  }
  before.update_minmax();
  CHECK(before.agents[0].tour.cost == 4.0);
  CHECK(before.agents[1].tour.cost == 4.0);

  const RebalanceOutcome after = rebalance_within_types(inst, before);
  CHECK(after.guarded_types.empty());
  CHECK(verify_allocation(inst, after.allocation).empty());
  CHECK(after.allocation.agents[0].tour.cost == 2.0);
  CHECK(after.allocation.agents[1].tour.cost == 2.0);
  CHECK(task_sets(after.allocation) == Sets{{1, 2}, {3, 4}});

  const HeteroMinMaxResult best = hetero_minmax_split(inst);
  CHECK(best.allocation.minmax == 2.0);
}

TEST_CASE("rebalancing guard keeps a better assignment") {
  const Instance inst = generate_paper_example(2);
  Allocation good;
  for (std::int64_t j = 0; j < 2; ++j) {
    AgentAssignment a{inst.agents()[j].id, inst.agents()[j].type, {}, {}, {}};
    good.agents.push_back(a);
  }
  good.agents[0].specific = {1, 2};
  good.agents[1].generic = {3, 4};
  for (AgentAssignment& a : good.agents) a.tour = christofides_tour(inst, a.tasks()).tour;
  good.update_minmax();
  const RebalanceOutcome same = rebalance_within_types(inst, good);
  CHECK(same.allocation.minmax == 2.0);
  CHECK(same.guarded_types.empty());
}

TEST_CASE("example 3") {
  const Instance inst = generate_paper_example(3);
  CHECK(cycle_split(inst).minmax == 4.0);
  const HeteroSplitResult at2 = hetero_split(inst, 2.0);
  REQUIRE(at2.feasible());
  CHECK(task_sets(*at2.allocation) == Sets{{1}, {2, 3}});
  const HeteroSplitResult at1 = hetero_split(inst, 1.0);
  CHECK_FALSE(at1.feasible());
  REQUIRE(at1.infeasibility.has_value());
  CHECK(at1.infeasibility->candidate_costs.front().second == 2.0);
  CHECK(hetero_minmax_split(inst).allocation.minmax == 2.0);
  CHECK_THROWS_AS(hetero_split(inst, 0.0), ArgumentError);

  const Allocation naive = naive_allocation(inst);
  CHECK_FALSE(naive.partition);
  CHECK(task_sets(naive) == Sets{{1, 2, 3}, {}});
  CHECK(naive.minmax == christofides_tour(inst, inst.all_task_nodes()).tour.cost);
  CHECK(verify_allocation(inst, naive).empty());
}

TEST_CASE("example 4") {
  for (std::size_t k : {2, 3, 4, 5}) {
    const Instance inst = generate_paper_example(4, {4.0, 3.0, k});
    CAPTURE(k);
    CHECK(cycle_split(inst).minmax == 4.0);
    const HeteroMinMaxResult r = hetero_minmax_split(inst);
    CHECK(r.allocation.minmax == 2.0);
    CHECK(verify_allocation(inst, r.allocation).empty());
  }
}

TEST_CASE("single generic agent matches the plain tour") {
  const Instance inst = generate_euclidean(21, 8, 1, 1, 1.0);
  const double tour = christofides_tour(inst, inst.all_task_nodes()).tour.cost;
  CHECK(cycle_split(inst).minmax == doctest::Approx(tour));
  CHECK(naive_allocation(inst).minmax == doctest::Approx(tour));
}

TEST_CASE("verify_allocation catches broken allocations") {
  const Instance inst = generate_paper_example(3);
  Allocation alloc = cycle_split(inst);
  CHECK(verify_allocation(inst, alloc).empty());

  Allocation dropped = alloc;
  dropped.agents[0].generic.clear();
  dropped.agents[0].tour = christofides_tour(inst, dropped.agents[0].tasks()).tour;
  CHECK_FALSE(verify_allocation(inst, dropped).empty());

  Allocation wrong_type = alloc;
  wrong_type.agents[1].specific = {1};
  CHECK_FALSE(verify_allocation(inst, wrong_type).empty());

  Allocation stale = alloc;
  stale.minmax = 1.0;
  CHECK_FALSE(verify_allocation(inst, stale).empty());
}

TEST_CASE("allocators on random instances") {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const std::size_t k = 1 + seed % 3;
    const std::size_t m = 1 + (seed / 3) % k;
    const Instance inst = generate_euclidean(seed, 4 + seed % 4, k, m, 0.5);
    const double opt = testing::brute_minmax(inst);
    CAPTURE(seed);
    for (const Allocation& alloc : {naive_allocation(inst), cycle_split(inst), hetero_minmax_split(inst).allocation}) {
      CHECK(verify_allocation(inst, alloc).empty());
      CHECK(alloc.minmax >= opt - 1e-9);
    }
    const double per_type_bound = (m == k ? 4.0 - 1.0 / double(k) : 5.0 - 2.0 / double(k));
    CHECK(cycle_split(inst).minmax <= per_type_bound * opt + 1e-6);
    CHECK(hetero_minmax_split(inst).allocation.minmax <= per_type_bound * opt + 1e-6);
    CHECK(naive_allocation(inst).minmax <= 1.5 * double(k) * opt + 1e-6);
  }
}

TEST_CASE("hetero_split respects every budget it accepts") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Instance inst = generate_euclidean(seed, 10, 3, 2, 0.6);
    const HeteroMinMaxResult r = hetero_minmax_split(inst);
    for (const LambdaProbe& p : r.search.probes) {
      const HeteroSplitResult again = hetero_split(inst, p.lambda);
      CHECK(again.feasible() == p.feasible);
      if (again.feasible()) {
        CHECK(again.allocation->minmax <= p.lambda + inst.tolerance());
        CHECK(verify_allocation(inst, *again.allocation).empty());
      }
    }
  }
}

TEST_CASE("budget search trace") {
  const Instance inst = generate_euclidean(5, 30, 4, 2, 0.5);
  const HeteroMinMaxResult r = hetero_minmax_split(inst);
  const LambdaSearch& s = r.search;
  CHECK(s.lo == doctest::Approx(2.0 * inst.max_depot_distance()));
  CHECK(s.tolerance == doctest::Approx(1e-6 * s.hi_initial));
  CHECK(s.result_lambda >= s.lo);
  CHECK(s.result_lambda <= s.hi_final);
  CHECK(s.bracket_feasible - s.bracket_infeasible <= s.tolerance + 1e-12);
  CHECK(r.allocation.minmax <= s.result_lambda + inst.tolerance());
  CHECK(hetero_split(inst, s.guarantee_lambda).feasible());
  CHECK_FALSE(s.probes.empty());

  MinMaxOptions coarse;
  coarse.tolerance = 0.5;
  CHECK(hetero_minmax_split(inst, coarse).search.probes.size() < s.probes.size());
}

TEST_CASE("allocation json") {
  const Instance inst = generate_paper_example(3);
  const HeteroMinMaxResult r = hetero_minmax_split(inst);
  const std::string text = allocation_to_json(inst, r.allocation, &r.search);
  CHECK(text.find("\"algorithm\": \"heterominmax\"") != std::string::npos);
  CHECK(text.find("\"lambda_trace\"") != std::string::npos);
  CHECK(allocation_to_json(inst, r.allocation).find("lambda_trace") == std::string::npos);
}
