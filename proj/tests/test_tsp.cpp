#include <doctest.h>

#include <cmath>
#include <random>

#include "htap/errors.hpp"
#include "htap/matching.hpp"
#include "htap/metric_tsp.hpp"
#include "support/oracles.hpp"

using namespace htap;

namespace {

std::vector<Point> random_points(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts(n);
  for (Point& p : pts) p = {u(rng), u(rng)};
  return pts;
}

double dist(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

TEST_CASE("matching basics") {
  const Pairing two = min_weight_perfect_matching(2, [](std::size_t, std::size_t) { return 3.0; });
  CHECK(two.pairs == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}});
  CHECK(two.weight == 3.0);

  const auto line = [](std::size_t a, std::size_t b) { return std::abs(double(a) - double(b)); };
  for (MatchingMethod method : {MatchingMethod::kExhaustive, MatchingMethod::kBlossom}) {
    const Pairing p = min_weight_perfect_matching(4, line, method);
    CHECK(p.pairs == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {2, 3}});
    CHECK(p.weight == 2.0);
  }
  CHECK(min_weight_perfect_matching(0, line).pairs.empty());
  CHECK_THROWS_AS(min_weight_perfect_matching(3, line), ArgumentError);
}

TEST_CASE("exact matchings agree with enumeration") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const std::size_t n = 2 + 2 * (seed % 5);  // 2..10
    const auto pts = random_points(seed, n);
    const auto w = [&](std::size_t a, std::size_t b) { return dist(pts[a], pts[b]); };
    const double expected = testing::brute_pairing(n, w);
    CAPTURE(seed);
    CHECK(min_weight_perfect_matching(n, w, MatchingMethod::kExhaustive).weight == doctest::Approx(expected));
    const Pairing blossom = min_weight_perfect_matching(n, w, MatchingMethod::kBlossom);
    CHECK(blossom.weight == doctest::Approx(expected).epsilon(1e-9));
    CHECK(blossom.exact);
    CHECK(min_weight_perfect_matching(n, w, MatchingMethod::kGreedy).weight >= expected - 1e-9);
  }
}

TEST_CASE("blossom handles larger graphs consistently") {
  const auto pts = random_points(99, 40);
  const auto w = [&](std::size_t a, std::size_t b) { return dist(pts[a], pts[b]); };
  const Pairing p = min_weight_perfect_matching(40, w);
  std::vector<int> seen(40, 0);
  double total = 0.0;
  for (auto [a, b] : p.pairs) {
    ++seen[a];
    ++seen[b];
    total += w(a, b);
  }
  CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
  CHECK(total == doctest::Approx(p.weight));
  CHECK(p.weight <= min_weight_perfect_matching(40, w, MatchingMethod::kGreedy).weight + 1e-9);
}

TEST_CASE("max weight matching on a blossom graph") {
  // Odd cycle 0-1-2 with a pendant on each vertex.
  const std::vector<std::tuple<std::size_t, std::size_t, long long>> edges = {
      {0, 1, 8}, {1, 2, 9}, {0, 2, 10}, {0, 3, 7}, {1, 4, 5}, {2, 5, 3}};
  const auto mate = max_weight_matching(6, edges, false);
  long long total = 0;
  for (auto [a, b, w] : edges) {
    if (mate[a] == static_cast<long>(b)) total += w;
  }
  CHECK(total == 16);
}

TEST_CASE("tour builders on small sets") {
  const Instance ex3 = generate_paper_example(3);
  const std::vector<NodeIndex> none;
  CHECK(christofides_tour(ex3, none).tour.nodes == std::vector<NodeIndex>{kDepot});
  CHECK(christofides_tour(ex3, none).tour.cost == 0.0);
  CHECK(held_karp_tour(ex3, none).cost == 0.0);
  const std::vector<NodeIndex> one{1};
  CHECK(christofides_tour(ex3, one).tour.cost == 2.0);
  const std::vector<NodeIndex> b{2, 3};
  CHECK(held_karp_tour(ex3, b).cost == 2.0);
  // Co-located tasks stay adjacent.
  CHECK(christofides_tour(ex3, b).tour.nodes == std::vector<NodeIndex>{0, 2, 3, 0});
  const std::vector<NodeIndex> bad{0, 1};
  CHECK_THROWS_AS(christofides_tour(ex3, bad), ArgumentError);
}

TEST_CASE("held-karp on fixed layouts") {
  const double h = std::sqrt(3.0) / 2.0;
  const Instance tri = Instance::from_points(
      "tri", {{TaskId(1), kGenericType, Point{0, 0}}, {TaskId(2), kGenericType, Point{1, 0}},
              {TaskId(3), kGenericType, Point{0.5, h}}},
      {{AgentId(1), TypeId(1)}});
  const auto all = tri.all_task_nodes();
  CHECK(held_karp_tour(tri, all).cost == doctest::Approx(3.1547005383792515).epsilon(1e-12));

  std::vector<Task> tasks;
  const Point spots[] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {0, -2}};
  for (std::int64_t i = 0; i < 6; ++i) tasks.push_back({TaskId(i + 1), kGenericType, spots[i]});
  const Instance ring = Instance::from_points("ring", tasks, {{AgentId(1), TypeId(1)}}, Point{0, 0});
  const Tour t = held_karp_tour(ring, ring.all_task_nodes());
  CHECK(t.cost == doctest::Approx(9.23606797749979).epsilon(1e-12));
  CHECK_FALSE(check_tour(ring, t).has_value());
  CHECK_THROWS_AS(held_karp_tour(ring, ring.all_task_nodes(), 5), LimitExceeded);
}

TEST_CASE("christofides stays within 3/2 of optimal") {
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    const std::size_t n = 2 + seed % 9;
    const Instance inst = generate_euclidean(seed, n, 1, 1, 1.0);
    const auto nodes = inst.all_task_nodes();
    const TourBuilderReport rep = christofides_tour(inst, nodes);
    const double opt = testing::brute_tour(inst, nodes);
    CAPTURE(seed);
    CHECK_FALSE(check_tour(inst, rep.tour).has_value());
    CHECK(rep.tour.task_count() == n);
    CHECK(rep.odd_vertex_count % 2 == 0);
    CHECK(rep.tour.cost <= rep.mst_weight + rep.matching_weight + inst.tolerance());
    CHECK(rep.tour.cost <= 1.5 * opt + 1e-9);
    CHECK(held_karp_tour(inst, nodes).cost == doctest::Approx(opt).epsilon(1e-12));
  }
}

TEST_CASE("christofides is deterministic") {
  const Instance inst = generate_euclidean(11, 40, 1, 1, 1.0);
  const auto nodes = inst.all_task_nodes();
  CHECK(christofides_tour(inst, nodes).tour.nodes == christofides_tour(inst, nodes).tour.nodes);
  ChristofidesOptions greedy{MatchingMethod::kGreedy};
  const TourBuilderReport rep = christofides_tour(inst, nodes, greedy);
  CHECK_FALSE(rep.exact_matching);
  CHECK_FALSE(check_tour(inst, rep.tour).has_value());
}

TEST_CASE("tour checks") {
  const Instance ex3 = generate_paper_example(3);
  CHECK(check_tour(ex3, Tour{{0, 1, 0}, 2.0}) == std::nullopt);
  CHECK(check_tour(ex3, Tour{{0, 1, 0}, 3.0}).has_value());
  CHECK(check_tour(ex3, Tour{{0, 1, 1, 0}, 2.0}).has_value());
  CHECK(check_tour(ex3, Tour{{1, 0}, 2.0}).has_value());
  CHECK(check_tour(ex3, Tour{{0, 0}, 0.0}).has_value());
}
