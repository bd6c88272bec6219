// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "htap/allocators.hpp"
#include "htap/bench.hpp"
#include "htap/matching.hpp"
#include "htap/metric_tsp.hpp"
#include "htap/oracle.hpp"
#include "htap/tour_split.hpp"
#include "support/oracles.hpp"

using namespace htap;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool rel_equal(double got, double want) { return std::abs(got - want) <= 1e-9 * std::abs(want); }

std::string fmt(const char* pattern, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

// Runs `body`, turning any exception into a failure message.
bool guarded(std::string& detail, const std::function<bool()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
    return false;
  }
}

void example_layouts() {
  std::string detail;
  const auto start = Clock::now();
  const bool ok = guarded(detail, [&] {
    std::vector<std::string> bad;
    auto expect = [&](const std::string& what, double got, double want) {
      if (!rel_equal(got, want)) bad.push_back(what + "=" + fmt("%.12g", got) + " want " + fmt("%.12g", want));
    };
    const Instance ex1 = generate_paper_example(1, {4.0, 3.0, 3});
    expect("ex1 cyclesplit", cycle_split(ex1).minmax, 11.0);
    expect("ex1 heterominmax", hetero_minmax_split(ex1).allocation.minmax, 10.0);

    const Instance ex2 = generate_paper_example(2);
    Allocation before;
    for (std::size_t j = 0; j < 2; ++j) {
      AgentAssignment a{ex2.agents()[j].id, ex2.agents()[j].type, {j + 1}, {j + 3}, {}};
      a.tour = christofides_tour(ex2, a.tasks()).tour;
      before.agents.push_back(a);
    }
    before.update_minmax();
    const Allocation after = rebalance_within_types(ex2, before).allocation;
    for (std::size_t j = 0; j < 2; ++j) {
      expect("ex2 agent " + std::to_string(j + 1) + " before", before.agents[j].tour.cost, 4.0);
      expect("ex2 agent " + std::to_string(j + 1) + " after", after.agents[j].tour.cost, 2.0);
    }

    const Instance ex3 = generate_paper_example(3);
    expect("ex3 cyclesplit", cycle_split(ex3).minmax, 4.0);
    expect("ex3 heterominmax", hetero_minmax_split(ex3).allocation.minmax, 2.0);
    expect("ex3 exact", exact_minmax(ex3).minmax, 2.0);

    for (std::size_t k : {2, 3, 5}) {
      const Instance ex4 = generate_paper_example(4, {4.0, 3.0, k});
      expect("ex4 k=" + std::to_string(k) + " cyclesplit", cycle_split(ex4).minmax, 4.0);
      expect("ex4 k=" + std::to_string(k) + " heterominmax", hetero_minmax_split(ex4).allocation.minmax, 2.0);
    }
    for (const std::string& b : bad) detail += (detail.empty() ? "" : "; ") + b;
    return bad.empty();
  });
  const double t = seconds_since(start);
  if (ok) detail = "all values matched";
  report(1, "example layout regressions", ok && t < 1.0, detail + ", " + fmt("%.3f s", t));
}

void ratio_suite(BenchReport& out) {
  std::string detail;
  const auto start = Clock::now();
  const bool ok = guarded(detail, [&] {
    BenchOptions options;
    options.suite = "random-small";
    options.seeds = 240;
    out = run_bench(options);
    std::size_t with_oracle = 0;
    std::size_t per_type = 0;
    double worst_split = 0.0;
    double worst_naive = 0.0;
    for (const auto& [seed, inst] : bench_instances("random-small", 240)) {
      if (inst.task_count() <= 9 && inst.agent_count() <= 3) ++with_oracle;
      if (inst.agent_count() == static_cast<std::size_t>(inst.type_count())) ++per_type;
    }
    for (const BenchRecord& r : out.records) {
      if (!r.ratio) continue;
      if (r.algo == "naive") worst_naive = std::max(worst_naive, *r.ratio);
      if (r.algo == "cyclesplit" || r.algo == "heterominmax") worst_split = std::max(worst_split, *r.ratio);
    }
    detail = std::to_string(with_oracle) + " instances with optimum, " + std::to_string(per_type) +
             " one agent per type, worst split ratio " + fmt("%.4f", worst_split) + ", worst naive ratio " +
             fmt("%.4f", worst_naive) + ", " + std::to_string(out.violations.size()) + " violations";
    return with_oracle >= 200 && per_type > 0 && out.violations.empty();
  });
  const double t = seconds_since(start);
  report(2, "approximation bounds against the exact optimum", ok && t < 120.0, detail + ", " + fmt("%.2f s", t));
}

void christofides_quality() {
  std::string detail;
  const bool ok = guarded(detail, [&] {
    std::size_t tours = 0;
    std::size_t matchings = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 220; ++seed) {
      const std::size_t n = 1 + seed % 11;  // at most 12 nodes with the depot
      const Instance inst = generate_euclidean(1000 + seed, n, 1, 1, 1.0);
      const auto nodes = inst.all_task_nodes();
      const double approx = christofides_tour(inst, nodes).tour.cost;
      const double exact = held_karp_tour(inst, nodes).cost;
      worst = std::max(worst, approx / exact);
      if (approx > 1.5 * exact + inst.tolerance()) return false;
      ++tours;
    }
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 2 + 2 * (trial % 5);  // 2..10 odd-degree vertices
      std::vector<Point> pts(n);
      for (Point& p : pts) p = {u(rng), u(rng)};
      const auto w = [&](std::size_t a, std::size_t b) { return std::hypot(pts[a].x - pts[b].x, pts[a].y - pts[b].y); };
      const double brute = testing::brute_pairing(n, w);
      for (MatchingMethod m : {MatchingMethod::kAuto, MatchingMethod::kBlossom}) {
        if (std::abs(min_weight_perfect_matching(n, w, m).weight - brute) > 1e-9 * (1.0 + brute)) return false;
      }
      ++matchings;
    }
    detail = std::to_string(tours) + " tours, worst ratio " + fmt("%.4f", worst) + ", " + std::to_string(matchings) +
             " matchings equal to enumeration";
    return tours >= 200;
  });
  report(4, "christofides within 3/2 of optimal, exact matching", ok, detail);
}

void structural(const BenchReport& ratio_report) {
  std::string detail;
  const bool ok = guarded(detail, [&] {
    std::size_t allocations = 0;
    std::size_t probes = 0;
    for (const std::string& suite : {"paper-examples", "random-small", "random-large"}) {
      const std::size_t seeds = suite == std::string("random-large") ? 3 : 60;
      for (const auto& [seed, inst] : bench_instances(suite, seeds)) {
        const bool small = inst.task_count() <= 9 && inst.agent_count() <= 3;
        const double opt = small ? exact_minmax(inst).minmax : 0.0;
        std::vector<Allocation> outs{cycle_split(inst)};
        const HeteroMinMaxResult h = hetero_minmax_split(inst);
        outs.push_back(h.allocation);
        for (const LambdaProbe& p : h.search.probes) {
          const HeteroSplitResult r = hetero_split(inst, p.lambda);
          if (r.feasible() != p.feasible) return false;
          if (r.feasible()) {
            if (r.allocation->minmax > p.lambda + inst.tolerance()) return false;
            outs.push_back(*r.allocation);
          }
          ++probes;
        }
        if (small) outs.push_back(exact_minmax(inst).allocation);
        for (const Allocation& a : outs) {
          if (!a.partition || !verify_allocation(inst, a).empty()) return false;
          if (small && a.minmax < opt - inst.tolerance()) return false;
          ++allocations;
        }
        if (small && naive_allocation(inst).minmax < opt - inst.tolerance()) return false;
      }
    }
    detail = std::to_string(allocations) + " allocations checked, " + std::to_string(probes) +
             " budgets re-probed, bench violations " + std::to_string(ratio_report.violations.size());
    return ratio_report.violations.empty();
  });
  report(5, "allocations are compatible partitions, budgets respected, optimum never beaten", ok, detail);
}

void scale() {
  std::string detail;
  const auto start = Clock::now();
  std::size_t probes = 0;
  const bool ok = guarded(detail, [&] {
    const Instance inst = generate_euclidean(1, 200, 12, 4, 0.5);
    const HeteroMinMaxResult r = hetero_minmax_split(inst);
    probes = r.search.probes.size();
    detail = "minmax " + fmt("%.6g", r.allocation.minmax) + ", " + std::to_string(probes) + " probes";
    return verify_allocation(inst, r.allocation).empty() && probes <= 60;
  });
  const double t = seconds_since(start);
  report(6, "200 tasks, 12 agents, 4 types", ok && t < 30.0, detail + ", " + fmt("%.2f s", t));
}

}  // namespace

int main() {
  example_layouts();
  BenchReport ratio_report;
  ratio_suite(ratio_report);
  christofides_quality();
  structural(ratio_report);
  scale();
  // Criterion 3 last, so it counts the splits of every run above.
  const std::uint64_t splits = checked_split_count();
  report(3, "every split within its bound", splits >= 1000,
         std::to_string(splits) + " splits checked, none over the bound");
  return failures == 0 ? 0 : 1;
}
