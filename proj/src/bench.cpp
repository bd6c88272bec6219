#include "htap/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "htap/errors.hpp"

namespace htap {

namespace {

struct ExampleExpectation {
  double cycle_split;
  double hetero_minmax;
};

std::string format_number(double value, const char* pattern) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, value);
  return buf;
}

bool one_agent_per_type(const Instance& inst) {
  std::map<std::int64_t, int> per_type;
  for (const Agent& a : inst.agents()) ++per_type[a.type.value];
  return std::all_of(per_type.begin(), per_type.end(), [](const auto& kv) { return kv.second == 1; });
}

// Everything measured on one instance, plus the problems found.
struct InstanceRun {
  std::vector<BenchRecord> records;
  std::vector<std::string> violations;
};

template <typename F>
auto timed(double& wall_ms, F&& f) {
  const auto start = std::chrono::steady_clock::now();
  auto out = f();
  wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

InstanceRun run_one(const Instance& inst, std::uint64_t seed, const BenchOptions& options,
                    const std::optional<ExampleExpectation>& expected) {
  InstanceRun run;
  const std::string& name = inst.name();
  auto flag = [&](const std::string& what) { run.violations.push_back(name + ": " + what); };
  auto check = [&](const Allocation& alloc) {
    for (const std::string& p : verify_allocation(inst, alloc)) flag(alloc.algorithm + ": " + p);
  };

  double ms = 0.0;
  const Allocation naive = timed(ms, [&] { return naive_allocation(inst, options.minmax.split.christofides); });
  check(naive);
  run.records.push_back({name, seed, "naive", naive.minmax, std::nullopt, ms});

  const Allocation cycle = timed(ms, [&] { return cycle_split(inst, options.minmax.split.christofides); });
  check(cycle);
  run.records.push_back({name, seed, "cyclesplit", cycle.minmax, std::nullopt, ms});

  try {
    const HeteroMinMaxResult hetero = timed(ms, [&] { return hetero_minmax_split(inst, options.minmax); });
    check(hetero.allocation);
    if (hetero.allocation.minmax > hetero.search.result_lambda + inst.tolerance()) {
      flag("heterominmax tour exceeds its budget");
    }
    run.records.push_back({name, seed, "heterominmax", hetero.allocation.minmax, std::nullopt, ms});
  } catch (const SearchFailure& e) {
    flag(std::string("heterominmax search failed: ") + e.what());
  }

  if (expected) {
    auto near = [](double got, double want) { return std::abs(got - want) <= 1e-9 * std::abs(want); };
    if (!near(cycle.minmax, expected->cycle_split)) {
      flag("cyclesplit minmax " + format_number(cycle.minmax, "%.12g") + ", expected " +
           format_number(expected->cycle_split, "%.12g"));
    }
    for (const BenchRecord& r : run.records) {
      if (r.algo == "heterominmax" && !near(r.minmax, expected->hetero_minmax)) {
        flag("heterominmax minmax " + format_number(r.minmax, "%.12g") + ", expected " +
             format_number(expected->hetero_minmax, "%.12g"));
      }
    }
  }

  if (inst.task_count() > options.limits.max_tasks || inst.agent_count() > options.limits.max_agents) return run;

  const ExactResult exact = timed(ms, [&] { return exact_minmax(inst, options.limits); });
  check(exact.allocation);
  run.records.push_back({name, seed, "exact", exact.minmax, 1.0, ms});
  if (exact.minmax <= 0.0) return run;

  const double k = static_cast<double>(inst.agent_count());
  const bool per_type = one_agent_per_type(inst);
  const double eps = 1e-6;
  for (BenchRecord& r : run.records) {
    if (r.algo == "exact") continue;
    r.ratio = r.minmax / exact.minmax;
    if (r.minmax < exact.minmax - inst.tolerance()) flag(r.algo + " beats the exact optimum");
    double bound = 5.0 - 2.0 / k;
    if (r.algo == "naive") {
      bound = 1.5 * k;
    } else if (per_type) {
      bound = 4.0 - 1.0 / k;
    }
    if (*r.ratio > bound + eps) {
      flag(r.algo + " ratio " + format_number(*r.ratio, "%.9g") + " exceeds " + format_number(bound, "%.9g"));
    }
  }
  return run;
}

}  // namespace

std::vector<std::pair<std::uint64_t, Instance>> bench_instances(const std::string& suite, std::size_t seeds) {
  std::vector<std::pair<std::uint64_t, Instance>> out;
  if (suite == "paper-examples") {
    for (int which = 1; which <= 4; ++which) out.emplace_back(0, generate_paper_example(which));
  } else if (suite == "random-small") {
    if (seeds == 0) seeds = 200;
    static constexpr double kFractions[] = {0.3, 0.5, 0.7};
    for (std::uint64_t s = 1; s <= seeds; ++s) {
      const std::size_t k = 1 + s % 3;
      const std::size_t m = 1 + (s / 3) % k;
      const std::size_t n = 3 + (s * 7 / 3) % 7;
      out.emplace_back(s, generate_euclidean(s, n, k, m, kFractions[(s / 9) % 3]));
    }
  } else if (suite == "random-large") {
    if (seeds == 0) seeds = 10;
    for (std::uint64_t s = 1; s <= seeds; ++s) out.emplace_back(s, generate_euclidean(s, 200, 12, 4, 0.5));
  } else {
    throw ArgumentError("unknown suite '" + suite + "'");
  }
  return out;
}

BenchReport run_bench(const BenchOptions& options) {
  const auto instances = bench_instances(options.suite, options.seeds);
  std::vector<std::optional<ExampleExpectation>> expected(instances.size());
  if (options.suite == "paper-examples") {
    // Example 1 at d = 4, d' = 3; Examples 3 and 4 at their defaults.
    expected = {ExampleExpectation{11.0, 10.0}, std::nullopt, ExampleExpectation{4.0, 2.0},
                ExampleExpectation{4.0, 2.0}};
  }

  std::vector<InstanceRun> runs(instances.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < instances.size(); i = next++) {
      try {
        runs[i] = run_one(instances[i].second, instances[i].first, options, expected[i]);
      } catch (const std::exception& e) {
        runs[i].violations.push_back(instances[i].second.name() + ": " + e.what());
      }
    }
  };
  std::size_t threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(instances.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  BenchReport report;
  report.suite = options.suite;
  for (InstanceRun& run : runs) {
    report.records.insert(report.records.end(), run.records.begin(), run.records.end());
    report.violations.insert(report.violations.end(), run.violations.begin(), run.violations.end());
  }
  return report;
}

std::string bench_csv(const BenchReport& report) {
  std::ostringstream os;
  os << "instance,seed,algo,minmax,ratio,wall_ms\n";
  for (const BenchRecord& r : report.records) {
    os << r.instance << ',' << r.seed << ',' << r.algo << ',' << format_number(r.minmax, "%.12g") << ','
       << (r.ratio ? format_number(*r.ratio, "%.12g") : "") << ',' << format_number(r.wall_ms, "%.3f") << '\n';
  }
  return os.str();
}

std::string bench_plot_json(const BenchReport& report) {
  using nlohmann::ordered_json;
  ordered_json series = ordered_json::array();
  for (const BenchRecord& r : report.records) {
    if (series.empty() || series.back()["instance"] != r.instance) {
      series.push_back({{"instance", r.instance}, {"seed", r.seed}, {"minmax", ordered_json::object()},
                        {"ratio", ordered_json::object()}});
    }
    series.back()["minmax"][r.algo] = r.minmax;
    if (r.ratio) series.back()["ratio"][r.algo] = *r.ratio;
  }
  ordered_json doc = {{"suite", report.suite}, {"series", std::move(series)}};
  return doc.dump(2) + "\n";
}

}  // namespace htap
