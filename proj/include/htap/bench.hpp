#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "htap/allocators.hpp"
#include "htap/instance.hpp"
#include "htap/oracle.hpp"

namespace htap {

struct BenchRecord {
  std::string instance;
  std::uint64_t seed = 0;
  std::string algo;  ///< naive, cyclesplit, heterominmax or exact
  double minmax = 0.0;
  std::optional<double> ratio;  ///< minmax / oracle minmax, when the oracle ran
  double wall_ms = 0.0;
};

struct BenchOptions {
  std::string suite = "paper-examples";  ///< paper-examples, random-small or random-large
  std::size_t seeds = 0;                 ///< 0 picks the suite default
  std::size_t threads = 0;               ///< 0 uses the hardware concurrency
  OracleLimits limits;
  MinMaxOptions minmax;
};

struct BenchReport {
  std::string suite;
  std::vector<BenchRecord> records;  ///< ordered by instance, then algorithm
  /// One entry per broken bound or invariant; empty on a clean run.
  std::vector<std::string> violations;
};

/// Instances of a suite, in run order. The seed list is 1..seeds for the
/// random suites and all zeros for the examples.
std::vector<std::pair<std::uint64_t, Instance>> bench_instances(const std::string& suite, std::size_t seeds);

/// Runs every algorithm (and the oracle when within limits) on each
/// instance of the suite, checking approximation bounds and allocation
/// invariants. Throws ArgumentError for an unknown suite.
BenchReport run_bench(const BenchOptions& options);

/// `instance,seed,algo,minmax,ratio,wall_ms` with a header line.
std::string bench_csv(const BenchReport& report);

/// Per-instance ratio series as JSON.
std::string bench_plot_json(const BenchReport& report);

}  // namespace htap
