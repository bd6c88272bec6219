// htap: generate, validate, solve and benchmark HTAP instances.
//
// Exit codes:
//   0  success
//   1  usage error or unreadable/unwritable file
//   2  malformed or invalid instance, or bad generator parameters
//   3  exact solver size limit exceeded
//   4  budget search failure, or a bench bound/invariant violation
//   5  internal invariant violated

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "htap/allocators.hpp"
#include "htap/bench.hpp"
#include "htap/errors.hpp"
#include "htap/instance.hpp"
#include "htap/oracle.hpp"
#include "htap/tour_split.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kInvalid = 2, kLimit = 3, kSearch = 4, kInternal = 5 };

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw std::ios_base::failure("cannot write " + path);
}

// Reads and validates an instance, printing every violation found.
std::optional<htap::Instance> read_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  htap::Instance inst = htap::instance_from_json(buf.str());
  const auto violations = htap::validate_metric(inst);
  if (violations.empty()) return inst;
  std::cerr << path << ": " << violations.size() << " violation(s)\n";
  for (const htap::Violation& v : violations) {
    std::cerr << "  " << htap::to_string(v.kind) << ": " << v.message << "\n";
  }
  return std::nullopt;
}

htap::OracleLimits oracle_limits() {
  htap::OracleLimits limits;
  if (const char* env = std::getenv("HTAP_EXACT_LIMIT")) {
    try {
      limits.max_tasks = std::stoul(env);
    } catch (const std::exception&) {
      throw htap::ArgumentError(std::string("HTAP_EXACT_LIMIT is not a count: ") + env);
    }
  }
  return limits;
}

struct SolveArgs {
  std::string instance;
  std::string algo;
  std::string out;
  double lambda_tol = 0.0;
  bool greedy = false;
};

int cmd_solve(const SolveArgs& args) {
  const auto inst = read_instance(args.instance);
  if (!inst) return kInvalid;

  htap::MinMaxOptions options;
  options.tolerance = args.lambda_tol;
  if (args.greedy) options.split.christofides.matching = htap::MatchingMethod::kGreedy;
  const htap::ChristofidesOptions& copts = options.split.christofides;

  htap::Allocation alloc;
  std::optional<htap::LambdaSearch> search;
  if (args.algo == "naive") {
    alloc = htap::naive_allocation(*inst, copts);
  } else if (args.algo == "cyclesplit") {
    alloc = htap::cycle_split(*inst, copts);
  } else if (args.algo == "heterominmax") {
    htap::HeteroMinMaxResult r = htap::hetero_minmax_split(*inst, options);
    alloc = std::move(r.allocation);
    search = std::move(r.search);
  } else {
    alloc = htap::exact_minmax(*inst, oracle_limits()).allocation;
  }
  if (args.greedy && args.algo != "exact") {
    alloc.notes.push_back("greedy matching: the 3/2 tour guarantee does not apply");
  }

  std::cout << "algorithm " << alloc.algorithm << "\n";
  std::cout << "minmax " << num(alloc.minmax) << "\n";
  std::cout << "agent  type  tasks  cost\n";
  for (const htap::AgentAssignment& a : alloc.agents) {
    std::cout << a.agent.value << "  " << a.type.value << "  " << a.tasks().size() << "  " << num(a.tour.cost)
              << "\n";
  }
  if (search) {
    std::cout << "lambda " << num(search->result_lambda) << " (" << search->probes.size() << " probes)\n";
  }
  for (const std::string& note : alloc.notes) std::cout << "note: " << note << "\n";
  if (!args.out.empty()) write_text(args.out, htap::allocation_to_json(*inst, alloc, search ? &*search : nullptr));
  return kOk;
}

struct GenArgs {
  std::string family;
  std::uint64_t seed = 1;
  std::size_t n = 9;
  std::size_t k = 3;
  std::size_t m = 2;
  double gf = 0.5;
  double d = 4.0;
  double dprime = 3.0;
  std::string out;
};

int cmd_gen(const GenArgs& args) {
  htap::Instance inst;
  if (args.family == "euclidean") {
    inst = htap::generate_euclidean(args.seed, args.n, args.k, args.m, args.gf);
  } else {
    htap::ExampleParams params{args.d, args.dprime, args.k};
    inst = htap::generate_paper_example(args.family.back() - '0', params);
  }
  write_text(args.out, htap::instance_to_json(inst));
  return kOk;
}

int cmd_validate(const std::string& path) {
  if (!read_instance(path)) return kInvalid;
  std::cout << path << ": ok\n";
  return kOk;
}

struct BenchArgs {
  std::string suite;
  std::size_t seeds = 0;
  std::size_t threads = 0;
  std::string csv;
  std::string plot;
  double lambda_tol = 0.0;
};

int cmd_bench(const BenchArgs& args) {
  htap::BenchOptions options;
  options.suite = args.suite;
  options.seeds = args.seeds;
  options.threads = args.threads;
  options.limits = oracle_limits();
  options.minmax.tolerance = args.lambda_tol;
  const htap::BenchReport report = htap::run_bench(options);
  if (!args.csv.empty()) write_text(args.csv, htap::bench_csv(report));
  if (!args.plot.empty()) write_text(args.plot, htap::bench_plot_json(report));

  std::size_t instances = 0;
  std::size_t with_oracle = 0;
  std::string last;
  for (const htap::BenchRecord& r : report.records) {
    if (r.instance != last) ++instances;
    last = r.instance;
    if (r.algo == "exact") ++with_oracle;
  }
  std::cout << "suite " << report.suite << ": " << instances << " instances, " << with_oracle
            << " with exact optimum, " << htap::checked_split_count() << " checked splits\n";
  for (const std::string& v : report.violations) std::cerr << "violation: " << v << "\n";
  if (!report.violations.empty()) {
    std::cout << report.violations.size() << " violation(s)\n";
    return kSearch;
  }
  std::cout << "all bounds hold\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heterogeneous task allocation solver"};
  app.require_subcommand(1);

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Allocate the tasks of an instance");
  solve_cmd->add_option("--instance", solve.instance, "Instance JSON file")->required();
  solve_cmd->add_option("--algo", solve.algo, "Algorithm")
      ->required()
      ->check(CLI::IsMember({"naive", "cyclesplit", "heterominmax", "exact"}));
  solve_cmd->add_option("--out", solve.out, "Write the allocation JSON here ('-' for stdout)");
  solve_cmd->add_option("--lambda-tol", solve.lambda_tol, "Absolute budget search tolerance");
  solve_cmd->add_flag("--greedy-matching", solve.greedy, "Greedy odd-vertex matching (voids the 3/2 guarantee)");

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate an instance");
  gen_cmd->add_option("family", gen.family, "Instance family")
      ->required()
      ->check(CLI::IsMember({"euclidean", "example1", "example2", "example3", "example4"}));
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--n", gen.n, "Task count");
  gen_cmd->add_option("--k", gen.k, "Agent count");
  gen_cmd->add_option("--m", gen.m, "Type count");
  gen_cmd->add_option("--gf", gen.gf, "Generic task fraction");
  gen_cmd->add_option("--d", gen.d);
  gen_cmd->add_option("--dprime", gen.dprime);
  gen_cmd->add_option("--out", gen.out, "Output file (stdout when omitted)");

  std::string validate_path;
  CLI::App* validate_cmd = app.add_subcommand("validate", "Check an instance file");
  validate_cmd->add_option("--instance", validate_path)->required();

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run a benchmark suite");
  bench_cmd->add_option("--suite", bench.suite)
      ->required()
      ->check(CLI::IsMember({"paper-examples", "random-small", "random-large"}));
  bench_cmd->add_option("--seeds", bench.seeds, "Instances per random suite");
  bench_cmd->add_option("--threads", bench.threads, "Worker threads (0: all cores)");
  bench_cmd->add_option("--csv", bench.csv, "Write records as CSV");
  bench_cmd->add_option("--plot-data", bench.plot, "Write per-instance ratio series as JSON");
  bench_cmd->add_option("--lambda-tol", bench.lambda_tol, "Absolute budget search tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve);
    if (*gen_cmd) return cmd_gen(gen);
    if (*validate_cmd) return cmd_validate(validate_path);
    return cmd_bench(bench);
  } catch (const htap::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const htap::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const htap::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const htap::LimitExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kLimit;
  } catch (const htap::SearchFailure& e) {
    std::cerr << "error: " << e.what() << " after " << e.trace().probes.size() << " probes\n";
    return kSearch;
  } catch (const htap::InvariantViolation& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
