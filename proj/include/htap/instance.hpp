#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "htap/types.hpp"

namespace htap {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Task {
  TaskId id;
  TypeId type;
  std::optional<Point> position;
};

struct Agent {
  AgentId id;
  TypeId type;
};

/// Dense square matrix of non-negative distances, row-major.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }

  double operator()(std::size_t u, std::size_t v) const { return data_[u * n_ + v]; }
  double& operator()(std::size_t u, std::size_t v) { return data_[u * n_ + v]; }

  double max_entry() const;

  /// Euclidean distances between `points`.
  static DistanceMatrix euclidean(const std::vector<Point>& points);

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// A Heterogeneous Task Allocation Problem instance.
///
/// Agents all start at the depot (node 0). Tasks of type i >= 1 can only be
/// served by agents of type i; tasks of type 0 are generic. Agents are kept
/// sorted by id, so "agent 1" in the algorithms is the lowest id.
///
/// Construction does not validate; use validate_metric() or load_instance().
class Instance {
 public:
  Instance() = default;
  Instance(std::string name, std::vector<Task> tasks, std::vector<Agent> agents,
           DistanceMatrix distances, std::optional<Point> depot_position = std::nullopt);

  /// Builds an instance whose distances are Euclidean over the task
  /// positions. The depot defaults to the centroid of the tasks.
  static Instance from_points(std::string name, std::vector<Task> tasks,
                              std::vector<Agent> agents,
                              std::optional<Point> depot_position = std::nullopt);

  const std::string& name() const { return name_; }
  const std::vector<Task>& tasks() const { return tasks_; }
  const std::vector<Agent>& agents() const { return agents_; }
  const DistanceMatrix& distances() const { return distances_; }
  const std::optional<Point>& depot_position() const { return depot_position_; }

  /// True when every task carries coordinates and distances are Euclidean.
  bool has_coordinates() const { return depot_position_.has_value(); }

  std::size_t task_count() const { return tasks_.size(); }
  std::size_t agent_count() const { return agents_.size(); }
  std::size_t node_count() const { return tasks_.size() + 1; }

  static NodeIndex node_of(std::size_t task_position) { return task_position + 1; }
  const Task& task_at(NodeIndex node) const { return tasks_.at(node - 1); }

  double distance(NodeIndex u, NodeIndex v) const { return distances_(u, v); }

  /// Absolute tolerance for cost comparisons: 1e-9 times the largest entry.
  double tolerance() const { return tolerance_; }

  /// Number of agent types m (the largest agent type id).
  std::int64_t type_count() const;

  /// Task nodes of the given type, ascending.
  std::vector<NodeIndex> task_nodes_of_type(TypeId type) const;
  std::vector<NodeIndex> all_task_nodes() const;

  /// Positions (into agents()) of agents of `type`, ascending by id.
  std::vector<std::size_t> agents_of_type(TypeId type) const;

  /// Largest direct depot distance over all tasks.
  double max_depot_distance() const;

 private:
  std::string name_;
  std::vector<Task> tasks_;
  std::vector<Agent> agents_;
  DistanceMatrix distances_;
  std::optional<Point> depot_position_;
  double tolerance_ = 0.0;
};

enum class ViolationKind {
  kShape,
  kNegative,
  kNonZeroDiagonal,
  kAsymmetry,
  kTriangle,
  kDuplicateTaskId,
  kDuplicateAgentId,
  kBadTaskType,
  kBadAgentType,
  kOrphanTaskType,
  kNoAgents,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  /// Witness node indices (or task/agent positions for structural issues).
  std::vector<std::size_t> witness;
  /// How far off the value is (asymmetry gap, triangle excess, ...).
  double magnitude = 0.0;
  std::string message;
};

/// Checks every instance invariant and returns the violations found, in a
/// fixed order (structure, then symmetry, then triangle inequality).
///
/// `metric_epsilon` < 0 selects the default of 1e-9 times the largest entry.
std::vector<Violation> validate_metric(const Instance& inst, double metric_epsilon = -1.0);

/// Parses an instance document. Throws ParseError on malformed input.
Instance instance_from_json(std::string_view text);
std::string instance_to_json(const Instance& inst);

/// Reads, parses and validates an instance file. Throws ParseError or
/// ValidationError (naming the first violation).
Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& inst, const std::filesystem::path& path);

/// Random Euclidean instance on the unit square, depot at the task centroid,
/// agents round-robin over types 1..m.
Instance generate_euclidean(std::uint64_t seed, std::size_t n_tasks, std::size_t k_agents,
                            std::size_t m_types, double generic_fraction);

struct ExampleParams {
  double d = 4.0;
  double d_prime = 3.0;
  std::size_t k = 3;
};

/// The four illustrative layouts (road networks closed under shortest
/// paths). `which` is 1..4.
Instance generate_paper_example(int which, const ExampleParams& params = {});

/// All-pairs shortest paths over a weighted undirected graph given as an
/// adjacency matrix (negative entries mean "no edge").
DistanceMatrix shortest_path_closure(const DistanceMatrix& graph);

}  // namespace htap
