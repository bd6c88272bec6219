#include "htap/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "htap/errors.hpp"

namespace htap {

double DistanceMatrix::max_entry() const {
  double best = 0.0;
  for (double v : data_) best = std::max(best, v);
  return best;
}

DistanceMatrix DistanceMatrix::euclidean(const std::vector<Point>& points) {
  DistanceMatrix m(points.size());
  for (std::size_t u = 0; u < points.size(); ++u) {
    for (std::size_t v = u + 1; v < points.size(); ++v) {
      const double dist = std::hypot(points[u].x - points[v].x, points[u].y - points[v].y);
      m(u, v) = dist;
      m(v, u) = dist;
    }
  }
  return m;
}

Instance::Instance(std::string name, std::vector<Task> tasks, std::vector<Agent> agents,
                   DistanceMatrix distances, std::optional<Point> depot_position)
    : name_(std::move(name)),
      tasks_(std::move(tasks)),
      agents_(std::move(agents)),
      distances_(std::move(distances)),
      depot_position_(depot_position) {
  std::stable_sort(agents_.begin(), agents_.end(),
                   [](const Agent& a, const Agent& b) { return a.id < b.id; });
  tolerance_ = 1e-9 * distances_.max_entry();
}

Instance Instance::from_points(std::string name, std::vector<Task> tasks, std::vector<Agent> agents,
                               std::optional<Point> depot_position) {
  std::vector<Point> points;
  points.reserve(tasks.size() + 1);
  Point depot{};
  if (depot_position) {
    depot = *depot_position;
  } else if (!tasks.empty()) {
    for (const Task& t : tasks) {
      if (!t.position) throw ArgumentError("task " + std::to_string(t.id.value) + " has no position");
      depot.x += t.position->x;
      depot.y += t.position->y;
    }
    depot.x /= static_cast<double>(tasks.size());
    depot.y /= static_cast<double>(tasks.size());
  }
  points.push_back(depot);
  for (const Task& t : tasks) {
    if (!t.position) throw ArgumentError("task " + std::to_string(t.id.value) + " has no position");
    points.push_back(*t.position);
  }
  return Instance(std::move(name), std::move(tasks), std::move(agents),
                  DistanceMatrix::euclidean(points), depot);
}

std::int64_t Instance::type_count() const {
  std::int64_t m = 0;
  for (const Agent& a : agents_) m = std::max(m, a.type.value);
  return m;
}

std::vector<NodeIndex> Instance::task_nodes_of_type(TypeId type) const {
  std::vector<NodeIndex> out;
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    if (tasks_[i].type == type) out.push_back(node_of(i));
  }
  return out;
}

std::vector<NodeIndex> Instance::all_task_nodes() const {
  std::vector<NodeIndex> out(tasks_.size());
  for (std::size_t i = 0; i < tasks_.size(); ++i) out[i] = node_of(i);
  return out;
}

std::vector<std::size_t> Instance::agents_of_type(TypeId type) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < agents_.size(); ++j) {
    if (agents_[j].type == type) out.push_back(j);
  }
  return out;
}

double Instance::max_depot_distance() const {
  double best = 0.0;
  for (std::size_t v = 1; v < node_count(); ++v) best = std::max(best, distance(kDepot, v));
  return best;
}

// ---------------------------------------------------------------------------
// Validation

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kShape: return "shape";
    case ViolationKind::kNegative: return "negative";
    case ViolationKind::kNonZeroDiagonal: return "nonzero-diagonal";
    case ViolationKind::kAsymmetry: return "asymmetry";
    case ViolationKind::kTriangle: return "triangle";
    case ViolationKind::kDuplicateTaskId: return "duplicate-task-id";
    case ViolationKind::kDuplicateAgentId: return "duplicate-agent-id";
    case ViolationKind::kBadTaskType: return "bad-task-type";
    case ViolationKind::kBadAgentType: return "bad-agent-type";
    case ViolationKind::kOrphanTaskType: return "orphan-task-type";
    case ViolationKind::kNoAgents: return "no-agents";
  }
  return "unknown";
}

namespace {

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

std::vector<Violation> validate_metric(const Instance& inst, double metric_epsilon) {
  std::vector<Violation> out;
  const DistanceMatrix& d = inst.distances();
  const std::size_t n = inst.node_count();

  if (inst.agent_count() == 0) {
    out.push_back({ViolationKind::kNoAgents, {}, 0.0, "instance has no agents (k must be >= 1)"});
  }

  std::set<std::int64_t> seen_tasks;
  for (std::size_t i = 0; i < inst.task_count(); ++i) {
    const Task& t = inst.tasks()[i];
    if (t.id.value < 0 || !seen_tasks.insert(t.id.value).second) {
      out.push_back({ViolationKind::kDuplicateTaskId, {i}, 0.0,
                     "task id " + std::to_string(t.id.value) + " is negative or duplicated"});
    }
  }
  std::set<std::int64_t> seen_agents;
  for (std::size_t j = 0; j < inst.agent_count(); ++j) {
    const Agent& a = inst.agents()[j];
    if (a.id.value < 0 || !seen_agents.insert(a.id.value).second) {
      out.push_back({ViolationKind::kDuplicateAgentId, {j}, 0.0,
                     "agent id " + std::to_string(a.id.value) + " is negative or duplicated"});
    }
    if (a.type.value < 1) {
      out.push_back({ViolationKind::kBadAgentType, {j}, 0.0,
                     "agent " + std::to_string(a.id.value) + " has type " +
                         std::to_string(a.type.value) + " (agent types start at 1)"});
    }
  }
  const std::int64_t m = inst.type_count();
  for (std::size_t i = 0; i < inst.task_count(); ++i) {
    const Task& t = inst.tasks()[i];
    if (t.type.value < 0) {
      out.push_back({ViolationKind::kBadTaskType, {i}, 0.0,
                     "task " + std::to_string(t.id.value) + " has negative type"});
    } else if (t.type.value >= 1 && (t.type.value > m || inst.agents_of_type(t.type).empty())) {
      out.push_back({ViolationKind::kOrphanTaskType, {i}, 0.0,
                     "task " + std::to_string(t.id.value) + " has type " +
                         std::to_string(t.type.value) + " but no agent of that type exists"});
    }
  }

  if (d.size() != n) {
    out.push_back({ViolationKind::kShape, {d.size(), n}, 0.0,
                   "distance matrix is " + std::to_string(d.size()) + "x" +
                       std::to_string(d.size()) + " but the instance has " +
                       std::to_string(n) + " nodes"});
    return out;
  }

  const double eps = metric_epsilon >= 0.0 ? metric_epsilon : 1e-9 * d.max_entry();

  for (std::size_t u = 0; u < n; ++u) {
    if (d(u, u) != 0.0) {
      out.push_back({ViolationKind::kNonZeroDiagonal, {u}, d(u, u),
                     "d(" + std::to_string(u) + "," + std::to_string(u) + ") = " + fmt_num(d(u, u))});
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (!(d(u, v) >= 0.0) || !std::isfinite(d(u, v))) {
        out.push_back({ViolationKind::kNegative, {u, v}, d(u, v),
                       "d(" + std::to_string(u) + "," + std::to_string(v) +
                           ") is negative or not finite"});
      }
    }
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const double gap = std::abs(d(u, v) - d(v, u));
      if (gap > eps) {
        out.push_back({ViolationKind::kAsymmetry, {u, v}, gap,
                       "asymmetric distances between nodes " + std::to_string(u) + " and " +
                           std::to_string(v) + ": " + fmt_num(d(u, v)) + " vs " +
                           fmt_num(d(v, u))});
      }
    }
  }
  // One report per unordered pair {u, w}: the worst detour in either direction.
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t w = u + 1; w < n; ++w) {
      double worst = eps;
      std::vector<std::size_t> witness;
      for (std::size_t v = 0; v < n; ++v) {
        if (v == u || v == w) continue;
        const double forward = d(u, w) - (d(u, v) + d(v, w));
        const double backward = d(w, u) - (d(w, v) + d(v, u));
        if (forward > worst) {
          worst = forward;
          witness = {u, v, w};
        }
        if (backward > worst) {
          worst = backward;
          witness = {w, v, u};
        }
      }
      if (witness.empty()) continue;
      const std::string a = std::to_string(witness[0]);
      const std::string b = std::to_string(witness[1]);
      const std::string c = std::to_string(witness[2]);
      out.push_back({ViolationKind::kTriangle, witness, worst,
                     "triangle inequality fails for (" + a + "," + b + "," + c + "): d(" + a + "," + c +
                         ") exceeds the path via " + b + " by " + fmt_num(worst)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

using nlohmann::json;

template <class T>
T get_field(const json& obj, const char* key, const char* context) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string(context) + ": missing field '" + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string(context) + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

Instance instance_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("instance document must be a JSON object");

  const std::string name = doc.contains("name") ? get_field<std::string>(doc, "name", "instance")
                                                : std::string("unnamed");
  if (!doc.contains("tasks") || !doc["tasks"].is_array()) throw ParseError("instance: 'tasks' must be an array");
  if (!doc.contains("agents") || !doc["agents"].is_array()) throw ParseError("instance: 'agents' must be an array");

  std::vector<Task> tasks;
  std::size_t with_coords = 0;
  for (const json& jt : doc["tasks"]) {
    if (!jt.is_object()) throw ParseError("task entries must be objects");
    Task t;
    t.id = TaskId(get_field<std::int64_t>(jt, "id", "task"));
    t.type = TypeId(get_field<std::int64_t>(jt, "type", "task"));
    const bool has_x = jt.contains("x");
    const bool has_y = jt.contains("y");
    if (has_x != has_y) throw ParseError("task " + std::to_string(t.id.value) + ": x and y must come together");
    if (has_x) {
      t.position = Point{get_field<double>(jt, "x", "task"), get_field<double>(jt, "y", "task")};
      ++with_coords;
    }
    tasks.push_back(t);
  }
  std::vector<Agent> agents;
  for (const json& ja : doc["agents"]) {
    if (!ja.is_object()) throw ParseError("agent entries must be objects");
    agents.push_back({AgentId(get_field<std::int64_t>(ja, "id", "agent")),
                      TypeId(get_field<std::int64_t>(ja, "type", "agent"))});
  }

  const bool has_matrix = doc.contains("distances");
  const bool all_coords = !tasks.empty() && with_coords == tasks.size();
  if (with_coords != 0 && !all_coords) throw ParseError("either all tasks or no tasks may carry coordinates");
  if (has_matrix == all_coords) {
    if (!(tasks.empty() && has_matrix)) {
      throw ParseError("exactly one of coordinates-for-all-tasks or a distance matrix must be present");
    }
  }

  if (all_coords) {
    std::optional<Point> depot;
    if (doc.contains("depot")) {
      const json& jd = doc["depot"];
      if (!jd.is_object()) throw ParseError("'depot' must be an object with x and y");
      depot = Point{get_field<double>(jd, "x", "depot"), get_field<double>(jd, "y", "depot")};
    }
    return Instance::from_points(name, std::move(tasks), std::move(agents), depot);
  }

  const json& jm = doc["distances"];
  if (!jm.is_array()) throw ParseError("'distances' must be an array of rows");
  const std::size_t n = jm.size();
  DistanceMatrix m(n);
  for (std::size_t u = 0; u < n; ++u) {
    if (!jm[u].is_array() || jm[u].size() != n) {
      throw ParseError("'distances' must be square; row " + std::to_string(u) + " has the wrong length");
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (!jm[u][v].is_number()) throw ParseError("'distances' entries must be numbers");
      m(u, v) = jm[u][v].get<double>();
    }
  }
  return Instance(name, std::move(tasks), std::move(agents), std::move(m));
}

std::string instance_to_json(const Instance& inst) {
  json doc;
  doc["name"] = inst.name();
  json tasks = json::array();
  for (const Task& t : inst.tasks()) {
    json jt = {{"id", t.id.value}, {"type", t.type.value}};
    if (inst.has_coordinates() && t.position) {
      jt["x"] = t.position->x;
      jt["y"] = t.position->y;
    }
    tasks.push_back(std::move(jt));
  }
  doc["tasks"] = std::move(tasks);
  json agents = json::array();
  for (const Agent& a : inst.agents()) agents.push_back({{"id", a.id.value}, {"type", a.type.value}});
  doc["agents"] = std::move(agents);
  if (inst.has_coordinates() && !inst.tasks().empty()) {
    doc["depot"] = {{"x", inst.depot_position()->x}, {"y", inst.depot_position()->y}};
  } else {
    json rows = json::array();
    const DistanceMatrix& d = inst.distances();
    for (std::size_t u = 0; u < d.size(); ++u) {
      json row = json::array();
      for (std::size_t v = 0; v < d.size(); ++v) row.push_back(d(u, v));
      rows.push_back(std::move(row));
    }
    doc["distances"] = std::move(rows);
  }
  return doc.dump(2) + "\n";
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open instance file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  Instance inst = instance_from_json(buf.str());
  const auto violations = validate_metric(inst);
  if (!violations.empty()) {
    throw ValidationError(path.string() + ": " + std::string(to_string(violations.front().kind)) +
                          ": " + violations.front().message);
  }
  return inst;
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << instance_to_json(inst);
}

// ---------------------------------------------------------------------------
// Generators

namespace {

// Portable uniform draws from the raw 64-bit engine output, so generated
// instances do not depend on the standard library's distributions.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)) % n;
}

}  // namespace

Instance generate_euclidean(std::uint64_t seed, std::size_t n_tasks, std::size_t k_agents,
                            std::size_t m_types, double generic_fraction) {
  if (n_tasks < 1) throw ArgumentError("n_tasks must be >= 1");
  if (k_agents < 1) throw ArgumentError("k_agents must be >= 1");
  if (m_types < 1 || m_types > k_agents) throw ArgumentError("m_types must lie in [1, k_agents]");
  if (!(generic_fraction >= 0.0 && generic_fraction <= 1.0)) {
    throw ArgumentError("generic_fraction must lie in [0, 1]");
  }

  std::mt19937_64 rng(seed);
  std::vector<Task> tasks;
  tasks.reserve(n_tasks);
  for (std::size_t i = 0; i < n_tasks; ++i) {
    Task t;
    t.id = TaskId(static_cast<std::int64_t>(i + 1));
    const double x = uniform01(rng);
    const double y = uniform01(rng);
    t.position = Point{x, y};
    const double u = uniform01(rng);
    const std::size_t type = uniform_index(rng, m_types) + 1;
    t.type = u < generic_fraction ? kGenericType : TypeId(static_cast<std::int64_t>(type));
    tasks.push_back(t);
  }
  std::vector<Agent> agents;
  agents.reserve(k_agents);
  for (std::size_t j = 0; j < k_agents; ++j) {
    agents.push_back({AgentId(static_cast<std::int64_t>(j + 1)),
                      TypeId(static_cast<std::int64_t>(j % m_types + 1))});
  }
  std::ostringstream name;
  name << "euclidean-s" << seed << "-n" << n_tasks << "-k" << k_agents << "-m" << m_types;
  return Instance::from_points(name.str(), std::move(tasks), std::move(agents));
}

DistanceMatrix shortest_path_closure(const DistanceMatrix& graph) {
  const std::size_t n = graph.size();
  const double inf = std::numeric_limits<double>::infinity();
  DistanceMatrix d(n, inf);
  for (std::size_t u = 0; u < n; ++u) {
    d(u, u) = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (u != v && graph(u, v) >= 0.0) d(u, v) = std::min(d(u, v), graph(u, v));
    }
  }
  for (std::size_t via = 0; via < n; ++via) {
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = 0; v < n; ++v) {
        if (d(u, via) + d(via, v) < d(u, v)) d(u, v) = d(u, via) + d(via, v);
      }
    }
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (d(u, v) == inf) throw ArgumentError("road network is disconnected");
    }
  }
  return d;
}

namespace {

// Road network with named junctions; tasks sit on junctions.
struct RoadNetwork {
  std::size_t junctions = 0;
  std::vector<std::tuple<std::size_t, std::size_t, double>> roads;
  std::vector<std::pair<std::size_t, std::int64_t>> tasks;  // (junction, type)

  Instance build(std::string name, std::vector<Agent> agents) const {
    DistanceMatrix g(junctions, -1.0);
    for (auto [a, b, w] : roads) {
      g(a, b) = w;
      g(b, a) = w;
    }
    const DistanceMatrix closure = shortest_path_closure(g);
    // Node 0 is the depot, which is junction 0.
    std::vector<std::size_t> at{0};
    std::vector<Task> list;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      at.push_back(tasks[i].first);
      list.push_back({TaskId(static_cast<std::int64_t>(i + 1)), TypeId(tasks[i].second), std::nullopt});
    }
    DistanceMatrix d(at.size());
    for (std::size_t u = 0; u < at.size(); ++u) {
      for (std::size_t v = 0; v < at.size(); ++v) d(u, v) = closure(at[u], at[v]);
    }
    return Instance(std::move(name), std::move(list), std::move(agents), std::move(d));
  }
};

std::vector<Agent> agents_with_types(std::initializer_list<std::int64_t> types) {
  std::vector<Agent> out;
  std::int64_t id = 1;
  for (std::int64_t t : types) out.push_back({AgentId(id++), TypeId(t)});
  return out;
}

}  // namespace

Instance generate_paper_example(int which, const ExampleParams& params) {
  switch (which) {
    case 1: {
      if (!(params.d_prime > 2.0)) throw ArgumentError("example 1 requires d' > 2");
      if (!(params.d > 3.0)) throw ArgumentError("example 1 requires d > 3");
      // Junctions: 0 depot, 1 V1, 2 V2, 3 A, 4 B, 5 C.
      RoadNetwork net;
      net.junctions = 6;
      net.roads = {{0, 1, params.d_prime}, {0, 2, params.d_prime}, {1, 3, 1.0},
                   {1, 4, 1.0},            {1, 5, 1.0},            {5, 2, params.d}};
      // t1..t6 generic at A, A, B, B, C, C; t7, t8 at V1 (types 1, 2); t9 at V2 (type 3).
      net.tasks = {{3, 0}, {3, 0}, {4, 0}, {4, 0}, {5, 0}, {5, 0}, {1, 1}, {1, 2}, {2, 3}};
      std::ostringstream name;
      name << "example1-d" << params.d << "-dprime" << params.d_prime;
      return net.build(name.str(), agents_with_types({1, 2, 3}));
    }
    case 2: {
      RoadNetwork net;
      net.junctions = 3;  // depot, A, B
      net.roads = {{0, 1, 1.0}, {0, 2, 1.0}};
      net.tasks = {{1, 1}, {1, 1}, {2, 0}, {2, 0}};
      return net.build("example2", agents_with_types({1, 1}));
    }
    case 3: {
      RoadNetwork net;
      net.junctions = 3;  // depot, A, B
      net.roads = {{0, 1, 1.0}, {0, 2, 1.0}};
      net.tasks = {{1, 1}, {2, 0}, {2, 0}};
      return net.build("example3", agents_with_types({1, 2}));
    }
    case 4: {
      if (params.k < 2) throw ArgumentError("example 4 requires k >= 2");
      const std::size_t k = params.k;
      RoadNetwork net;
      net.junctions = k + 1;  // depot, V1..Vk
      for (std::size_t i = 1; i <= k; ++i) net.roads.emplace_back(0, i, 1.0);
      for (std::size_t i = 1; i < k; ++i) net.tasks.emplace_back(i, static_cast<std::int64_t>(i));
      for (std::size_t i = k; i <= 2 * k - 1; ++i) net.tasks.emplace_back(k, 0);
      std::vector<Agent> agents;
      for (std::size_t i = 1; i <= k; ++i) {
        agents.push_back({AgentId(static_cast<std::int64_t>(i)), TypeId(static_cast<std::int64_t>(i))});
      }
      return net.build("example4-k" + std::to_string(k), std::move(agents));
    }
    default:
      throw ArgumentError("example must be 1, 2, 3 or 4");
  }
}

}  // namespace htap
