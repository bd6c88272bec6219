#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "htap/allocators.hpp"
#include "htap/errors.hpp"
#include "htap/instance.hpp"
#include "htap/metric_tsp.hpp"
#include "htap/oracle.hpp"
#include "htap/tour_split.hpp"

namespace py = pybind11;

namespace {

htap::Tour tour_from(const htap::Instance& inst, const std::vector<htap::NodeIndex>& nodes) {
  htap::Tour t;
  t.nodes = nodes;
  t.cost = htap::walk_cost(inst, nodes);
  return t;
}

std::vector<std::int64_t> task_ids(const htap::Instance& inst, const std::vector<htap::NodeIndex>& nodes) {
  std::vector<std::int64_t> ids;
  for (htap::NodeIndex v : nodes) ids.push_back(inst.task_at(v).id.value);
  return ids;
}

py::dict search_dict(const htap::LambdaSearch& s) {
  py::list probes;
  for (const htap::LambdaProbe& p : s.probes) {
    py::dict d;
    d["lambda"] = p.lambda;
    d["feasible"] = p.feasible;
    d["minmax"] = p.minmax ? py::cast(*p.minmax) : py::none();
    probes.append(d);
  }
  py::dict d;
  d["lo"] = s.lo;
  d["hi_initial"] = s.hi_initial;
  d["hi_final"] = s.hi_final;
  d["tolerance"] = s.tolerance;
  d["expansions"] = s.expansions;
  d["result_lambda"] = s.result_lambda;
  d["guarantee_lambda"] = s.guarantee_lambda;
  d["probes"] = probes;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Heterogeneous task allocation: instances, tours and allocators.";

  auto error = py::register_exception<htap::Error>(m, "Error");
  py::register_exception<htap::ParseError>(m, "ParseError", error.ptr());
  py::register_exception<htap::ValidationError>(m, "ValidationError", error.ptr());
  py::register_exception<htap::ArgumentError>(m, "ArgumentError", error.ptr());
  py::register_exception<htap::LimitExceeded>(m, "LimitExceeded", error.ptr());
  py::register_exception<htap::InvariantViolation>(m, "InvariantViolation", error.ptr());
  py::register_exception<htap::SearchFailure>(m, "SearchFailure", error.ptr());

  py::class_<htap::Instance>(m, "Instance")
      .def_property_readonly("name", &htap::Instance::name)
      .def_property_readonly("task_count", &htap::Instance::task_count)
      .def_property_readonly("agent_count", &htap::Instance::agent_count)
      .def_property_readonly("tolerance", &htap::Instance::tolerance)
      .def("distance", &htap::Instance::distance, py::arg("u"), py::arg("v"))
      .def("task_nodes_of_type", [](const htap::Instance& inst, std::int64_t type) {
        return inst.task_nodes_of_type(htap::TypeId(type));
      })
      .def("all_task_nodes", &htap::Instance::all_task_nodes)
      .def("to_json", &htap::instance_to_json)
      .def("__repr__", [](const htap::Instance& inst) {
        return "<Instance " + inst.name() + ": " + std::to_string(inst.task_count()) + " tasks, " +
               std::to_string(inst.agent_count()) + " agents>";
      });

  m.def("instance_from_json", &htap::instance_from_json, py::arg("text"));
  m.def("load_instance", [](const std::string& path) { return htap::load_instance(path); }, py::arg("path"));
  m.def("generate_euclidean", &htap::generate_euclidean, py::arg("seed"), py::arg("n_tasks"), py::arg("k_agents"),
        py::arg("m_types"), py::arg("generic_fraction"));
  m.def(
      "generate_paper_example",
      [](int which, double d, double d_prime, std::size_t k) {
        return htap::generate_paper_example(which, {d, d_prime, k});
      },
      py::arg("which"), py::arg("d") = 4.0, py::arg("d_prime") = 3.0, py::arg("k") = 3);
  m.def(
      "validate",
      [](const htap::Instance& inst) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const htap::Violation& v : htap::validate_metric(inst)) {
          out.emplace_back(std::string(htap::to_string(v.kind)), v.message);
        }
        return out;
      },
      "List of (kind, message) pairs; empty for a valid instance.");

  m.def(
      "christofides_tour",
      [](const htap::Instance& inst, const std::vector<htap::NodeIndex>& nodes) {
        const htap::Tour t = htap::christofides_tour(inst, nodes).tour;
        return py::make_tuple(t.nodes, t.cost);
      },
      py::arg("inst"), py::arg("nodes"), "Christofides tour through the given task nodes: (nodes, cost).");
  m.def(
      "held_karp_tour",
      [](const htap::Instance& inst, const std::vector<htap::NodeIndex>& nodes) {
        const htap::Tour t = htap::held_karp_tour(inst, nodes);
        return py::make_tuple(t.nodes, t.cost);
      },
      py::arg("inst"), py::arg("nodes"));
  m.def(
      "splitour",
      [](const htap::Instance& inst, const std::vector<htap::NodeIndex>& tour, std::size_t k) {
        const htap::SplitResult r = htap::splitour(tour_from(inst, tour), k, inst);
        py::list parts;
        for (const htap::Tour& t : r.subtours) parts.append(py::make_tuple(t.nodes, t.cost));
        return py::make_tuple(parts, r.bound);
      },
      py::arg("inst"), py::arg("tour"), py::arg("k"), "Split a rooted tour into k subtours: ([(nodes, cost)], bound).");

  py::class_<htap::AgentAssignment>(m, "AgentAssignment")
      .def_property_readonly("agent", [](const htap::AgentAssignment& a) { return a.agent.value; })
      .def_property_readonly("type", [](const htap::AgentAssignment& a) { return a.type.value; })
      .def_property_readonly("nodes", &htap::AgentAssignment::tasks)
      .def_property_readonly("tour", [](const htap::AgentAssignment& a) { return a.tour.nodes; })
      .def_property_readonly("cost", [](const htap::AgentAssignment& a) { return a.tour.cost; });

  py::class_<htap::Allocation>(m, "Allocation")
      .def_readonly("algorithm", &htap::Allocation::algorithm)
      .def_readonly("minmax", &htap::Allocation::minmax)
      .def_readonly("partition", &htap::Allocation::partition)
      .def_readonly("agents", &htap::Allocation::agents)
      .def_readonly("notes", &htap::Allocation::notes)
      .def("task_ids", [](const htap::Allocation& alloc, const htap::Instance& inst) {
        std::vector<std::vector<std::int64_t>> out;
        for (const auto& a : alloc.agents) out.push_back(task_ids(inst, a.tasks()));
        return out;
      });

  m.def("verify_allocation", &htap::verify_allocation, py::arg("inst"), py::arg("allocation"));
  m.def("allocation_to_json", [](const htap::Instance& inst, const htap::Allocation& alloc) {
    return htap::allocation_to_json(inst, alloc);
  });
  m.def("naive_allocation", [](const htap::Instance& inst) { return htap::naive_allocation(inst); });
  m.def("cycle_split", [](const htap::Instance& inst) { return htap::cycle_split(inst); });
  m.def(
      "hetero_split",
      [](const htap::Instance& inst, double lambda, bool rebalance) -> std::optional<htap::Allocation> {
        htap::HeteroSplitOptions options;
        options.rebalance = rebalance;
        return htap::hetero_split(inst, lambda, options).allocation;
      },
      py::arg("inst"), py::arg("lam"), py::arg("rebalance") = true, "Allocation within budget `lam`, or None.");
  m.def(
      "hetero_minmax_split",
      [](const htap::Instance& inst, double tolerance) {
        htap::MinMaxOptions options;
        options.tolerance = tolerance;
        htap::HeteroMinMaxResult r = htap::hetero_minmax_split(inst, options);
        return py::make_tuple(r.allocation, search_dict(r.search));
      },
      py::arg("inst"), py::arg("tolerance") = 0.0, "(allocation, search trace dict)");
  m.def(
      "exact_minmax",
      [](const htap::Instance& inst, std::size_t max_tasks, std::size_t max_agents) {
        const htap::ExactResult r = htap::exact_minmax(inst, {max_tasks, max_agents});
        return py::make_tuple(r.allocation, r.partitions_examined);
      },
      py::arg("inst"), py::arg("max_tasks") = 9, py::arg("max_agents") = 3, "(optimal allocation, partitions examined)");
  m.def("checked_split_count", &htap::checked_split_count);
}
