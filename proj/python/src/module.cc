#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "osea/bench.h"
#include "osea/mip.h"
#include "osea/model.h"
#include "osea/mps.h"
#include "osea/osea.h"
#include "osea/report.h"

namespace py = pybind11;

namespace {

osea::Budget MakeBudget(std::optional<double> seconds, std::optional<int64_t> nodes) {
  osea::Budget b;
  if (seconds) b.seconds = *seconds;
  if (nodes) b.nodes = *nodes;
  return b;
}

py::dict SolveMip(const osea::MilpInstance& inst, std::optional<double> seconds,
                  std::optional<int64_t> nodes) {
  osea::BnbOptions opts;
  opts.limit = MakeBudget(seconds, nodes);
  osea::BnbResult r;
  {
    py::gil_scoped_release release;
    r = osea::SolveMip(inst, opts);
  }
  py::dict out;
  out["status"] = std::string(osea::ToString(r.status));
  out["objective"] = r.incumbent ? py::cast(osea::ReportedObjective(inst, r.incumbent->objective))
                                 : py::none();
  out["x"] = r.incumbent ? py::cast(r.incumbent->x) : py::none();
  out["nodes"] = r.nodes;
  out["lp_iterations"] = r.lp_iterations;
  return out;
}

std::string RunOsea(const osea::MilpInstance& inst, std::optional<double> total_seconds,
                    std::optional<int64_t> total_nodes, std::optional<double> incumbent_seconds,
                    std::optional<int64_t> incumbent_nodes, int n_max) {
  osea::OseaOptions opts;
  if (total_seconds || total_nodes) opts.total_budget = MakeBudget(total_seconds, total_nodes);
  if (incumbent_seconds || incumbent_nodes) {
    opts.incumbent_budget = MakeBudget(incumbent_seconds, incumbent_nodes);
  }
  opts.n_max = n_max;
  osea::OseaResult r;
  {
    py::gil_scoped_release release;
    r = osea::RunOsea(inst, opts);
  }
  return osea::OseaResultToJson(r, inst, true).dump();
}

}  // namespace

PYBIND11_MODULE(_osea, m) {
  m.doc() = "MILP toolkit with the objective scaling ensemble heuristic";

  py::register_exception<osea::InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<osea::NotApplicableError>(m, "NotApplicableError", PyExc_ValueError);

  py::class_<osea::MilpInstance>(m, "Instance")
      .def_property_readonly("name", &osea::MilpInstance::name)
      .def_property_readonly("num_vars", &osea::MilpInstance::num_vars)
      .def_property_readonly("num_rows", &osea::MilpInstance::num_rows)
      .def_property_readonly("num_entries", &osea::MilpInstance::num_entries)
      .def_property_readonly("is_max", [](const osea::MilpInstance& i) {
        return i.sense() == osea::ObjectiveSense::kMaximize;
      })
      .def_property_readonly("cost", [](const osea::MilpInstance& i) {
        return std::vector<double>(i.cost().begin(), i.cost().end());
      })
      .def_property_readonly("integer_indices", &osea::MilpInstance::integer_indices)
      .def("__eq__", [](const osea::MilpInstance& a, const osea::MilpInstance& b) { return a == b; });

  m.def("parse_mps", [](const std::string& text) { return osea::ParseMps(text); }, py::arg("text"));
  m.def("read_mps", [](const std::string& path) { return osea::ReadMpsFile(path); },
        py::arg("path"));
  m.def("write_mps", &osea::WriteMps, py::arg("instance"));
  m.def("classify", [](const osea::MilpInstance& i) {
    return std::string(osea::ToString(osea::Classify(i)));
  });
  m.def("is_feasible", [](const osea::MilpInstance& i, const std::vector<double>& x) {
    return osea::CheckFeasibility(i, x).status == osea::SolutionStatus::kFeasible;
  });
  m.def("solve_mip", &SolveMip, py::arg("instance"), py::arg("seconds") = py::none(),
        py::arg("nodes") = py::none());
  m.def("_run_osea_json", &RunOsea, py::arg("instance"), py::arg("total_seconds") = py::none(),
        py::arg("total_nodes") = py::none(), py::arg("incumbent_seconds") = py::none(),
        py::arg("incumbent_nodes") = py::none(), py::arg("n_max") = 50);
  m.def("compute_gap", &osea::ComputeGap, py::arg("z_bound"), py::arg("z"));
  m.def(
      "generate",
      [](uint64_t seed, const std::string& spec) {
        std::vector<osea::MilpInstance> out;
        for (auto& g : osea::GenerateInstances(seed, osea::ParseGeneratorSpec(spec))) {
          out.push_back(std::move(g.instance));
        }
        return out;
      },
      py::arg("seed"), py::arg("spec"));
}
