#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "slicer/cli.hpp"
#include "slicer/fixtures.hpp"
#include "slicer/store.hpp"

namespace py = pybind11;
using namespace slicer;

namespace {

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict lint_template(const std::string& text, std::size_t env_limit, bool count_names) {
  RuleSet rules;
  rules.env_char_limit = env_limit;
  rules.count_names = count_names;
  const auto doc = parse_template(text);
  auto out = to_python(to_json_document(lint(doc, rules))).cast<py::dict>();
  out["environment_chars"] = environment_char_count(doc.environment, count_names);
  return out;
}

py::dict compose(const std::vector<std::tuple<double, double, double>>& parts, bool chain) {
  std::vector<Sla> slas;
  for (const auto& [l, a, r] : parts) slas.push_back({"", l, a, r, ""});
  const Sla s = compose_slas(slas, chain);
  py::dict out;
  out["latency"] = s.committed_latency;
  out["availability"] = s.committed_availability;
  out["data_rate"] = s.committed_data_rate;
  return out;
}

py::dict demo_slice_a() {
  Engine e(Catalog{}, build_testbed(), AuditLog{});
  const auto outcome = fixtures::run_slice_a(e);
  py::dict out;
  out["state"] = state_name(outcome.slice.state);
  out["plan"] = to_python(to_json_document(outcome.plan));
  py::list actions;
  for (const auto& ev : e.audit().events()) actions.append(ev.action);
  out["audit_actions"] = actions;
  return out;
}

py::tuple run_cli(const std::vector<std::string>& args) {
  const auto r = cli::run(args);
  return py::make_tuple(r.exit_code, r.out, r.err);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Network slice lifecycle orchestrator";
  py::register_exception<Error>(m, "SlicerError", PyExc_RuntimeError);
  m.attr("DEFAULT_ENV_CHAR_LIMIT") = kDefaultEnvCharLimit;
  m.attr("UPGRADED_ENV_CHAR_LIMIT") = kUpgradedEnvCharLimit;
  m.def("lint_template", &lint_template, py::arg("text"),
        py::arg("env_limit") = kDefaultEnvCharLimit, py::arg("count_names") = false);
  m.def(
      "environment_char_count",
      [](const std::string& text, bool count_names) {
        return environment_char_count(parse_template(text).environment, count_names);
      },
      py::arg("text"), py::arg("count_names") = false);
  m.def("compose_slas", &compose, py::arg("parts"), py::arg("chain") = true,
        "Compose (latency, availability, data_rate) triples.");
  m.def("demo_slice_a", &demo_slice_a);
  m.def("run_cli", &run_cli, py::arg("args"), "Returns (exit_code, stdout, stderr).");
}
