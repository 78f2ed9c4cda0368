#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <chrono>

#include "sizelab/checker.hpp"
#include "sizelab/idts.hpp"
#include "sizelab/labelling.hpp"
#include "sizelab/oracle.hpp"
#include "sizelab/report.hpp"

namespace py = pybind11;
using namespace sizelab;

namespace {

py::object json_loads(const std::string& s) {
  return py::module_::import("json").attr("loads")(s);
}

py::object check_py(const rewrite_problem& p) {
  auto start = std::chrono::steady_clock::now();
  verdict v = check_system(p);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report_options opts;
  opts.json = true;
  opts.trace = true;
  return json_loads(render_verdict(p, v, opts, secs));
}

py::object label_py(const rewrite_problem& p) {
  auto start = std::chrono::steady_clock::now();
  label_report rep;
  rep.qm = check_quasi_model(p);
  if (rep.qm.ok) {
    rep.rules = label_system(p);
    rep.pt = check_precedence_termination(p, rep.rules);
    rep.ran_pt = true;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report_options opts;
  opts.json = true;
  return json_loads(render_label_report(p, rep, opts, secs));
}

std::string ground_tpdb_py(const rewrite_problem& p, std::uint64_t k) {
  auto rules = label_system(p);
  return export_tpdb(p, instantiate_labels(p, rules, k));
}

py::object idts_py(const rewrite_problem& p) {
  std::vector<idts_rule> rules;
  for (const auto& r : p.rules) rules.push_back(rule_to_idts(p, r));
  auto beta = beta_rule_family(p);
  rules.insert(rules.end(), beta.begin(), beta.end());
  return json_loads(idts_rules_json(rules));
}

std::string compare_py(const std::string& a, const std::string& b) {
  return to_string(compare(parse_size_expr(a), parse_size_expr(b)));
}

std::uint64_t eval_py(const std::string& e, const std::map<std::string, std::uint64_t>& mu) {
  size_value v = eval(parse_size_expr(e), mu);
  if (v.infinite) throw std::runtime_error("expression evaluates to inf");
  return v.v;
}

py::object oracle_py(const rewrite_problem& p, int depth, int strategies, long budget) {
  derivation_check h = check_halting(p, depth, strategies, budget, 20240917);
  py::dict d;
  d["halting"] = h.ok;
  d["terms"] = h.terms_checked;
  d["derivations"] = h.derivations;
  d["steps"] = h.total_steps;
  if (!h.ok) d["failure"] = h.failure;
  return d;
}

}  // namespace

PYBIND11_MODULE(sizelab, m) {
  m.doc() = "Termination prover for simply-typed rewrite systems based on sized types "
            "and semantic labelling";

  py::class_<rewrite_problem>(m, "Problem")
      .def_property_readonly("name", [](const rewrite_problem& p) { return p.name; })
      .def_property_readonly("rules",
                             [](const rewrite_problem& p) {
                               std::vector<std::string> out;
                               for (const auto& r : p.rules)
                                 out.push_back(to_string(r.lhs) + " -> " + to_string(r.rhs));
                               return out;
                             })
      .def_property_readonly("first_order",
                             [](const rewrite_problem& p) { return p.is_first_order(); })
      .def("__repr__", [](const rewrite_problem& p) {
        return "<sizelab.Problem '" + p.name + "' (" + std::to_string(p.rules.size()) +
               " rules)>";
      });

  m.def("parse_problem", &parse_problem, py::arg("text"), py::arg("name") = "",
        "Parse a problem from .strs text");
  m.def("parse_problem_file", &parse_problem_file, py::arg("path"));
  m.def("check", &check_py, py::arg("problem"),
        "Run the termination criterion; returns the report as a dict");
  m.def("label", &label_py, py::arg("problem"),
        "Quasi-model check, symbolic labelling and precedence termination");
  m.def("ground_tpdb", &ground_tpdb_py, py::arg("problem"), py::arg("k"),
        "Ground-labelled system with labels in {0..k}, TPDB text");
  m.def("idts", &idts_py, py::arg("problem"), "Structural IDTS translation plus beta rules");
  m.def("compare_sizes", &compare_py, py::arg("a"), py::arg("b"),
        "Sound comparison of two size expressions: LT/LE/EQ/INCOMPARABLE");
  m.def("eval_size", &eval_py, py::arg("expr"), py::arg("valuation"));
  m.def("oracle", &oracle_py, py::arg("problem"), py::arg("depth") = 4,
        py::arg("strategies") = 20, py::arg("budget") = 100000,
        "Exhaustive bounded rewriting of ground terms");

  py::register_exception<parse_error>(m, "ParseError");
}
