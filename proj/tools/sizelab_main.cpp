#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "sizelab/checker.hpp"
#include "sizelab/idts.hpp"
#include "sizelab/labelling.hpp"
#include "sizelab/oracle.hpp"
#include "sizelab/report.hpp"

using namespace sizelab;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

long oracle_budget(long requested) {
  if (const char* env = std::getenv("SIZELAB_ORACLE_BUDGET")) {
    long cap = std::atol(env);
    if (cap > 0 && cap < requested) return cap;
  }
  return requested;
}

int run_check(const std::string& file, const report_options& opts) {
  auto start = std::chrono::steady_clock::now();
  rewrite_problem p = parse_problem_file(file);
  verdict v = check_system(p);
  std::cout << render_verdict(p, v, opts, seconds_since(start));
  switch (v.status) {
    case verdict_status::terminates:
      return 0;
    case verdict_status::unknown:
      return 1;
    case verdict_status::rejected:
      return 2;
  }
  return 2;
}

int run_label(const std::string& file, const report_options& opts, int ground,
              const std::string& export_format, const std::string& out_path) {
  auto start = std::chrono::steady_clock::now();
  rewrite_problem p = parse_problem_file(file);
  label_report rep;
  rep.qm = check_quasi_model(p);
  if (!rep.qm.ok) {
    std::cout << render_label_report(p, rep, opts, seconds_since(start));
    return rep.qm.code == "QuasiModelViolation" || rep.qm.code == "NotStrictlyExtensive" ||
                   rep.qm.code == "PrecedenceFallbackFailed"
               ? 1
               : 2;
  }
  rep.rules = label_system(p);
  rep.pt = check_precedence_termination(p, rep.rules);
  rep.ran_pt = true;
  std::string exported;
  if (export_format == "tpdb" && ground < 0) {
    std::cerr << "error: --export tpdb requires --ground <k> (TPDB is the ground format)\n";
    return 2;
  }
  if (ground >= 0 && export_format != "json") {
    exported = export_tpdb(p, instantiate_labels(p, rep.rules, ground));
  } else if (export_format == "json") {
    exported = export_labelled_json(p, rep.rules);
  }
  std::cout << render_label_report(p, rep, opts, seconds_since(start));
  if (!exported.empty()) {
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      out << exported;
    } else {
      std::cout << exported;
    }
  }
  return rep.pt.ok ? 0 : 1;
}

int run_idts(const std::string& file, const report_options& opts) {
  rewrite_problem p = parse_problem_file(file);
  std::vector<idts_rule> rules;
  for (const auto& r : p.rules) rules.push_back(rule_to_idts(p, r));
  std::vector<idts_rule> beta = beta_rule_family(p);
  rules.insert(rules.end(), beta.begin(), beta.end());
  if (opts.json) {
    std::cout << idts_rules_json(rules);
    std::cout << "\n";
  } else {
    for (const auto& r : rules)
      std::cout << r.id << ": " << to_string(r.lhs) << " -> " << to_string(r.rhs) << "\n";
  }
  return 0;
}

int run_oracle(const std::string& file, int fuzz, int depth, const report_options& opts) {
  auto start = std::chrono::steady_clock::now();
  rewrite_problem p = parse_problem_file(file);
  long budget = oracle_budget(100000);
  derivation_check halting = check_halting(p, depth, fuzz, budget, 20240917);
  bool size_ok = true;
  std::string size_failure;
  if (p.is_first_order()) {
    derivation_check size = check_size_nonincrease(p, depth, budget);
    size_ok = size.ok;
    size_failure = size.failure;
  }
  if (opts.json) {
    std::cout << "{\"schema\":\"" << kReportSchema << "\",\"halting\":" << (halting.ok ? "true" : "false")
              << ",\"terms\":" << halting.terms_checked << ",\"derivations\":" << halting.derivations
              << ",\"size_nonincrease\":" << (size_ok ? "true" : "false") << ",\"seconds\":"
              << seconds_since(start) << "}\n";
  } else {
    std::cout << "halting: " << (halting.ok ? "ok" : "FAILED " + halting.failure) << " ("
              << halting.terms_checked << " terms, " << halting.derivations << " derivations, "
              << halting.total_steps << " steps)\n";
    std::cout << "size non-increase: " << (size_ok ? "ok" : "FAILED " + size_failure) << "\n";
    std::cout << "time: " << seconds_since(start) << "s\n";
  }
  return halting.ok && size_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sizelab - termination prover for simply-typed rewrite systems"};
  app.require_subcommand(1);

  std::string file, export_format, out_path;
  report_options opts;
  int ground = -1, fuzz = 50, depth = 4;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("file", file, "problem file (.strs)")->required();
    cmd->add_flag_function(
        "--trace", [&](std::int64_t) { opts.trace = true; }, "include per-rule traces");
    cmd->add_option_function<std::string>(
        "--format",
        [&](const std::string& f) { opts.json = (f == "json"); },
        "output format: text|json");
  };

  CLI::App* check = app.add_subcommand("check", "run the sized-types termination criterion");
  add_common(check);
  CLI::App* label = app.add_subcommand("label", "semantic labelling pipeline");
  add_common(label);
  label->add_option("--ground", ground, "instantiate labels with values in {0..k}");
  label->add_option("--export", export_format, "export format: tpdb|json");
  label->add_option("--out", out_path, "write the export to a file");
  CLI::App* idts = app.add_subcommand("idts", "translate to a structural IDTS");
  add_common(idts);
  CLI::App* oracle = app.add_subcommand("oracle", "bounded rewriting oracles");
  add_common(oracle);
  oracle->add_option("--fuzz", fuzz, "random strategies per term");
  oracle->add_option("--depth", depth, "ground-term height bound");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return run_check(file, opts);
    if (label->parsed()) return run_label(file, opts, ground, export_format, out_path);
    if (idts->parsed()) return run_idts(file, opts);
    if (oracle->parsed()) return run_oracle(file, fuzz, depth, opts);
  } catch (const parse_error& e) {
    std::cerr << "error [" << e.code << "] " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
