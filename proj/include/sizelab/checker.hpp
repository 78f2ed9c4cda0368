#pragma once

#include <map>
#include <string>
#include <vector>

#include "sizelab/problem.hpp"

namespace sizelab {

enum class measure_verdict { lt, ge_or_unknown };

// Applies the zeta components to a measured-size tuple.
std::vector<size_ptr> apply_measure(const measure_spec& spec,
                                    const std::vector<std::string>& size_vars,
                                    const std::vector<size_ptr>& sizes);

// Strict decrease of b against a in the lexicographic or multiset extension
// of the size comparison; lt holds under every valuation.
measure_verdict measure_compare(const std::vector<size_ptr>& b,
                                const std::vector<size_ptr>& a, domain_kind kind);

struct cc_call {
  std::string callee;
  std::string call_text;
  std::vector<size_ptr> measured_sizes;  // b
  std::vector<size_ptr> zeta_b, zeta_a;
  bool decreasing = false;
};

struct rule_trace {
  std::string rule_id;
  std::string fun;
  std::string lhs_text, rhs_text;
  std::map<std::string, std::string> env_text;    // Gamma, printed
  std::vector<size_ptr> arg_sizes;                // a
  size_ptr rhs_size;                              // inferred annotation of the rhs
  size_ptr bound;                                 // f^A(a)
  size_cmp comparison = size_cmp::incomparable;
  std::vector<cc_call> calls;
  bool ok = false;
  std::string error_code, error_message;
};

enum class verdict_status { terminates, unknown, rejected };

struct verdict {
  verdict_status status = verdict_status::rejected;
  std::vector<rule_trace> traces;
  std::vector<std::string> notes;     // nonconstructor admissions, warnings
  std::string reject_code, reject_message;
};

std::string to_string(verdict_status s);

struct nonconstructor_check {
  bool ok = false;
  std::string code, message;           // NotStrictlyExtensive, PrecedenceFallbackFailed
  std::vector<std::string> notes;
};

// Side conditions for defined symbols inside lhs arguments:
// every such g must have a monotone, strictly extensive interpretation; a
// g with interpretation inf is admitted only under an inf-headed rule via
// the precedence / measure fallback.
nonconstructor_check check_nonconstructor(const rewrite_problem& p);

struct monotonicity_report {
  bool ok = true;
  std::vector<std::string> notes;
  std::string code, message;  // NonMonotoneAnnotation
};

// All size symbols of both algebra modes are monotone in every argument;
// this verifies the interpretations and measures only use them, and records
// the finite-branching hypotheses.
monotonicity_report check_monotonicity(const rewrite_problem& p);

// The main termination criterion: per rule, builds the context, infers the
// rhs under the computability closure and compares the result annotation
// against f^A(a). Non-constructor systems are admitted through
// check_nonconstructor first.
verdict check_system(const rewrite_problem& p);

}  // namespace sizelab
