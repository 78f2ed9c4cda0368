#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sizelab/checker.hpp"
#include "sizelab/problem.hpp"

namespace sizelab {

// First-order labelled term: defined symbols carry a label tuple (the
// measure image of their argument sizes), constructors and variables none.
struct lterm {
  bool is_var = false;
  std::string name;
  bool labelled = false;
  std::vector<size_ptr> label;
  std::vector<lterm> args;
};

struct labelled_rule {
  lterm lhs, rhs;
  std::string src_rule;
};

bool lterm_equal(const lterm& a, const lterm& b);
std::string to_string(const lterm& t);
term_ptr erase_labels(const rewrite_problem& p, const lterm& t);

// sigma extended to all first-order terms: variables map to themselves,
// constructors to c_A, defined symbols to their interpretation (inf-headed
// symbols yield inf).
size_ptr term_size(const rewrite_problem& p, const term_ptr& t);

struct quasi_model_report {
  bool ok = false;
  std::string code, message;  // QuasiModelViolation, ...
  struct entry {
    std::string rule_id;
    size_ptr lhs_size, rhs_size;  // null for fixpoint-justified rules
    size_cmp comparison = size_cmp::incomparable;
    std::string justification;  // "interpretation" or "fixpoint"
  };
  std::vector<entry> entries;
  std::vector<std::string> notes;
};

// The quasi-model condition instantiated with the size semantics: for rules
// whose head has a finite interpretation, sigma(r) <= sigma(l); inf-headed
// rules are justified by the fixpoint construction, whose preconditions
// (strict extensivity, decreasing equivalent calls) are verified here.
quasi_model_report check_quasi_model(const rewrite_problem& p);

// The symbolically labelled system: every defined occurrence g m... is
// labelled with the measure image of sigma(m...), normalized.
std::vector<labelled_rule> label_system(const rewrite_problem& p);

struct ground_labelled_system {
  std::vector<labelled_rule> rules;  // labels are constant expressions
  std::vector<labelled_rule> decr;   // f_a(x...) -> f_b(x...) fragments
};

// All instances with label variables valued in {0..k}; labels evaluate to
// naturals. Also emits the finite Decr fragment over the labels present.
ground_labelled_system instantiate_labels(const rewrite_problem& p,
                                          const std::vector<labelled_rule>& rules,
                                          std::uint64_t k);

struct pt_result {
  bool ok = false;
  std::string witness;  // offending occurrence when !ok
};

// Precedence termination of the labelled system: below every head f_a, rhs
// symbols are constructors, strictly smaller symbols, or equivalent symbols
// with strictly smaller labels. Label comparison is symbolic, which covers
// all ground instances by stability under substitution.
pt_result check_precedence_termination(const rewrite_problem& p,
                                       const std::vector<labelled_rule>& rules);

// Labels a ground first-order term with evaluated labels; nullopt when a
// measured argument mentions an inf-interpreted symbol.
std::optional<lterm> label_ground_term(const rewrite_problem& p, const term_ptr& t);

// Strict decrease in the recursive path order induced by the labelled
// precedence (the testable consequence of precedence termination; a plain
// occurrence-multiset comparison is refuted by duplicating rules).
bool labelled_rpo_gt(const rewrite_problem& p, const lterm& before, const lterm& after);

std::string export_tpdb(const rewrite_problem& p, const ground_labelled_system& sys);
std::string export_labelled_json(const rewrite_problem& p,
                                 const std::vector<labelled_rule>& rules);

}  // namespace sizelab
