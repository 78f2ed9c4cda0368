#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sizelab/signature.hpp"
#include "sizelab/term.hpp"

namespace sizelab {

// A rewrite rule l -> r of a common type, with r's free variables contained
// in l's and l headed by a defined symbol.
struct rule {
  std::string id;
  term_ptr lhs, rhs;
  type_ptr type;
};

// True iff t is a variable or a constructor applied to patterns.
bool is_pattern(const term_ptr& t, const signature& sig);

// First-order matching on the applicative spine; nonlinear patterns require
// equal matched subterms.
bool match(const term_ptr& pattern, const term_ptr& subject,
           std::map<std::string, term_ptr>& binding);

struct step_result {
  term_ptr result;
  std::vector<int> position;  // AST path, 1/2 children, empty = root
  std::string rule_id;        // "beta" for beta steps
};

// One leftmost-outermost contraction of beta (optional) or a rule redex, or
// nullopt if t is a normal form.
std::optional<step_result> rewrite_step(const term_ptr& t,
                                        const std::vector<rule>& rules,
                                        bool include_beta);

// All redexes of t (for random strategies).
std::vector<step_result> all_redexes(const term_ptr& t,
                                     const std::vector<rule>& rules,
                                     bool include_beta);

// Normalizes with leftmost-outermost steps; returns nullopt when the step
// budget is exhausted.
std::optional<term_ptr> normalize(const term_ptr& t, const std::vector<rule>& rules,
                                  bool include_beta, long budget,
                                  long* steps_taken = nullptr);

// Rewrites with a random redex choice until normal form; returns the number
// of steps, or nullopt when the budget is exhausted.
std::optional<long> random_derivation(const term_ptr& t, const std::vector<rule>& rules,
                                      bool include_beta, long budget, std::mt19937& rng,
                                      std::vector<term_ptr>* trace = nullptr);

}  // namespace sizelab
