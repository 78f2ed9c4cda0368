#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sizelab/problem.hpp"

namespace sizelab {

// Height of a ground constructor term: o(c t...) = 0 for non-recursive c,
// otherwise 1 + max over the Ind(c) arguments. Throws NonGround /
// NonConstructor.
std::uint64_t ground_size_oracle(const signature& sig, const term_ptr& t);

// Closed well-typed terms of the problem's base sorts, with a first-order
// style height bound: leaves count 1, a spine or binder adds 1 over the
// maximal child. Includes partial applications (eta-expanded on demand by
// rewriting) and beta-redex forms, so beta is exercised.
std::vector<term_ptr> enumerate_ground_terms(const rewrite_problem& p, int max_height,
                                             size_t max_terms = 250000);

struct derivation_check {
  bool ok = false;
  long terms_checked = 0;
  long derivations = 0;
  long total_steps = 0;
  std::string failure;  // first offending term / step
};

// Exhaustive halting check: every enumerated ground term reaches a normal
// form within the step budget under leftmost-outermost and `strategies`
// random strategies.
derivation_check check_halting(const rewrite_problem& p, int max_height, int strategies,
                               long budget, std::uint64_t seed);

// First-order only: along every leftmost-outermost step from the enumerated
// terms, the evaluated sigma-size never increases, and the labelled-symbol
// multiset strictly decreases in the labelled precedence order.
derivation_check check_size_nonincrease(const rewrite_problem& p, int max_height,
                                        long budget);
derivation_check check_labelled_decrease(const rewrite_problem& p, int max_height,
                                         long budget, int strategies, std::uint64_t seed);

}  // namespace sizelab
