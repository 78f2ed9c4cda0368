#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sizelab/annotated_type.hpp"
#include "sizelab/checker.hpp"
#include "sizelab/problem.hpp"

namespace sizelab {

struct unify_result {
  bool ok = false;
  size_subst subst;
  std::string code;  // Clash, OccursCheck, FrozenViolation on failure
  std::string message;
};

// Most general syntactic unifier of two annotated types of equal erasure,
// over the extended algebra where terms containing inf are identified.
// Variables in `frozen` act as constants. Colliding non-frozen variables of
// the right-hand type are renamed apart first.
unify_result unify(const ann_ptr& t, const ann_ptr& u, const std::set<std::string>& frozen);

struct rule_context {
  std::string fun;
  const rule* r = nullptr;
  std::map<std::string, ann_ptr> env;   // Gamma
  std::set<std::string> frozen;         // X(Gamma)
  std::vector<size_ptr> arg_sizes;      // symbolic sizes of the measured lhs args
  std::vector<term_ptr> measured_args;
  std::vector<term_ptr> param_args;
};

struct context_error {
  std::string code;  // NotApplicativeLhs, VariableUsedTwiceInMeasuredArgs, ...
  std::string message;
};

// Builds the rule environment and argument sizes. When
// `allow_defined_subterms` is set, defined symbols with a non-inf
// interpretation may occur inside measured arguments (their sigma-size is
// the interpretation applied to the argument sizes).
std::optional<context_error> build_rule_context(const rewrite_problem& p, const rule& r,
                                                rule_context& out,
                                                bool allow_defined_subterms = false);

// sigma on lhs patterns: sigma(x) = x, sigma(c t...) = c_A(sigma t...),
// extended over defined symbols by their interpretation. Returns inf when a
// defined symbol with interpretation inf occurs.
size_ptr pattern_size(const rewrite_problem& p, const term_ptr& t);

struct infer_outcome {
  bool ok = false;
  ann_ptr type;
  std::string code;  // error code when !ok
  std::string message;
  std::vector<cc_call> calls;  // cc mode: recursive-call comparisons
};

// Unification-based type inference: symbol types instantiated with fresh size
// variables, applications resolved by unification with X(Gamma) frozen;
// subtyping is used only to absorb arguments into inf-annotated positions.
infer_outcome infer(const rewrite_problem& p, const std::map<std::string, ann_ptr>& env,
                    const std::set<std::string>& frozen, const term_ptr& t);

// Inference restricted by the computability closure: symbols strictly below
// ctx.fun are free, equivalent symbols must be fully applied with measured
// sizes strictly below ctx.arg_sizes in the symbol's measure.
infer_outcome cc_infer(const rewrite_problem& p, const rule_context& ctx, const term_ptr& t);

}  // namespace sizelab
