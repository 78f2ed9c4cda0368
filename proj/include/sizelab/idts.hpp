#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sizelab/problem.hpp"
#include "sizelab/term.hpp"

namespace sizelab {

// Structural IDTS meta-terms. IDTS base types are first-order terms over the
// sorts plus Arr, which is exactly the simple-type tree, so simple types are
// reused as-is and printed with Arr(...) notation.
//
// A symbol argument may be binder-prefixed; abstractions appear only there,
// except in beta-IDTS terms produced by erasure, which use the lam node.
enum class idts_kind { var, sym, meta, lam };

struct idts_term;
using idts_ptr = std::shared_ptr<const idts_term>;

struct idts_arg {
  std::vector<std::pair<std::string, type_ptr>> binders;
  idts_ptr body;
};

struct idts_term {
  idts_kind kind;
  std::string name;            // var / meta name, symbol name
  type_ptr lam_u, lam_v;       // lam_/app_ type tags when symbol is one of them
  std::vector<idts_arg> args;  // sym
  std::vector<idts_ptr> margs; // meta
  std::string lam_var;         // lam (beta-IDTS only)
  type_ptr lam_dom;
  idts_ptr lam_body;
};

idts_ptr idts_var(std::string name);
idts_ptr idts_sym(std::string name, std::vector<idts_arg> args, type_ptr u = nullptr,
                  type_ptr v = nullptr);
idts_ptr idts_meta(std::string name, std::vector<idts_ptr> args);
idts_ptr idts_lam(std::string var, type_ptr dom, idts_ptr body);

bool idts_equal(const idts_ptr& a, const idts_ptr& b);
std::string to_string(const idts_ptr& t);
std::string idts_type_string(const type_ptr& t);  // Arr(...) notation

bool is_lam_symbol(const idts_ptr& t);
bool is_app_symbol(const idts_ptr& t);

// Structural well-formedness: abstractions only as symbol arguments, no lam
// nodes, meta arities consistent.
bool is_structural(const idts_ptr& t);

struct idts_rule {
  std::string id;
  idts_ptr lhs, rhs;
  std::map<std::string, int> meta_arity;
};

// Translation of a simply-typed term; free variables stay variables. The
// optional partial-application clause eta-wraps underapplied symbols.
idts_ptr to_idts(const rewrite_problem& p, const term_ptr& t);

// Rule translation: free variables of the rule become nullary meta-variables.
idts_rule rule_to_idts(const rewrite_problem& p, const rule& r);

// One beta rule per Arr(T,U) type actually used by the translated problem:
//   @_T^U(lam_T^U(\x. Z(x)), X) -> Z(X)
std::vector<idts_rule> beta_rule_family(const rewrite_problem& p);
std::vector<idts_rule> beta_rules_for(const std::vector<type_ptr>& arrow_types);

// Arr types occurring in the translated problem (symbol types and rules).
std::vector<type_ptr> arrow_types_in_use(const rewrite_problem& p);

// Assignment application: meta-variables map to binder-prefixed bodies.
struct idts_assignment {
  std::map<std::string, idts_arg> map;  // Z -> \x1..xn. body
};
idts_ptr apply_assignment(const idts_ptr& t, const idts_assignment& theta);

// Capture-avoiding substitution of free variables.
idts_ptr idts_substitute(const idts_ptr& t, const std::map<std::string, idts_ptr>& sub);

// One-step rewriting with IDTS rules (meta-term matching); all redexes.
struct idts_step {
  idts_ptr result;
  std::string rule_id;
};
std::vector<idts_step> idts_redexes(const idts_ptr& t, const std::vector<idts_rule>& rules);

// Erasure to a beta-IDTS: lam_T^U(\x. u) becomes \x. |u|.
idts_ptr erase_to_beta_idts(const idts_ptr& t);
idts_rule erase_rule(const idts_rule& r);

std::string idts_rules_json(const std::vector<idts_rule>& rules);

}  // namespace sizelab
