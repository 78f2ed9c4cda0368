#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sizelab/signature.hpp"
#include "sizelab/size_algebra.hpp"
#include "sizelab/types.hpp"

namespace sizelab {

// Simple types whose base-type leaves carry size annotations.
struct ann_type;
using ann_ptr = std::shared_ptr<const ann_type>;

struct ann_type {
  std::string sort;  // base
  size_ptr ann;      // base
  ann_ptr dom, cod;  // arrow

  bool is_base() const { return dom == nullptr; }
};

ann_ptr mk_ann_base(std::string sort, size_ptr ann);
ann_ptr mk_ann_arrow(ann_ptr dom, ann_ptr cod);

type_ptr erase(const ann_ptr& t);
bool ann_equal(const ann_ptr& a, const ann_ptr& b);

// T^inf: every base type annotated with inf.
ann_ptr annot_inf(const type_ptr& t);

// annot_B^alpha(T): base types equivalent to B annotated with alpha, all
// others with inf.
ann_ptr annot_rec(const signature& sig, const std::string& b, const size_ptr& alpha,
                  const type_ptr& t);

ann_ptr apply_size_subst(const ann_ptr& t, const size_subst& phi);
std::set<std::string> ann_size_vars(const ann_ptr& t);

struct erasure_mismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Subtyping, syntax-directed: base rule via compare, contravariant
// arrow rule. Requires equal erasures.
bool subtype(const ann_ptr& t, const ann_ptr& u);

// Annotated constructor type per the max-annotation scheme:
//   tau_c = annot_B^{a1}(T1) -> ... -> annot_B^{an}(Tn) -> B^{c_A(a...)}
// with c_A = 0 for non-recursive c and s(max(a_i | i in Ind(c))) otherwise.
struct ctor_annotation {
  ann_ptr type;
  std::vector<std::string> size_vars;  // a1..an, one per argument
  size_ptr result_ann;                 // c_A(a...)
};
ctor_annotation annotate_constructor(const signature& sig, const std::string& ctor);

// c_A applied to the given argument sizes.
size_ptr ctor_size(const signature& sig, const std::string& ctor,
                   const std::vector<size_ptr>& arg_sizes);

// Positive/negative annotated positions and the polarity of each size
// variable occurrence. All size symbols in both algebra modes are monotone
// in every argument, so a variable's polarity is the polarity of its leaf.
struct ann_position {
  std::vector<int> path;  // 1 = domain, 2 = codomain, 0 = into the annotation
  bool positive;
  std::string var;  // size variable at this occurrence, empty for the leaf itself
};
struct position_report {
  std::vector<ann_position> leaves;          // one entry per annotated base leaf
  std::multimap<std::string, bool> var_polarity;  // variable -> occurrence polarity
};
position_report positions(const ann_ptr& t);

std::string to_string(const ann_ptr& t);

}  // namespace sizelab
