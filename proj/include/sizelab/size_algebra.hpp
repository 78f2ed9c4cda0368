#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace sizelab {

// Size expressions over {0, s, max, inf} plus linear atoms c1*x1+...+c0
// (the latter only meaningful in first-order labelling mode). Any expression
// containing inf denotes inf.
enum class size_kind { var, zero, succ, maxe, inf, linear };

struct size_expr;
using size_ptr = std::shared_ptr<const size_expr>;

struct size_expr {
  size_kind kind;
  std::string var;                            // var
  size_ptr a, b;                              // succ: a; maxe: a, b
  std::map<std::string, std::uint64_t> coeffs;  // linear
  std::uint64_t konst = 0;                    // linear
};

size_ptr sz_var(std::string name);
size_ptr sz_zero();
size_ptr sz_succ(size_ptr e);
size_ptr sz_max(size_ptr a, size_ptr b);
size_ptr sz_max_of(const std::vector<size_ptr>& es);  // empty -> 0
size_ptr sz_inf();
size_ptr sz_linear(std::map<std::string, std::uint64_t> coeffs, std::uint64_t konst);
size_ptr sz_const(std::uint64_t n);

bool size_is_inf(const size_ptr& e);        // contains inf anywhere
bool size_uses_linear(const size_ptr& e);   // has a non-trivial linear atom
std::set<std::string> size_vars(const size_ptr& e);

// One atom of a normal form: a linear combination plus constant; the normal
// form denotes the pointwise max of its atoms.
struct size_atom {
  std::map<std::string, std::uint64_t> coeffs;
  std::uint64_t konst = 0;

  bool operator==(const size_atom&) const = default;
  bool operator<(const size_atom& o) const;
  // every coefficient and the constant of this <= o
  bool dominated_by(const size_atom& o) const;
};

struct size_nf {
  bool infinite = false;
  std::vector<size_atom> atoms;  // sorted, no atom dominated by another

  bool operator==(const size_nf&) const = default;
};

size_nf normalize(const size_ptr& e);
size_ptr nf_to_expr(const size_nf& nf);
size_ptr normal_form_expr(const size_ptr& e);

enum class size_cmp { lt, le, eq, incomparable };

// Sound, incomplete comparison: lt/le/eq hold under every valuation of the
// variables into naturals; incomparable carries no information.
size_cmp compare(const size_ptr& a, const size_ptr& b);
size_cmp compare_nf(const size_nf& a, const size_nf& b);

struct size_value {
  bool infinite = false;
  std::uint64_t v = 0;

  bool operator==(const size_value&) const = default;
};

struct size_error : std::runtime_error {
  std::string code;
  size_error(std::string c, const std::string& msg)
      : std::runtime_error(msg), code(std::move(c)) {}
};

// Homomorphic evaluation; throws UnboundSizeVariable.
size_value eval(const size_ptr& e, const std::map<std::string, std::uint64_t>& mu);

using size_subst = std::map<std::string, size_ptr>;
size_ptr apply_size_subst(const size_ptr& e, const size_subst& phi);

std::string to_string(const size_ptr& e);
std::string to_string(const size_nf& nf);
std::string to_string(size_cmp c);

// Parses `0`, `s(e)`, `max(e,...)`, `inf`, variables and linear sums such as
// `2*x+y+1`. Throws size_error (SyntaxError).
size_ptr parse_size_expr(const std::string& text);

}  // namespace sizelab
