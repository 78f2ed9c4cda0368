#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sizelab/annotated_type.hpp"
#include "sizelab/rewrite.hpp"
#include "sizelab/signature.hpp"
#include "sizelab/size_algebra.hpp"

namespace sizelab {

// Quasi-order on defined symbols; constructors sit implicitly below every
// defined symbol. Equivalence classes come from `~` declarations, strict
// edges from `>`.
class precedence {
 public:
  void declare_symbol(const std::string& f);
  void declare_equiv(const std::string& f, const std::string& g);
  void declare_gt(const std::string& f, const std::string& g);

  // Closes the order; false (with message) if a strict cycle exists.
  bool finalize(std::string* error);

  bool equiv(const std::string& f, const std::string& g) const;
  bool gt(const std::string& f, const std::string& g) const;

 private:
  std::map<std::string, std::string> parent_;
  std::map<std::string, std::set<std::string>> gt_edges_;  // on class reps
  std::string find(const std::string& f) const;
  bool finalized_ = false;
  std::map<std::string, std::set<std::string>> gt_closed_;
};

enum class domain_kind { lex, mul };

// Measure of one precedence class: domain kind plus the tuple zeta of size
// expressions over the symbol's measured size variables. Defaults to the
// identity tuple with a lexicographic domain.
struct measure_spec {
  domain_kind kind = domain_kind::lex;
  std::vector<size_ptr> components;
};

struct defined_info {
  std::string name;
  ann_ptr type;                         // tau_f with size-variable / inf leaves
  std::vector<int> measured;            // 1-based argument indices carrying size vars
  std::vector<std::string> size_vars;   // alpha vector, in measured order
  size_ptr interp;                      // f^A as expression over size_vars (may be inf)
};

struct ann_signature {
  std::map<std::string, defined_info> defined;
  std::map<std::string, ctor_annotation> ctors;

  const defined_info* find(const std::string& f) const {
    auto it = defined.find(f);
    return it == defined.end() ? nullptr : &it->second;
  }
};

struct rewrite_problem {
  std::string name;
  signature sig;
  ann_signature asig;
  std::vector<rule> rules;
  precedence prec;
  std::map<std::string, measure_spec> measures;
  std::vector<validation_issue> validation;

  const measure_spec& measure_of(const std::string& f) const;
  bool is_first_order() const;
  // some rule has a defined symbol inside an lhs argument
  bool has_defined_lhs_subterms() const;
};

struct parse_error : std::runtime_error {
  int line, col;
  std::string code;
  parse_error(std::string c, int l, int co, const std::string& msg)
      : std::runtime_error(l > 0 ? "line " + std::to_string(l) + ":" + std::to_string(co) +
                                       ": " + msg
                                 : msg),
        line(l), col(co), code(std::move(c)) {}
};

// Parses the .strs problem format; throws parse_error. The returned problem
// has a validated signature (validation issues recorded; hard errors throw).
rewrite_problem parse_problem(const std::string& text, const std::string& name = "");
rewrite_problem parse_problem_file(const std::string& path);

std::string print_problem(const rewrite_problem& p);

}  // namespace sizelab
