#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sizelab/types.hpp"

namespace sizelab {

struct symbol_decl {
  std::string name;
  type_ptr type;
  bool is_constructor = false;
};

struct validation_issue {
  bool is_error = false;
  std::string code;     // NegativeOccurrence, NonStrictlyPositive, ...
  std::string symbol;
  std::string position;
  std::string message;
};

// Signature with the derived inductive structure: the sort quasi-order
// computed from the constructor dependency graph (B depends on C when C
// occurs in an argument type of a constructor of B; equivalent = same SCC),
// the Ind sets and strict-positivity flags.
class signature {
 public:
  std::vector<std::string> sorts;
  std::map<std::string, symbol_decl> symbols;

  void add_sort(const std::string& name);
  void add_constructor(const std::string& name, type_ptr type);
  void add_defined(const std::string& name, type_ptr type);

  const symbol_decl* find_symbol(const std::string& name) const;
  bool has_sort(const std::string& name) const;

  // Computes the derived structure. Issues with is_error set mean the
  // signature is rejected; declaration order never affects the result.
  std::vector<validation_issue> validate();
  bool validated() const { return validated_; }

  bool sort_equiv(const std::string& b, const std::string& c) const;
  // c <=_B b (c below or equivalent to b in the sort quasi-order)
  bool sort_le(const std::string& c, const std::string& b) const;
  int sort_class(const std::string& b) const;

  // 1-based argument positions of c whose type mentions a sort equivalent to
  // the result sort of c.
  const std::set<int>& ind(const std::string& ctor) const;
  bool is_recursive_ctor(const std::string& ctor) const;
  bool is_strictly_positive(const std::string& ctor) const;

  std::vector<std::string> constructors_of_sort(const std::string& sort) const;

 private:
  bool validated_ = false;
  std::map<std::string, int> class_of_;
  std::vector<std::set<int>> class_below_;  // strictly-below classes, closed
  std::map<std::string, std::set<int>> ind_;
  std::map<std::string, bool> strictly_positive_;
};

}  // namespace sizelab
