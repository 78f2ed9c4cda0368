#pragma once

#include <memory>
#include <string>
#include <vector>

namespace sizelab {

// Simple types over a set of sorts: either a base sort or an arrow.
struct simple_type;
using type_ptr = std::shared_ptr<const simple_type>;

struct simple_type {
  std::string sort;   // set when base
  type_ptr dom, cod;  // set when arrow

  bool is_base() const { return dom == nullptr; }
};

type_ptr mk_sort(std::string name);
type_ptr mk_arrow(type_ptr dom, type_ptr cod);

// Builds T1 -> T2 -> ... -> Tn -> B from right to left.
type_ptr mk_arrow_chain(const std::vector<type_ptr>& args, type_ptr result);

bool type_equal(const type_ptr& a, const type_ptr& b);

// Argument types along the arrow spine, ending at a base sort.
std::vector<type_ptr> argument_types(const type_ptr& t);
std::string result_sort(const type_ptr& t);
int type_arity(const type_ptr& t);

// All sort names occurring in t.
void collect_sorts(const type_ptr& t, std::vector<std::string>& out);

// Positions of sort occurrences, with polarity. A position is the path of
// child indices (1 = domain, 2 = codomain); the root is the empty path.
struct sort_occurrence {
  std::string sort;
  std::vector<int> path;
  bool positive;
};
std::vector<sort_occurrence> sort_positions(const type_ptr& t);

std::string path_to_string(const std::vector<int>& path);
std::string to_string(const type_ptr& t);

}  // namespace sizelab
