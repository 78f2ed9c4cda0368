#include "sizelab/types.hpp"

#include <sstream>
#include <stdexcept>

namespace sizelab {

type_ptr mk_sort(std::string name) {
  auto t = std::make_shared<simple_type>();
  t->sort = std::move(name);
  return t;
}

type_ptr mk_arrow(type_ptr dom, type_ptr cod) {
  auto t = std::make_shared<simple_type>();
  t->dom = std::move(dom);
  t->cod = std::move(cod);
  return t;
}

type_ptr mk_arrow_chain(const std::vector<type_ptr>& args, type_ptr result) {
  type_ptr t = std::move(result);
  for (auto it = args.rbegin(); it != args.rend(); ++it) t = mk_arrow(*it, t);
  return t;
}

bool type_equal(const type_ptr& a, const type_ptr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->is_base() != b->is_base()) return false;
  if (a->is_base()) return a->sort == b->sort;
  return type_equal(a->dom, b->dom) && type_equal(a->cod, b->cod);
}

std::vector<type_ptr> argument_types(const type_ptr& t) {
  std::vector<type_ptr> args;
  type_ptr cur = t;
  while (!cur->is_base()) {
    args.push_back(cur->dom);
    cur = cur->cod;
  }
  return args;
}

std::string result_sort(const type_ptr& t) {
  type_ptr cur = t;
  while (!cur->is_base()) cur = cur->cod;
  return cur->sort;
}

int type_arity(const type_ptr& t) {
  int n = 0;
  type_ptr cur = t;
  while (!cur->is_base()) {
    ++n;
    cur = cur->cod;
  }
  return n;
}

void collect_sorts(const type_ptr& t, std::vector<std::string>& out) {
  if (t->is_base()) {
    out.push_back(t->sort);
    return;
  }
  collect_sorts(t->dom, out);
  collect_sorts(t->cod, out);
}

namespace {
void sort_positions_rec(const type_ptr& t, std::vector<int>& path, bool positive,
                        std::vector<sort_occurrence>& out) {
  if (t->is_base()) {
    out.push_back({t->sort, path, positive});
    return;
  }
  path.push_back(1);
  sort_positions_rec(t->dom, path, !positive, out);
  path.back() = 2;
  sort_positions_rec(t->cod, path, positive, out);
  path.pop_back();
}
}  // namespace

std::vector<sort_occurrence> sort_positions(const type_ptr& t) {
  std::vector<sort_occurrence> out;
  std::vector<int> path;
  sort_positions_rec(t, path, true, out);
  return out;
}

std::string path_to_string(const std::vector<int>& path) {
  if (path.empty()) return "e";
  std::ostringstream os;
  for (size_t i = 0; i < path.size(); ++i) {
    if (i) os << ".";
    os << path[i];
  }
  return os.str();
}

std::string to_string(const type_ptr& t) {
  if (t->is_base()) return t->sort;
  std::string dom = to_string(t->dom);
  if (!t->dom->is_base()) dom = "(" + dom + ")";
  return dom + " -> " + to_string(t->cod);
}

}  // namespace sizelab
