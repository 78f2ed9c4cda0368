#include "sizelab/problem.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace sizelab {

void precedence::declare_symbol(const std::string& f) {
  if (!parent_.count(f)) parent_[f] = f;
}

std::string precedence::find(const std::string& f) const {
  std::string cur = f;
  while (true) {
    auto it = parent_.find(cur);
    if (it == parent_.end() || it->second == cur) return cur;
    cur = it->second;
  }
}

void precedence::declare_equiv(const std::string& f, const std::string& g) {
  declare_symbol(f);
  declare_symbol(g);
  std::string rf = find(f), rg = find(g);
  if (rf != rg) parent_[std::max(rf, rg)] = std::min(rf, rg);
  finalized_ = false;
}

void precedence::declare_gt(const std::string& f, const std::string& g) {
  declare_symbol(f);
  declare_symbol(g);
  gt_edges_[f].insert(g);
  finalized_ = false;
}

bool precedence::finalize(std::string* error) {
  // strict edges between class representatives, transitively closed
  std::map<std::string, std::set<std::string>> edges;
  for (const auto& [f, gs] : gt_edges_)
    for (const auto& g : gs) edges[find(f)].insert(find(g));
  gt_closed_.clear();
  std::function<bool(const std::string&, std::set<std::string>&, std::set<std::string>&)> dfs =
      [&](const std::string& v, std::set<std::string>& visiting,
          std::set<std::string>& done) -> bool {
    if (done.count(v)) return true;
    if (visiting.count(v)) return false;  // strict cycle
    visiting.insert(v);
    for (const auto& w : edges[v]) {
      if (!dfs(w, visiting, done)) return false;
      gt_closed_[v].insert(w);
      gt_closed_[v].insert(gt_closed_[w].begin(), gt_closed_[w].end());
    }
    visiting.erase(v);
    done.insert(v);
    return true;
  };
  std::set<std::string> visiting, done;
  for (const auto& [f, _] : edges)
    if (!dfs(f, visiting, done)) {
      if (error) *error = "precedence has a strict cycle through '" + f + "'";
      return false;
    }
  // equivalent symbols must not be strictly related
  for (const auto& [f, below] : gt_closed_)
    if (below.count(f)) {
      if (error) *error = "precedence has a strict cycle through '" + f + "'";
      return false;
    }
  finalized_ = true;
  return true;
}

bool precedence::equiv(const std::string& f, const std::string& g) const {
  if (!parent_.count(f) || !parent_.count(g)) return f == g;
  return find(f) == find(g);
}

bool precedence::gt(const std::string& f, const std::string& g) const {
  if (!parent_.count(f) || !parent_.count(g)) return false;
  auto it = gt_closed_.find(find(f));
  return it != gt_closed_.end() && it->second.count(find(g)) > 0;
}

const measure_spec& rewrite_problem::measure_of(const std::string& f) const {
  static const measure_spec empty;
  auto it = measures.find(f);
  if (it != measures.end()) return it->second;
  return empty;
}

bool rewrite_problem::is_first_order() const {
  for (const auto& [name, decl] : sig.symbols) {
    if (!decl.type->is_base())
      for (const auto& a : argument_types(decl.type))
        if (!a->is_base()) return false;
  }
  std::function<bool(const term_ptr&)> fo = [&](const term_ptr& t) -> bool {
    if (t->kind == term_kind::lam) return false;
    std::vector<term_ptr> args;
    term_ptr head = spine_head(t, &args);
    if (head->kind == term_kind::sym) {
      const symbol_decl* d = sig.find_symbol(head->name);
      if (!d || type_arity(d->type) != static_cast<int>(args.size())) return false;
    } else if (!args.empty()) {
      return false;  // variable application
    }
    for (const auto& a : args)
      if (!fo(a)) return false;
    return true;
  };
  for (const auto& r : rules)
    if (!fo(r.lhs) || !fo(r.rhs)) return false;
  return true;
}

bool rewrite_problem::has_defined_lhs_subterms() const {
  std::function<bool(const term_ptr&)> has_defined = [&](const term_ptr& t) -> bool {
    std::vector<term_ptr> args;
    term_ptr head = spine_head(t, &args);
    if (head->kind == term_kind::sym) {
      const symbol_decl* d = sig.find_symbol(head->name);
      if (d && !d->is_constructor) return true;
    }
    for (const auto& a : args)
      if (has_defined(a)) return true;
    return false;
  };
  for (const auto& r : rules) {
    std::vector<term_ptr> args;
    spine_head(r.lhs, &args);
    for (const auto& a : args)
      if (has_defined(a)) return true;
  }
  return false;
}

}  // namespace sizelab
