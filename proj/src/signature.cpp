#include "sizelab/signature.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace sizelab {

void signature::add_sort(const std::string& name) {
  if (!has_sort(name)) sorts.push_back(name);
  validated_ = false;
}

void signature::add_constructor(const std::string& name, type_ptr type) {
  symbols[name] = symbol_decl{name, std::move(type), true};
  validated_ = false;
}

void signature::add_defined(const std::string& name, type_ptr type) {
  symbols[name] = symbol_decl{name, std::move(type), false};
  validated_ = false;
}

const symbol_decl* signature::find_symbol(const std::string& name) const {
  auto it = symbols.find(name);
  return it == symbols.end() ? nullptr : &it->second;
}

bool signature::has_sort(const std::string& name) const {
  return std::find(sorts.begin(), sorts.end(), name) != sorts.end();
}

std::vector<validation_issue> signature::validate() {
  std::vector<validation_issue> issues;
  std::vector<std::string> sorted_sorts = sorts;
  std::sort(sorted_sorts.begin(), sorted_sorts.end());

  // Dependency edges: B -> C when C occurs in an argument type of a
  // constructor of B.
  std::map<std::string, std::set<std::string>> deps;
  for (const auto& s : sorted_sorts) deps[s];
  for (const auto& [name, decl] : symbols) {
    std::vector<std::string> occ;
    collect_sorts(decl.type, occ);
    for (const auto& c : occ)
      if (!has_sort(c))
        issues.push_back({true, "UnknownSort", name, "",
                          "symbol '" + name + "' mentions undeclared sort '" + c + "'"});
    if (!decl.is_constructor) continue;
    const std::string b = result_sort(decl.type);
    for (const auto& arg : argument_types(decl.type)) {
      std::vector<std::string> occ2;
      collect_sorts(arg, occ2);
      for (const auto& c : occ2) deps[b].insert(c);
    }
  }
  for (auto& issue : issues)
    if (issue.is_error && issue.code == "UnknownSort") {
      validated_ = false;
      return issues;
    }

  // Tarjan SCC over the sorted sort list; class ids follow a canonical order
  // so permuting declarations cannot change the result.
  std::map<std::string, int> index, low;
  std::vector<std::string> stack;
  std::set<std::string> on_stack;
  int counter = 0;
  std::vector<std::vector<std::string>> sccs;
  std::function<void(const std::string&)> strongconnect = [&](const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const auto& w : deps[v]) {
      if (!index.count(w)) {
        strongconnect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.count(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> comp;
      while (true) {
        std::string w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp.push_back(w);
        if (w == v) break;
      }
      std::sort(comp.begin(), comp.end());
      sccs.push_back(comp);
    }
  };
  for (const auto& s : sorted_sorts)
    if (!index.count(s)) strongconnect(s);
  std::sort(sccs.begin(), sccs.end());

  class_of_.clear();
  for (size_t i = 0; i < sccs.size(); ++i)
    for (const auto& s : sccs[i]) class_of_[s] = static_cast<int>(i);

  // Strictly-below closure per class.
  class_below_.assign(sccs.size(), {});
  std::function<void(int)> close = [&](int ci) {
    if (!class_below_[ci].empty()) return;
    std::set<int> below;
    for (const auto& s : sccs[ci])
      for (const auto& d : deps[s]) {
        int cd = class_of_[d];
        if (cd == ci) continue;
        below.insert(cd);
        close(cd);
        below.insert(class_below_[cd].begin(), class_below_[cd].end());
      }
    class_below_[ci] = below;
  };
  for (size_t i = 0; i < sccs.size(); ++i) close(static_cast<int>(i));

  // Ind sets and positivity.
  ind_.clear();
  strictly_positive_.clear();
  for (const auto& [name, decl] : symbols) {
    if (!decl.is_constructor) continue;
    const std::string b = result_sort(decl.type);
    std::set<int> ind;
    bool strict = true;
    const auto args = argument_types(decl.type);
    for (size_t i = 0; i < args.size(); ++i) {
      const auto occs = sort_positions(args[i]);
      bool mentions_equiv = false;
      for (const auto& occ : occs) {
        if (!sort_equiv(occ.sort, b)) continue;
        mentions_equiv = true;
        if (!occ.positive) {
          // path within the constructor's full type: descend i codomains
          std::vector<int> typath;
          for (size_t k = 0; k < i; ++k) typath.push_back(2);
          typath.push_back(1);
          typath.insert(typath.end(), occ.path.begin(), occ.path.end());
          issues.push_back({true, "NegativeOccurrence", name, path_to_string(typath),
                            "constructor '" + name + "': sort '" + occ.sort +
                                "' equivalent to result sort '" + b +
                                "' occurs at negative position " + path_to_string(typath)});
        }
      }
      if (mentions_equiv) {
        ind.insert(static_cast<int>(i) + 1);
        // strictly positive: arg is U1 -> ... -> C with C ~ B and no
        // equivalent sort inside the Ui.
        if (!sort_equiv(result_sort(args[i]), b)) {
          strict = false;
        } else {
          for (const auto& u : argument_types(args[i])) {
            std::vector<std::string> occ2;
            collect_sorts(u, occ2);
            for (const auto& c : occ2)
              if (sort_equiv(c, b)) strict = false;
          }
        }
      }
    }
    ind_[name] = ind;
    strictly_positive_[name] = strict;
    if (!strict)
      issues.push_back({false, "NonStrictlyPositive", name, "",
                        "constructor '" + name + "' is not strictly positive"});
  }

  validated_ = std::none_of(issues.begin(), issues.end(),
                            [](const validation_issue& i) { return i.is_error; });
  return issues;
}

bool signature::sort_equiv(const std::string& b, const std::string& c) const {
  auto ib = class_of_.find(b), ic = class_of_.find(c);
  if (ib == class_of_.end() || ic == class_of_.end()) return b == c;
  return ib->second == ic->second;
}

bool signature::sort_le(const std::string& c, const std::string& b) const {
  auto ib = class_of_.find(b), ic = class_of_.find(c);
  if (ib == class_of_.end() || ic == class_of_.end()) return c == b;
  return ic->second == ib->second ||
         class_below_[ib->second].count(ic->second) > 0;
}

int signature::sort_class(const std::string& b) const {
  auto it = class_of_.find(b);
  return it == class_of_.end() ? -1 : it->second;
}

const std::set<int>& signature::ind(const std::string& ctor) const {
  static const std::set<int> empty;
  auto it = ind_.find(ctor);
  return it == ind_.end() ? empty : it->second;
}

bool signature::is_recursive_ctor(const std::string& ctor) const {
  return !ind(ctor).empty();
}

bool signature::is_strictly_positive(const std::string& ctor) const {
  auto it = strictly_positive_.find(ctor);
  return it == strictly_positive_.end() ? true : it->second;
}

std::vector<std::string> signature::constructors_of_sort(const std::string& sort) const {
  std::vector<std::string> out;
  for (const auto& [name, decl] : symbols)
    if (decl.is_constructor && result_sort(decl.type) == sort) out.push_back(name);
  return out;
}

}  // namespace sizelab
