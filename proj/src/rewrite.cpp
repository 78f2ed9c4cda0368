#include "sizelab/rewrite.hpp"

#include <algorithm>

namespace sizelab {

bool is_pattern(const term_ptr& t, const signature& sig) {
  if (t->kind == term_kind::fvar) return true;
  std::vector<term_ptr> args;
  term_ptr head = spine_head(t, &args);
  if (head->kind != term_kind::sym) return false;
  const symbol_decl* d = sig.find_symbol(head->name);
  if (!d || !d->is_constructor) return false;
  for (const auto& a : args)
    if (!is_pattern(a, sig)) return false;
  return true;
}

namespace {

// small linear-scan binding environment; patterns have few variables
struct fast_binding {
  std::vector<std::pair<const std::string*, const term_ptr*>> slots;

  const term_ptr* find(const std::string& name) const {
    for (const auto& [n, t] : slots)
      if (*n == name) return t;
    return nullptr;
  }
  void bind(const std::string& name, const term_ptr& t) { slots.emplace_back(&name, &t); }
};

bool fast_match(const term_ptr& pattern, const term_ptr& subject, fast_binding& binding) {
  switch (pattern->kind) {
    case term_kind::fvar: {
      if (const term_ptr* bound = binding.find(pattern->name))
        return term_equal(*bound, subject);
      binding.bind(pattern->name, subject);
      return true;
    }
    case term_kind::sym:
      return subject->kind == term_kind::sym && subject->name == pattern->name;
    case term_kind::app:
      return subject->kind == term_kind::app && fast_match(pattern->a, subject->a, binding) &&
             fast_match(pattern->b, subject->b, binding);
    default:
      return false;
  }
}

struct indexed_rule {
  const rule* r;
  int lhs_spine_len;
};

// rules grouped by lhs head symbol; few symbols, so a linear scan beats
// hashing on the hot path
struct rule_index {
  bool include_beta;
  std::vector<std::pair<std::string, std::vector<indexed_rule>>> by_head;

  rule_index(const std::vector<rule>& rs, bool beta) : include_beta(beta) {
    for (const auto& r : rs) {
      std::vector<term_ptr> args;
      term_ptr head = spine_head(r.lhs, &args);
      auto it = std::find_if(by_head.begin(), by_head.end(),
                             [&](const auto& e) { return e.first == head->name; });
      if (it == by_head.end()) {
        by_head.push_back({head->name, {}});
        it = std::prev(by_head.end());
      }
      it->second.push_back({&r, static_cast<int>(args.size())});
    }
  }

  const std::vector<indexed_rule>* candidates(const std::string& head) const {
    for (const auto& [name, rules] : by_head)
      if (name == head) return &rules;
    return nullptr;
  }
};

bool is_beta_redex(const term_ptr& t) {
  return t->kind == term_kind::app && t->a->kind == term_kind::lam;
}

const rule* match_spine(const term_ptr& t, const std::string& head, int spine_len,
                        const rule_index& idx, fast_binding& binding) {
  const std::vector<indexed_rule>* cands = idx.candidates(head);
  if (!cands) return nullptr;
  for (const auto& ir : *cands) {
    if (ir.lhs_spine_len != spine_len) continue;
    binding.slots.clear();
    if (fast_match(ir.r->lhs, t, binding)) return ir.r;
  }
  return nullptr;
}

struct spine_info {
  const std::string* head = nullptr;  // null unless symbol-headed
  int len = 0;
};

// single bottom-up pass collecting all redex positions in traversal order
spine_info collect_positions(const term_ptr& t, const rule_index& idx,
                             std::vector<int>& path, std::vector<std::vector<int>>& out) {
  switch (t->kind) {
    case term_kind::sym: {
      fast_binding binding;
      if (match_spine(t, t->name, 0, idx, binding)) out.push_back(path);
      return {&t->name, 0};
    }
    case term_kind::lam: {
      path.push_back(1);
      collect_positions(t->a, idx, path, out);
      path.pop_back();
      return {};
    }
    case term_kind::app: {
      path.push_back(1);
      spine_info f = collect_positions(t->a, idx, path, out);
      path.back() = 2;
      collect_positions(t->b, idx, path, out);
      path.pop_back();
      spine_info mine{f.head, f.len + 1};
      bool redex = false;
      if (idx.include_beta && t->a->kind == term_kind::lam) redex = true;
      if (!redex && mine.head) {
        fast_binding binding;
        redex = match_spine(t, *mine.head, mine.len, idx, binding) != nullptr;
      }
      if (redex) out.push_back(path);
      return mine;
    }
    default:
      return {};
  }
}

// pre-order-least position: the leftmost-outermost redex
const std::vector<int>* leftmost_outermost(const std::vector<std::vector<int>>& positions) {
  const std::vector<int>* best = nullptr;
  for (const auto& p : positions) {
    if (!best) {
      best = &p;
      continue;
    }
    size_t n = std::min(best->size(), p.size());
    bool smaller = false, decided = false;
    for (size_t i = 0; i < n && !decided; ++i) {
      if (p[i] != (*best)[i]) {
        smaller = p[i] < (*best)[i];
        decided = true;
      }
    }
    if (!decided) smaller = p.size() < best->size();
    if (smaller) best = &p;
  }
  return best;
}

const term_ptr& subterm_at(const term_ptr& t, const std::vector<int>& path, size_t i) {
  if (i == path.size()) return t;
  if (t->kind == term_kind::lam) return subterm_at(t->a, path, i + 1);
  return subterm_at(path[i] == 1 ? t->a : t->b, path, i + 1);
}

term_ptr replace_at(const term_ptr& t, const std::vector<int>& path, size_t i,
                    const term_ptr& repl) {
  if (i == path.size()) return repl;
  if (t->kind == term_kind::lam)
    return mk_lam(t->name, t->var_type, replace_at(t->a, path, i + 1, repl));
  if (path[i] == 1) return mk_app(replace_at(t->a, path, i + 1, repl), t->b);
  return mk_app(t->a, replace_at(t->b, path, i + 1, repl));
}

bool node_is_redex(const term_ptr& t, const rule_index& idx) {
  if (idx.include_beta && is_beta_redex(t)) return true;
  const term* cur = t.get();
  int len = 0;
  while (cur->kind == term_kind::app) {
    cur = cur->a.get();
    ++len;
  }
  if (cur->kind != term_kind::sym) return false;
  fast_binding binding;
  return match_spine(t, cur->name, len, idx, binding) != nullptr;
}

bool path_prefix(const std::vector<int>& p, const std::vector<int>& q) {
  if (p.size() > q.size()) return false;
  return std::equal(p.begin(), p.end(), q.begin());
}

// Redex positions maintained across steps: contracting at p invalidates only
// the positions below p and the redex status of p's ancestors.
struct redex_tracker {
  const rule_index& idx;
  term_ptr cur;
  std::vector<std::vector<int>> positions;

  redex_tracker(const rule_index& i, term_ptr t) : idx(i), cur(std::move(t)) {
    std::vector<int> path;
    collect_positions(cur, idx, path, positions);
  }

  void apply(const std::vector<int>& p, const term_ptr& next) {
    cur = next;
    positions.erase(std::remove_if(positions.begin(), positions.end(),
                                   [&](const std::vector<int>& q) {
                                     return path_prefix(p, q);
                                   }),
                    positions.end());
    std::vector<int> path = p;
    collect_positions(subterm_at(cur, p, 0), idx, path, positions);
    for (size_t cut = p.size(); cut-- > 0;) {
      std::vector<int> anc(p.begin(), p.begin() + cut);
      bool now = node_is_redex(subterm_at(cur, anc, 0), idx);
      auto it = std::find(positions.begin(), positions.end(), anc);
      if (now && it == positions.end()) positions.push_back(anc);
      if (!now && it != positions.end()) positions.erase(it);
    }
  }
};

std::optional<step_result> contract_at(const term_ptr& root, const std::vector<int>& pos,
                                       const rule_index& idx) {
  const term_ptr& t = subterm_at(root, pos, 0);
  if (idx.include_beta && is_beta_redex(t))
    return step_result{replace_at(root, pos, 0, open_body(t->a->a, t->b)), pos, "beta"};
  std::vector<term_ptr> args;
  term_ptr head = spine_head(t, &args);
  if (head->kind != term_kind::sym) return std::nullopt;
  fast_binding binding;
  const rule* r = match_spine(t, head->name, static_cast<int>(args.size()), idx, binding);
  if (!r) return std::nullopt;
  std::map<std::string, term_ptr> subst;
  for (const auto& [n, u] : binding.slots) subst.emplace(*n, *u);
  return step_result{replace_at(root, pos, 0, substitute(r->rhs, subst)), pos, r->id};
}

}  // namespace

bool match(const term_ptr& pattern, const term_ptr& subject,
           std::map<std::string, term_ptr>& binding) {
  switch (pattern->kind) {
    case term_kind::fvar: {
      auto it = binding.find(pattern->name);
      if (it != binding.end()) return term_equal(it->second, subject);
      binding.emplace(pattern->name, subject);
      return true;
    }
    case term_kind::sym:
      return subject->kind == term_kind::sym && subject->name == pattern->name;
    case term_kind::app:
      return subject->kind == term_kind::app && match(pattern->a, subject->a, binding) &&
             match(pattern->b, subject->b, binding);
    default:
      return false;  // lhs are applicative patterns, no binders
  }
}

std::optional<step_result> rewrite_step(const term_ptr& t, const std::vector<rule>& rules,
                                        bool include_beta) {
  rule_index idx(rules, include_beta);
  std::vector<std::vector<int>> positions;
  std::vector<int> path;
  collect_positions(t, idx, path, positions);
  const std::vector<int>* pos = leftmost_outermost(positions);
  if (!pos) return std::nullopt;
  return contract_at(t, *pos, idx);
}

std::vector<step_result> all_redexes(const term_ptr& t, const std::vector<rule>& rules,
                                     bool include_beta) {
  rule_index idx(rules, include_beta);
  std::vector<std::vector<int>> positions;
  std::vector<int> path;
  collect_positions(t, idx, path, positions);
  std::vector<step_result> out;
  for (const auto& p : positions)
    if (auto s = contract_at(t, p, idx)) out.push_back(*s);
  return out;
}

std::optional<term_ptr> normalize(const term_ptr& t, const std::vector<rule>& rules,
                                  bool include_beta, long budget, long* steps_taken) {
  rule_index idx(rules, include_beta);
  redex_tracker tracker(idx, t);
  long steps = 0;
  while (true) {
    const std::vector<int>* pos = leftmost_outermost(tracker.positions);
    if (!pos) break;
    std::vector<int> p = *pos;
    auto s = contract_at(tracker.cur, p, idx);
    if (!s) break;
    tracker.apply(p, s->result);
    if (++steps > budget) return std::nullopt;
  }
  if (steps_taken) *steps_taken = steps;
  return tracker.cur;
}

std::optional<long> random_derivation(const term_ptr& t, const std::vector<rule>& rules,
                                      bool include_beta, long budget, std::mt19937& rng,
                                      std::vector<term_ptr>* trace) {
  rule_index idx(rules, include_beta);
  redex_tracker tracker(idx, t);
  long steps = 0;
  if (trace) trace->push_back(tracker.cur);
  while (true) {
    if (tracker.positions.empty()) return steps;
    std::uniform_int_distribution<size_t> pick(0, tracker.positions.size() - 1);
    std::vector<int> p = tracker.positions[pick(rng)];
    auto s = contract_at(tracker.cur, p, idx);
    if (!s) return steps;
    tracker.apply(p, s->result);
    if (trace) trace->push_back(tracker.cur);
    if (++steps > budget) return std::nullopt;
  }
}

}  // namespace sizelab
