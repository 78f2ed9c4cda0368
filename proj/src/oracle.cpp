#include "sizelab/oracle.hpp"

#include <atomic>
#include <functional>
#include <map>
#include <set>
#include <thread>

#include "sizelab/labelling.hpp"
#include "sizelab/rewrite.hpp"

namespace sizelab {

std::uint64_t ground_size_oracle(const signature& sig, const term_ptr& t) {
  if (t->kind == term_kind::fvar || t->kind == term_kind::bvar)
    throw type_error("NonGround", "ground size of a term with variables");
  if (t->kind == term_kind::lam)
    throw type_error("NonConstructor", "ground size of an abstraction");
  std::vector<term_ptr> args;
  term_ptr head = spine_head(t, &args);
  if (head->kind != term_kind::sym)
    throw type_error("NonConstructor", "ground size of a non-constructor term");
  const symbol_decl* d = sig.find_symbol(head->name);
  if (!d || !d->is_constructor)
    throw type_error("NonConstructor",
                     "ground size of a term headed by defined symbol '" + head->name + "'");
  const auto& ind = sig.ind(head->name);
  if (ind.empty()) return 0;
  std::uint64_t best = 0;
  for (int i : ind) best = std::max(best, ground_size_oracle(sig, args[i - 1]));
  return 1 + best;
}

namespace {

struct enumerator {
  const rewrite_problem& p;
  size_t max_terms;
  std::vector<type_ptr> relevant;
  // key: type | height | env types
  std::map<std::string, std::vector<term_ptr>> memo;
  size_t produced = 0;

  enumerator(const rewrite_problem& prob, size_t cap) : p(prob), max_terms(cap) {
    auto add = [&](const type_ptr& t) {
      for (const auto& u : relevant)
        if (type_equal(u, t)) return;
      relevant.push_back(t);
    };
    std::function<void(const type_ptr&)> walk = [&](const type_ptr& t) {
      add(t);
      if (!t->is_base()) {
        walk(t->dom);
        walk(t->cod);
      }
    };
    for (const auto& [name, d] : p.sig.symbols) walk(d.type);
  }

  std::string key(const type_ptr& ty, int h, const std::vector<type_ptr>& env) {
    std::string k = to_string(ty) + "|" + std::to_string(h) + "|";
    for (const auto& e : env) k += to_string(e) + ";";
    return k;
  }

  // terms of type ty with height <= h under the bound-variable env
  const std::vector<term_ptr>& terms(const type_ptr& ty, int h,
                                     std::vector<type_ptr>& env) {
    std::string k = key(ty, h, env);
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    std::vector<term_ptr> out;
    if (h >= 1 && produced < max_terms) {
      // bound variables
      for (size_t i = 0; i < env.size(); ++i)
        if (type_equal(env[env.size() - 1 - i], ty)) out.push_back(mk_bvar(static_cast<int>(i)));
      // symbol spines: apply j arguments so the residual type is ty
      for (const auto& [name, d] : p.sig.symbols) {
        std::vector<type_ptr> argtys = argument_types(d.type);
        type_ptr residual = d.type;
        size_t j = 0;
        while (true) {
          if (type_equal(residual, ty)) spine_forms(mk_sym(name), argtys, j, h, env, out);
          if (residual->is_base()) break;
          residual = residual->cod;
          ++j;
        }
      }
      // abstractions
      if (!ty->is_base()) {
        env.push_back(ty->dom);
        const auto& bodies = terms(ty->cod, h - 1, env);
        std::vector<term_ptr> copy(bodies);
        env.pop_back();
        for (const auto& b : copy) out.push_back(mk_lam("x", ty->dom, b));
      }
      // beta-redex forms: (arrow-term) applied once
      for (const auto& u : relevant) {
        if (produced >= max_terms) break;
        type_ptr arrow = mk_arrow(u, ty);
        bool known = false;
        for (const auto& r : relevant)
          if (type_equal(r, arrow)) known = true;
        if (!known) continue;
        const auto funs = terms(arrow, h - 1, env);
        const auto args = terms(u, h - 1, env);
        for (const auto& f : funs) {
          if (f->kind != term_kind::lam) continue;  // symbol spines handled above
          for (const auto& a : args) out.push_back(mk_app(f, a));
        }
      }
      produced += out.size();
    }
    return memo.emplace(std::move(k), std::move(out)).first->second;
  }

  // applications of head to j arguments, each of height <= h-1
  void spine_forms(const term_ptr& head, const std::vector<type_ptr>& argtys, size_t j,
                   int h, std::vector<type_ptr>& env, std::vector<term_ptr>& out) {
    if (j == 0) {
      out.push_back(head);
      return;
    }
    if (h <= 1) return;
    std::vector<std::vector<term_ptr>> choices;
    for (size_t i = 0; i < j; ++i) choices.push_back(terms(argtys[i], h - 1, env));
    std::vector<size_t> idx(j, 0);
    for (const auto& c : choices)
      if (c.empty()) return;
    while (true) {
      term_ptr t = head;
      for (size_t i = 0; i < j; ++i) t = mk_app(t, choices[i][idx[i]]);
      out.push_back(t);
      if (produced + out.size() > max_terms) return;
      size_t i = 0;
      for (; i < j; ++i) {
        if (++idx[i] < choices[i].size()) break;
        idx[i] = 0;
      }
      if (i == j) break;
    }
  }
};

}  // namespace

std::vector<term_ptr> enumerate_ground_terms(const rewrite_problem& p, int max_height,
                                             size_t max_terms) {
  enumerator en(p, max_terms);
  std::vector<term_ptr> out;
  std::set<std::string> seen;
  std::vector<type_ptr> env;
  for (const auto& s : p.sig.sorts) {
    const auto& ts = en.terms(mk_sort(s), max_height, env);
    for (const auto& t : ts)
      if (seen.insert(to_string(t)).second) out.push_back(t);
  }
  return out;
}

derivation_check check_halting(const rewrite_problem& p, int max_height, int strategies,
                               long budget, std::uint64_t seed) {
  derivation_check out;
  auto terms = enumerate_ground_terms(p, max_height);
  out.terms_checked = static_cast<long>(terms.size());

  // per-term work with a deterministic per-term seed, so the check can be
  // split across threads without changing its outcome
  unsigned nthreads = std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
  std::vector<derivation_check> parts(nthreads);
  std::atomic<size_t> next{0};
  auto worker = [&](unsigned id) {
    derivation_check& part = parts[id];
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= terms.size()) break;
      const term_ptr& t = terms[i];
      long steps = 0;
      if (!normalize(t, p.rules, true, budget, &steps)) {
        part.failure = "leftmost-outermost did not halt within budget on " + to_string(t);
        return;
      }
      part.total_steps += steps;
      ++part.derivations;
      std::mt19937 rng(static_cast<unsigned>(seed + 0x9e3779b9u * (i + 1)));
      for (int s = 0; s < strategies; ++s) {
        auto n = random_derivation(t, p.rules, true, budget, rng);
        if (!n) {
          part.failure = "random strategy did not halt within budget on " + to_string(t);
          return;
        }
        part.total_steps += *n;
        ++part.derivations;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker, i);
  for (auto& th : pool) th.join();
  for (const auto& part : parts) {
    out.total_steps += part.total_steps;
    out.derivations += part.derivations;
    if (!part.failure.empty() && out.failure.empty()) out.failure = part.failure;
  }
  out.ok = out.failure.empty();
  return out;
}

derivation_check check_size_nonincrease(const rewrite_problem& p, int max_height,
                                        long budget) {
  derivation_check out;
  if (!p.is_first_order()) {
    out.failure = "size oracle applies to first-order systems only";
    return out;
  }
  auto terms = enumerate_ground_terms(p, max_height);
  out.terms_checked = static_cast<long>(terms.size());
  std::map<std::string, std::uint64_t> empty;
  for (const auto& t : terms) {
    term_ptr cur = t;
    long steps = 0;
    while (steps < budget) {
      auto s = rewrite_step(cur, p.rules, true);
      if (!s) break;
      try {
        size_ptr sa = term_size(p, cur), sb = term_size(p, s->result);
        if (!size_is_inf(sa) && !size_is_inf(sb)) {
          std::uint64_t va = eval(sa, empty).v, vb = eval(sb, empty).v;
          if (vb > va) {
            out.failure = "size increased from " + std::to_string(va) + " to " +
                          std::to_string(vb) + " at " + to_string(cur);
            return out;
          }
        }
      } catch (const type_error&) {
        // beta-redex forms are not in sigma's domain; skip those steps
      }
      cur = s->result;
      ++steps;
      ++out.total_steps;
    }
    ++out.derivations;
  }
  out.ok = true;
  return out;
}

derivation_check check_labelled_decrease(const rewrite_problem& p, int max_height,
                                         long budget, int strategies, std::uint64_t seed) {
  derivation_check out;
  if (!p.is_first_order()) {
    out.failure = "labelling applies to first-order systems only";
    return out;
  }
  auto terms = enumerate_ground_terms(p, max_height);
  out.terms_checked = static_cast<long>(terms.size());
  std::mt19937 rng(static_cast<unsigned>(seed));
  auto check_trace = [&](const std::vector<term_ptr>& trace) -> bool {
    for (size_t i = 0; i + 1 < trace.size(); ++i) {
      auto lb = label_ground_term(p, trace[i]);
      auto la = label_ground_term(p, trace[i + 1]);
      if (!lb || !la) continue;  // inf-interpreted symbol inside a measured argument
      ++out.total_steps;
      if (!labelled_rpo_gt(p, *lb, *la)) {
        out.failure = "labelled term did not decrease in the labelled path order at " +
                      to_string(trace[i]) + " -> " + to_string(trace[i + 1]);
        return false;
      }
    }
    return true;
  };
  for (const auto& t : terms) {
    std::vector<term_ptr> trace;
    term_ptr cur = t;
    trace.push_back(cur);
    long steps = 0;
    while (steps < budget) {
      auto s = rewrite_step(cur, p.rules, true);
      if (!s) break;
      cur = s->result;
      trace.push_back(cur);
      ++steps;
    }
    if (!check_trace(trace)) return out;
    ++out.derivations;
    for (int k = 0; k < strategies; ++k) {
      std::vector<term_ptr> rt;
      if (!random_derivation(t, p.rules, true, budget, rng, &rt)) {
        out.failure = "random strategy exceeded budget on " + to_string(t);
        return out;
      }
      if (!check_trace(rt)) return out;
      ++out.derivations;
    }
  }
  out.ok = true;
  return out;
}

}  // namespace sizelab
