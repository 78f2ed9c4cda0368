#include "sizelab/inference.hpp"

#include <functional>
#include <sstream>

#include "sizelab/checker.hpp"

namespace sizelab {

namespace {

struct infer_error {
  std::string code, message;
};

struct size_equation {
  size_ptr left, right;
  // 0: plain unification; +1: right must be <= left; -1: left must be <= right
  int polarity = 0;
};

struct unify_engine {
  const std::set<std::string>& frozen;
  size_subst subst;
  std::vector<size_equation> pending;

  explicit unify_engine(const std::set<std::string>& fz) : frozen(fz) {}

  bool is_frozen(const std::string& v) const { return frozen.count(v) > 0; }

  size_ptr norm(const size_ptr& e) const {
    return apply_size_subst(e, subst);
  }

  void bind(const std::string& v, const size_ptr& e) {
    if (size_vars(e).count(v)) throw infer_error{"OccursCheck", "occurs check on '" + v + "'"};
    size_subst single{{v, e}};
    for (auto& [w, img] : subst) img = apply_size_subst(img, single);
    subst[v] = e;
  }

  // Handles one equation; may push sub-equations. Returns false when the
  // equation involves inf and must be deferred to the second phase.
  bool step(const size_equation& eq, bool allow_inf_rules) {
    size_ptr l = norm(eq.left), r = norm(eq.right);
    if (normalize(l) == normalize(r)) return true;
    bool li = size_is_inf(l), ri = size_is_inf(r);
    if (li || ri) {
      if (!allow_inf_rules) {
        pending.push_back({l, r, eq.polarity});
        return true;
      }
      const size_ptr& fin = li ? r : l;
      // direction that would make the constraint "fin <= inf"
      int inf_side = li ? +1 : -1;  // +1: inf on the left
      bool inf_is_upper = eq.polarity != 0 && eq.polarity == inf_side;
      if (inf_is_upper) return true;  // subsumption into an inf position
      auto vars = size_vars(fin);
      std::vector<std::string> free;
      for (const auto& v : vars)
        if (!is_frozen(v)) free.push_back(v);
      if (!free.empty()) {
        for (const auto& v : free) bind(v, sz_inf());
        return true;
      }
      if (fin->kind == size_kind::var || !vars.empty())
        throw infer_error{"FrozenViolation",
                          "cannot identify '" + to_string(fin) + "' with inf"};
      throw infer_error{"Clash", "cannot unify '" + to_string(fin) + "' with inf"};
    }
    if (l->kind == size_kind::var && !is_frozen(l->var)) {
      bind(l->var, r);
      return true;
    }
    if (r->kind == size_kind::var && !is_frozen(r->var)) {
      bind(r->var, l);
      return true;
    }
    if (l->kind == size_kind::succ && r->kind == size_kind::succ) {
      pending.push_back({l->a, r->a, eq.polarity});
      return true;
    }
    if (l->kind == size_kind::maxe && r->kind == size_kind::maxe) {
      pending.push_back({l->a, r->a, eq.polarity});
      pending.push_back({l->b, r->b, eq.polarity});
      return true;
    }
    // succ vs linear decomposes when the linear constant is positive
    auto peel = [&](const size_ptr& sc, const size_ptr& lin) -> bool {
      if (sc->kind != size_kind::succ || lin->kind != size_kind::linear) return false;
      if (lin->konst == 0) return false;
      pending.push_back({sc->a, sz_linear(lin->coeffs, lin->konst - 1), eq.polarity});
      return true;
    };
    if (peel(l, r) || peel(r, l)) return true;
    if ((l->kind == size_kind::var && is_frozen(l->var)) ||
        (r->kind == size_kind::var && is_frozen(r->var)))
      throw infer_error{"FrozenViolation", "cannot instantiate a frozen size variable: '" +
                                               to_string(l) + "' vs '" + to_string(r) + "'"};
    throw infer_error{"Clash",
                      "cannot unify '" + to_string(l) + "' with '" + to_string(r) + "'"};
  }

  void solve(std::vector<size_equation> eqs) {
    // finite equations first; inf-involving ones are resolved afterwards so
    // that bindings made by plain unification inform the inf rules
    for (auto& e : eqs) pending.push_back(e);
    bool inf_phase = false;
    while (!pending.empty()) {
      std::vector<size_equation> work;
      work.swap(pending);
      bool any_finite = false;
      for (const auto& eq : work) {
        size_ptr l = norm(eq.left), r = norm(eq.right);
        if (!size_is_inf(l) && !size_is_inf(r)) any_finite = true;
      }
      bool allow_inf = inf_phase || !any_finite;
      for (const auto& eq : work) step(eq, allow_inf);
      if (!any_finite) inf_phase = true;
    }
  }
};

void collect_type_equations(const ann_ptr& expected, const ann_ptr& actual, int polarity,
                            std::vector<size_equation>& out) {
  if (expected->is_base() != actual->is_base() ||
      (expected->is_base() && expected->sort != actual->sort))
    throw infer_error{"ArrowMismatch", "annotated types have different erasures: " +
                                           to_string(expected) + " vs " + to_string(actual)};
  if (expected->is_base()) {
    out.push_back({expected->ann, actual->ann, polarity});
    return;
  }
  collect_type_equations(expected->dom, actual->dom, -polarity, out);
  collect_type_equations(expected->cod, actual->cod, polarity, out);
}

// expected = declared domain, actual = argument type; "actual <= expected"
// may be discharged at inf positions.
size_subst app_unify(const ann_ptr& expected, const ann_ptr& actual,
                     const std::set<std::string>& frozen) {
  std::vector<size_equation> eqs;
  collect_type_equations(expected, actual, +1, eqs);
  unify_engine eng(frozen);
  eng.solve(std::move(eqs));
  return std::move(eng.subst);
}

struct infer_state {
  const rewrite_problem& p;
  const std::map<std::string, ann_ptr>& env;
  std::set<std::string> frozen;
  bool cc = false;
  const rule_context* ctx = nullptr;
  std::vector<cc_call> calls;
  int fresh_counter = 0;

  std::string fresh(const std::string& base) {
    return base + "#" + std::to_string(++fresh_counter);
  }

  // symbol-type size variables are universally quantified: always rename,
  // also when they happen to share names with Gamma's frozen variables
  ann_ptr freshen(const ann_ptr& t) {
    size_subst ren;
    for (const auto& v : ann_size_vars(t)) ren[v] = sz_var(fresh(v));
    return ren.empty() ? t : apply_size_subst(t, ren);
  }

  ann_ptr symbol_type(const std::string& name) {
    if (auto it = p.asig.ctors.find(name); it != p.asig.ctors.end())
      return freshen(it->second.type);
    return freshen(p.asig.find(name)->type);
  }

  ann_ptr infer_term(const term_ptr& t, std::vector<ann_ptr>& bound) {
    switch (t->kind) {
      case term_kind::fvar: {
        auto it = env.find(t->name);
        if (it == env.end())
          throw infer_error{"UnboundVariable", "unbound variable '" + t->name + "'"};
        return it->second;
      }
      case term_kind::bvar:
        return bound[bound.size() - 1 - t->index];
      case term_kind::sym:
        return head_symbol_type(t->name, 0);
      case term_kind::lam: {
        bound.push_back(annot_inf(t->var_type));
        ann_ptr body = infer_term(t->a, bound);
        bound.pop_back();
        return mk_ann_arrow(annot_inf(t->var_type), body);
      }
      case term_kind::app: {
        std::vector<term_ptr> args;
        term_ptr head = spine_head(t, &args);
        if (cc && head->kind == term_kind::sym && is_equiv_call(head->name))
          return equiv_call(t, head->name, args, bound);
        ann_ptr fun = head->kind == term_kind::sym
                          ? head_symbol_type(head->name, args.size())
                          : infer_term(head, bound);
        for (const auto& arg : args) {
          if (fun->is_base())
            throw infer_error{"ArrowMismatch", "application of a non-arrow term"};
          ann_ptr at = infer_term(arg, bound);
          size_subst phi = app_unify(fun->dom, at, frozen);
          fun = apply_size_subst(fun->cod, phi);
        }
        return fun;
      }
    }
    throw infer_error{"Internal", "unreachable"};
  }

  bool is_equiv_call(const std::string& g) const {
    const symbol_decl* d = p.sig.find_symbol(g);
    return d && !d->is_constructor && p.prec.equiv(g, ctx->fun);
  }

  ann_ptr head_symbol_type(const std::string& name, size_t applied) {
    const symbol_decl* d = p.sig.find_symbol(name);
    if (!d) throw infer_error{"UnknownSymbol", "unknown symbol '" + name + "'"};
    if (!cc || d->is_constructor) return symbol_type(name);
    if (p.prec.equiv(name, ctx->fun))
      throw infer_error{"SymbolAbovePrecedence",
                        "'" + name + "' is equivalent to '" + ctx->fun +
                            "' but not fully applied (" + std::to_string(applied) +
                            " arguments)"};
    if (!p.prec.gt(ctx->fun, name))
      throw infer_error{"SymbolAbovePrecedence",
                        "'" + name + "' is not below '" + ctx->fun + "' in the precedence"};
    return symbol_type(name);
  }

  // Equivalent-symbol calls: g fully applied, parameters at their
  // declared types, measured sizes strictly below the lhs sizes.
  ann_ptr equiv_call(const term_ptr& call, const std::string& g,
                     const std::vector<term_ptr>& args, std::vector<ann_ptr>& bound) {
    const defined_info* info = p.asig.find(g);
    const auto arg_anns = [&] {
      std::vector<ann_ptr> doms;
      ann_ptr cur = info->type;
      while (!cur->is_base()) {
        doms.push_back(cur->dom);
        cur = cur->cod;
      }
      return std::make_pair(doms, cur);
    }();
    const std::vector<ann_ptr>& doms = arg_anns.first;
    const ann_ptr result = arg_anns.second;
    if (args.size() != doms.size())
      throw infer_error{"SymbolAbovePrecedence",
                        "'" + g + "' is equivalent to '" + ctx->fun +
                            "' but not fully applied (" + std::to_string(args.size()) + " of " +
                            std::to_string(doms.size()) + " arguments)"};
    std::map<int, size_ptr> measured_sizes;
    std::set<int> measured(info->measured.begin(), info->measured.end());
    for (size_t i = 0; i < args.size(); ++i) {
      ann_ptr at = infer_term(args[i], bound);
      if (measured.count(static_cast<int>(i) + 1)) {
        measured_sizes[static_cast<int>(i) + 1] = at->ann;  // base by construction
      } else {
        app_unify(doms[i], at, frozen);  // parameters: subsumption into declared type
      }
    }
    std::vector<size_ptr> b;
    for (int idx : info->measured) b.push_back(measured_sizes.at(idx));

    const measure_spec& spec = p.measure_of(ctx->fun);
    const defined_info* finfo = p.asig.find(ctx->fun);
    cc_call rec;
    rec.callee = g;
    rec.call_text = to_string(call);
    rec.measured_sizes = b;
    rec.zeta_b = apply_measure(spec, info->size_vars, b);
    rec.zeta_a = apply_measure(spec, finfo->size_vars, ctx->arg_sizes);
    rec.decreasing =
        measure_compare(rec.zeta_b, rec.zeta_a, spec.kind) == measure_verdict::lt;
    calls.push_back(rec);
    if (!rec.decreasing) {
      std::ostringstream os;
      os << "recursive call " << rec.call_text << " does not decrease: (";
      for (size_t i = 0; i < rec.zeta_b.size(); ++i)
        os << (i ? ", " : "") << to_string(rec.zeta_b[i]);
      os << ") is not strictly below (";
      for (size_t i = 0; i < rec.zeta_a.size(); ++i)
        os << (i ? ", " : "") << to_string(rec.zeta_a[i]);
      os << ")";
      throw infer_error{"RecursiveCallNotDecreasing", os.str()};
    }
    size_subst inst;
    for (size_t i = 0; i < info->size_vars.size(); ++i) inst[info->size_vars[i]] = b[i];
    return mk_ann_base(result->sort, apply_size_subst(info->interp, inst));
  }
};

}  // namespace

unify_result unify(const ann_ptr& t, const ann_ptr& u, const std::set<std::string>& frozen) {
  unify_result res;
  // rename colliding non-frozen variables of u apart
  std::set<std::string> tv = ann_size_vars(t);
  size_subst ren;
  int k = 0;
  ann_ptr u2 = u;
  for (const auto& v : ann_size_vars(u))
    if (tv.count(v) && !frozen.count(v)) ren[v] = sz_var(v + "#r" + std::to_string(++k));
  if (!ren.empty()) u2 = apply_size_subst(u, ren);
  try {
    std::vector<size_equation> eqs;
    collect_type_equations(t, u2, 0, eqs);
    unify_engine eng(frozen);
    eng.solve(std::move(eqs));
    res.ok = true;
    res.subst = std::move(eng.subst);
  } catch (const infer_error& e) {
    res.code = e.code;
    res.message = e.message;
  }
  return res;
}

size_ptr pattern_size(const rewrite_problem& p, const term_ptr& t) {
  if (t->kind == term_kind::fvar) return sz_var(t->name);
  std::vector<term_ptr> args;
  term_ptr head = spine_head(t, &args);
  if (head->kind != term_kind::sym)
    throw type_error("NotApplicativeLhs", "pattern has a non-symbol head: " + to_string(t));
  const symbol_decl* d = p.sig.find_symbol(head->name);
  if (d->is_constructor) {
    std::vector<size_ptr> sizes;
    for (const auto& a : args) sizes.push_back(pattern_size(p, a));
    return ctor_size(p.sig, head->name, sizes);
  }
  const defined_info* info = p.asig.find(head->name);
  if (size_is_inf(info->interp)) return sz_inf();
  size_subst inst;
  for (size_t k = 0; k < info->measured.size(); ++k) {
    int idx = info->measured[k];
    if (idx > static_cast<int>(args.size()))
      throw type_error("NotApplicativeLhs", "partially applied defined symbol in pattern");
    inst[info->size_vars[k]] = pattern_size(p, args[idx - 1]);
  }
  return apply_size_subst(info->interp, inst);
}

namespace {

// Collects Gamma entries for variables inside a measured argument of sort b.
void assign_pattern_env(const rewrite_problem& p, const std::string& b, const term_ptr& t,
                        std::map<std::string, ann_ptr>& env) {
  std::vector<term_ptr> args;
  term_ptr head = spine_head(t, &args);
  const symbol_decl* d = p.sig.find_symbol(head->name);
  const auto arg_types = argument_types(d->type);
  for (size_t i = 0; i < args.size(); ++i) {
    const term_ptr& u = args[i];
    if (u->kind == term_kind::fvar) {
      env.emplace(u->name, annot_rec(p.sig, b, sz_var(u->name), arg_types[i]));
    } else {
      assign_pattern_env(p, b, u, env);
    }
  }
}

}  // namespace

std::optional<context_error> build_rule_context(const rewrite_problem& p, const rule& r,
                                                rule_context& out,
                                                bool allow_defined_subterms) {
  std::vector<term_ptr> args;
  term_ptr head = spine_head(r.lhs, &args);
  if (head->kind != term_kind::sym)
    return context_error{"NotApplicativeLhs", "rule lhs is not an applied symbol"};
  const defined_info* info = p.asig.find(head->name);
  if (!info)
    return context_error{"NotApplicativeLhs", "rule lhs head is not a defined symbol"};
  std::vector<ann_ptr> doms;
  {
    ann_ptr cur = info->type;
    while (!cur->is_base()) {
      doms.push_back(cur->dom);
      cur = cur->cod;
    }
  }
  if (args.size() != doms.size())
    return context_error{"NotApplicativeLhs",
                         "rule lhs must apply '" + head->name + "' to " +
                             std::to_string(doms.size()) + " arguments"};
  out.fun = head->name;
  out.r = &r;

  std::set<int> measured(info->measured.begin(), info->measured.end());
  // nonlinearity across measured arguments is rejected
  std::function<void(const term_ptr&, std::map<std::string, int>&)> count_vars =
      [&](const term_ptr& t, std::map<std::string, int>& acc) {
        if (t->kind == term_kind::fvar) {
          ++acc[t->name];
        } else if (t->kind == term_kind::app) {
          count_vars(t->a, acc);
          count_vars(t->b, acc);
        } else if (t->kind == term_kind::lam) {
          count_vars(t->a, acc);
        }
      };
  std::map<std::string, int> measured_occurrences;
  std::set<std::string> param_vars;
  for (size_t i = 0; i < args.size(); ++i) {
    if (measured.count(static_cast<int>(i) + 1)) {
      count_vars(args[i], measured_occurrences);
    } else {
      std::map<std::string, type_ptr> fv;
      free_vars(args[i], fv);
      for (const auto& [v, _] : fv) param_vars.insert(v);
    }
  }
  for (const auto& [v, n] : measured_occurrences) {
    if (n > 1 || param_vars.count(v))
      return context_error{"VariableUsedTwiceInMeasuredArgs",
                           "variable '" + v + "' occurs more than once in the measured lhs "
                           "arguments of rule " + r.id};
  }

  for (size_t i = 0; i < args.size(); ++i) {
    const term_ptr& a = args[i];
    bool is_measured = measured.count(static_cast<int>(i) + 1) > 0;
    if (is_measured) {
      out.measured_args.push_back(a);
      if (!is_pattern(a, p.sig) && !allow_defined_subterms)
        return context_error{"NotApplicativeLhs",
                             "measured argument " + to_string(a) + " of rule " + r.id +
                                 " is not a constructor pattern"};
      if (a->kind == term_kind::fvar) {
        out.env.emplace(a->name, mk_ann_base(doms[i]->sort, sz_var(a->name)));
      } else {
        std::vector<term_ptr> sp;
        term_ptr h = spine_head(a, &sp);
        if (h->kind != term_kind::sym)
          return context_error{"NotApplicativeLhs",
                               "measured argument of rule " + r.id + " has a variable head"};
        assign_pattern_env(p, doms[i]->sort, a, out.env);
      }
      try {
        out.arg_sizes.push_back(pattern_size(p, a));
      } catch (const type_error& e) {
        return context_error{e.code, e.what()};
      }
    } else {
      out.param_args.push_back(a);
      if (a->kind == term_kind::fvar) {
        out.env.emplace(a->name, doms[i]);
      } else {
        std::map<std::string, type_ptr> fv;
        free_vars(a, fv);
        for (const auto& [v, ty] : fv) out.env.emplace(v, annot_inf(ty));
      }
    }
  }
  for (const auto& [v, ty] : out.env)
    for (const auto& sv : ann_size_vars(ty)) out.frozen.insert(sv);
  return std::nullopt;
}

infer_outcome infer(const rewrite_problem& p, const std::map<std::string, ann_ptr>& env,
                    const std::set<std::string>& frozen, const term_ptr& t) {
  infer_state st{p, env, frozen};
  infer_outcome out;
  try {
    std::vector<ann_ptr> bound;
    out.type = st.infer_term(t, bound);
    out.ok = true;
  } catch (const infer_error& e) {
    out.code = e.code;
    out.message = e.message;
  }
  out.calls = std::move(st.calls);
  return out;
}

infer_outcome cc_infer(const rewrite_problem& p, const rule_context& ctx, const term_ptr& t) {
  infer_state st{p, ctx.env, ctx.frozen};
  st.cc = true;
  st.ctx = &ctx;
  infer_outcome out;
  try {
    std::vector<ann_ptr> bound;
    out.type = st.infer_term(t, bound);
    out.ok = true;
  } catch (const infer_error& e) {
    out.code = e.code;
    out.message = e.message;
  }
  out.calls = std::move(st.calls);
  return out;
}

}  // namespace sizelab
