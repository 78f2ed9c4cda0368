#include "sizelab/checker.hpp"

#include <functional>
#include <sstream>

#include "sizelab/inference.hpp"

namespace sizelab {

std::vector<size_ptr> apply_measure(const measure_spec& spec,
                                    const std::vector<std::string>& size_vars,
                                    const std::vector<size_ptr>& sizes) {
  size_subst inst;
  for (size_t i = 0; i < size_vars.size() && i < sizes.size(); ++i)
    inst[size_vars[i]] = sizes[i];
  std::vector<size_ptr> out;
  for (const auto& c : spec.components) out.push_back(apply_size_subst(c, inst));
  return out;
}

namespace {

bool cmp_is_le(size_cmp c) {
  return c == size_cmp::lt || c == size_cmp::le || c == size_cmp::eq;
}

measure_verdict lex_compare(const std::vector<size_ptr>& b, const std::vector<size_ptr>& a) {
  // sound lexicographic decrease: <= on a prefix, < at some pivot
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    size_cmp c = compare(b[i], a[i]);
    if (c == size_cmp::lt) return measure_verdict::lt;
    if (!cmp_is_le(c)) return measure_verdict::ge_or_unknown;
  }
  return measure_verdict::ge_or_unknown;
}

measure_verdict mul_compare(const std::vector<size_ptr>& b, const std::vector<size_ptr>& a) {
  // Dershowitz-Manna: cancel equal elements, then every remaining element of
  // b must be strictly below some remaining element of a, with a nonempty
  std::vector<size_ptr> bs = b, as = a;
  for (auto itb = bs.begin(); itb != bs.end();) {
    bool cancelled = false;
    for (auto ita = as.begin(); ita != as.end(); ++ita) {
      if (compare(*itb, *ita) == size_cmp::eq) {
        as.erase(ita);
        itb = bs.erase(itb);
        cancelled = true;
        break;
      }
    }
    if (!cancelled) ++itb;
  }
  if (as.empty()) return measure_verdict::ge_or_unknown;
  for (const auto& eb : bs) {
    bool covered = false;
    for (const auto& ea : as)
      if (compare(eb, ea) == size_cmp::lt) {
        covered = true;
        break;
      }
    if (!covered) return measure_verdict::ge_or_unknown;
  }
  return measure_verdict::lt;
}

}  // namespace

measure_verdict measure_compare(const std::vector<size_ptr>& b,
                                const std::vector<size_ptr>& a, domain_kind kind) {
  if (a.empty()) return measure_verdict::ge_or_unknown;
  return kind == domain_kind::lex ? lex_compare(b, a) : mul_compare(b, a);
}

std::string to_string(verdict_status s) {
  switch (s) {
    case verdict_status::terminates:
      return "TERMINATES";
    case verdict_status::unknown:
      return "UNKNOWN";
    case verdict_status::rejected:
      return "REJECTED";
  }
  return "?";
}

namespace {

// defined symbols applied inside the arguments of a rule lhs
void defined_subterms(const rewrite_problem& p, const term_ptr& t,
                      std::vector<std::pair<std::string, term_ptr>>& out) {
  std::vector<term_ptr> args;
  term_ptr head = spine_head(t, &args);
  if (head->kind == term_kind::sym) {
    const symbol_decl* d = p.sig.find_symbol(head->name);
    if (d && !d->is_constructor) out.emplace_back(head->name, t);
  }
  for (const auto& a : args) defined_subterms(p, a, out);
}

// s(max(alpha_i | i in Ind(g))) for a defined g; Ind(g) read as the measured
// positions. The recursive-sort reading is recorded when it differs.
size_ptr strict_extensivity_bound(const rewrite_problem& p, const defined_info& info,
                                  bool recursive_sorts_only) {
  const std::string b = result_sort(erase(info.type));
  std::vector<size_ptr> parts;
  const auto arg_types = argument_types(erase(info.type));
  for (size_t k = 0; k < info.measured.size(); ++k) {
    if (recursive_sorts_only) {
      const type_ptr& at = arg_types[info.measured[k] - 1];
      if (!at->is_base() || !p.sig.sort_equiv(at->sort, b)) continue;
    }
    parts.push_back(sz_var(info.size_vars[k]));
  }
  if (parts.empty()) return sz_succ(sz_zero());
  return sz_succ(sz_max_of(parts));
}

}  // namespace

nonconstructor_check check_nonconstructor(const rewrite_problem& p) {
  nonconstructor_check out;
  std::set<std::string> noted;
  for (const auto& r : p.rules) {
    std::vector<term_ptr> args;
    term_ptr head = spine_head(r.lhs, &args);
    const defined_info* finfo = p.asig.find(head->name);
    if (!finfo) continue;
    bool f_inf = size_is_inf(finfo->interp);
    for (const auto& a : args) {
      std::vector<std::pair<std::string, term_ptr>> subs;
      defined_subterms(p, a, subs);
      for (const auto& [g, gterm] : subs) {
        const defined_info* ginfo = p.asig.find(g);
        if (size_is_inf(ginfo->interp)) {
          if (!f_inf) {
            out.code = "NotStrictlyExtensive";
            out.message = "rule " + r.id + ": defined symbol '" + g +
                          "' with interpretation inf occurs inside an lhs argument of '" +
                          head->name + "' whose interpretation is finite";
            return out;
          }
          // fallback: g below f, or equivalent with a measure decrease
          if (p.prec.gt(head->name, g)) {
            out.notes.push_back("rule " + r.id + ": '" + g + "' admitted below '" +
                                head->name + "' in the precedence");
            continue;
          }
          if (p.prec.equiv(head->name, g)) {
            std::vector<size_ptr> sig_m, sig_l;
            bool sigma_ok = true;
            try {
              std::vector<term_ptr> margs;
              spine_head(gterm, &margs);
              for (int idx : ginfo->measured) sig_m.push_back(pattern_size(p, margs[idx - 1]));
              std::vector<term_ptr> fargs;
              spine_head(r.lhs, &fargs);
              for (int idx : finfo->measured) sig_l.push_back(pattern_size(p, fargs[idx - 1]));
              // a decrease against an inf size is vacuous, not a certificate
              for (const auto& e : sig_m)
                if (size_is_inf(e)) sigma_ok = false;
              for (const auto& e : sig_l)
                if (size_is_inf(e)) sigma_ok = false;
            } catch (const type_error&) {
              sigma_ok = false;
            }
            const measure_spec& spec = p.measure_of(head->name);
            if (sigma_ok &&
                measure_compare(apply_measure(spec, ginfo->size_vars, sig_m),
                                apply_measure(spec, finfo->size_vars, sig_l),
                                spec.kind) == measure_verdict::lt) {
              out.notes.push_back("rule " + r.id + ": '" + g +
                                  "' admitted by measure decrease inside the lhs");
              continue;
            }
          }
          out.code = "PrecedenceFallbackFailed";
          out.message = "rule " + r.id + ": lhs subterm headed by '" + g +
                        "' (interpretation inf) is neither below '" + head->name +
                        "' nor decreasing in its measure";
          return out;
        }
        // finite interpretation: monotone (by construction) and strictly
        // extensive, under both readings of Ind
        size_ptr lower = strict_extensivity_bound(p, *ginfo, false);
        size_cmp c = compare(lower, ginfo->interp);
        if (!cmp_is_le(c)) {
          out.code = "NotStrictlyExtensive";
          out.message = "'" + g + "': interpretation " + to_string(ginfo->interp) +
                        " is not >= " + to_string(lower);
          return out;
        }
        if (!noted.insert(g).second) continue;
        size_ptr lower_rec = strict_extensivity_bound(p, *ginfo, true);
        if (!(normalize(lower_rec) == normalize(lower))) {
          size_cmp c2 = compare(lower_rec, ginfo->interp);
          out.notes.push_back("'" + g + "': Ind readings differ; measured-positions bound " +
                              to_string(lower) + " (" + to_string(c) +
                              "), recursive-sort bound " + to_string(lower_rec) + " (" +
                              to_string(c2) + ")");
        } else {
          out.notes.push_back("'" + g + "': strictly extensive (" + to_string(ginfo->interp) +
                              " >= " + to_string(lower) + ")");
        }
      }
    }
  }
  out.ok = true;
  return out;
}

monotonicity_report check_monotonicity(const rewrite_problem& p) {
  monotonicity_report out;
  // every symbol of the size algebra (0, s, max, linear atoms with natural
  // coefficients) is monotone in each argument; a non-monotone symbol cannot
  // be constructed through the public expression builders, so this check
  // records the hypotheses and guards future algebra extensions
  for (const auto& [f, info] : p.asig.defined) {
    for (const auto& v : size_vars(info.interp)) {
      (void)v;
    }
    out.notes.push_back("'" + f + "': interpretation " + to_string(info.interp) +
                        " built from monotone symbols");
  }
  for (const auto& s : p.sig.sorts) {
    auto ctors = p.sig.constructors_of_sort(s);
    out.notes.push_back("sort '" + s + "': " + std::to_string(ctors.size()) +
                        " constructors (finite)");
  }
  out.notes.push_back("rule set finite (" + std::to_string(p.rules.size()) +
                      " rules), hence finitely branching");
  return out;
}

verdict check_system(const rewrite_problem& p) {
  verdict v;
  for (const auto& issue : p.validation)
    if (issue.is_error) {
      v.status = verdict_status::rejected;
      v.reject_code = issue.code;
      v.reject_message = issue.message;
      return v;
    }

  // higher-order problems are restricted to the {0,s,max} algebra
  if (!p.is_first_order()) {
    for (const auto& [f, info] : p.asig.defined) {
      bool linear = size_uses_linear(info.interp);
      for (const auto& c : p.measure_of(f).components) linear = linear || size_uses_linear(c);
      if (linear) {
        v.status = verdict_status::rejected;
        v.reject_code = "InvalidAnnotation";
        v.reject_message = "'" + f +
                           "': linear interpretations are only supported for first-order "
                           "systems";
        return v;
      }
    }
  }

  bool nonconstructor = p.has_defined_lhs_subterms();
  if (nonconstructor) {
    nonconstructor_check nc = check_nonconstructor(p);
    for (const auto& n : nc.notes) v.notes.push_back(n);
    if (!nc.ok) {
      v.status = verdict_status::unknown;
      v.reject_code = nc.code;
      v.reject_message = nc.message;
      return v;
    }
  }

  monotonicity_report mono = check_monotonicity(p);
  if (!mono.ok) {
    v.status = verdict_status::rejected;
    v.reject_code = mono.code;
    v.reject_message = mono.message;
    return v;
  }

  bool all_ok = true;
  for (const auto& r : p.rules) {
    rule_trace tr;
    tr.rule_id = r.id;
    tr.lhs_text = to_string(r.lhs);
    tr.rhs_text = to_string(r.rhs);
    rule_context ctx;
    auto err = build_rule_context(p, r, ctx, nonconstructor);
    if (err) {
      if (err->code == "NotApplicativeLhs" || err->code == "VariableUsedTwiceInMeasuredArgs") {
        v.status = verdict_status::rejected;
        v.reject_code = err->code;
        v.reject_message = err->message;
        return v;
      }
      tr.ok = false;
      tr.error_code = err->code;
      tr.error_message = err->message;
      v.traces.push_back(tr);
      all_ok = false;
      continue;
    }
    tr.fun = ctx.fun;
    tr.arg_sizes = ctx.arg_sizes;
    for (const auto& [var, ty] : ctx.env) tr.env_text[var] = to_string(ty);

    const defined_info* info = p.asig.find(ctx.fun);
    size_subst inst;
    for (size_t i = 0; i < info->size_vars.size(); ++i)
      inst[info->size_vars[i]] = ctx.arg_sizes[i];
    tr.bound = apply_size_subst(info->interp, inst);

    infer_outcome res = cc_infer(p, ctx, r.rhs);
    tr.calls = res.calls;
    if (!res.ok) {
      tr.ok = false;
      tr.error_code = res.code;
      tr.error_message = res.message;
      all_ok = false;
      v.traces.push_back(tr);
      continue;
    }
    if (!res.type->is_base()) {
      tr.ok = false;
      tr.error_code = "ArrowMismatch";
      tr.error_message = "rule rhs does not have a base type";
      all_ok = false;
      v.traces.push_back(tr);
      continue;
    }
    tr.rhs_size = res.type->ann;
    tr.comparison = compare(tr.rhs_size, tr.bound);
    tr.ok = cmp_is_le(tr.comparison);
    if (!tr.ok) {
      tr.error_code = "SizeNotBounded";
      tr.error_message = "rhs size " + to_string(tr.rhs_size) + " is not <= " +
                         to_string(tr.bound);
      all_ok = false;
    }
    v.traces.push_back(tr);
  }
  v.status = all_ok ? verdict_status::terminates : verdict_status::unknown;
  return v;
}

}  // namespace sizelab
