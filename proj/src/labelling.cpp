#include "sizelab/labelling.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "sizelab/inference.hpp"
#include "json.hpp"

namespace sizelab {

bool lterm_equal(const lterm& a, const lterm& b) {
  if (a.is_var != b.is_var || a.name != b.name || a.labelled != b.labelled ||
      a.label.size() != b.label.size() || a.args.size() != b.args.size())
    return false;
  for (size_t i = 0; i < a.label.size(); ++i)
    if (!(normalize(a.label[i]) == normalize(b.label[i]))) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!lterm_equal(a.args[i], b.args[i])) return false;
  return true;
}

std::string to_string(const lterm& t) {
  std::ostringstream os;
  os << t.name;
  if (t.labelled) {
    os << "_{";
    for (size_t i = 0; i < t.label.size(); ++i) {
      if (i) os << ",";
      os << to_string(t.label[i]);
    }
    os << "}";
  }
  if (!t.args.empty()) {
    os << "(";
    for (size_t i = 0; i < t.args.size(); ++i) {
      if (i) os << ",";
      os << to_string(t.args[i]);
    }
    os << ")";
  }
  return os.str();
}

term_ptr erase_labels(const rewrite_problem& p, const lterm& t) {
  if (t.is_var) {
    // variable types are recoverable from context; labelled systems are
    // single-sorted per variable use, so reuse the declared sort when known
    return mk_fvar(t.name, nullptr);
  }
  term_ptr head = mk_sym(t.name);
  for (const auto& a : t.args) head = mk_app(head, erase_labels(p, a));
  return head;
}

size_ptr term_size(const rewrite_problem& p, const term_ptr& t) {
  if (t->kind == term_kind::fvar) return sz_var(t->name);
  std::vector<term_ptr> args;
  term_ptr head = spine_head(t, &args);
  if (head->kind != term_kind::sym)
    throw type_error("NonConstructor", "term_size on a non-symbol head");
  const symbol_decl* d = p.sig.find_symbol(head->name);
  if (d->is_constructor) {
    std::vector<size_ptr> sizes;
    for (const auto& a : args) sizes.push_back(term_size(p, a));
    return ctor_size(p.sig, head->name, sizes);
  }
  const defined_info* info = p.asig.find(head->name);
  if (size_is_inf(info->interp)) return sz_inf();
  size_subst inst;
  for (size_t k = 0; k < info->measured.size(); ++k)
    inst[info->size_vars[k]] = term_size(p, args[info->measured[k] - 1]);
  return apply_size_subst(info->interp, inst);
}

namespace {

bool cmp_le(size_cmp c) {
  return c == size_cmp::lt || c == size_cmp::le || c == size_cmp::eq;
}

std::vector<size_ptr> occurrence_label(const rewrite_problem& p, const defined_info& info,
                                       const std::vector<term_ptr>& args) {
  std::vector<size_ptr> sizes;
  for (int idx : info.measured) sizes.push_back(term_size(p, args[idx - 1]));
  std::vector<size_ptr> label =
      apply_measure(p.measure_of(info.name), info.size_vars, sizes);
  for (auto& c : label) c = normal_form_expr(c);
  return label;
}

lterm label_term(const rewrite_problem& p, const term_ptr& t) {
  if (t->kind == term_kind::fvar) {
    lterm v;
    v.is_var = true;
    v.name = t->name;
    return v;
  }
  std::vector<term_ptr> args;
  term_ptr head = spine_head(t, &args);
  if (head->kind != term_kind::sym)
    throw type_error("NonConstructor", "labelling applies to first-order terms only");
  lterm out;
  out.name = head->name;
  const symbol_decl* d = p.sig.find_symbol(head->name);
  if (!d) throw type_error("UnknownSymbol", "unknown symbol '" + head->name + "'");
  if (!d->is_constructor) {
    out.labelled = true;
    out.label = occurrence_label(p, *p.asig.find(head->name), args);
  }
  for (const auto& a : args) out.args.push_back(label_term(p, a));
  return out;
}

}  // namespace

quasi_model_report check_quasi_model(const rewrite_problem& p) {
  quasi_model_report out;
  if (!p.is_first_order()) {
    out.code = "NotFirstOrder";
    out.message = "semantic labelling applies to first-order systems only";
    return out;
  }
  nonconstructor_check nc = check_nonconstructor(p);
  if (!nc.ok) {
    out.code = nc.code;
    out.message = nc.message;
    return out;
  }
  for (const auto& n : nc.notes) out.notes.push_back(n);

  for (const auto& r : p.rules) {
    std::vector<term_ptr> args;
    term_ptr head = spine_head(r.lhs, &args);
    const defined_info* finfo = p.asig.find(head->name);
    quasi_model_report::entry e;
    e.rule_id = r.id;
    if (!size_is_inf(finfo->interp)) {
      e.lhs_size = term_size(p, r.lhs);
      e.rhs_size = term_size(p, r.rhs);
      e.comparison = compare(e.rhs_size, e.lhs_size);
      e.justification = "interpretation";
      if (!cmp_le(e.comparison)) {
        out.code = "QuasiModelViolation";
        out.message = "QuasiModelViolation: rule " + r.id + ": sigma(rhs) = " +
                      to_string(e.rhs_size) + " is not <= sigma(lhs) = " +
                      to_string(e.lhs_size);
        out.entries.push_back(e);
        return out;
      }
    } else {
      // fixpoint interpretation f^M(a) = max({0} u {[r] | f l -> r, [l] <= a}):
      // well-defined when equivalent symbols inside the rule decrease
      e.justification = "fixpoint";
      std::vector<size_ptr> sig_l;
      for (int idx : finfo->measured) sig_l.push_back(term_size(p, args[idx - 1]));
      const measure_spec& spec = p.measure_of(head->name);
      std::vector<size_ptr> zl = apply_measure(spec, finfo->size_vars, sig_l);
      std::function<bool(const term_ptr&, std::string&)> calls_decrease =
          [&](const term_ptr& t, std::string& bad) -> bool {
        if (t->kind != term_kind::app && t->kind != term_kind::sym) return true;
        std::vector<term_ptr> targs;
        term_ptr h = spine_head(t, &targs);
        if (h->kind == term_kind::sym) {
          const symbol_decl* d = p.sig.find_symbol(h->name);
          if (d && !d->is_constructor && p.prec.equiv(h->name, head->name)) {
            const defined_info* ginfo = p.asig.find(h->name);
            std::vector<size_ptr> sig_m;
            for (int idx : ginfo->measured) sig_m.push_back(term_size(p, targs[idx - 1]));
            if (measure_compare(apply_measure(spec, ginfo->size_vars, sig_m), zl, spec.kind) !=
                measure_verdict::lt) {
              bad = to_string(t);
              return false;
            }
          }
        }
        for (const auto& a : targs) {
          if (!calls_decrease(a, bad)) return false;
        }
        return true;
      };
      std::string bad;
      if (!calls_decrease(r.rhs, bad)) {
        out.code = "QuasiModelViolation";
        out.message = "QuasiModelViolation: rule " + r.id + ": fixpoint interpretation of '" +
                      head->name + "' is not well-founded at " + bad;
        out.entries.push_back(e);
        return out;
      }
    }
    out.entries.push_back(e);
  }
  out.ok = true;
  return out;
}

std::vector<labelled_rule> label_system(const rewrite_problem& p) {
  std::vector<labelled_rule> out;
  for (const auto& r : p.rules)
    out.push_back({label_term(p, r.lhs), label_term(p, r.rhs), r.id});
  return out;
}

namespace {

void collect_label_vars(const lterm& t, std::set<std::string>& out) {
  for (const auto& l : t.label)
    for (const auto& v : size_vars(l)) out.insert(v);
  for (const auto& a : t.args) collect_label_vars(a, out);
}

lterm eval_labels(const lterm& t, const std::map<std::string, std::uint64_t>& mu) {
  lterm out = t;
  for (auto& l : out.label) {
    size_value v = eval(l, mu);
    l = v.infinite ? sz_inf() : sz_const(v.v);
  }
  for (auto& a : out.args) a = eval_labels(a, mu);
  return out;
}

std::vector<std::uint64_t> ground_label_values(const lterm& t) {
  std::vector<std::uint64_t> out;
  for (const auto& l : t.label) {
    size_nf nf = normalize(l);
    out.push_back(nf.atoms.empty() ? 0 : nf.atoms[0].konst);
  }
  return out;
}

void collect_ground_labels(const lterm& t,
                           std::map<std::string, std::set<std::vector<std::uint64_t>>>& out) {
  if (t.labelled) out[t.name].insert(ground_label_values(t));
  for (const auto& a : t.args) collect_ground_labels(a, out);
}

bool nat_tuple_lt(const std::vector<std::uint64_t>& b, const std::vector<std::uint64_t>& a,
                  domain_kind kind) {
  if (kind == domain_kind::lex) return b < a && b.size() == a.size();
  // multiset on naturals
  std::vector<std::uint64_t> bs = b, as = a;
  for (auto it = bs.begin(); it != bs.end();) {
    auto ft = std::find(as.begin(), as.end(), *it);
    if (ft != as.end()) {
      as.erase(ft);
      it = bs.erase(it);
    } else {
      ++it;
    }
  }
  if (as.empty()) return false;
  for (auto x : bs)
    if (!std::any_of(as.begin(), as.end(), [&](std::uint64_t y) { return x < y; })) return false;
  return true;
}

}  // namespace

ground_labelled_system instantiate_labels(const rewrite_problem& p,
                                          const std::vector<labelled_rule>& rules,
                                          std::uint64_t k) {
  ground_labelled_system out;
  std::set<std::string> seen;
  for (const auto& r : rules) {
    std::set<std::string> vars;
    collect_label_vars(r.lhs, vars);
    collect_label_vars(r.rhs, vars);
    std::vector<std::string> vs(vars.begin(), vars.end());
    std::vector<std::uint64_t> point(vs.size(), 0);
    while (true) {
      std::map<std::string, std::uint64_t> mu;
      for (size_t i = 0; i < vs.size(); ++i) mu[vs[i]] = point[i];
      labelled_rule g{eval_labels(r.lhs, mu), eval_labels(r.rhs, mu), r.src_rule};
      std::string key = to_string(g.lhs) + " -> " + to_string(g.rhs);
      if (seen.insert(key).second) out.rules.push_back(g);
      // next point in {0..k}^n
      size_t i = 0;
      for (; i < point.size(); ++i) {
        if (point[i] < k) {
          ++point[i];
          break;
        }
        point[i] = 0;
      }
      if (i == point.size()) break;
      if (vs.empty()) break;
    }
  }

  // Decr fragment over the labels present
  std::map<std::string, std::set<std::vector<std::uint64_t>>> labels;
  for (const auto& r : out.rules) {
    collect_ground_labels(r.lhs, labels);
    collect_ground_labels(r.rhs, labels);
  }
  for (const auto& [f, tuples] : labels) {
    const defined_info* info = p.asig.find(f);
    const measure_spec& spec = p.measure_of(f);
    const auto arg_types = argument_types(erase(info->type));
    for (const auto& a : tuples)
      for (const auto& b : tuples) {
        if (!nat_tuple_lt(b, a, spec.kind)) continue;
        lterm lhs, rhs;
        lhs.name = rhs.name = f;
        lhs.labelled = rhs.labelled = true;
        for (auto x : a) lhs.label.push_back(sz_const(x));
        for (auto x : b) rhs.label.push_back(sz_const(x));
        for (size_t i = 0; i < arg_types.size(); ++i) {
          lterm v;
          v.is_var = true;
          v.name = "x" + std::to_string(i + 1);
          lhs.args.push_back(v);
          rhs.args.push_back(v);
        }
        out.decr.push_back({lhs, rhs, "decr"});
      }
  }
  return out;
}

namespace {

bool pt_rhs_ok(const rewrite_problem& p, const std::string& f,
               const std::vector<size_ptr>& a, domain_kind kind, const lterm& t,
               std::string& witness) {
  if (!t.is_var) {
    const symbol_decl* d = p.sig.find_symbol(t.name);
    if (d && !d->is_constructor) {
      bool ok = p.prec.gt(f, t.name);
      if (!ok && p.prec.equiv(f, t.name))
        ok = measure_compare(t.label, a, kind) == measure_verdict::lt;
      if (!ok) {
        witness = to_string(t) + " is not strictly below the lhs head";
        return false;
      }
    }
    for (const auto& arg : t.args)
      if (!pt_rhs_ok(p, f, a, kind, arg, witness)) return false;
  }
  return true;
}

}  // namespace

namespace {

bool labels_finite(const lterm& t) {
  for (const auto& l : t.label)
    if (size_is_inf(l)) return false;
  return std::all_of(t.args.begin(), t.args.end(), labels_finite);
}

}  // namespace

pt_result check_precedence_termination(const rewrite_problem& p,
                                       const std::vector<labelled_rule>& rules) {
  pt_result out;
  for (const auto& r : rules) {
    if (r.lhs.is_var || !r.lhs.labelled) {
      out.witness = "rule " + r.src_rule + ": lhs head is not a labelled defined symbol";
      return out;
    }
    // the syntactic approximation only exists when every label stays in the
    // algebra: an inf label means a symbol with interpretation inf occurs
    // inside a measured argument position
    if (!labels_finite(r.lhs) || !labels_finite(r.rhs)) {
      out.witness = "rule " + r.src_rule +
                    ": label outside the size algebra (inf); the symbolically labelled "
                    "system is undefined here";
      return out;
    }
    const measure_spec& spec = p.measure_of(r.lhs.name);
    std::string witness;
    if (!pt_rhs_ok(p, r.lhs.name, r.lhs.label, spec.kind, r.rhs, witness)) {
      out.witness = "rule " + r.src_rule + " (head " + to_string(r.lhs) + "): " + witness;
      return out;
    }
  }
  out.ok = true;
  return out;
}

std::optional<lterm> label_ground_term(const rewrite_problem& p, const term_ptr& t) {
  try {
    lterm l = label_term(p, t);
    std::function<bool(const lterm&)> finite = [&](const lterm& x) {
      for (const auto& c : x.label)
        if (size_is_inf(c)) return false;
      for (const auto& a : x.args)
        if (!finite(a)) return false;
      return true;
    };
    if (!finite(l)) return std::nullopt;
    std::map<std::string, std::uint64_t> empty;
    std::function<lterm(const lterm&)> ev = [&](const lterm& x) {
      lterm out = x;
      for (auto& c : out.label) c = sz_const(eval(c, empty).v);
      for (auto& a : out.args) a = ev(a);
      return out;
    };
    return ev(l);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

namespace {

// labelled precedence on ground-labelled symbol heads
bool head_gt(const rewrite_problem& p, const lterm& f, const lterm& g) {
  const symbol_decl* df = p.sig.find_symbol(f.name);
  const symbol_decl* dg = p.sig.find_symbol(g.name);
  if (!df || !dg) return false;
  if (df->is_constructor) return false;
  if (dg->is_constructor) return true;
  if (p.prec.gt(f.name, g.name)) return true;
  if (!p.prec.equiv(f.name, g.name)) return false;
  return nat_tuple_lt(ground_label_values(g), ground_label_values(f),
                      p.measure_of(f.name).kind);
}

bool head_equiv(const lterm& f, const lterm& g) {
  return f.name == g.name && ground_label_values(f) == ground_label_values(g);
}

bool rpo_gt(const rewrite_problem& p, const lterm& s, const lterm& t);

bool rpo_ge(const rewrite_problem& p, const lterm& s, const lterm& t) {
  return lterm_equal(s, t) || rpo_gt(p, s, t);
}

// multiset extension of rpo_gt
bool rpo_mul_gt(const rewrite_problem& p, const std::vector<lterm>& ss,
                const std::vector<lterm>& ts) {
  std::vector<lterm> sr = ss, tr = ts;
  for (auto it = tr.begin(); it != tr.end();) {
    bool cancelled = false;
    for (auto is = sr.begin(); is != sr.end(); ++is)
      if (lterm_equal(*is, *it)) {
        sr.erase(is);
        it = tr.erase(it);
        cancelled = true;
        break;
      }
    if (!cancelled) ++it;
  }
  if (sr.empty()) return false;
  for (const auto& t : tr)
    if (!std::any_of(sr.begin(), sr.end(),
                     [&](const lterm& s) { return rpo_gt(p, s, t); }))
      return false;
  return true;
}

// recursive path order with multiset status over the labelled precedence
bool rpo_gt(const rewrite_problem& p, const lterm& s, const lterm& t) {
  if (s.is_var) return false;
  if (t.is_var) {
    // ground terms here; a variable can only come from open rule sides
    std::function<bool(const lterm&)> occurs = [&](const lterm& u) {
      if (u.is_var) return u.name == t.name;
      return std::any_of(u.args.begin(), u.args.end(), occurs);
    };
    return occurs(s);
  }
  for (const auto& si : s.args)
    if (rpo_ge(p, si, t)) return true;
  if (head_gt(p, s, t)) {
    for (const auto& tj : t.args)
      if (!rpo_gt(p, s, tj)) return false;
    return true;
  }
  if (head_equiv(s, t)) {
    if (!rpo_mul_gt(p, s.args, t.args)) return false;
    for (const auto& tj : t.args)
      if (!rpo_gt(p, s, tj) && !std::any_of(s.args.begin(), s.args.end(), [&](const lterm& si) {
            return rpo_ge(p, si, tj);
          }))
        return false;
    return true;
  }
  return false;
}

}  // namespace

bool labelled_rpo_gt(const rewrite_problem& p, const lterm& before, const lterm& after) {
  return rpo_gt(p, before, after);
}

std::string export_tpdb(const rewrite_problem& p, const ground_labelled_system& sys) {
  std::set<std::string> vars;
  std::function<void(const lterm&)> cv = [&](const lterm& t) {
    if (t.is_var) vars.insert(t.name);
    for (const auto& a : t.args) cv(a);
  };
  auto mangle = [](const lterm& t) {
    std::string n = t.name;
    if (t.labelled)
      for (const auto& l : t.label) {
        size_nf nf = normalize(l);
        n += "_" + std::to_string(nf.atoms.empty() ? 0 : nf.atoms[0].konst);
      }
    return n;
  };
  std::function<std::string(const lterm&)> pr = [&](const lterm& t) -> std::string {
    if (t.is_var) return t.name;
    std::string s = mangle(t);
    if (!t.args.empty()) {
      s += "(";
      for (size_t i = 0; i < t.args.size(); ++i) {
        if (i) s += ",";
        s += pr(t.args[i]);
      }
      s += ")";
    }
    return s;
  };
  for (const auto& r : sys.rules) {
    cv(r.lhs);
    cv(r.rhs);
  }
  for (const auto& r : sys.decr) {
    cv(r.lhs);
    cv(r.rhs);
  }
  std::ostringstream os;
  os << "(VAR";
  for (const auto& v : vars) os << " " << v;
  os << ")\n(RULES\n";
  for (const auto& r : sys.rules) os << "  " << pr(r.lhs) << " -> " << pr(r.rhs) << "\n";
  for (const auto& r : sys.decr) os << "  " << pr(r.lhs) << " -> " << pr(r.rhs) << "\n";
  os << ")\n";
  return os.str();
}

namespace {

nlohmann::json lterm_json(const lterm& t) {
  nlohmann::json j;
  if (t.is_var) {
    j["var"] = t.name;
    return j;
  }
  j["symbol"] = t.name;
  if (t.labelled) {
    nlohmann::json labels = nlohmann::json::array();
    for (const auto& l : t.label) labels.push_back(to_string(l));
    j["label"] = labels;
  }
  nlohmann::json args = nlohmann::json::array();
  for (const auto& a : t.args) args.push_back(lterm_json(a));
  j["args"] = args;
  return j;
}

}  // namespace

std::string export_labelled_json(const rewrite_problem& p,
                                 const std::vector<labelled_rule>& rules) {
  (void)p;
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rules) {
    nlohmann::json jr;
    jr["rule"] = r.src_rule;
    jr["lhs"] = lterm_json(r.lhs);
    jr["rhs"] = lterm_json(r.rhs);
    j.push_back(jr);
  }
  return j.dump(2);
}

}  // namespace sizelab
