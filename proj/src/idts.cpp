#include "sizelab/idts.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <sstream>

#include "json.hpp"

namespace sizelab {

idts_ptr idts_var(std::string name) {
  auto t = std::make_shared<idts_term>();
  t->kind = idts_kind::var;
  t->name = std::move(name);
  return t;
}

idts_ptr idts_sym(std::string name, std::vector<idts_arg> args, type_ptr u, type_ptr v) {
  auto t = std::make_shared<idts_term>();
  t->kind = idts_kind::sym;
  t->name = std::move(name);
  t->args = std::move(args);
  t->lam_u = std::move(u);
  t->lam_v = std::move(v);
  return t;
}

idts_ptr idts_meta(std::string name, std::vector<idts_ptr> args) {
  auto t = std::make_shared<idts_term>();
  t->kind = idts_kind::meta;
  t->name = std::move(name);
  t->margs = std::move(args);
  return t;
}

idts_ptr idts_lam(std::string var, type_ptr dom, idts_ptr body) {
  auto t = std::make_shared<idts_term>();
  t->kind = idts_kind::lam;
  t->lam_var = std::move(var);
  t->lam_dom = std::move(dom);
  t->lam_body = std::move(body);
  return t;
}

bool is_lam_symbol(const idts_ptr& t) {
  return t->kind == idts_kind::sym && t->name == "lam";
}

bool is_app_symbol(const idts_ptr& t) {
  return t->kind == idts_kind::sym && t->name == "@";
}

namespace {

bool type_tag_equal(const type_ptr& a, const type_ptr& b) {
  if (!a && !b) return true;
  if (!a || !b) return false;
  return type_equal(a, b);
}

// alpha-equality via binder correspondence
bool equal_rec(const idts_ptr& a, const idts_ptr& b,
               std::vector<std::pair<std::string, std::string>>& corr) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case idts_kind::var: {
      for (auto it = corr.rbegin(); it != corr.rend(); ++it) {
        if (it->first == a->name || it->second == b->name)
          return it->first == a->name && it->second == b->name;
      }
      return a->name == b->name;
    }
    case idts_kind::sym: {
      if (a->name != b->name || a->args.size() != b->args.size() ||
          !type_tag_equal(a->lam_u, b->lam_u) || !type_tag_equal(a->lam_v, b->lam_v))
        return false;
      for (size_t i = 0; i < a->args.size(); ++i) {
        const auto& aa = a->args[i];
        const auto& ba = b->args[i];
        if (aa.binders.size() != ba.binders.size()) return false;
        for (size_t k = 0; k < aa.binders.size(); ++k) {
          if (!type_equal(aa.binders[k].second, ba.binders[k].second)) return false;
          corr.emplace_back(aa.binders[k].first, ba.binders[k].first);
        }
        bool ok = equal_rec(aa.body, ba.body, corr);
        corr.resize(corr.size() - aa.binders.size());
        if (!ok) return false;
      }
      return true;
    }
    case idts_kind::meta: {
      if (a->name != b->name || a->margs.size() != b->margs.size()) return false;
      for (size_t i = 0; i < a->margs.size(); ++i)
        if (!equal_rec(a->margs[i], b->margs[i], corr)) return false;
      return true;
    }
    case idts_kind::lam: {
      if (!type_equal(a->lam_dom, b->lam_dom)) return false;
      corr.emplace_back(a->lam_var, b->lam_var);
      bool ok = equal_rec(a->lam_body, b->lam_body, corr);
      corr.pop_back();
      return ok;
    }
  }
  return false;
}

}  // namespace

bool idts_equal(const idts_ptr& a, const idts_ptr& b) {
  std::vector<std::pair<std::string, std::string>> corr;
  return equal_rec(a, b, corr);
}

std::string idts_type_string(const type_ptr& t) {
  if (t->is_base()) return t->sort;
  return "Arr(" + idts_type_string(t->dom) + "," + idts_type_string(t->cod) + ")";
}

std::string to_string(const idts_ptr& t) {
  std::ostringstream os;
  switch (t->kind) {
    case idts_kind::var:
      os << t->name;
      break;
    case idts_kind::meta:
      os << t->name << "(";
      for (size_t i = 0; i < t->margs.size(); ++i) {
        if (i) os << ",";
        os << to_string(t->margs[i]);
      }
      os << ")";
      break;
    case idts_kind::lam:
      os << "\\" << t->lam_var << ". " << to_string(t->lam_body);
      break;
    case idts_kind::sym: {
      os << t->name;
      if (t->lam_u)
        os << "{" << idts_type_string(t->lam_u) << "," << idts_type_string(t->lam_v) << "}";
      if (!t->args.empty()) {
        os << "(";
        for (size_t i = 0; i < t->args.size(); ++i) {
          if (i) os << ",";
          const auto& a = t->args[i];
          for (const auto& [v, ty] : a.binders) os << "\\" << v << ". ";
          os << to_string(a.body);
        }
        os << ")";
      }
      break;
    }
  }
  return os.str();
}

namespace {

bool structural_rec(const idts_ptr& t) {
  switch (t->kind) {
    case idts_kind::lam:
      return false;
    case idts_kind::var:
      return true;
    case idts_kind::meta:
      return std::all_of(t->margs.begin(), t->margs.end(), structural_rec);
    case idts_kind::sym:
      return std::all_of(t->args.begin(), t->args.end(),
                         [](const idts_arg& a) { return structural_rec(a.body); });
  }
  return false;
}

}  // namespace

bool is_structural(const idts_ptr& t) { return structural_rec(t); }

namespace {

struct translator {
  const rewrite_problem& p;
  int fresh = 0;

  std::string fresh_name(const std::string& base) {
    return base + "$" + std::to_string(++fresh);
  }

  type_ptr type_of(const term_ptr& t, std::vector<type_ptr>& bound) {
    switch (t->kind) {
      case term_kind::fvar:
        return t->var_type;
      case term_kind::bvar:
        return bound[bound.size() - 1 - t->index];
      case term_kind::sym:
        return p.sig.find_symbol(t->name)->type;
      case term_kind::lam: {
        bound.push_back(t->var_type);
        type_ptr b = type_of(t->a, bound);
        bound.pop_back();
        return mk_arrow(t->var_type, b);
      }
      case term_kind::app: {
        type_ptr f = type_of(t->a, bound);
        return f->cod;
      }
    }
    return nullptr;
  }

  idts_ptr translate(const term_ptr& t, std::vector<type_ptr>& bound,
                     std::vector<std::string>& names) {
    std::vector<term_ptr> args;
    term_ptr head = spine_head(t, &args);

    if (head->kind == term_kind::sym) {
      const symbol_decl* d = p.sig.find_symbol(head->name);
      const int arity = type_arity(d->type);
      if (static_cast<int>(args.size()) == arity) {
        std::vector<idts_arg> targs;
        for (const auto& a : args) targs.push_back({{}, translate(a, bound, names)});
        return idts_sym(head->name, std::move(targs));
      }
      // partial application: eta-wrap the missing arguments
      return eta_wrap(head->name, args, bound, names);
    }

    if (t->kind == term_kind::lam) {
      std::string x = fresh_name(t->name.empty() ? "x" : t->name);
      bound.push_back(t->var_type);
      names.push_back(x);
      idts_ptr body = translate(t->a, bound, names);
      type_ptr ut = type_of(t->a, bound);
      names.pop_back();
      bound.pop_back();
      return idts_sym("lam", {{{{x, t->var_type}}, body}}, t->var_type, ut);
    }

    if (t->kind == term_kind::app) {
      type_ptr ft = type_of(t->a, bound);
      idts_ptr f = translate(t->a, bound, names);
      idts_ptr a = translate(t->b, bound, names);
      return idts_sym("@", {{{}, f}, {{}, a}}, ft->dom, ft->cod);
    }

    if (t->kind == term_kind::fvar) return idts_var(t->name);
    if (t->kind == term_kind::bvar) return idts_var(names[names.size() - 1 - t->index]);
    throw type_error("Internal", "untranslatable term");
  }

  idts_ptr eta_wrap(const std::string& f, const std::vector<term_ptr>& given,
                    std::vector<type_ptr>& bound, std::vector<std::string>& names) {
    const symbol_decl* d = p.sig.find_symbol(f);
    const auto arg_types = argument_types(d->type);
    std::vector<idts_arg> sym_args;
    for (const auto& a : given) sym_args.push_back({{}, translate(a, bound, names)});
    std::vector<std::pair<std::string, type_ptr>> wrap;  // missing binders
    for (size_t i = given.size(); i < arg_types.size(); ++i) {
      std::string x = fresh_name("x" + std::to_string(i + 1));
      wrap.emplace_back(x, arg_types[i]);
      sym_args.push_back({{}, idts_var(x)});
    }
    idts_ptr core = idts_sym(f, std::move(sym_args));
    // remaining result types U_{k+1}.. for the lam tags
    type_ptr cur = d->type;
    std::vector<type_ptr> residues;  // type after i arguments
    residues.push_back(cur);
    for (size_t i = 0; i < arg_types.size(); ++i) {
      cur = cur->cod;
      residues.push_back(cur);
    }
    idts_ptr acc = core;
    for (size_t i = wrap.size(); i-- > 0;) {
      size_t pos = given.size() + i;  // argument index of this binder
      acc = idts_sym("lam", {{{wrap[i]}, acc}}, arg_types[pos], residues[pos + 1]);
    }
    return acc;
  }
};

}  // namespace

idts_ptr to_idts(const rewrite_problem& p, const term_ptr& t) {
  translator tr{p};
  std::vector<type_ptr> bound;
  std::vector<std::string> names;
  return tr.translate(t, bound, names);
}

namespace {

idts_ptr vars_to_metas(const idts_ptr& t, const std::set<std::string>& rule_vars) {
  switch (t->kind) {
    case idts_kind::var:
      if (rule_vars.count(t->name)) return idts_meta(t->name, {});
      return t;
    case idts_kind::sym: {
      std::vector<idts_arg> args;
      for (const auto& a : t->args) args.push_back({a.binders, vars_to_metas(a.body, rule_vars)});
      return idts_sym(t->name, std::move(args), t->lam_u, t->lam_v);
    }
    case idts_kind::meta: {
      std::vector<idts_ptr> args;
      for (const auto& a : t->margs) args.push_back(vars_to_metas(a, rule_vars));
      return idts_meta(t->name, std::move(args));
    }
    case idts_kind::lam:
      return idts_lam(t->lam_var, t->lam_dom, vars_to_metas(t->lam_body, rule_vars));
  }
  return t;
}

}  // namespace

idts_rule rule_to_idts(const rewrite_problem& p, const rule& r) {
  std::map<std::string, type_ptr> fv;
  free_vars(r.lhs, fv);
  std::set<std::string> names;
  for (const auto& [v, _] : fv) names.insert(v);
  idts_rule out;
  out.id = r.id;
  out.lhs = vars_to_metas(to_idts(p, r.lhs), names);
  out.rhs = vars_to_metas(to_idts(p, r.rhs), names);
  for (const auto& v : names) out.meta_arity[v] = 0;
  return out;
}

std::vector<type_ptr> arrow_types_in_use(const rewrite_problem& p) {
  std::vector<type_ptr> out;
  auto add = [&](const type_ptr& t) {
    if (t->is_base()) return;
    for (const auto& u : out)
      if (type_equal(u, t)) return;
    out.push_back(t);
  };
  std::function<void(const type_ptr&)> walk = [&](const type_ptr& t) {
    if (t->is_base()) return;
    add(t);
    walk(t->dom);
    walk(t->cod);
  };
  // Arr types live in the IDTS symbol argument types (fixed arity, so the
  // curried spine itself contributes nothing), in rule variable types, and
  // in the lam/@ tags of the translated rules (partial applications).
  for (const auto& [name, d] : p.sig.symbols)
    for (const auto& at : argument_types(d.type)) walk(at);
  std::function<void(const idts_ptr&)> scan = [&](const idts_ptr& t) {
    if (t->kind == idts_kind::sym) {
      if (t->lam_u) walk(mk_arrow(t->lam_u, t->lam_v));
      for (const auto& a : t->args) scan(a.body);
    } else if (t->kind == idts_kind::meta) {
      for (const auto& a : t->margs) scan(a);
    } else if (t->kind == idts_kind::lam) {
      scan(t->lam_body);
    }
  };
  for (const auto& r : p.rules) {
    std::map<std::string, type_ptr> fv;
    free_vars(r.lhs, fv);
    for (const auto& [v, ty] : fv) walk(ty);
    idts_rule ir = rule_to_idts(p, r);
    scan(ir.lhs);
    scan(ir.rhs);
  }
  return out;
}

std::vector<idts_rule> beta_rules_for(const std::vector<type_ptr>& arrow_types) {
  std::vector<idts_rule> out;
  int k = 0;
  for (const auto& at : arrow_types) {
    type_ptr t = at->dom, u = at->cod;
    idts_ptr z = idts_meta("Z", {idts_var("x")});
    idts_ptr lam = idts_sym("lam", {{{{"x", t}}, z}}, t, u);
    idts_ptr lhs = idts_sym("@", {{{}, lam}, {{}, idts_meta("X", {})}}, t, u);
    idts_ptr rhs = idts_meta("Z", {idts_meta("X", {})});
    idts_rule r;
    r.id = "beta" + std::to_string(++k);
    r.lhs = lhs;
    r.rhs = rhs;
    r.meta_arity = {{"Z", 1}, {"X", 0}};
    out.push_back(r);
  }
  return out;
}

std::vector<idts_rule> beta_rule_family(const rewrite_problem& p) {
  return beta_rules_for(arrow_types_in_use(p));
}

namespace {

void idts_free_vars(const idts_ptr& t, std::set<std::string>& bound,
                    std::set<std::string>& out) {
  switch (t->kind) {
    case idts_kind::var:
      if (!bound.count(t->name)) out.insert(t->name);
      return;
    case idts_kind::meta:
      for (const auto& a : t->margs) idts_free_vars(a, bound, out);
      return;
    case idts_kind::lam: {
      bool added = bound.insert(t->lam_var).second;
      idts_free_vars(t->lam_body, bound, out);
      if (added) bound.erase(t->lam_var);
      return;
    }
    case idts_kind::sym:
      for (const auto& a : t->args) {
        std::vector<std::string> added;
        for (const auto& [v, ty] : a.binders)
          if (bound.insert(v).second) added.push_back(v);
        idts_free_vars(a.body, bound, out);
        for (const auto& v : added) bound.erase(v);
      }
      return;
  }
}

std::atomic<int> rename_counter{0};

// capture-avoiding substitution of variables
idts_ptr subst_vars(const idts_ptr& t, const std::map<std::string, idts_ptr>& sub) {
  if (sub.empty()) return t;
  std::set<std::string> images_fv;
  for (const auto& [v, img] : sub) {
    std::set<std::string> b;
    idts_free_vars(img, b, images_fv);
  }
  std::function<idts_ptr(const idts_ptr&, const std::map<std::string, idts_ptr>&)> go =
      [&](const idts_ptr& t, const std::map<std::string, idts_ptr>& s) -> idts_ptr {
    switch (t->kind) {
      case idts_kind::var: {
        auto it = s.find(t->name);
        return it == s.end() ? t : it->second;
      }
      case idts_kind::meta: {
        std::vector<idts_ptr> args;
        for (const auto& a : t->margs) args.push_back(go(a, s));
        return idts_meta(t->name, std::move(args));
      }
      case idts_kind::lam: {
        std::map<std::string, idts_ptr> s2 = s;
        s2.erase(t->lam_var);
        std::string v = t->lam_var;
        idts_ptr body = t->lam_body;
        if (images_fv.count(v)) {
          std::string nv = v + "$" + std::to_string(++rename_counter);
          s2[v] = idts_var(nv);
          v = nv;
        }
        return idts_lam(v, t->lam_dom, go(body, s2));
      }
      case idts_kind::sym: {
        std::vector<idts_arg> args;
        for (const auto& a : t->args) {
          std::map<std::string, idts_ptr> s2 = s;
          auto binders = a.binders;
          for (auto& [v, ty] : binders) {
            s2.erase(v);
            if (images_fv.count(v)) {
              std::string nv = v + "$" + std::to_string(++rename_counter);
              s2[v] = idts_var(nv);
              v = nv;
            }
          }
          args.push_back({binders, go(a.body, s2)});
        }
        return idts_sym(t->name, std::move(args), t->lam_u, t->lam_v);
      }
    }
    return t;
  };
  return go(t, sub);
}

}  // namespace

idts_ptr idts_substitute(const idts_ptr& t, const std::map<std::string, idts_ptr>& sub) {
  return subst_vars(t, sub);
}

idts_ptr apply_assignment(const idts_ptr& t, const idts_assignment& theta) {
  switch (t->kind) {
    case idts_kind::var:
      return t;
    case idts_kind::meta: {
      auto it = theta.map.find(t->name);
      std::vector<idts_ptr> args;
      for (const auto& a : t->margs) args.push_back(apply_assignment(a, theta));
      if (it == theta.map.end()) return idts_meta(t->name, std::move(args));
      const idts_arg& image = it->second;
      std::map<std::string, idts_ptr> sub;
      for (size_t i = 0; i < image.binders.size() && i < args.size(); ++i)
        sub[image.binders[i].first] = args[i];
      return subst_vars(image.body, sub);
    }
    case idts_kind::lam:
      return idts_lam(t->lam_var, t->lam_dom, apply_assignment(t->lam_body, theta));
    case idts_kind::sym: {
      std::vector<idts_arg> args;
      for (const auto& a : t->args)
        args.push_back({a.binders, apply_assignment(a.body, theta)});
      return idts_sym(t->name, std::move(args), t->lam_u, t->lam_v);
    }
  }
  return t;
}

namespace {

// Matches a rule pattern against a subject. corr maps pattern binder names
// to subject binder names. Meta applications are Miller patterns: distinct
// pattern-bound variables as arguments.
bool idts_match(const idts_ptr& pattern, const idts_ptr& subject,
                std::vector<std::pair<std::string, std::string>>& corr,
                idts_assignment& theta) {
  switch (pattern->kind) {
    case idts_kind::var: {
      if (subject->kind != idts_kind::var) return false;
      for (auto it = corr.rbegin(); it != corr.rend(); ++it)
        if (it->first == pattern->name || it->second == subject->name)
          return it->first == pattern->name && it->second == subject->name;
      return pattern->name == subject->name;
    }
    case idts_kind::meta: {
      // arguments must be distinct pattern-bound variables
      std::vector<std::pair<std::string, type_ptr>> binders;
      std::map<std::string, std::string> arg_map;  // subject binder -> image binder
      for (const auto& a : pattern->margs) {
        if (a->kind != idts_kind::var) return false;
        std::string subj_name;
        bool found = false;
        for (auto it = corr.rbegin(); it != corr.rend(); ++it)
          if (it->first == a->name) {
            subj_name = it->second;
            found = true;
            break;
          }
        if (!found) return false;
        std::string image_var = "z" + std::to_string(binders.size() + 1) + "$m";
        binders.emplace_back(image_var, nullptr);
        arg_map[subj_name] = image_var;
      }
      // subject must not mention other pattern-scope binders
      std::set<std::string> b, fv;
      idts_free_vars(subject, b, fv);
      std::map<std::string, idts_ptr> ren;
      for (const auto& [s, img] : arg_map) ren[s] = idts_var(img);
      for (const auto& [pv, sv] : corr)
        if (fv.count(sv) && !arg_map.count(sv)) return false;
      idts_arg image{binders, subst_vars(subject, ren)};
      auto it = theta.map.find(pattern->name);
      if (it != theta.map.end()) {
        if (it->second.binders.size() != image.binders.size()) return false;
        return idts_equal(it->second.body, image.body);
      }
      theta.map[pattern->name] = image;
      return true;
    }
    case idts_kind::sym: {
      if (subject->kind != idts_kind::sym || subject->name != pattern->name ||
          subject->args.size() != pattern->args.size() ||
          !type_tag_equal(pattern->lam_u, subject->lam_u) ||
          !type_tag_equal(pattern->lam_v, subject->lam_v))
        return false;
      for (size_t i = 0; i < pattern->args.size(); ++i) {
        const auto& pa = pattern->args[i];
        const auto& sa = subject->args[i];
        if (pa.binders.size() != sa.binders.size()) return false;
        for (size_t kk = 0; kk < pa.binders.size(); ++kk)
          corr.emplace_back(pa.binders[kk].first, sa.binders[kk].first);
        bool ok = idts_match(pa.body, sa.body, corr, theta);
        corr.resize(corr.size() - pa.binders.size());
        if (!ok) return false;
      }
      return true;
    }
    case idts_kind::lam: {
      if (subject->kind != idts_kind::lam) return false;
      corr.emplace_back(pattern->lam_var, subject->lam_var);
      bool ok = idts_match(pattern->lam_body, subject->lam_body, corr, theta);
      corr.pop_back();
      return ok;
    }
  }
  return false;
}

void redexes_rec(const idts_ptr& t, const std::vector<idts_rule>& rules,
                 const std::function<idts_ptr(const idts_ptr&)>& rebuild,
                 std::vector<idts_step>& out) {
  for (const auto& r : rules) {
    std::vector<std::pair<std::string, std::string>> corr;
    idts_assignment theta;
    if (idts_match(r.lhs, t, corr, theta))
      out.push_back({rebuild(apply_assignment(r.rhs, theta)), r.id});
  }
  switch (t->kind) {
    case idts_kind::sym:
      for (size_t i = 0; i < t->args.size(); ++i) {
        auto rb = [&, i](const idts_ptr& nb) {
          std::vector<idts_arg> args = t->args;
          args[i] = {t->args[i].binders, nb};
          return rebuild(idts_sym(t->name, std::move(args), t->lam_u, t->lam_v));
        };
        redexes_rec(t->args[i].body, rules, rb, out);
      }
      return;
    case idts_kind::meta:
      for (size_t i = 0; i < t->margs.size(); ++i) {
        auto rb = [&, i](const idts_ptr& nb) {
          std::vector<idts_ptr> args = t->margs;
          args[i] = nb;
          return rebuild(idts_meta(t->name, std::move(args)));
        };
        redexes_rec(t->margs[i], rules, rb, out);
      }
      return;
    case idts_kind::lam: {
      auto rb = [&](const idts_ptr& nb) {
        return rebuild(idts_lam(t->lam_var, t->lam_dom, nb));
      };
      redexes_rec(t->lam_body, rules, rb, out);
      return;
    }
    default:
      return;
  }
}

}  // namespace

std::vector<idts_step> idts_redexes(const idts_ptr& t, const std::vector<idts_rule>& rules) {
  std::vector<idts_step> out;
  redexes_rec(t, rules, [](const idts_ptr& x) { return x; }, out);
  return out;
}

idts_ptr erase_to_beta_idts(const idts_ptr& t) {
  switch (t->kind) {
    case idts_kind::var:
      return t;
    case idts_kind::meta: {
      std::vector<idts_ptr> args;
      for (const auto& a : t->margs) args.push_back(erase_to_beta_idts(a));
      return idts_meta(t->name, std::move(args));
    }
    case idts_kind::lam:
      return idts_lam(t->lam_var, t->lam_dom, erase_to_beta_idts(t->lam_body));
    case idts_kind::sym: {
      if (is_lam_symbol(t)) {
        const idts_arg& a = t->args[0];
        idts_ptr body = erase_to_beta_idts(a.body);
        if (a.binders.size() == 1)
          return idts_lam(a.binders[0].first, a.binders[0].second, body);
      }
      std::vector<idts_arg> args;
      for (const auto& a : t->args) args.push_back({a.binders, erase_to_beta_idts(a.body)});
      return idts_sym(t->name, std::move(args), t->lam_u, t->lam_v);
    }
  }
  return t;
}

idts_rule erase_rule(const idts_rule& r) {
  idts_rule out = r;
  out.lhs = erase_to_beta_idts(r.lhs);
  out.rhs = erase_to_beta_idts(r.rhs);
  return out;
}

namespace {

nlohmann::json idts_json(const idts_ptr& t) {
  nlohmann::json j;
  switch (t->kind) {
    case idts_kind::var:
      j["var"] = t->name;
      break;
    case idts_kind::meta: {
      j["meta"] = t->name;
      nlohmann::json args = nlohmann::json::array();
      for (const auto& a : t->margs) args.push_back(idts_json(a));
      j["args"] = args;
      break;
    }
    case idts_kind::lam: {
      j["lambda"] = t->lam_var;
      j["body"] = idts_json(t->lam_body);
      break;
    }
    case idts_kind::sym: {
      j["symbol"] = t->name;
      if (t->lam_u) j["type"] = {idts_type_string(t->lam_u), idts_type_string(t->lam_v)};
      nlohmann::json args = nlohmann::json::array();
      for (const auto& a : t->args) {
        nlohmann::json ja;
        if (!a.binders.empty()) {
          nlohmann::json bs = nlohmann::json::array();
          for (const auto& [v, ty] : a.binders) bs.push_back(v);
          ja["binders"] = bs;
        }
        ja["body"] = idts_json(a.body);
        args.push_back(ja);
      }
      j["args"] = args;
      break;
    }
  }
  return j;
}

}  // namespace

std::string idts_rules_json(const std::vector<idts_rule>& rules) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rules) {
    nlohmann::json jr;
    jr["id"] = r.id;
    jr["lhs"] = idts_json(r.lhs);
    jr["rhs"] = idts_json(r.rhs);
    j.push_back(jr);
  }
  return j.dump(2);
}

}  // namespace sizelab
