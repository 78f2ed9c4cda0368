#include "sizelab/term.hpp"

#include <algorithm>
#include <sstream>

#include "sizelab/signature.hpp"

namespace sizelab {

term_ptr mk_fvar(std::string name, type_ptr type) {
  auto t = std::make_shared<term>();
  t->kind = term_kind::fvar;
  t->name = std::move(name);
  t->var_type = std::move(type);
  return t;
}

term_ptr mk_bvar(int index) {
  auto t = std::make_shared<term>();
  t->kind = term_kind::bvar;
  t->index = index;
  return t;
}

term_ptr mk_lam(std::string hint, type_ptr dom, term_ptr body) {
  auto t = std::make_shared<term>();
  t->kind = term_kind::lam;
  t->name = std::move(hint);
  t->var_type = std::move(dom);
  t->a = std::move(body);
  return t;
}

term_ptr mk_app(term_ptr f, term_ptr arg) {
  auto t = std::make_shared<term>();
  t->kind = term_kind::app;
  t->a = std::move(f);
  t->b = std::move(arg);
  return t;
}

term_ptr mk_sym(std::string name) {
  auto t = std::make_shared<term>();
  t->kind = term_kind::sym;
  t->name = std::move(name);
  return t;
}

term_ptr mk_apps(term_ptr head, const std::vector<term_ptr>& args) {
  for (const auto& a : args) head = mk_app(head, a);
  return head;
}

bool term_equal(const term_ptr& a, const term_ptr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case term_kind::fvar:
      return a->name == b->name && type_equal(a->var_type, b->var_type);
    case term_kind::bvar:
      return a->index == b->index;
    case term_kind::sym:
      return a->name == b->name;
    case term_kind::lam:
      return type_equal(a->var_type, b->var_type) && term_equal(a->a, b->a);
    case term_kind::app:
      return term_equal(a->a, b->a) && term_equal(a->b, b->b);
  }
  return false;
}

term_ptr spine_head(const term_ptr& t, std::vector<term_ptr>* args) {
  if (t->kind != term_kind::app) return t;
  term_ptr head = spine_head(t->a, args);
  if (args) args->push_back(t->b);
  return head;
}

namespace {
void free_vars_rec(const term_ptr& t, std::map<std::string, type_ptr>& out) {
  switch (t->kind) {
    case term_kind::fvar:
      out.emplace(t->name, t->var_type);
      break;
    case term_kind::lam:
      free_vars_rec(t->a, out);
      break;
    case term_kind::app:
      free_vars_rec(t->a, out);
      free_vars_rec(t->b, out);
      break;
    default:
      break;
  }
}
}  // namespace

void free_vars(const term_ptr& t, std::map<std::string, type_ptr>& out) {
  free_vars_rec(t, out);
}

bool is_closed(const term_ptr& t) {
  std::map<std::string, type_ptr> fv;
  free_vars(t, fv);
  return fv.empty();
}

bool contains_fvar(const term_ptr& t, const std::string& name) {
  switch (t->kind) {
    case term_kind::fvar:
      return t->name == name;
    case term_kind::lam:
      return contains_fvar(t->a, name);
    case term_kind::app:
      return contains_fvar(t->a, name) || contains_fvar(t->b, name);
    default:
      return false;
  }
}

int term_height(const term_ptr& t) {
  switch (t->kind) {
    case term_kind::lam:
      return 1 + term_height(t->a);
    case term_kind::app:
      return 1 + std::max(term_height(t->a), term_height(t->b));
    default:
      return 1;
  }
}

namespace {
type_ptr typecheck_rec(const std::map<std::string, type_ptr>& env,
                       std::vector<type_ptr>& bound, const term_ptr& t,
                       const signature& sig) {
  switch (t->kind) {
    case term_kind::fvar: {
      auto it = env.find(t->name);
      if (it != env.end()) {
        if (t->var_type && !type_equal(t->var_type, it->second))
          throw type_error("UnboundVariable",
                           "variable '" + t->name + "' used at a type differing from its binding");
        return it->second;
      }
      if (t->var_type) return t->var_type;
      throw type_error("UnboundVariable", "unbound variable '" + t->name + "'");
    }
    case term_kind::bvar: {
      int i = t->index;
      if (i < 0 || i >= static_cast<int>(bound.size()))
        throw type_error("UnboundVariable", "dangling bound variable");
      return bound[bound.size() - 1 - i];
    }
    case term_kind::sym: {
      const symbol_decl* d = sig.find_symbol(t->name);
      if (!d) throw type_error("UnknownSymbol", "unknown symbol '" + t->name + "'");
      return d->type;
    }
    case term_kind::lam: {
      bound.push_back(t->var_type);
      type_ptr body = typecheck_rec(env, bound, t->a, sig);
      bound.pop_back();
      return mk_arrow(t->var_type, body);
    }
    case term_kind::app: {
      type_ptr f = typecheck_rec(env, bound, t->a, sig);
      type_ptr a = typecheck_rec(env, bound, t->b, sig);
      if (f->is_base())
        throw type_error("ArrowMismatch", "application of a non-arrow term");
      if (!type_equal(f->dom, a))
        throw type_error("ArrowMismatch",
                         "argument type " + to_string(a) + " does not match expected " +
                             to_string(f->dom));
      return f->cod;
    }
  }
  throw type_error("Internal", "unreachable");
}
}  // namespace

type_ptr typecheck_simple(const std::map<std::string, type_ptr>& env,
                          const term_ptr& t, const signature& sig) {
  std::vector<type_ptr> bound;
  return typecheck_rec(env, bound, t, sig);
}

term_ptr shift_dangling(const term_ptr& t, int by, int cutoff) {
  if (by == 0) return t;
  switch (t->kind) {
    case term_kind::bvar:
      if (t->index >= cutoff) return mk_bvar(t->index + by);
      return t;
    case term_kind::lam: {
      term_ptr body = shift_dangling(t->a, by, cutoff + 1);
      if (body == t->a) return t;
      return mk_lam(t->name, t->var_type, body);
    }
    case term_kind::app: {
      term_ptr f = shift_dangling(t->a, by, cutoff);
      term_ptr a = shift_dangling(t->b, by, cutoff);
      if (f == t->a && a == t->b) return t;
      return mk_app(f, a);
    }
    default:
      return t;
  }
}

namespace {
term_ptr substitute_rec(const term_ptr& t,
                        const std::map<std::string, term_ptr>& subst, int depth) {
  switch (t->kind) {
    case term_kind::fvar: {
      auto it = subst.find(t->name);
      if (it == subst.end()) return t;
      return shift_dangling(it->second, depth);
    }
    case term_kind::lam: {
      term_ptr body = substitute_rec(t->a, subst, depth + 1);
      if (body == t->a) return t;
      return mk_lam(t->name, t->var_type, body);
    }
    case term_kind::app: {
      term_ptr f = substitute_rec(t->a, subst, depth);
      term_ptr a = substitute_rec(t->b, subst, depth);
      if (f == t->a && a == t->b) return t;
      return mk_app(f, a);
    }
    default:
      return t;
  }
}
}  // namespace

term_ptr substitute(const term_ptr& t, const std::map<std::string, term_ptr>& subst,
                    const signature* sig) {
  if (sig) {
    std::map<std::string, type_ptr> fv;
    free_vars(t, fv);
    for (const auto& [name, image] : subst) {
      auto it = fv.find(name);
      if (it == fv.end() || !it->second) continue;
      std::map<std::string, type_ptr> env;
      type_ptr ty = typecheck_simple(env, image, *sig);
      if (!type_equal(ty, it->second))
        throw type_error("TypeMismatch",
                         "substitution maps '" + name + "' : " + to_string(it->second) +
                             " to a term of type " + to_string(ty));
    }
  }
  return substitute_rec(t, subst, 0);
}

namespace {
term_ptr open_rec(const term_ptr& t, const term_ptr& arg, int depth) {
  switch (t->kind) {
    case term_kind::bvar:
      if (t->index == depth) return shift_dangling(arg, depth);
      if (t->index > depth) return mk_bvar(t->index - 1);
      return t;
    case term_kind::lam: {
      term_ptr body = open_rec(t->a, arg, depth + 1);
      if (body == t->a) return t;
      return mk_lam(t->name, t->var_type, body);
    }
    case term_kind::app: {
      term_ptr f = open_rec(t->a, arg, depth);
      term_ptr a = open_rec(t->b, arg, depth);
      if (f == t->a && a == t->b) return t;
      return mk_app(f, a);
    }
    default:
      return t;
  }
}

void print_rec(const term_ptr& t, std::vector<std::string>& bound, bool atom,
               std::ostringstream& os) {
  switch (t->kind) {
    case term_kind::fvar:
      os << t->name;
      return;
    case term_kind::sym:
      os << t->name;
      return;
    case term_kind::bvar: {
      int i = t->index;
      if (i >= 0 && i < static_cast<int>(bound.size()))
        os << bound[bound.size() - 1 - i];
      else
        os << "#" << i;
      return;
    }
    case term_kind::lam: {
      if (atom) os << "(";
      std::string n = t->name.empty() ? "_x" : t->name;
      // avoid clash with enclosing binders
      std::string base = n;
      int suffix = 0;
      while (std::find(bound.begin(), bound.end(), n) != bound.end())
        n = base + std::to_string(++suffix);
      os << "\\" << n << ". ";
      bound.push_back(n);
      print_rec(t->a, bound, false, os);
      bound.pop_back();
      if (atom) os << ")";
      return;
    }
    case term_kind::app: {
      if (atom) os << "(";
      print_rec(t->a, bound, t->a->kind == term_kind::lam, os);
      os << " ";
      print_rec(t->b, bound, true, os);
      if (atom) os << ")";
      return;
    }
  }
}
}  // namespace

term_ptr open_body(const term_ptr& body, const term_ptr& arg) {
  return open_rec(body, arg, 0);
}

std::string to_string(const term_ptr& t) {
  std::ostringstream os;
  std::vector<std::string> bound;
  print_rec(t, bound, false, os);
  return os.str();
}

}  // namespace sizelab
