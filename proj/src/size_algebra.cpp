#include "sizelab/size_algebra.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace sizelab {

size_ptr sz_var(std::string name) {
  auto e = std::make_shared<size_expr>();
  e->kind = size_kind::var;
  e->var = std::move(name);
  return e;
}

size_ptr sz_zero() {
  auto e = std::make_shared<size_expr>();
  e->kind = size_kind::zero;
  return e;
}

size_ptr sz_succ(size_ptr arg) {
  auto e = std::make_shared<size_expr>();
  e->kind = size_kind::succ;
  e->a = std::move(arg);
  return e;
}

size_ptr sz_max(size_ptr a, size_ptr b) {
  auto e = std::make_shared<size_expr>();
  e->kind = size_kind::maxe;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

size_ptr sz_max_of(const std::vector<size_ptr>& es) {
  if (es.empty()) return sz_zero();
  size_ptr acc = es.back();
  for (auto it = es.rbegin() + 1; it != es.rend(); ++it) acc = sz_max(*it, acc);
  return acc;
}

size_ptr sz_inf() {
  auto e = std::make_shared<size_expr>();
  e->kind = size_kind::inf;
  return e;
}

size_ptr sz_linear(std::map<std::string, std::uint64_t> coeffs, std::uint64_t konst) {
  for (auto it = coeffs.begin(); it != coeffs.end();)
    it = it->second == 0 ? coeffs.erase(it) : std::next(it);
  if (coeffs.empty() && konst == 0) return sz_zero();
  if (coeffs.size() == 1 && konst == 0 && coeffs.begin()->second == 1)
    return sz_var(coeffs.begin()->first);
  auto e = std::make_shared<size_expr>();
  e->kind = size_kind::linear;
  e->coeffs = std::move(coeffs);
  e->konst = konst;
  return e;
}

size_ptr sz_const(std::uint64_t n) { return sz_linear({}, n); }

bool size_is_inf(const size_ptr& e) {
  switch (e->kind) {
    case size_kind::inf:
      return true;
    case size_kind::succ:
      return size_is_inf(e->a);
    case size_kind::maxe:
      return size_is_inf(e->a) || size_is_inf(e->b);
    default:
      return false;
  }
}

bool size_uses_linear(const size_ptr& e) {
  switch (e->kind) {
    case size_kind::linear:
      // a bare constant is expressible as s^k(0); only coefficients or
      // multi-variable sums are labelling-mode extensions
      return !e->coeffs.empty();
    case size_kind::succ:
      return size_uses_linear(e->a);
    case size_kind::maxe:
      return size_uses_linear(e->a) || size_uses_linear(e->b);
    default:
      return false;
  }
}

std::set<std::string> size_vars(const size_ptr& e) {
  std::set<std::string> out;
  std::function<void(const size_ptr&)> go = [&](const size_ptr& x) {
    switch (x->kind) {
      case size_kind::var:
        out.insert(x->var);
        break;
      case size_kind::succ:
        go(x->a);
        break;
      case size_kind::maxe:
        go(x->a);
        go(x->b);
        break;
      case size_kind::linear:
        for (const auto& [v, c] : x->coeffs) out.insert(v);
        break;
      default:
        break;
    }
  };
  go(e);
  return out;
}

bool size_atom::operator<(const size_atom& o) const {
  if (coeffs != o.coeffs) return coeffs < o.coeffs;
  return konst < o.konst;
}

bool size_atom::dominated_by(const size_atom& o) const {
  if (konst > o.konst) return false;
  for (const auto& [v, c] : coeffs) {
    auto it = o.coeffs.find(v);
    if (it == o.coeffs.end() || it->second < c) return false;
  }
  return true;
}

namespace {
void prune(std::vector<size_atom>& atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  std::vector<size_atom> kept;
  for (size_t i = 0; i < atoms.size(); ++i) {
    bool dominated = false;
    for (size_t j = 0; j < atoms.size() && !dominated; ++j)
      if (i != j && atoms[i].dominated_by(atoms[j]) && !(atoms[i] == atoms[j] && i < j))
        dominated = true;
    if (!dominated) kept.push_back(atoms[i]);
  }
  atoms = kept;
}
}  // namespace

size_nf normalize(const size_ptr& e) {
  size_nf nf;
  switch (e->kind) {
    case size_kind::inf:
      nf.infinite = true;
      return nf;
    case size_kind::var:
      nf.atoms.push_back({{{e->var, 1}}, 0});
      return nf;
    case size_kind::zero:
      nf.atoms.push_back({{}, 0});
      return nf;
    case size_kind::linear:
      nf.atoms.push_back({e->coeffs, e->konst});
      return nf;
    case size_kind::succ: {
      size_nf inner = normalize(e->a);
      if (inner.infinite) return inner;
      for (auto& a : inner.atoms) a.konst += 1;
      return inner;
    }
    case size_kind::maxe: {
      size_nf l = normalize(e->a), r = normalize(e->b);
      if (l.infinite || r.infinite) {
        nf.infinite = true;
        return nf;
      }
      l.atoms.insert(l.atoms.end(), r.atoms.begin(), r.atoms.end());
      prune(l.atoms);
      return l;
    }
  }
  return nf;
}

size_ptr nf_to_expr(const size_nf& nf) {
  if (nf.infinite) return sz_inf();
  std::vector<size_ptr> parts;
  for (const auto& a : nf.atoms) parts.push_back(sz_linear(a.coeffs, a.konst));
  return sz_max_of(parts);
}

size_ptr normal_form_expr(const size_ptr& e) { return nf_to_expr(normalize(e)); }

size_cmp compare_nf(const size_nf& a, const size_nf& b) {
  if (a.infinite && b.infinite) return size_cmp::eq;
  if (a.infinite) return size_cmp::incomparable;  // inf <= only inf
  if (b.infinite) return size_cmp::lt;
  if (a == b) return size_cmp::eq;

  auto le = [](const size_nf& x, const size_nf& y, bool strict) {
    for (const auto& ax : x.atoms) {
      bool covered = false;
      for (const auto& ay : y.atoms) {
        if (!ax.dominated_by(ay)) continue;
        if (strict && ay.konst <= ax.konst) continue;
        covered = true;
        break;
      }
      if (!covered) return false;
    }
    return true;
  };

  if (le(a, b, true)) return size_cmp::lt;
  if (le(a, b, false)) return size_cmp::le;
  return size_cmp::incomparable;
}

size_cmp compare(const size_ptr& a, const size_ptr& b) {
  return compare_nf(normalize(a), normalize(b));
}

size_value eval(const size_ptr& e, const std::map<std::string, std::uint64_t>& mu) {
  switch (e->kind) {
    case size_kind::inf:
      return {true, 0};
    case size_kind::zero:
      return {false, 0};
    case size_kind::var: {
      auto it = mu.find(e->var);
      if (it == mu.end())
        throw size_error("UnboundSizeVariable", "unbound size variable '" + e->var + "'");
      return {false, it->second};
    }
    case size_kind::succ: {
      size_value v = eval(e->a, mu);
      if (v.infinite) return v;
      return {false, v.v + 1};
    }
    case size_kind::maxe: {
      size_value l = eval(e->a, mu), r = eval(e->b, mu);
      if (l.infinite || r.infinite) return {true, 0};
      return {false, std::max(l.v, r.v)};
    }
    case size_kind::linear: {
      std::uint64_t acc = e->konst;
      for (const auto& [v, c] : e->coeffs) {
        auto it = mu.find(v);
        if (it == mu.end())
          throw size_error("UnboundSizeVariable", "unbound size variable '" + v + "'");
        acc += c * it->second;
      }
      return {false, acc};
    }
  }
  return {false, 0};
}

size_ptr apply_size_subst(const size_ptr& e, const size_subst& phi) {
  switch (e->kind) {
    case size_kind::var: {
      auto it = phi.find(e->var);
      return it == phi.end() ? e : it->second;
    }
    case size_kind::succ: {
      size_ptr a = apply_size_subst(e->a, phi);
      return size_is_inf(a) ? sz_inf() : sz_succ(a);
    }
    case size_kind::maxe: {
      size_ptr a = apply_size_subst(e->a, phi);
      size_ptr b = apply_size_subst(e->b, phi);
      if (size_is_inf(a) || size_is_inf(b)) return sz_inf();
      return sz_max(a, b);
    }
    case size_kind::linear: {
      // substituting into a linear atom: sum of scaled images; only sensible
      // when the images normalize to single atoms, otherwise distribute max
      size_nf acc;
      acc.atoms.push_back({{}, e->konst});
      for (const auto& [v, c] : e->coeffs) {
        size_ptr image = phi.count(v) ? phi.at(v) : sz_var(v);
        size_nf img = normalize(image);
        if (img.infinite) return sz_inf();
        std::vector<size_atom> next;
        for (const auto& base : acc.atoms)
          for (const auto& ia : img.atoms) {
            size_atom na = base;
            na.konst += c * ia.konst;
            for (const auto& [iv, ic] : ia.coeffs) na.coeffs[iv] += c * ic;
            next.push_back(na);
          }
        acc.atoms = next;
      }
      prune(acc.atoms);
      return nf_to_expr(acc);
    }
    default:
      return e;
  }
}

namespace {
std::string atom_to_string(const std::map<std::string, std::uint64_t>& coeffs,
                           std::uint64_t konst) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, c] : coeffs) {
    if (!first) os << "+";
    if (c != 1) os << c << "*";
    os << v;
    first = false;
  }
  if (konst != 0 || first) {
    if (!first) os << "+";
    os << konst;
  }
  return os.str();
}
}  // namespace

std::string to_string(const size_ptr& e) {
  switch (e->kind) {
    case size_kind::var:
      return e->var;
    case size_kind::zero:
      return "0";
    case size_kind::inf:
      return "inf";
    case size_kind::succ:
      return "s(" + to_string(e->a) + ")";
    case size_kind::maxe:
      return "max(" + to_string(e->a) + "," + to_string(e->b) + ")";
    case size_kind::linear:
      return atom_to_string(e->coeffs, e->konst);
  }
  return "?";
}

std::string to_string(const size_nf& nf) {
  if (nf.infinite) return "inf";
  std::ostringstream os;
  if (nf.atoms.size() > 1) os << "max(";
  for (size_t i = 0; i < nf.atoms.size(); ++i) {
    if (i) os << ",";
    os << atom_to_string(nf.atoms[i].coeffs, nf.atoms[i].konst);
  }
  if (nf.atoms.size() > 1) os << ")";
  return os.str();
}

std::string to_string(size_cmp c) {
  switch (c) {
    case size_cmp::lt:
      return "LT";
    case size_cmp::le:
      return "LE";
    case size_cmp::eq:
      return "EQ";
    case size_cmp::incomparable:
      return "INCOMPARABLE";
  }
  return "?";
}

namespace {

struct size_parser {
  const std::string& text;
  size_t pos = 0;

  explicit size_parser(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c))
      throw size_error("SyntaxError",
                       "expected '" + std::string(1, c) + "' in size expression '" + text +
                           "' at offset " + std::to_string(pos));
  }

  bool peek_ident_char() {
    skip_ws();
    return pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' ||
            text[pos] == '\'');
  }

  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' ||
            text[pos] == '\''))
      ++pos;
    if (start == pos)
      throw size_error("SyntaxError", "expected identifier in size expression '" + text + "'");
    return text.substr(start, pos - start);
  }

  // A summand: nat, nat*var, var, or a structured factor (only allowed alone).
  struct summand {
    bool structured = false;
    size_ptr expr;                   // structured
    std::map<std::string, std::uint64_t> coeffs;
    std::uint64_t konst = 0;
  };

  summand factor() {
    skip_ws();
    if (eat('(')) {
      size_ptr e = parse();
      expect(')');
      summand s;
      s.structured = true;
      s.expr = e;
      return s;
    }
    std::string id = ident();
    if (std::isdigit(static_cast<unsigned char>(id[0]))) {
      std::uint64_t n = std::stoull(id);
      if (eat('*')) {
        std::string v = ident();
        check_var_name(v);
        summand s;
        s.coeffs[v] += n;
        return s;
      }
      summand s;
      s.konst = n;
      return s;
    }
    if (id == "inf") {
      summand s;
      s.structured = true;
      s.expr = sz_inf();
      return s;
    }
    if (id == "s") {
      expect('(');
      size_ptr e = parse();
      expect(')');
      summand s;
      s.structured = true;
      s.expr = size_is_inf(e) ? sz_inf() : sz_succ(e);
      return s;
    }
    if (id == "max") {
      expect('(');
      std::vector<size_ptr> args;
      args.push_back(parse());
      while (eat(',')) args.push_back(parse());
      expect(')');
      summand s;
      s.structured = true;
      for (const auto& a : args)
        if (size_is_inf(a)) {
          s.expr = sz_inf();
          return s;
        }
      s.expr = sz_max_of(args);
      return s;
    }
    check_var_name(id);
    summand s;
    s.coeffs[id] += 1;
    return s;
  }

  void check_var_name(const std::string& v) {
    if (v == "s" || v == "max" || v == "inf" || v == "0" ||
        std::isdigit(static_cast<unsigned char>(v[0])))
      throw size_error("SyntaxError", "'" + v + "' cannot be used as a size variable");
  }

  size_ptr parse() {
    std::vector<summand> parts;
    parts.push_back(factor());
    while (eat('+')) parts.push_back(factor());
    if (parts.size() == 1 && parts[0].structured) return parts[0].expr;
    std::map<std::string, std::uint64_t> coeffs;
    std::uint64_t konst = 0;
    for (const auto& p : parts) {
      if (p.structured)
        throw size_error("SyntaxError",
                         "sums may combine only variables and constants: '" + text + "'");
      for (const auto& [v, c] : p.coeffs) coeffs[v] += c;
      konst += p.konst;
    }
    return sz_linear(std::move(coeffs), konst);
  }
};

}  // namespace

size_ptr parse_size_expr(const std::string& text) {
  size_parser p(text);
  size_ptr e = p.parse();
  p.skip_ws();
  if (p.pos != text.size())
    throw size_error("SyntaxError", "trailing input in size expression '" + text + "'");
  return e;
}

}  // namespace sizelab
