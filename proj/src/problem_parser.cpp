#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

#include "sizelab/problem.hpp"

namespace sizelab {

namespace {

struct token {
  enum kind_t { ident, punct, lambda, arrow, end } kind;
  std::string text;
  int line, col;
};

struct lexer {
  std::string src;
  size_t pos = 0;
  int line = 1, col = 1;
  token cur;

  explicit lexer(std::string s) : src(std::move(s)) { advance(); }

  void bump(char c) {
    ++pos;
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }

  void skip_ws_comments() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') bump(src[pos]);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump(c);
      } else {
        break;
      }
    }
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '*' ||
           c == '+';
  }

  void advance() {
    skip_ws_comments();
    int l = line, c = col;
    if (pos >= src.size()) {
      cur = {token::end, "", l, c};
      return;
    }
    char ch = src[pos];
    if (ch == '-' && pos + 1 < src.size() && src[pos + 1] == '>') {
      bump('-');
      bump('>');
      cur = {token::arrow, "->", l, c};
      return;
    }
    if (ch == '\\') {
      bump(ch);
      cur = {token::lambda, "\\", l, c};
      return;
    }
    if (std::string("(){},:.~=<>").find(ch) != std::string::npos) {
      bump(ch);
      cur = {token::punct, std::string(1, ch), l, c};
      return;
    }
    if (ident_char(ch)) {
      size_t start = pos;
      while (pos < src.size() && ident_char(src[pos])) bump(src[pos]);
      cur = {token::ident, src.substr(start, pos - start), l, c};
      return;
    }
    throw parse_error("SyntaxError", l, c, std::string("unexpected character '") + ch + "'");
  }
};

const std::vector<std::string> kSections = {"SORTS", "CONS", "FUNS",  "PREC",
                                            "MEASURE", "INTERP", "RULES"};

bool is_section(const token& t) {
  return t.kind == token::ident &&
         std::find(kSections.begin(), kSections.end(), t.text) != kSections.end();
}

// Simple-type metavariables for rule typing.
struct tyvar_store {
  std::vector<type_ptr> repr;  // index -> resolved type or null
  int fresh() {
    repr.push_back(nullptr);
    return static_cast<int>(repr.size()) - 1;
  }
};

// Types during rule parsing may contain metavariables, encoded as base sorts
// named "?<n>"; resolved by unification afterwards.
bool is_meta(const type_ptr& t) { return t->is_base() && !t->sort.empty() && t->sort[0] == '?'; }
int meta_id(const type_ptr& t) { return std::stoi(t->sort.substr(1)); }

struct ty_unifier {
  tyvar_store& store;

  type_ptr resolve(type_ptr t) {
    while (is_meta(t) && store.repr[meta_id(t)]) t = store.repr[meta_id(t)];
    return t;
  }

  type_ptr deep_resolve(type_ptr t) {
    t = resolve(t);
    if (t->is_base()) return t;
    return mk_arrow(deep_resolve(t->dom), deep_resolve(t->cod));
  }

  bool occurs(int id, type_ptr t) {
    t = resolve(t);
    if (t->is_base()) return is_meta(t) && meta_id(t) == id;
    return occurs(id, t->dom) || occurs(id, t->cod);
  }

  bool unify(type_ptr a, type_ptr b) {
    a = resolve(a);
    b = resolve(b);
    if (is_meta(a)) {
      if (is_meta(b) && meta_id(a) == meta_id(b)) return true;
      if (occurs(meta_id(a), b)) return false;
      store.repr[meta_id(a)] = b;
      return true;
    }
    if (is_meta(b)) return unify(b, a);
    if (a->is_base() != b->is_base()) return false;
    if (a->is_base()) return a->sort == b->sort;
    return unify(a->dom, b->dom) && unify(a->cod, b->cod);
  }
};

struct parser {
  lexer lx;
  rewrite_problem p;
  std::map<std::string, ann_ptr> fun_ann;      // FUNS declared annotated types
  std::map<std::string, size_ptr> interp;      // INTERP entries
  std::map<std::string, std::pair<domain_kind, std::vector<std::string>>> raw_measures;
  int rule_count = 0;
  int rule_line = -1;  // rules are line-delimited; -1 outside RULES

  explicit parser(std::string text) : lx(std::move(text)) {}

  [[noreturn]] void fail(const std::string& code, const std::string& msg) {
    throw parse_error(code, lx.cur.line, lx.cur.col, msg);
  }

  token expect_ident() {
    if (lx.cur.kind != token::ident) fail("SyntaxError", "expected identifier");
    token t = lx.cur;
    lx.advance();
    return t;
  }

  bool eat_punct(const std::string& s) {
    if (lx.cur.kind == token::punct && lx.cur.text == s) {
      lx.advance();
      return true;
    }
    return false;
  }

  void expect_punct(const std::string& s) {
    if (!eat_punct(s)) fail("SyntaxError", "expected '" + s + "'");
  }

  // ---- types ----

  type_ptr parse_simple_type() {
    type_ptr left = parse_simple_atom();
    if (lx.cur.kind == token::arrow) {
      lx.advance();
      return mk_arrow(left, parse_simple_type());
    }
    return left;
  }

  type_ptr parse_simple_atom() {
    if (eat_punct("(")) {
      type_ptr t = parse_simple_type();
      expect_punct(")");
      return t;
    }
    token t = expect_ident();
    if (!p.sig.has_sort(t.text))
      throw parse_error("UnknownSort", t.line, t.col, "unknown sort '" + t.text + "'");
    return mk_sort(t.text);
  }

  ann_ptr parse_ann_type() {
    ann_ptr left = parse_ann_atom();
    if (lx.cur.kind == token::arrow) {
      lx.advance();
      return mk_ann_arrow(left, parse_ann_type());
    }
    return left;
  }

  ann_ptr parse_ann_atom() {
    if (eat_punct("(")) {
      ann_ptr t = parse_ann_type();
      expect_punct(")");
      return t;
    }
    token t = expect_ident();
    if (!p.sig.has_sort(t.text))
      throw parse_error("UnknownSort", t.line, t.col, "unknown sort '" + t.text + "'");
    size_ptr ann = sz_inf();
    if (eat_punct("{")) {
      std::string expr;
      int depth = 1;
      while (depth > 0) {
        if (lx.cur.kind == token::end) fail("SyntaxError", "unterminated annotation");
        if (lx.cur.kind == token::punct && lx.cur.text == "{") ++depth;
        if (lx.cur.kind == token::punct && lx.cur.text == "}") {
          --depth;
          if (depth == 0) {
            lx.advance();
            break;
          }
        }
        expr += lx.cur.text;
        lx.advance();
      }
      try {
        ann = parse_size_expr(expr);
      } catch (const size_error& e) {
        throw parse_error("InvalidAnnotation", t.line, t.col, e.what());
      }
    }
    return mk_ann_base(t.text, ann);
  }

  // ---- terms ----

  struct scope {
    std::vector<std::pair<std::string, type_ptr>> binders;  // innermost last
  };

  term_ptr parse_term(tyvar_store& tys, scope& sc,
                      std::map<std::string, type_ptr>& rule_vars) {
    std::vector<term_ptr> atoms;
    while (true) {
      if (rule_line >= 0 && lx.cur.line != rule_line) break;
      if (lx.cur.kind == token::ident || lx.cur.kind == token::lambda ||
          (lx.cur.kind == token::punct && lx.cur.text == "(")) {
        atoms.push_back(parse_atom(tys, sc, rule_vars));
      } else {
        break;
      }
    }
    if (atoms.empty()) fail("SyntaxError", "expected a term");
    term_ptr t = atoms[0];
    for (size_t i = 1; i < atoms.size(); ++i) t = mk_app(t, atoms[i]);
    return t;
  }

  term_ptr parse_atom(tyvar_store& tys, scope& sc,
                      std::map<std::string, type_ptr>& rule_vars) {
    if (lx.cur.kind == token::lambda) {
      lx.advance();
      token v = expect_ident();
      type_ptr dom;
      if (eat_punct(":")) {
        dom = parse_simple_type();
      } else {
        dom = mk_sort("?" + std::to_string(tys.fresh()));
      }
      expect_punct(".");
      sc.binders.emplace_back(v.text, dom);
      term_ptr body = parse_term(tys, sc, rule_vars);
      sc.binders.pop_back();
      return mk_lam(v.text, dom, body);
    }
    if (eat_punct("(")) {
      term_ptr first = parse_term(tys, sc, rule_vars);
      std::vector<term_ptr> rest;
      while (eat_punct(",")) rest.push_back(parse_term(tys, sc, rule_vars));
      expect_punct(")");
      if (rest.empty()) return first;
      // tuple-style application sugar: previous atom consumed separately, so
      // a comma list forms the arguments of the preceding head; reassemble
      // by returning a marker is messy, so instead we only allow the sugar
      // directly after an identifier (handled in parse_atom below).
      fail("SyntaxError", "unexpected ','");
    }
    token id = expect_ident();
    term_ptr head = resolve_name(id, tys, sc, rule_vars);
    // f(t1,...,tn) sugar
    if (lx.cur.kind == token::punct && lx.cur.text == "(" && looks_like_arglist()) {
      expect_punct("(");
      std::vector<term_ptr> args;
      args.push_back(parse_term(tys, sc, rule_vars));
      while (eat_punct(",")) args.push_back(parse_term(tys, sc, rule_vars));
      expect_punct(")");
      if (args.size() == 1) return mk_app(head, args[0]);
      return mk_apps(head, args);
    }
    return head;
  }

  // lookahead: does the parenthesized group contain a top-level comma?
  bool looks_like_arglist() {
    size_t pos = lx.pos;
    int line = lx.line, col = lx.col;
    token save = lx.cur;
    int depth = 0;
    bool comma = false;
    while (true) {
      if (lx.cur.kind == token::end) break;
      if (lx.cur.kind == token::punct && lx.cur.text == "(") ++depth;
      if (lx.cur.kind == token::punct && lx.cur.text == ")") {
        --depth;
        if (depth == 0) break;
      }
      if (lx.cur.kind == token::punct && lx.cur.text == "," && depth == 1) {
        comma = true;
        break;
      }
      lx.advance();
    }
    lx.pos = pos;
    lx.line = line;
    lx.col = col;
    lx.cur = save;
    return comma;
  }

  term_ptr resolve_name(const token& id, tyvar_store& tys, scope& sc,
                        std::map<std::string, type_ptr>& rule_vars) {
    for (size_t i = sc.binders.size(); i-- > 0;) {
      if (sc.binders[i].first == id.text) {
        // de Bruijn index from innermost
        return mk_bvar(static_cast<int>(sc.binders.size() - 1 - i));
      }
    }
    if (p.sig.find_symbol(id.text)) return mk_sym(id.text);
    auto it = rule_vars.find(id.text);
    if (it == rule_vars.end()) {
      type_ptr mv = mk_sort("?" + std::to_string(tys.fresh()));
      it = rule_vars.emplace(id.text, mv).first;
    }
    return mk_fvar(id.text, it->second);
  }

  // Monomorphic typing: walk the term, generate
  // constraints against the declared symbol types, solve by unification.
  type_ptr infer_simple(const term_ptr& t, ty_unifier& u, tyvar_store& tys,
                        std::vector<type_ptr>& bound, const token& where) {
    switch (t->kind) {
      case term_kind::fvar:
        return t->var_type;
      case term_kind::bvar:
        return bound[bound.size() - 1 - t->index];
      case term_kind::sym:
        return p.sig.find_symbol(t->name)->type;
      case term_kind::lam: {
        bound.push_back(t->var_type);
        type_ptr body = infer_simple(t->a, u, tys, bound, where);
        bound.pop_back();
        return mk_arrow(t->var_type, body);
      }
      case term_kind::app: {
        type_ptr f = infer_simple(t->a, u, tys, bound, where);
        type_ptr a = infer_simple(t->b, u, tys, bound, where);
        type_ptr res = mk_sort("?" + std::to_string(tys.fresh()));
        if (!u.unify(f, mk_arrow(a, res)))
          throw parse_error("SyntaxError", where.line, where.col,
                            "ill-typed rule: cannot apply " + to_string(t->a) + " to " +
                                to_string(t->b));
        return res;
      }
    }
    throw parse_error("SyntaxError", where.line, where.col, "internal");
  }

  term_ptr finalize_types(const term_ptr& t, ty_unifier& u, const token& where) {
    switch (t->kind) {
      case term_kind::fvar: {
        type_ptr ty = u.deep_resolve(t->var_type);
        if (is_meta(ty) || !fully_resolved(ty))
          throw parse_error("SyntaxError", where.line, where.col,
                            "cannot infer the type of rule variable '" + t->name + "'");
        return mk_fvar(t->name, ty);
      }
      case term_kind::lam: {
        type_ptr dom = u.deep_resolve(t->var_type);
        if (!fully_resolved(dom))
          throw parse_error("SyntaxError", where.line, where.col,
                            "cannot infer the domain of a lambda binder");
        return mk_lam(t->name, dom, finalize_types(t->a, u, where));
      }
      case term_kind::app:
        return mk_app(finalize_types(t->a, u, where), finalize_types(t->b, u, where));
      default:
        return t;
    }
  }

  bool fully_resolved(const type_ptr& t) {
    if (t->is_base()) return !is_meta(t);
    return fully_resolved(t->dom) && fully_resolved(t->cod);
  }

  // ---- sections ----

  void run() {
    while (lx.cur.kind != token::end) {
      if (!is_section(lx.cur)) fail("SyntaxError", "expected a section keyword");
      std::string sec = lx.cur.text;
      lx.advance();
      if (sec == "SORTS") parse_sorts();
      else if (sec == "CONS") parse_decls(true);
      else if (sec == "FUNS") parse_decls(false);
      else if (sec == "PREC") parse_prec();
      else if (sec == "MEASURE") parse_measure();
      else if (sec == "INTERP") parse_interp();
      else parse_rules();
    }
    finish();
  }

  void parse_sorts() {
    while (lx.cur.kind == token::ident && !is_section(lx.cur)) {
      p.sig.add_sort(lx.cur.text);
      lx.advance();
    }
  }

  void parse_decls(bool ctor) {
    while (lx.cur.kind == token::ident && !is_section(lx.cur)) {
      token name = expect_ident();
      if (p.sig.find_symbol(name.text))
        throw parse_error("DuplicateSymbol", name.line, name.col,
                          "symbol '" + name.text + "' declared twice");
      expect_punct(":");
      if (ctor) {
        p.sig.add_constructor(name.text, parse_simple_type());
      } else {
        ann_ptr at = parse_ann_type();
        fun_ann[name.text] = at;
        p.sig.add_defined(name.text, erase(at));
      }
    }
  }

  struct prec_decl {
    std::string op, f, g;
    int line, col;
  };
  std::vector<prec_decl> raw_prec;

  void parse_prec() {
    while (lx.cur.kind == token::ident && !is_section(lx.cur)) {
      token f = expect_ident();
      if (lx.cur.kind == token::punct && (lx.cur.text == ">" || lx.cur.text == "~")) {
        std::string op = lx.cur.text;
        lx.advance();
        token g = expect_ident();
        raw_prec.push_back({op, f.text, g.text, f.line, f.col});
      } else {
        fail("SyntaxError", "expected '>' or '~' in PREC");
      }
    }
  }

  void parse_measure() {
    while (lx.cur.kind == token::ident && !is_section(lx.cur)) {
      token f = expect_ident();
      expect_punct("=");
      token kind = expect_ident();
      if (kind.text != "lex" && kind.text != "mul")
        throw parse_error("SyntaxError", kind.line, kind.col, "expected 'lex' or 'mul'");
      expect_punct("(");
      std::vector<std::string> items;
      items.push_back(measure_item());
      while (eat_punct(",")) items.push_back(measure_item());
      expect_punct(")");
      raw_measures[f.text] = {kind.text == "lex" ? domain_kind::lex : domain_kind::mul,
                              items};
    }
  }

  std::string measure_item() {
    std::string expr;
    int depth = 0;
    while (true) {
      if (lx.cur.kind == token::end) fail("SyntaxError", "unterminated MEASURE entry");
      if (lx.cur.kind == token::punct && lx.cur.text == "(") ++depth;
      if (lx.cur.kind == token::punct && lx.cur.text == ")") {
        if (depth == 0) break;
        --depth;
      }
      if (lx.cur.kind == token::punct && lx.cur.text == "," && depth == 0) break;
      expr += lx.cur.text;
      lx.advance();
    }
    return expr;
  }

  void parse_interp() {
    while (lx.cur.kind == token::ident && !is_section(lx.cur)) {
      token f = expect_ident();
      expect_punct("=");
      std::string expr;
      while (lx.cur.kind != token::end && !is_section(lx.cur)) {
        // an INTERP entry ends where the next `name =` begins
        if (lx.cur.kind == token::ident) {
          size_t pos = lx.pos;
          int line = lx.line, col = lx.col;
          token save = lx.cur;
          token candidate = lx.cur;
          lx.advance();
          bool next_entry = !expr.empty() && lx.cur.kind == token::punct && lx.cur.text == "=";
          lx.pos = pos;
          lx.line = line;
          lx.col = col;
          lx.cur = save;
          (void)candidate;
          if (next_entry) break;
        }
        expr += lx.cur.text;
        lx.advance();
      }
      try {
        interp[f.text] = parse_size_expr(expr);
      } catch (const size_error& e) {
        throw parse_error("InvalidAnnotation", f.line, f.col, e.what());
      }
    }
  }

  void parse_rules() {
    while (lx.cur.kind != token::end && !is_section(lx.cur)) {
      token start = lx.cur;
      tyvar_store tys;
      scope sc;
      std::map<std::string, type_ptr> rule_vars;
      rule_line = start.line;
      term_ptr lhs = parse_term(tys, sc, rule_vars);
      if (lx.cur.kind != token::arrow || lx.cur.line != rule_line)
        fail("SyntaxError", "expected '->' in rule (rules are one per line)");
      lx.advance();
      term_ptr rhs = parse_term(tys, sc, rule_vars);
      rule_line = -1;

      ty_unifier u{tys};
      std::vector<type_ptr> bound;
      type_ptr tl = infer_simple(lhs, u, tys, bound, start);
      type_ptr tr = infer_simple(rhs, u, tys, bound, start);
      if (!u.unify(tl, tr))
        throw parse_error("SyntaxError", start.line, start.col,
                          "rule sides have different types");
      // default unresolved metavariables of variable types are ambiguous
      lhs = finalize_types(lhs, u, start);
      rhs = finalize_types(rhs, u, start);
      type_ptr ty = u.deep_resolve(tl);
      if (!fully_resolved(ty))
        throw parse_error("SyntaxError", start.line, start.col,
                          "cannot infer the type of a rule");

      std::map<std::string, type_ptr> lv, rv;
      free_vars(lhs, lv);
      free_vars(rhs, rv);
      for (const auto& [v, _] : rv)
        if (!lv.count(v))
          throw parse_error("SyntaxError", start.line, start.col,
                            "rule rhs variable '" + v + "' does not occur in the lhs");
      std::vector<term_ptr> args;
      term_ptr head = spine_head(lhs, &args);
      if (head->kind != term_kind::sym)
        throw parse_error("SyntaxError", start.line, start.col,
                          "rule lhs must be headed by a defined symbol");
      const symbol_decl* d = p.sig.find_symbol(head->name);
      if (d->is_constructor)
        throw parse_error("SyntaxError", start.line, start.col,
                          "rule lhs head '" + head->name + "' is a constructor");
      ++rule_count;
      p.rules.push_back({"r" + std::to_string(rule_count), lhs, rhs, ty});
    }
  }

  void finish() {
    p.validation = p.sig.validate();
    for (const auto& issue : p.validation)
      if (issue.is_error)
        throw parse_error(issue.code, 0, 0, issue.message);

    // annotated signature
    for (const auto& [name, decl] : p.sig.symbols) {
      if (decl.is_constructor) {
        p.asig.ctors[name] = annotate_constructor(p.sig, name);
        continue;
      }
      defined_info info;
      info.name = name;
      ann_ptr at = fun_ann.count(name) ? fun_ann[name] : annot_inf(decl.type);
      // classify argument positions: a distinct size variable = measured,
      // no annotation (inf) or closed expression = parameter
      ann_ptr cur = at;
      int idx = 0;
      std::set<std::string> seen;
      std::vector<ann_ptr> doms;
      while (!cur->is_base()) {
        ++idx;
        ann_ptr domt = cur->dom;
        auto vars_in = ann_size_vars(domt);
        if (domt->is_base() && domt->ann->kind == size_kind::var) {
          const std::string v = domt->ann->var;
          if (seen.count(v))
            throw parse_error("InvalidAnnotation", 0, 0,
                              "size variable '" + v + "' used for two measured positions of '" +
                                  name + "'");
          seen.insert(v);
          info.measured.push_back(idx);
          info.size_vars.push_back(v);
        } else if (!vars_in.empty()) {
          throw parse_error("InvalidAnnotation", 0, 0,
                            "argument " + std::to_string(idx) + " of '" + name +
                                "' must be annotated with a plain size variable or left "
                                "unannotated");
        }
        doms.push_back(domt);
        cur = cur->cod;
      }
      size_ptr result = cur->ann;
      if (interp.count(name)) {
        size_ptr given = interp[name];
        if (result->kind != size_kind::inf &&
            !(normalize(result) == normalize(given)))
          throw parse_error("InvalidAnnotation", 0, 0,
                            "INTERP for '" + name + "' conflicts with its declared result "
                            "annotation");
        result = given;
      }
      for (const auto& v : size_vars(result))
        if (!seen.count(v))
          throw parse_error("InvalidAnnotation", 0, 0,
                            "result annotation of '" + name + "' uses unknown size variable '" +
                                v + "'");
      info.interp = result;
      // rebuild the full annotated type with the effective result annotation
      ann_ptr rebuilt = mk_ann_base(cur->sort, result);
      for (auto it = doms.rbegin(); it != doms.rend(); ++it)
        rebuilt = mk_ann_arrow(*it, rebuilt);
      info.type = rebuilt;
      p.asig.defined[name] = info;
      p.prec.declare_symbol(name);
    }

    // precedence declarations may only mention defined symbols
    for (const auto& d : raw_prec) {
      for (const auto& name : {d.f, d.g}) {
        const symbol_decl* sd = p.sig.find_symbol(name);
        if (!sd)
          throw parse_error("UnknownSymbol", d.line, d.col,
                            "PREC mentions undeclared symbol '" + name + "'");
        if (sd->is_constructor)
          throw parse_error("InvalidPrecedence", d.line, d.col,
                            "constructors are implicitly below all defined symbols; '" +
                                name + "' cannot appear in PREC");
      }
      if (d.op == ">")
        p.prec.declare_gt(d.f, d.g);
      else
        p.prec.declare_equiv(d.f, d.g);
    }
    for (const auto& [f, e] : interp)
      if (!p.asig.find(f))
        throw parse_error("UnknownSymbol", 0, 0,
                          "INTERP for unknown defined symbol '" + f + "'");

    // measures
    for (const auto& [f, raw] : raw_measures) {
      const defined_info* info = p.asig.find(f);
      if (!info) throw parse_error("UnknownSymbol", 0, 0, "MEASURE for unknown symbol '" + f + "'");
      measure_spec spec;
      spec.kind = raw.first;
      for (const auto& item : raw.second) {
        bool numeric = !item.empty() &&
                       std::all_of(item.begin(), item.end(),
                                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
        if (numeric) {
          int i = std::stoi(item);
          if (i < 1 || i > static_cast<int>(info->size_vars.size()))
            throw parse_error("InvalidAnnotation", 0, 0,
                              "MEASURE index " + item + " out of range for '" + f + "'");
          spec.components.push_back(sz_var(info->size_vars[i - 1]));
        } else {
          size_ptr e;
          try {
            e = parse_size_expr(item);
          } catch (const size_error& err) {
            throw parse_error("InvalidAnnotation", 0, 0, err.what());
          }
          for (const auto& v : size_vars(e))
            if (std::find(info->size_vars.begin(), info->size_vars.end(), v) ==
                info->size_vars.end())
              throw parse_error("InvalidAnnotation", 0, 0,
                                "MEASURE for '" + f + "' uses unknown size variable '" + v + "'");
          spec.components.push_back(e);
        }
      }
      p.measures[f] = spec;
    }
    // default measure: identity over measured positions, lexicographic
    for (const auto& [name, info] : p.asig.defined) {
      if (p.measures.count(name)) continue;
      measure_spec spec;
      for (const auto& v : info.size_vars) spec.components.push_back(sz_var(v));
      p.measures[name] = spec;
    }

    std::string err;
    if (!p.prec.finalize(&err)) throw parse_error("InvalidPrecedence", 0, 0, err);

    // measures must agree across precedence-equivalent symbols
    for (const auto& [f, sf] : p.measures)
      for (const auto& [g, sg] : p.measures) {
        if (f >= g || !p.prec.equiv(f, g)) continue;
        bool same = sf.kind == sg.kind && sf.components.size() == sg.components.size();
        if (same) {
          const auto& fv = p.asig.find(f)->size_vars;
          const auto& gv = p.asig.find(g)->size_vars;
          if (fv.size() != gv.size()) same = false;
          for (size_t i = 0; same && i < sf.components.size(); ++i) {
            size_subst ren;
            for (size_t k = 0; k < gv.size(); ++k) ren[gv[k]] = sz_var(fv[k]);
            same = normalize(sf.components[i]) ==
                   normalize(apply_size_subst(sg.components[i], ren));
          }
        }
        if (!same)
          throw parse_error("InvalidAnnotation", 0, 0,
                            "equivalent symbols '" + f + "' and '" + g +
                                "' have incompatible measures");
      }
  }
};

}  // namespace

rewrite_problem parse_problem(const std::string& text, const std::string& name) {
  parser ps(text);
  ps.p.name = name;
  ps.run();
  return std::move(ps.p);
}

rewrite_problem parse_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("SyntaxError", 0, 0, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str(), path);
}

std::string print_problem(const rewrite_problem& p) {
  std::ostringstream os;
  os << "SORTS";
  for (const auto& s : p.sig.sorts) os << " " << s;
  os << "\nCONS\n";
  for (const auto& [name, d] : p.sig.symbols)
    if (d.is_constructor) os << "  " << name << " : " << to_string(d.type) << "\n";
  os << "FUNS\n";
  for (const auto& [name, info] : p.asig.defined)
    os << "  " << name << " : " << to_string(info.type) << "\n";
  bool any = false;
  std::ostringstream prec;
  for (const auto& [f, fi] : p.asig.defined)
    for (const auto& [g, gi] : p.asig.defined) {
      if (p.prec.gt(f, g)) {
        prec << "  " << f << " > " << g << "\n";
        any = true;
      } else if (f < g && p.prec.equiv(f, g)) {
        prec << "  " << f << " ~ " << g << "\n";
        any = true;
      }
    }
  if (any) os << "PREC\n" << prec.str();
  os << "MEASURE\n";
  for (const auto& [f, m] : p.measures) {
    if (m.components.empty()) continue;
    os << "  " << f << " = " << (m.kind == domain_kind::lex ? "lex(" : "mul(");
    for (size_t i = 0; i < m.components.size(); ++i) {
      if (i) os << ", ";
      os << to_string(m.components[i]);
    }
    os << ")\n";
  }
  os << "RULES\n";
  for (const auto& r : p.rules)
    os << "  " << to_string(r.lhs) << " -> " << to_string(r.rhs) << "\n";
  return os.str();
}

}  // namespace sizelab
