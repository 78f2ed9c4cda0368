#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sizelab/types.hpp"

namespace sizelab {

// Lambda terms in locally nameless form: free variables are named, bound
// variables are de Bruijn indices. Alpha-equivalence is plain structural
// equality (binder names are display hints only).
enum class term_kind { fvar, bvar, lam, app, sym };

struct term;
using term_ptr = std::shared_ptr<const term>;

struct term {
  term_kind kind;
  std::string name;    // fvar / sym name, lam display hint
  int index = -1;      // bvar
  type_ptr var_type;   // fvar: declared type; lam: domain type
  term_ptr a, b;       // lam: a = body; app: a = function, b = argument
};

term_ptr mk_fvar(std::string name, type_ptr type);
term_ptr mk_bvar(int index);
term_ptr mk_lam(std::string hint, type_ptr dom, term_ptr body);
term_ptr mk_app(term_ptr f, term_ptr arg);
term_ptr mk_sym(std::string name);
term_ptr mk_apps(term_ptr head, const std::vector<term_ptr>& args);

bool term_equal(const term_ptr& a, const term_ptr& b);

// Head and arguments of the application spine: t = head t1 ... tn.
term_ptr spine_head(const term_ptr& t, std::vector<term_ptr>* args = nullptr);

void free_vars(const term_ptr& t, std::map<std::string, type_ptr>& out);
bool is_closed(const term_ptr& t);
bool contains_fvar(const term_ptr& t, const std::string& name);
int term_height(const term_ptr& t);  // leaf = 1

struct type_error : std::runtime_error {
  std::string code;
  type_error(std::string c, const std::string& msg)
      : std::runtime_error(msg), code(std::move(c)) {}
};

class signature;

// Type of t under env (free variables not in env fall back to their own
// annotation). Throws type_error: UnboundVariable, UnknownSymbol,
// ArrowMismatch.
type_ptr typecheck_simple(const std::map<std::string, type_ptr>& env,
                          const term_ptr& t, const signature& sig);

// Simultaneous capture-avoiding substitution of free variables. Images with
// dangling indices are shifted as they move under binders. Throws type_error
// (TypeMismatch) when an image's type differs from the variable's.
term_ptr substitute(const term_ptr& t,
                    const std::map<std::string, term_ptr>& subst,
                    const signature* sig = nullptr);

// Beta contraction helper: body with bvar 0 replaced by arg.
term_ptr open_body(const term_ptr& body, const term_ptr& arg);

term_ptr shift_dangling(const term_ptr& t, int by, int cutoff = 0);

std::string to_string(const term_ptr& t);

}  // namespace sizelab
