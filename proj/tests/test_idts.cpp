#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>

#include "doctest.h"
#include "sizelab/idts.hpp"
#include "sizelab/oracle.hpp"
#include "sizelab/rewrite.hpp"

using namespace sizelab;

namespace {

rewrite_problem div_problem() { return parse_problem_file("problems/div.strs"); }
rewrite_problem rec_problem() { return parse_problem_file("problems/rec.strs"); }

// rules for the simulation checks: translated problem rules plus the beta
// family for every arrow type appearing in the translated terms
std::vector<idts_rule> simulation_rules(const rewrite_problem& p,
                                        const std::vector<idts_ptr>& terms) {
  std::vector<idts_rule> rules;
  for (const auto& r : p.rules) rules.push_back(rule_to_idts(p, r));
  std::vector<type_ptr> arrows = arrow_types_in_use(p);
  auto add = [&](const type_ptr& t) {
    if (t->is_base()) return;
    for (const auto& u : arrows)
      if (type_equal(u, t)) return;
    arrows.push_back(t);
  };
  std::function<void(const type_ptr&)> walk = [&](const type_ptr& t) {
    if (t->is_base()) return;
    add(t);
    walk(t->dom);
    walk(t->cod);
  };
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
  for (const auto& t : terms) scan(t);
  for (auto& b : beta_rules_for(arrows)) rules.push_back(b);
  return rules;
}

// closed term of the given type, if the signature inhabits it at this depth
std::optional<term_ptr> rand_of_type(const rewrite_problem& p, const type_ptr& ty, int depth,
                                     std::mt19937& rng, std::vector<type_ptr>& env) {
  if (depth <= 0) return std::nullopt;
  std::vector<term_ptr> options;
  for (size_t i = 0; i < env.size(); ++i)
    if (type_equal(env[env.size() - 1 - i], ty)) options.push_back(mk_bvar(static_cast<int>(i)));
  if (!ty->is_base() && rng() % 2 == 0) {
    env.push_back(ty->dom);
    auto body = rand_of_type(p, ty->cod, depth - 1, rng, env);
    env.pop_back();
    if (body) return mk_lam("x", ty->dom, *body);
  }
  std::vector<const symbol_decl*> heads;
  for (const auto& [name, d] : p.sig.symbols) {
    type_ptr residual = d.type;
    while (true) {
      if (type_equal(residual, ty)) {
        heads.push_back(&d);
        break;
      }
      if (residual->is_base()) break;
      residual = residual->cod;
    }
  }
  std::shuffle(heads.begin(), heads.end(), rng);
  for (const auto* d : heads) {
    std::vector<term_ptr> args;
    type_ptr residual = d->type;
    bool ok = true;
    while (!type_equal(residual, ty)) {
      auto a = rand_of_type(p, residual->dom, depth - 1, rng, env);
      if (!a) {
        ok = false;
        break;
      }
      args.push_back(*a);
      residual = residual->cod;
    }
    if (ok) return mk_apps(mk_sym(d->name), args);
  }
  if (!options.empty()) return options[rng() % options.size()];
  if (!ty->is_base()) {
    env.push_back(ty->dom);
    auto body = rand_of_type(p, ty->cod, depth - 1, rng, env);
    env.pop_back();
    if (body) return mk_lam("x", ty->dom, *body);
  }
  return std::nullopt;
}

// nonempty derivation from `from` to `to` within `depth` steps
bool reaches(const idts_ptr& from, const idts_ptr& to, const std::vector<idts_rule>& rules,
             int depth) {
  std::vector<idts_ptr> frontier{from};
  for (int d = 0; d < depth; ++d) {
    std::vector<idts_ptr> next;
    for (const auto& t : frontier)
      for (const auto& red : idts_redexes(t, rules)) {
        if (idts_equal(red.result, to)) return true;
        next.push_back(red.result);
      }
    frontier = std::move(next);
    if (frontier.size() > 2000) frontier.resize(2000);
  }
  return false;
}

}  // namespace

TEST_CASE("to_idts: abstraction, application, partial application") {
  rewrite_problem p = div_problem();

  term_ptr id = mk_lam("x", mk_sort("N"), mk_bvar(0));
  CHECK(to_string(to_idts(p, id)) == "lam{N,N}(\\x$1. x$1)");

  term_ptr redex = mk_app(mk_lam("x", mk_sort("N"), mk_app(mk_sym("s"), mk_bvar(0))),
                          mk_sym("0"));
  idts_ptr tr = to_idts(p, redex);
  CHECK(to_string(tr) == "@{N,N}(lam{N,N}(\\x$1. s(x$1)),0)");

  // bare s eta-wraps to lam{N,N}(\x. s(x))
  idts_ptr bare = to_idts(p, mk_sym("s"));
  CHECK(is_lam_symbol(bare));
  CHECK(to_string(bare).find("s(") != std::string::npos);

  CHECK(is_structural(tr));
  CHECK(is_structural(bare));
}

TEST_CASE("beta family: first-order problems have none") {
  CHECK(beta_rule_family(div_problem()).empty());
  CHECK(beta_rule_family(parse_problem_file("problems/plusf.strs")).empty());
}

TEST_CASE("beta family: rec includes (N,O) and the arrow argument types") {
  auto rules = beta_rule_family(rec_problem());
  CHECK(!rules.empty());
  bool has_no = false;
  for (const auto& r : rules) {
    CHECK(is_app_symbol(r.lhs));
    if (type_equal(r.lhs->lam_u, mk_sort("N")) && type_equal(r.lhs->lam_v, mk_sort("O")))
      has_no = true;
  }
  CHECK(has_no);
  // the rule shape is @(lam(\x. Z(x)), X) -> Z(X)
  const idts_rule& r0 = rules.front();
  CHECK(r0.meta_arity.at("Z") == 1);
  CHECK(r0.meta_arity.at("X") == 0);
  CHECK(r0.rhs->kind == idts_kind::meta);
}

TEST_CASE("erasure removes lam wrappers and keeps everything else") {
  rewrite_problem p = div_problem();
  term_ptr id = mk_lam("x", mk_sort("N"), mk_bvar(0));
  idts_ptr erased = erase_to_beta_idts(to_idts(p, id));
  CHECK(erased->kind == idts_kind::lam);

  // beta lhs erases to @(\x. Z(x), X)
  auto beta = beta_rules_for({mk_arrow(mk_sort("N"), mk_sort("N"))});
  idts_rule er = erase_rule(beta[0]);
  CHECK(is_app_symbol(er.lhs));
  CHECK(er.lhs->args[0].body->kind == idts_kind::lam);

  // first-order terms erase to themselves
  term_ptr fo = mk_apps(mk_sym("minus"), {mk_sym("0"), mk_sym("0")});
  idts_ptr t = to_idts(p, fo);
  CHECK(idts_equal(erase_to_beta_idts(t), t));
}

TEST_CASE("substitution commutation: <t theta> = <t><theta>") {
  std::mt19937 rng(61);
  int checked = 0;
  for (const auto* file : {"problems/div.strs", "problems/rec.strs", "problems/plusf.strs"}) {
    rewrite_problem p = parse_problem_file(file);
    for (int iter = 0; iter < 150; ++iter) {
      const rule& r = p.rules[rng() % p.rules.size()];
      for (const term_ptr& side : {r.lhs, r.rhs}) {
        std::map<std::string, type_ptr> fv;
        free_vars(side, fv);
        std::map<std::string, term_ptr> theta;
        std::map<std::string, idts_ptr> itheta;
        bool total = true;
        for (const auto& [v, ty] : fv) {
          std::vector<type_ptr> env;
          auto pick = rand_of_type(p, ty, 4, rng, env);
          if (!pick) {
            total = false;  // the sort is uninhabited (plusf's T has no ground terms)
            break;
          }
          theta[v] = *pick;
          itheta[v] = to_idts(p, *pick);
        }
        if (!total) continue;
        term_ptr inst = substitute(side, theta);
        CHECK(idts_equal(to_idts(p, inst), idts_substitute(to_idts(p, side), itheta)));
        ++checked;
      }
    }
  }
  CHECK(checked >= 500);
}

TEST_CASE("one-step simulation and erasure simulation") {
  std::mt19937 rng(67);
  int simulated = 0;
  for (const auto* file : {"problems/div.strs", "problems/rec.strs"}) {
    rewrite_problem p = parse_problem_file(file);
    auto ground = enumerate_ground_terms(p, 4);
    std::shuffle(ground.begin(), ground.end(), rng);
    if (ground.size() > 400) ground.resize(400);
    std::vector<idts_ptr> translated;
    for (const auto& t : ground) translated.push_back(to_idts(p, t));
    auto rules = simulation_rules(p, translated);
    std::vector<idts_rule> erased_rules;
    for (const auto& r : rules) erased_rules.push_back(erase_rule(r));

    int file_simulated = 0;
    for (size_t i = 0; i < ground.size() && file_simulated < 300; ++i) {
      term_ptr cur = ground[i];
      for (int k = 0; k < 8; ++k) {
        auto s = rewrite_step(cur, p.rules, true);
        if (!s) break;
        idts_ptr from = to_idts(p, cur);
        idts_ptr to = to_idts(p, s->result);
        // one step, except when the contractum completes a partial
        // application: collapsing the eta-wrapper takes extra beta steps
        bool found = reaches(from, to, rules, 4);
        CHECK_MESSAGE(found, "no translated derivation from ", to_string(cur), " to ",
                      to_string(s->result));
        // erasure simulation on the same step
        idts_ptr efrom = erase_to_beta_idts(from);
        idts_ptr eto = erase_to_beta_idts(to);
        bool efound = reaches(efrom, eto, erased_rules, 4);
        CHECK_MESSAGE(efound, "no erased derivation from ", to_string(efrom));
        ++simulated;
        ++file_simulated;
        cur = s->result;
      }
    }
  }
  CHECK(simulated >= 500);
}

TEST_CASE("translated outputs are structural") {
  for (const auto* file : {"problems/div.strs", "problems/rec.strs"}) {
    rewrite_problem p = parse_problem_file(file);
    for (const auto& t : enumerate_ground_terms(p, 3)) CHECK(is_structural(to_idts(p, t)));
    for (const auto& r : p.rules) {
      idts_rule ir = rule_to_idts(p, r);
      CHECK(is_structural(ir.lhs));
      CHECK(is_structural(ir.rhs));
    }
  }
}
