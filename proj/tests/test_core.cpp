#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>

#include "doctest.h"
#include "sizelab/oracle.hpp"
#include "sizelab/problem.hpp"
#include "sizelab/rewrite.hpp"
#include "sizelab/signature.hpp"
#include "sizelab/term.hpp"

using namespace sizelab;

namespace {

signature nat_ord_signature() {
  signature sig;
  sig.add_sort("N");
  sig.add_sort("O");
  sig.add_constructor("0", mk_sort("N"));
  sig.add_constructor("s", mk_arrow(mk_sort("N"), mk_sort("N")));
  sig.add_constructor("zo", mk_sort("O"));
  sig.add_constructor("lim", mk_arrow(mk_arrow(mk_sort("N"), mk_sort("O")), mk_sort("O")));
  sig.add_defined("minus",
                  mk_arrow_chain({mk_sort("N"), mk_sort("N")}, mk_sort("N")));
  auto issues = sig.validate();
  REQUIRE(std::none_of(issues.begin(), issues.end(),
                       [](const validation_issue& i) { return i.is_error; }));
  return sig;
}

rewrite_problem div_problem() {
  return parse_problem_file("problems/div.strs");
}

}  // namespace

TEST_CASE("typecheck_simple") {
  signature sig = nat_ord_signature();
  std::map<std::string, type_ptr> env{{"x", mk_sort("N")}};
  term_ptr sx = mk_app(mk_sym("s"), mk_fvar("x", mk_sort("N")));
  CHECK(to_string(typecheck_simple(env, sx, sig)) == "N");

  term_ptr lam = mk_lam("x", mk_sort("N"), mk_app(mk_sym("s"), mk_bvar(0)));
  CHECK(to_string(typecheck_simple({}, lam, sig)) == "N -> N");

  // lim : (N -> O) -> O applied to f : N -> O
  std::map<std::string, type_ptr> env2{
      {"f", mk_arrow(mk_sort("N"), mk_sort("O"))}, {"n", mk_sort("N")}};
  term_ptr limf = mk_app(mk_sym("lim"), mk_fvar("f", env2["f"]));
  CHECK(to_string(typecheck_simple(env2, limf, sig)) == "O");

  CHECK_THROWS_WITH_AS(typecheck_simple({}, mk_fvar("q", nullptr), sig),
                       doctest::Contains("unbound"), type_error);
  CHECK_THROWS_AS(typecheck_simple({}, mk_app(mk_sym("0"), mk_sym("0")), sig), type_error);
}

TEST_CASE("substitute") {
  signature sig = nat_ord_signature();
  term_ptr x = mk_fvar("x", mk_sort("N")), y = mk_fvar("y", mk_sort("N"));
  term_ptr mxy = mk_apps(mk_sym("minus"), {x, y});
  term_ptr s0 = mk_app(mk_sym("s"), mk_sym("0"));
  term_ptr r = substitute(mxy, {{"x", s0}, {"y", mk_sym("0")}}, &sig);
  CHECK(to_string(r) == "minus (s 0) 0");

  // bound occurrences are untouched
  term_ptr id = mk_lam("x", mk_sort("N"), mk_bvar(0));
  CHECK(term_equal(substitute(id, {{"x", mk_sym("0")}}), id));

  // type-clashing images are rejected
  term_ptr lamN = mk_lam("y", mk_sort("N"), mk_bvar(0));
  CHECK_THROWS_AS(substitute(mxy, {{"x", lamN}}, &sig), type_error);
}

TEST_CASE("substitute is a monoid action on variable-disjoint substitutions") {
  signature sig = nat_ord_signature();
  term_ptr x = mk_fvar("x", mk_sort("N")), y = mk_fvar("y", mk_sort("N"));
  term_ptr t = mk_apps(mk_sym("minus"), {mk_app(mk_sym("s"), x), y});
  std::map<std::string, term_ptr> theta{{"x", mk_apps(mk_sym("minus"),
                                                      {mk_fvar("u", mk_sort("N")),
                                                       mk_fvar("u", mk_sort("N"))})}};
  std::map<std::string, term_ptr> rho{{"u", mk_sym("0")}, {"y", mk_sym("0")}};
  // theta then rho equals the composed substitution applied once
  term_ptr lhs = substitute(substitute(t, theta), rho);
  std::map<std::string, term_ptr> composed;
  for (const auto& [v, img] : theta) composed[v] = substitute(img, rho);
  for (const auto& [v, img] : rho)
    if (!composed.count(v)) composed[v] = img;
  CHECK(term_equal(lhs, substitute(t, composed)));
}

TEST_CASE("rewrite_step: leftmost-outermost and beta") {
  rewrite_problem p = div_problem();
  term_ptr s0 = mk_app(mk_sym("s"), mk_sym("0"));
  term_ptr t = mk_apps(mk_sym("minus"), {s0, s0});
  auto step = rewrite_step(t, p.rules, true);
  REQUIRE(step.has_value());
  CHECK(to_string(step->result) == "minus 0 0");
  CHECK(step->position.empty());
  CHECK(step->rule_id == "r3");

  term_ptr beta = mk_app(mk_lam("x", mk_sort("N"), mk_app(mk_sym("s"), mk_bvar(0))),
                         mk_sym("0"));
  auto bstep = rewrite_step(beta, p.rules, true);
  REQUIRE(bstep.has_value());
  CHECK(to_string(bstep->result) == "s 0");
  CHECK(bstep->rule_id == "beta");

  CHECK_FALSE(rewrite_step(mk_sym("0"), p.rules, true).has_value());
}

TEST_CASE("validate_signature: Ind sets, positivity, rejection") {
  signature sig = nat_ord_signature();
  CHECK(sig.ind("s") == std::set<int>{1});
  CHECK(sig.ind("0").empty());
  CHECK(sig.ind("lim") == std::set<int>{1});
  CHECK(sig.is_strictly_positive("lim"));
  CHECK_FALSE(sig.sort_equiv("N", "O"));
  CHECK(sig.sort_le("N", "O"));  // N occurs in lim's argument type

  signature bad;
  bad.add_sort("B");
  bad.add_constructor("c", mk_arrow(mk_arrow(mk_sort("B"), mk_sort("B")), mk_sort("B")));
  auto issues = bad.validate();
  REQUIRE(!issues.empty());
  bool neg = false;
  for (const auto& i : issues)
    if (i.code == "NegativeOccurrence" && i.position == "1.1") neg = true;
  CHECK(neg);
  CHECK_FALSE(bad.validated());
}

TEST_CASE("validate_signature is order-independent") {
  signature a, b;
  for (const auto& s : {"L", "E"}) a.add_sort(s);
  for (const auto& s : {"E", "L"}) b.add_sort(s);
  auto lty = mk_arrow_chain({mk_sort("E"), mk_sort("L")}, mk_sort("L"));
  a.add_constructor("nil", mk_sort("L"));
  a.add_constructor("cons", lty);
  a.add_constructor("e", mk_sort("E"));
  b.add_constructor("e", mk_sort("E"));
  b.add_constructor("cons", lty);
  b.add_constructor("nil", mk_sort("L"));
  a.validate();
  b.validate();
  CHECK(a.ind("cons") == b.ind("cons"));
  CHECK(a.sort_le("E", "L") == b.sort_le("E", "L"));
  CHECK(a.sort_equiv("E", "L") == b.sort_equiv("E", "L"));
}

TEST_CASE("positive and negative positions partition the leaves") {
  std::mt19937 rng(3);
  std::function<type_ptr(int)> rand_type = [&](int d) -> type_ptr {
    if (d <= 0 || rng() % 2) return mk_sort(rng() % 2 ? "N" : "O");
    return mk_arrow(rand_type(d - 1), rand_type(d - 1));
  };
  for (int i = 0; i < 200; ++i) {
    type_ptr t = rand_type(4);
    auto occs = sort_positions(t);
    std::set<std::string> seen;
    for (const auto& o : occs) {
      // each leaf position appears exactly once, with a single polarity
      CHECK(seen.insert(path_to_string(o.path)).second);
    }
    std::vector<std::string> sorts;
    collect_sorts(t, sorts);
    CHECK(occs.size() == sorts.size());
  }
}

TEST_CASE("is_pattern") {
  rewrite_problem p = div_problem();
  term_ptr x = mk_fvar("x", mk_sort("N")), y = mk_fvar("y", mk_sort("N"));
  CHECK(is_pattern(mk_app(mk_sym("s"), mk_app(mk_sym("s"), x)), p.sig));
  CHECK_FALSE(is_pattern(mk_apps(mk_sym("minus"), {x, y}), p.sig));
  CHECK(is_pattern(x, p.sig));
}

TEST_CASE("subject reduction on enumerated ground terms") {
  rewrite_problem p = div_problem();
  auto terms = enumerate_ground_terms(p, 4);
  REQUIRE(terms.size() > 1000);
  int steps_checked = 0;
  for (const auto& t : terms) {
    type_ptr ty = typecheck_simple({}, t, p.sig);
    term_ptr cur = t;
    for (int i = 0; i < 50; ++i) {
      auto s = rewrite_step(cur, p.rules, true);
      if (!s) break;
      cur = s->result;
      CHECK(type_equal(typecheck_simple({}, cur, p.sig), ty));
      ++steps_checked;
    }
  }
  CHECK(steps_checked > 200);
}

TEST_CASE("nonlinear pattern matching requires equal subterms") {
  rewrite_problem p = div_problem();
  term_ptr x = mk_fvar("x", mk_sort("N"));
  term_ptr pat = mk_apps(mk_sym("minus"), {x, x});
  std::map<std::string, term_ptr> b1;
  CHECK(match(pat, mk_apps(mk_sym("minus"), {mk_sym("0"), mk_sym("0")}), b1));
  std::map<std::string, term_ptr> b2;
  CHECK_FALSE(match(pat,
                    mk_apps(mk_sym("minus"), {mk_sym("0"), mk_app(mk_sym("s"), mk_sym("0"))}),
                    b2));
}

TEST_CASE("non-strictly-positive constructors validate with a warning") {
  // B occurs positively inside a nested arrow, which is valid but not
  // strictly positive
  signature sig;
  sig.add_sort("B");
  sig.add_sort("N");
  sig.add_constructor("zn", mk_sort("N"));
  sig.add_constructor("c",
                      mk_arrow(mk_arrow(mk_arrow(mk_sort("B"), mk_sort("N")), mk_sort("B")),
                               mk_sort("B")));
  auto issues = sig.validate();
  CHECK(sig.validated());
  bool warned = false;
  for (const auto& i : issues)
    if (i.code == "NonStrictlyPositive" && !i.is_error && i.symbol == "c") warned = true;
  CHECK(warned);
  CHECK_FALSE(sig.is_strictly_positive("c"));
  CHECK(sig.ind("c") == std::set<int>{1});
}
