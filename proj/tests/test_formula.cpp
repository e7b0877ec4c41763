#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gps/formula.hpp"

using namespace gps;

namespace {
Term v(const std::string& n) { return Term::variable(cur(n)); }
Term vp(const std::string& n) { return Term::variable(nxt(n)); }
Term c(long k) { return Term::constant(Int(k)); }
}  // namespace

TEST_CASE("term arithmetic and printing") {
  Term t = v("x").scaled(2) + c(1) - v("y");
  CHECK(t.coeff(cur("x")) == 2);
  CHECK(t.coeff(cur("y")) == -1);
  CHECK(t.constant_part() == 1);
  CHECK((t - t).is_zero());
  CHECK(t.str() == "2*x - y + 1");
  CHECK(v("x").substituted(cur("x"), c(5)).constant_part() == 5);
}

TEST_CASE("atom canonicalization folds ground facts") {
  CHECK(Formula::le(c(1), c(2)).is_true());
  CHECK(Formula::lt(c(2), c(2)).is_false());
  CHECK(Formula::eq(c(2), c(2)).is_true());
  // 1 | x  ->  true
  CHECK(Formula::divides(1, v("x")).is_true());
  CHECK(Formula::divides(2, c(4)).is_true());
  CHECK(Formula::divides(2, c(3)).is_false());
}

TEST_CASE("negation is pushed to atoms") {
  Formula f = Formula::le(v("x"), c(0)).and_with(Formula::divides(2, v("x")));
  Formula n = f.negated();
  CHECK(n.kind() == Formula::Kind::Or);
  // !(x <= 0) == x >= 1
  State m(Vocabulary({"x"}), {Int(1)});
  CHECK(evaluate_state(n, m));
  State z(Vocabulary({"x"}), {Int(0)});
  CHECK(!evaluate_state(n, z));
}

TEST_CASE("evaluate transition formulas") {
  Vocabulary voc({"x"});
  Formula step = parse_formula("x' = x + 1");
  CHECK(evaluate(step, State(voc, {Int(3)}), State(voc, {Int(4)})));
  CHECK(!evaluate(step, State(voc, {Int(3)}), State(voc, {Int(5)})));
}

TEST_CASE("simplify keeps equivalence on basic shapes") {
  Vocabulary voc({"x"});
  Formula f = parse_formula("x' = x & true");
  CHECK(simplify(f).equal(parse_formula("x' = x")));
  CHECK(simplify(parse_formula("x = 1 & x = 1"))
            .equal(parse_formula("x = 1")));
  // free_vars of exists k. x' = x + k
  Formula g = parse_formula("exists k. x' = x + k");
  auto fv = g.free_vars();
  CHECK(fv.count(cur("x")) == 1);
  CHECK(fv.count(nxt("x")) == 1);
  CHECK(fv.size() == 2);
}

TEST_CASE("compose: identity is a unit") {
  Vocabulary voc({"x"});
  Formula inc = parse_formula("x' = x + 1");
  Formula composed = compose(inc, identity_formula(voc), voc);
  // equivalence by enumeration
  for (long a = -8; a <= 8; ++a)
    for (long b = -8; b <= 8; ++b) {
      State pre(voc, {Int(a)}), post(voc, {Int(b)});
      CHECK(evaluate(composed, pre, post, 16) == evaluate(inc, pre, post));
    }
}

TEST_CASE("compose: increment twice is plus two") {
  Vocabulary voc({"x"});
  Formula inc = parse_formula("x' = x + 1");
  Formula two = compose(inc, inc, voc);
  for (long a = -8; a <= 8; ++a)
    for (long b = -8; b <= 8; ++b) {
      State pre(voc, {Int(a)}), post(voc, {Int(b)});
      CHECK(evaluate(two, pre, post, 20) == (b == a + 2));
    }
}

TEST_CASE("parse/print/parse round-trips") {
  for (const char* s :
       {"x' <= 2*x + 1", "2 | x", "x > 1 & 2 | x", "x = 2 | y' = 0",
        "exists k. k >= 0 & x' = x + k", "!(x = 1) & (y < 2 | y > 4)",
        "true", "false", "N > 0 & N' = N - 1 & r' = r + N"}) {
    Formula f1 = parse_formula(s);
    Formula f2 = parse_formula(f1.str());
    CAPTURE(s);
    CAPTURE(f1.str());
    CHECK(f1.equal(f2));
  }
}

TEST_CASE("parser reports errors with location") {
  CHECK_THROWS_AS(parse_formula("x ="), UsageError);
  CHECK_THROWS_AS(parse_formula("x << 1"), UsageError);
  CHECK_THROWS_AS(parse_formula("exists . x = 1"), UsageError);
}

TEST_CASE("state formula evaluation rejects primed variables") {
  State m(Vocabulary({"x"}), {Int(0)});
  CHECK_THROWS_AS(evaluate_state(parse_formula("x' = 1"), m), UsageError);
}

TEST_CASE("evaluate without binder radius needs a solver") {
  Vocabulary voc({"x"});
  Formula g = parse_formula("exists k. x' = x + k");
  CHECK_THROWS_AS(evaluate(g, State(voc, {Int(0)}), State(voc, {Int(1)})),
                  NeedsSolverError);
}
