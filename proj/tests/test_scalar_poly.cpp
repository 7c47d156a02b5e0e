#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "affmod/gcd.hpp"
#include "affmod/parse.hpp"
#include "affmod/polymap.hpp"
#include "affmod/reduce.hpp"

using namespace affmod;

namespace {

Ctx cxy() { return make_ctx({"x", "y"}); }

QPoly rand_poly(const Ctx& ctx, std::mt19937_64& rng, int max_deg = 3, int max_terms = 5,
                long coeff_bound = 9) {
  std::uniform_int_distribution<int> dterm(1, max_terms);
  std::uniform_int_distribution<int> dexp(0, max_deg);
  std::uniform_int_distribution<long> dc(-coeff_bound, coeff_bound);
  QPoly p(ctx);
  int terms = dterm(rng);
  for (int t = 0; t < terms; ++t) {
    Exps e(ctx->arity(), 0);
    for (size_t i = 0; i < ctx->arity(); ++i) e[i] = (uint32_t)dexp(rng);
    p.add_term(e, Rational(dc(rng)));
  }
  return p;
}

} // namespace

TEST_CASE("scalar invariants") {
  Rational r = Rational(6) / Rational(-4); // normalizes to -3/2
  CHECK(numerator(r) == -3);
  CHECK(denominator(r) == 2);

  auto a = PrimeField::make(7, 5);
  auto b = PrimeField::make(-3, 5);
  CHECK(PrimeField::eq(PrimeField::add(a, b), PrimeField::make(4, 5)));
  CHECK(PrimeField::eq(PrimeField::mul(a, PrimeField::inv(a)), PrimeField::make(1, 5)));
  auto c7 = PrimeField::make(1, 7);
  CHECK_THROWS_AS((void)PrimeField::add(a, c7), Error); // no cross-field coercion

  ComplexField::Elem u{1.0, 0.0}, v{1.0 + 1e-12, 0.0};
  CHECK(ComplexField::eq(u, v));
}

TEST_CASE("arith examples") {
  Ctx c = cxy();
  QPoly x = QPoly::variable(c, "x");
  CHECK((x + (-x)).is_zero());
  QPoly one = QPoly::constant(c, Rational(1));
  CHECK((x + one) * (x - one) == x * x - one);

  Ctx cxz = make_ctx({"x", "z"});
  QPoly p = qparse("(x*z+1)^2", cxz);
  CHECK(print_poly(p) == "x^2*z^2 + 2*x*z + 1");
}

TEST_CASE("substitute examples") {
  Ctx c = make_ctx({"x", "y", "t"});
  QPoly f = qparse("x^2", c);
  QPolyMap m = QPolyMap::identity(c);
  m.images[0] = qparse("x + t*y", c);
  CHECK(substitute(f, m) == qparse("x^2 + 2*t*x*y + t^2*y^2", c));

  QPolyMap id = QPolyMap::identity(c);
  QPoly g = qparse("y - x^2 - 1", c);
  CHECK(substitute(g, id) == g);
}

TEST_CASE("diff examples") {
  Ctx c = cxy();
  CHECK(qparse("x^2*y", c).diff("x") == qparse("2*x*y", c));
  CHECK(qparse("5", c).diff("x").is_zero());
  Ctx cxz = make_ctx({"x", "z"});
  CHECK(qparse("(x*z+1)^2", cxz).diff("x") == qparse("2*z*(x*z+1)", cxz));
  CHECK_THROWS_AS(qparse("x", c).diff("w"), Error);
}

TEST_CASE("exact_divide examples") {
  Ctx c = cxy();
  CHECK(exact_divide(qparse("x^2-y^2", c), qparse("x-y", c)) == qparse("x+y", c));
  Ctx cv = make_ctx({"v"});
  CHECK(exact_divide(qparse("v^3-v", cv), qparse("v", cv)) == qparse("v^2-1", cv));
  CHECK_THROWS_AS(exact_divide(qparse("x^2+1", c), qparse("x", c)), Error);
  try {
    exact_divide(qparse("x^2+1", c), qparse("x", c));
  } catch (const Error& e) {
    CHECK(e.kind == ErrKind::NotDivisible);
  }
}

TEST_CASE("divide_out_power examples") {
  Ctx c = cxy();
  auto [mu, g1] = divide_out_power(qparse("x^2*y + x^3", c), "x");
  CHECK(mu == 2);
  CHECK(g1 == qparse("y + x", c));
  auto [mu2, g2] = divide_out_power(qparse("y", c), "x");
  CHECK(mu2 == 0);
  CHECK(g2 == qparse("y", c));
  CHECK_THROWS_AS(divide_out_power(QPoly::zero(c), "x"), Error);
}

TEST_CASE("gcd examples") {
  Ctx c = cxy();
  CHECK(gcd(qparse("x^2-y^2", c), qparse("x^2-2*x*y+y^2", c)) == qparse("x-y", c));
  CHECK(gcd(qparse("x", c), qparse("y", c)) == qparse("1", c));
  QPoly f = qparse("2*x^2-2*y^2", c);
  CHECK(gcd(f, QPoly::zero(c)) == monic(f));
}

TEST_CASE("reduce_mod_uv examples") {
  Ctx c = make_ctx({"x", "u", "v"});
  QPoly p = qparse("x", c);
  CHECK(reduce_mod_uv(qparse("u^2*v - x*u", c), p, "u", "v").is_zero());
  CHECK(reduce_mod_uv(qparse("u*v - x", c), p, "u", "v").is_zero());
  QPoly s = qparse("u + v", c);
  CHECK(reduce_mod_uv(s, p, "u", "v") == s);
}

TEST_CASE("parse/print examples and errors") {
  Ctx c = cxy();
  QPoly p = qparse("x^2 + 3/2*y - 1", c);
  CHECK(p.term_count() == 3);
  CHECK(print_poly(p) == "x^2 + 3/2*y - 1");
  CHECK(qparse(print_poly(p), c) == p);

  try {
    qparse("x +", c);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind == ErrKind::SyntaxError);
    CHECK(e.pos == 3);
  }

  Ctx cxz = make_ctx({"x", "z"});
  CHECK(print_poly(qparse("(x*z+1)^2", cxz)) == "x^2*z^2 + 2*x*z + 1");

  // Leading negative coefficients re-parse under the grammar.
  QPoly n = qparse("x", c) - qparse("x^2*y", c) - qparse("2", c);
  CHECK(print_poly(n) == "-1*x^2*y + x - 2");
  CHECK(qparse(print_poly(n), c) == n);
}

TEST_CASE("ring axioms on random terms") {
  std::mt19937_64 rng(42);
  Ctx c = make_ctx({"x", "y", "z"});
  for (int i = 0; i < 1000; ++i) {
    QPoly a = rand_poly(c, rng), b = rand_poly(c, rng), d = rand_poly(c, rng);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + d == a + (b + d));
    CHECK((a * b) * d == a * (b * d));
    CHECK(a * (b + d) == a * b + a * d);
  }
}

TEST_CASE("exact_divide of products") {
  std::mt19937_64 rng(7);
  Ctx c = cxy();
  for (int i = 0; i < 300; ++i) {
    QPoly a = rand_poly(c, rng), b = rand_poly(c, rng);
    if (b.is_zero()) continue;
    CHECK(exact_divide(a * b, b) == a);
  }
}

TEST_CASE("pullback contravariance") {
  std::mt19937_64 rng(11);
  Ctx c = cxy();
  for (int i = 0; i < 100; ++i) {
    QPoly f = rand_poly(c, rng);
    QPolyMap m1(c, c, {rand_poly(c, rng, 2, 3), rand_poly(c, rng, 2, 3)});
    QPolyMap m2(c, c, {rand_poly(c, rng, 2, 3), rand_poly(c, rng, 2, 3)});
    CHECK(substitute(substitute(f, m2), m1) == substitute(f, compose(m2, m1)));
  }
}

TEST_CASE("Leibniz rule on random inputs") {
  std::mt19937_64 rng(13);
  Ctx c = cxy();
  for (int i = 0; i < 200; ++i) {
    QPoly a = rand_poly(c, rng), b = rand_poly(c, rng);
    CHECK((a * b).diff("x") == a * b.diff("x") + b * a.diff("x"));
  }
}

TEST_CASE("reduce_mod_uv is idempotent and kills multiples of uv - p") {
  std::mt19937_64 rng(17);
  Ctx c = make_ctx({"x", "y", "u", "v"});
  Ctx cx = cxy();
  for (int i = 0; i < 100; ++i) {
    QPoly p = embed(rand_poly(cx, rng), c);
    QPoly rel = QPoly::variable(c, "u") * QPoly::variable(c, "v") - p;
    QPoly r = rand_poly(c, rng, 2, 4);
    CHECK(reduce_mod_uv(rel * r, p, "u", "v").is_zero());
    QPoly any = rand_poly(c, rng, 3, 5);
    QPoly red = reduce_mod_uv(any, p, "u", "v");
    CHECK(reduce_mod_uv(red, p, "u", "v") == red);
  }
}

TEST_CASE("parse . print round trip on random canonical polynomials") {
  std::mt19937_64 rng(19);
  Ctx c = make_ctx({"x", "y", "z"});
  for (int i = 0; i < 1000; ++i) {
    QPoly p = rand_poly(c, rng, 4, 6, 30);
    CHECK(qparse(print_poly(p), c) == p);
  }
}
