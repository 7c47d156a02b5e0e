#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "affmod/gcd.hpp"
#include "affmod/modification.hpp"
#include "affmod/parse.hpp"

using namespace affmod;

namespace {

QPoly rand_poly(const Ctx& ctx, std::mt19937_64& rng, int max_deg = 2, int max_terms = 4) {
  std::uniform_int_distribution<int> dterm(1, max_terms);
  std::uniform_int_distribution<int> dexp(0, max_deg);
  std::uniform_int_distribution<long> dc(-5, 5);
  QPoly p(ctx);
  int terms = dterm(rng);
  for (int t = 0; t < terms; ++t) {
    Exps e(ctx->arity(), 0);
    for (size_t i = 0; i < ctx->arity(); ++i) e[i] = (uint32_t)dexp(rng);
    p.add_term(e, Rational(dc(rng)));
  }
  return p;
}

// f*y_i - b_i vanishes under y_i := b_i/f: substituting y_i -> b_i*w with
// f*w = 1 must make each equation a multiple of f*w - 1.
void check_presentation_vanishes(const ModPresentation& pres) {
  Ctx cw = std::make_shared<const VarContext>(pres.extended->extended({"_w"}));
  QPoly w = QPoly::variable(cw, "_w");
  QPoly f = embed(pres.exceptional_eqs[0], cw);
  QPoly rel = f * w - QPoly::constant(cw, Rational(1));
  for (size_t i = 0; i < pres.equations.size(); ++i) {
    QPolyMap sub = QPolyMap::identity(cw);
    size_t yi = cw->require(pres.new_vars[i]);
    QPoly b = embed(pres.exceptional_eqs[i + 1], cw);
    sub.images[yi] = b * w;
    QPoly val = substitute(embed(pres.equations[i], cw), sub);
    CHECK(divides(rel, val));
  }
}

} // namespace

TEST_CASE("modify: Russell cubic (certified coprime pair)") {
  auto res = gallery("russell");
  REQUIRE(res.presentation.has_value());
  const auto& pres = *res.presentation;
  CHECK(pres.new_vars == std::vector<std::string>{"y"});
  CHECK(print_poly(monic(pres.equations[0])) == "x^2*y + t^3 + z^2 + x");
  CHECK(equal_up_to_unit(pres.equations[0], qparse("x + x^2*y + z^2 + t^3", pres.extended)));
  check_presentation_vanishes(pres);
}

TEST_CASE("modify: principal ideal gives X' = X") {
  Ctx c = make_ctx({"x", "y"});
  AffineTriple t{c, std::nullopt, qparse("x", c), {}};
  ModPresentation pres = modify(t);
  CHECK(pres.new_vars.empty());
  CHECK(pres.equations.empty());
  CHECK(*pres.extended == *c);
}

TEST_CASE("modify: singular surface x z = y^2") {
  Ctx c = make_ctx({"x", "y"});
  AffineTriple t{c, std::nullopt, qparse("x", c), {qparse("y^2", c)}};
  ModPresentation pres = modify(t); // certified: gcd(x, y^2) = 1
  CHECK(pres.new_vars == std::vector<std::string>{"z"});
  CHECK(pres.equations[0] == qparse("x*z - y^2", pres.extended));
  check_presentation_vanishes(pres);
}

TEST_CASE("modify: point center certification (coordinate case)") {
  Ctx c = make_ctx({"x1", "x2", "y"});
  AffineTriple t{c, std::nullopt, qparse("y", c), {qparse("x1", c), qparse("x2", c)}};
  ModPresentation pres = modify(t);
  CHECK(pres.equations.size() == 2);
  CHECK(pres.equations[0] == qparse("y*y1 - x1", pres.extended));
  CHECK(pres.equations[1] == qparse("y*y2 - x2", pres.extended));
  check_presentation_vanishes(pres);
}

TEST_CASE("modify: uncertified triples require the caller's word") {
  Ctx c = make_ctx({"x", "y"});
  AffineTriple t{c, std::nullopt, qparse("x", c), {qparse("x*y", c)}}; // gcd = x
  CHECK_THROWS_AS(modify(t), Error);
  ModPresentation pres = modify(t, Certification::CallerAsserts);
  CHECK(pres.equations.size() == 1);
}

TEST_CASE("strict_transform examples") {
  // Shifted cusp through the point-center blowdown.
  Ctx c3 = make_ctx({"x", "y", "z"});
  QPoly g = qparse("(x+1)^2 - (y+1)^3", c3);
  QPolyMap blow(c3, c3, {qparse("x*z", c3), qparse("y*z", c3), qparse("z", c3)});
  auto [mu, g1] = strict_transform(g, blow, "z");
  CHECK(mu == 1);
  CHECK(g1 == exact_divide(qparse("(x*z+1)^2 - (y*z+1)^3", c3), qparse("z", c3)));

  // Ex 7.3 cubic variant.
  auto su = gallery("ex73_surface");
  CHECK(print_poly(su.polys[0]) ==
        "-1*x^2*t^3 + x^2*y + x*z^2 - 3*x*t^2 + 2*z - 3*t - 1");

  auto [mu2, g2] = strict_transform(qparse("y", c3), QPolyMap::identity(c3), "z");
  CHECK(mu2 == 0);
  CHECK(g2 == qparse("y", c3));
}

TEST_CASE("modify_at_point examples") {
  Ctx c2 = make_ctx({"x", "y"});
  QPoly p = qparse("(x+1)^2 - (y+1)^3", c2);
  QPoly out = modify_at_point(p);
  Ctx c3 = out.ctx();
  CHECK(out == exact_divide(qparse("(x*z+1)^2 - (y*z+1)^3 - z", c3), qparse("z", c3)));

  Ctx c1 = make_ctx({"x"});
  QPoly lin = modify_at_point(qparse("x", c1));
  CHECK(lin == qparse("x - 1", lin.ctx()));
  QPoly sq = modify_at_point(qparse("x^2", c1));
  CHECK(sq == qparse("x^2*y - 1", sq.ctx()));

  CHECK_THROWS_AS(modify_at_point(qparse("x + 1", c1)), Error);
}

TEST_CASE("decompose_ci examples") {
  Ctx c = make_ctx({"x", "y"});
  auto d1 = decompose_ci(qparse("x", c), qparse("x", c), qparse("y", c));
  CHECK(d1.check);
  CHECK(d1.stage1.equations[0] == qparse("x*z - y", d1.stage1.extended));
  CHECK(substitute(d1.stage1.equations[0], d1.stage2) ==
        qparse("x^2*z - y", d1.stage1.extended));

  auto d2 = decompose_ci(qparse("x", c), qparse("1", c), qparse("x + y", c));
  CHECK(d2.check);
  CHECK(d2.stage2 == QPolyMap::identity(d2.stage1.extended));

  auto d3 = decompose_ci(qparse("x", c), qparse("y - 1", c), qparse("x + y", c));
  CHECK(d3.check);
  CHECK(substitute(d3.stage1.equations[0], d3.stage2) ==
        qparse("x*(y-1)*z - (x + y)", d3.stage1.extended));

  CHECK_THROWS_AS(decompose_ci(qparse("x", c), qparse("y", c), qparse("x", c)), Error);
}

TEST_CASE("decompose_ci on random coprime data") {
  std::mt19937_64 rng(23);
  Ctx c = make_ctx({"x", "y"});
  int done = 0;
  while (done < 40) {
    QPoly f1 = rand_poly(c, rng), f2 = rand_poly(c, rng), g = rand_poly(c, rng);
    if (f1.is_zero() || f2.is_zero() || g.is_zero()) continue;
    if (!coprime(f1 * f2, g)) continue;
    auto d = decompose_ci(f1, f2, g);
    CHECK(d.check);
    ++done;
  }
}

TEST_CASE("present_birational examples") {
  Ctx c = make_ctx({"x", "y", "z"});
  auto t1 = present_birational(c, {{qparse("y", c), qparse("x", c)}});
  CHECK(t1.f == qparse("x", c));
  CHECK(t1.center_gens[0] == qparse("y", c));

  auto t2 = present_birational(c, {{qparse("y", c), qparse("x", c)},
                                   {qparse("z", c), qparse("x", c)}});
  CHECK(t2.f == qparse("x^2", c));
  CHECK(t2.center_gens[0] == qparse("x*y", c));
  CHECK(t2.center_gens[1] == qparse("x*z", c));

  auto t3 = present_birational(c, {{qparse("1", c), qparse("x", c)}});
  CHECK(t3.f == qparse("x", c));
  CHECK(t3.center_gens[0] == qparse("1", c));

  CHECK_THROWS_AS(present_birational(c, {{qparse("1", c), qparse("x", c)},
                                         {qparse("y", c), qparse("z", c)}}),
                  Error); // x*y not divisible by z
}

TEST_CASE("gallery closed forms") {
  GalleryParams kp;
  kp.k = 2;
  kp.l = 3;
  auto t = gallery("tdp", kp);
  CHECK(print_poly(monic(t.polys[0])) == "y^3*z^2 - x^2*z + 3*y^2*z - 2*x + 3*y + 1");

  GalleryParams gp;
  gp.k = 2; gp.l = 3; gp.s = 5; gp.m = 5;
  auto tg = gallery("tdp_general", gp);
  Ctx c3 = tg.polys[0].ctx();
  CHECK(tg.polys[0] ==
        exact_divide(qparse("(x*z^5+1)^2 - (y*z^5+1)^3 - z^5", c3), qparse("z^5", c3)));

  GalleryParams g11;
  g11.k = 2; g11.l = 3; g11.s = 1; g11.m = 1;
  CHECK(gallery("tdp_general", g11).polys[0] == rename_ctx(t.polys[0], c3));

  GalleryParams bad;
  bad.k = 2; bad.l = 3; bad.s = 2; bad.m = 3; // m > s
  CHECK_THROWS_AS(gallery("tdp_general", bad), Error);
  CHECK_THROWS_AS(gallery("nonsense"), Error);
}

TEST_CASE("gallery uv builders") {
  Ctx c2 = make_ctx({"x1", "x2"});
  GalleryParams params;
  params.ps = {qparse("x1 + x2^2", c2), qparse("x1*x2", c2)};
  auto sys = gallery("uv_system", params);
  REQUIRE(sys.polys.size() == 2);
  Ctx ce = sys.polys[0].ctx();
  CHECK(sys.polys[0] == qparse("u*v1 - x1 - x2^2", ce));
  CHECK(sys.polys[1] == qparse("u*v2 - x1*x2", ce));

  params.exponents = {2, 3, 5};
  auto pw = gallery("uv_powers", params);
  Ctx cp = pw.polys[0].ctx();
  CHECK(pw.polys[0] == qparse("u^2*v1^3 - x1 - x2^2", cp));
  CHECK(pw.polys[1] == qparse("u^2*v2^5 - x1*x2", cp));

  params.exponents = {2, 4, 3}; // not coprime
  CHECK_THROWS_AS(gallery("uv_powers", params), Error);
}

TEST_CASE("random certified modifications satisfy the vanishing invariant") {
  std::mt19937_64 rng(29);
  Ctx c = make_ctx({"x", "y"});
  int done = 0;
  while (done < 50) {
    QPoly f = rand_poly(c, rng), b = rand_poly(c, rng);
    if (f.is_zero() || b.is_zero()) continue;
    if (!coprime(f, b)) continue;
    AffineTriple t{c, std::nullopt, f, {b}};
    ModPresentation pres = modify(t);
    check_presentation_vanishes(pres);
    CHECK(pres.blowdown.images[0] == QPoly::variable(pres.extended, "x"));
    CHECK(pres.blowdown.images[1] == QPoly::variable(pres.extended, "y"));
    ++done;
  }
}
