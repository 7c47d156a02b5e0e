#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "affmod/hypersurface.hpp"
#include "affmod/lift.hpp"
#include "affmod/parse.hpp"

using namespace affmod;

namespace {

Ctx cxy() { return make_ctx({"x", "y"}); }
Ctx quni() { return make_ctx({"z"}); }

QPoly rand_poly(const Ctx& ctx, std::mt19937_64& rng, int max_deg = 2, int max_terms = 3,
                long coeff = 4) {
  std::uniform_int_distribution<int> dterm(1, max_terms);
  std::uniform_int_distribution<int> dexp(0, max_deg);
  std::uniform_int_distribution<long> dc(-coeff, coeff);
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

TEST_CASE("apply_derivation examples") {
  Ctx c = cxy();
  Derivation d1(c, {qparse("y", c), qparse("0", c)});
  CHECK(apply_derivation(d1, qparse("x^2", c)) == qparse("2*x*y", c));
  CHECK(apply_derivation(d1, qparse("7", c)).is_zero());

  // (x, y) -> (0, x p(x)) applied to q(y) gives q'(y) x p(x).
  QPoly p = qparse("x^2 + 1", c);
  Derivation d2(c, {QPoly::zero(c), qparse("x", c) * p});
  QPoly q = qparse("y^3 - 2*y", c);
  CHECK(apply_derivation(d2, q) == qparse("3*y^2 - 2", c) * qparse("x", c) * p);
}

TEST_CASE("check_lnd examples") {
  Ctx c = cxy();
  Derivation d(c, {qparse("y", c), qparse("0", c)});
  auto cert = check_lnd(d, 16);
  CHECK(cert.orders == std::vector<uint32_t>{2, 1});

  Derivation bad(c, {qparse("x", c), qparse("0", c)});
  CHECK_THROWS_AS(check_lnd(bad, 16), Error);

  // Elementary shear h d/dx with h free of x.
  Derivation shear(c, {qparse("y^2 + 1", c), qparse("0", c)});
  auto cert2 = check_lnd(shear, 16);
  CHECK(cert2.orders == std::vector<uint32_t>{2, 1});
}

TEST_CASE("exp_flow examples") {
  Ctx c = cxy();
  Derivation d(c, {qparse("0", c), qparse("x^2", c)});
  auto cert = check_lnd(d, 8);
  QPolyMap m = exp_flow(d, cert, Rational(1));
  CHECK(m.images[0] == qparse("x", c));
  CHECK(m.images[1] == qparse("y + x^2", c));

  // Ex 2.3 flow with symbolic time.
  QPoly p = qparse("x^3 - x", c);
  Derivation d2(c, {QPoly::zero(c), qparse("x", c) * p});
  QPolyMap sym = exp_flow_symbolic(d2, check_lnd(d2, 8), "t");
  Ctx ext = sym.target;
  CHECK(sym.images[1] == qparse("y", ext) + qparse("t*x", ext) * embed(p, ext));

  Ctx c1 = make_ctx({"x"});
  Derivation tr(c1, {qparse("1", c1)});
  CHECK(exp_flow(tr, check_lnd(tr, 4), Rational(1)).images[0] == qparse("x + 1", c1));
}

TEST_CASE("exp flow one-parameter group law") {
  std::mt19937_64 rng(31);
  Ctx c = cxy();
  for (int i = 0; i < 25; ++i) {
    // Triangular LND: (x, y) -> (h(y), 0) or (0, h(x)).
    bool first = i % 2 == 0;
    QPoly h = rand_poly(c, rng);
    QPoly hx = first ? embed(rename_ctx(h, c), c) : h; // arbitrary poly
    Derivation d = first ? Derivation(c, {qparse("0", c), rand_poly(c, rng)})
                         : Derivation(c, {rand_poly(c, rng), qparse("0", c)});
    // Force local nilpotency: the moving image must not involve its own var.
    if (first && d.images[1].degree_in(1) > 0) continue;
    if (!first && d.images[0].degree_in(0) > 0) continue;
    auto cert = check_lnd(d, 32);

    Ctx ext = make_ctx({"x", "y", "s", "t"});
    QPoly s = QPoly::variable(ext, "s"), t = QPoly::variable(ext, "t");
    QPolyMap fs = exp_flow_poly(d, cert, ext, s);
    QPolyMap ft = exp_flow_poly(d, cert, ext, t);
    QPolyMap fst = exp_flow_poly(d, cert, ext, s + t);
    // compose over ext: promote both to endomorphisms of ext
    auto promote = [&](const QPolyMap& m) {
      std::vector<QPoly> imgs = m.images;
      imgs.push_back(s);
      imgs.push_back(t);
      return QPolyMap(ext, ext, imgs);
    };
    CHECK(compose(promote(fs), promote(ft)) == promote(fst));
  }
}

TEST_CASE("compose and invert_word") {
  Ctx c = cxy();
  AutoWord w{ElemShear{"x", qparse("1", c), Rational(1)},
             ElemShear{"x", qparse("1", c), Rational(1)}};
  QPolyMap m = word_polymap(w, c);
  CHECK(m.images[0] == qparse("x + 2", c));

  AutoWord inv = invert_word({ElemShear{"y", qparse("x^2", c), Rational(3)}});
  CHECK(std::get<ElemShear>(inv[0]).t == Rational(-3));

  std::mt19937_64 rng(37);
  for (int i = 0; i < 20; ++i) {
    AutoWord word;
    for (int g = 0; g < 4; ++g) {
      bool xdir = rng() % 2 == 0;
      QPoly h = rand_poly(c, rng);
      // Shear coefficient free of its own direction.
      QPoly hh(c);
      for (const auto& [e, co] : h.terms()) {
        Exps e2 = e;
        e2[xdir ? 0 : 1] = 0;
        hh.add_term(e2, co);
      }
      if (hh.is_zero()) hh = qparse("1", c);
      word.push_back(ElemShear{xdir ? "x" : "y", hh, Rational((long)(rng() % 7) - 3)});
    }
    AutoWord winv = invert_word(word);
    for (int pt = 0; pt < 10; ++pt) {
      std::vector<Rational> P{Rational((long)(rng() % 11) - 5), Rational((long)(rng() % 11) - 5)};
      auto img = apply_word_point(winv, c, apply_word_point(word, c, P));
      CHECK(img == P);
    }
  }
}

TEST_CASE("invert_by_degree_bound examples") {
  Ctx c = cxy();
  QPolyMap m1(c, c, {qparse("x", c), qparse("y + x^2", c)});
  QPolyMap i1 = invert_by_degree_bound(m1, 2);
  CHECK(i1.images[0] == qparse("x", c));
  CHECK(i1.images[1] == qparse("y - x^2", c));

  QPolyMap m2(c, c, {qparse("x + y^2", c), qparse("y", c)});
  CHECK(invert_by_degree_bound(m2, 2).images[0] == qparse("x - y^2", c));

  QPolyMap swap(c, c, {qparse("y", c), qparse("x", c)});
  CHECK(invert_by_degree_bound(swap, 1) == swap);

  QPolyMap notinv(c, c, {qparse("x", c), qparse("x*y + 1", c)});
  CHECK_THROWS_AS(invert_by_degree_bound(notinv, 4), Error);
}

TEST_CASE("sl_decompose examples") {
  Ctx c = cxy();
  CHECK(sl_decompose({{Rational(1), Rational(0)}, {Rational(0), Rational(1)}}, c).empty());

  AutoWord w = sl_decompose({{Rational(1), Rational(1)}, {Rational(0), Rational(1)}}, c);
  CHECK(w.size() == 1);
  CHECK(std::get<ElemShear>(w[0]).dir == "x");

  AutoWord rot = sl_decompose({{Rational(0), Rational(1)}, {Rational(-1), Rational(0)}}, c);
  CHECK(!rot.empty()); // verified internally by matrix multiply

  CHECK_THROWS_AS(sl_decompose({{Rational(2), Rational(0)}, {Rational(0), Rational(1)}}, c),
                  Error);
}

TEST_CASE("lift_derivation examples") {
  Ctx c = cxy();
  // Ex 2.3: f = x, b1 = q(y), d = (0, x p(x)) lifts to (0, x p(x), q'(y) p(x)).
  QPoly p = qparse("x^2 - 3", c);
  QPoly q = qparse("y^2 + y", c);
  AffineTriple t{c, std::nullopt, qparse("x", c), {q}};
  ModPresentation pres = modify(t);
  Derivation d(c, {QPoly::zero(c), qparse("x", c) * p});
  Derivation lifted = lift_derivation(t, pres, d);
  Ctx ext = pres.extended;
  CHECK(lifted.images[0].is_zero());
  CHECK(lifted.images[1] == embed(qparse("x", c) * p, ext));
  CHECK(lifted.images[2] == qparse("2*y + 1", ext) * embed(p, ext));
  // The lifted derivation preserves the presentation ideal exactly here.
  CHECK(apply_derivation(lifted, pres.equations[0]).is_zero());

  // Zero derivation lifts to zero.
  Derivation zero(c, {QPoly::zero(c), QPoly::zero(c)});
  Derivation lz = lift_derivation(t, pres, zero);
  for (const auto& img : lz.images) CHECK(img.is_zero());

  // f = x, b1 = y^2, d = (0, x): d(b1)/f = 2y.
  AffineTriple t2{c, std::nullopt, qparse("x", c), {qparse("y^2", c)}};
  ModPresentation pres2 = modify(t2);
  Derivation d2(c, {QPoly::zero(c), qparse("x", c)});
  CHECK(lift_derivation(t2, pres2, d2).images[2] == qparse("2*y", pres2.extended));

  // d(f) != 0 is rejected.
  Derivation bad(c, {qparse("1", c), QPoly::zero(c)});
  CHECK_THROWS_AS(lift_derivation(t, pres, bad), Error);
}

TEST_CASE("lift_derivation point-center reduction") {
  Ctx c = make_ctx({"x1", "x2", "y"});
  AffineTriple t{c, std::nullopt, qparse("y", c), {qparse("x1", c), qparse("x2", c)}};
  ModPresentation pres = modify(t);
  // d = x1 d/dx2 fixes f = y and maps I into I after reduction x1 -> y*y1.
  Derivation d(c, {QPoly::zero(c), qparse("x1", c), QPoly::zero(c)});
  Derivation lifted = lift_derivation(t, pres, d);
  Ctx ext = pres.extended;
  CHECK(lifted.images[ext->require("y2")] == qparse("y1", ext));
  // d = d/dx1 violates d(I) in I.
  Derivation bad(c, {qparse("1", c), QPoly::zero(c), QPoly::zero(c)});
  CHECK_THROWS_AS(lift_derivation(t, pres, bad), Error);
}

TEST_CASE("lift_auto_G examples") {
  Ctx c = make_ctx({"x", "y", "z"});
  QPoly x = qparse("x", c), y = qparse("y", c), z = qparse("z", c);

  // g1 = 0, g2 = 1: mu' = (x, y, z + 1).
  QPolyMap mu1(c, c, {x, y, z + x * qparse("1", c)});
  QPolyMap l1 = lift_auto_G(mu1);
  CHECK(l1.images[2] == qparse("z + 1", c));

  // g1 = 1, g2 = 0: mu' = (x, y + x, z).
  QPolyMap mu2(c, c, {x, y + x, z});
  QPolyMap l2 = lift_auto_G(mu2);
  CHECK(l2.images[1] == qparse("y + x", c));
  CHECK(l2.images[2] == z);

  CHECK(lift_auto_G(QPolyMap::identity(c)) == QPolyMap::identity(c));

  QPolyMap badshape(c, c, {x, y + qparse("1", c), z});
  CHECK_THROWS_AS(lift_auto_G(badshape), Error);
}

TEST_CASE("lift_auto_G on random G-shaped maps") {
  std::mt19937_64 rng(41);
  Ctx c = make_ctx({"x", "y", "z"});
  QPoly x = qparse("x", c), y = qparse("y", c), z = qparse("z", c);
  QPolyMap sigma(c, c, {x, y, x * z});
  for (int i = 0; i < 50; ++i) {
    QPoly g1 = rand_poly(c, rng), g2 = rand_poly(c, rng);
    Rational c1((long)(rng() % 3) + 1), c2((long)(rng() % 3) + 1);
    QPolyMap mu(c, c, {x, y.scaled(c1) + x * g1, z.scaled(c2) + x * g2});
    QPolyMap lifted = lift_auto_G(mu);
    CHECK(compose(mu, sigma) == compose(sigma, lifted));
  }
}

TEST_CASE("xgen_polymap and apply_xgen") {
  Ctx c1 = make_ctx({"x"});
  HypersurfaceX X = HypersurfaceX::make(qparse("x", c1));
  // LIFT1 shear d/dx with q = z, t = 1 on (0, 0, 5) -> (5, 1, 5).
  XGenerator g = XGenerator::lift(XKind::LIFT1, "x", qparse("1", c1),
                                  QPoly::variable(quni(), (size_t)0), Rational(1));
  XPoint P = make_xpoint(X, {Rational(0)}, Rational(0), Rational(5));
  XPoint Q = apply_xgen(X, g, P);
  CHECK(Q.x[0] == 5);
  CHECK(Q.u == 1);
  CHECK(Q.v == 5);

  // Degenerate orbit: v = 0 and h dp/dx_d = 0 fixes the point.
  Ctx c2 = cxy();
  HypersurfaceX X2 = HypersurfaceX::make(qparse("x", c2));
  XGenerator gy = XGenerator::lift(XKind::LIFT1, "y", qparse("1", c2),
                                   QPoly::variable(quni(), (size_t)0), Rational(1));
  XPoint P2 = make_xpoint(X2, {Rational(0), Rational(3)}, Rational(7), Rational(0));
  XPoint Q2 = apply_xgen(X2, gy, P2);
  CHECK(Q2 == P2);

  // EPS swaps u and v.
  XPoint P3 = make_xpoint(X2, {Rational(2), Rational(0)}, Rational(1), Rational(2));
  XPoint Q3 = apply_xgen(X2, XGenerator::eps(), P3);
  CHECK(Q3.u == 2);
  CHECK(Q3.v == 1);

  CHECK_THROWS_AS(XGenerator::lift(XKind::LIFT1, "x", qparse("1", c2),
                                   qparse("z + 1", quni()), Rational(1)),
                  Error);
}

TEST_CASE("verify_preserves_X") {
  Ctx c2 = cxy();
  std::mt19937_64 rng(43);
  HypersurfaceX X = HypersurfaceX::make(qparse("x + x^2*y", c2));
  XGenerator g = XGenerator::lift(XKind::LIFT1, "x", qparse("y", c2),
                                  qparse("z^2 + z", quni()), Rational(2));
  CHECK(verify_preserves_X(X, {g}));
  CHECK(verify_preserves_X(X, {XGenerator::eps()}));

  XGenerator bad = XGenerator::raw(XKind::LIFT1, "x", qparse("1", c2),
                                   qparse("z + 1", quni()), Rational(1));
  CHECK(!verify_preserves_X(X, {bad}));

  // Words mixing sides and eps still preserve X.
  XGenerator g2 = XGenerator::lift(XKind::LIFT2, "y", qparse("x", c2),
                                   qparse("z^3", quni()), Rational(-1));
  CHECK(verify_preserves_X(X, {g, XGenerator::eps(), g2}));
}

TEST_CASE("word serialization round trip") {
  Ctx c2 = cxy();
  AutoWord w;
  w.push_back(ElemShear{"x", qparse("y^2 - 1/2", c2), Rational(-7) / Rational(3)});
  w.push_back(XGenerator::lift(XKind::LIFT1, "y", qparse("x + 2", c2),
                               qparse("z^2 - 3*z", quni()), Rational(5)));
  w.push_back(XGenerator::eps());
  w.push_back(XGenerator::lift(XKind::LIFT2, "x", qparse("1", c2), qparse("z", quni()),
                               Rational(1) / Rational(4)));
  std::string text = word_to_text(w);
  AutoWord back = word_from_text(text, c2);
  CHECK(word_to_text(back) == text);
  REQUIRE(back.size() == w.size());
  CHECK(std::get<ElemShear>(back[0]).h == std::get<ElemShear>(w[0]).h);
  CHECK(std::get<XGenerator>(back[1]).q == std::get<XGenerator>(w[1]).q);
  CHECK(std::get<XGenerator>(back[2]).kind == XKind::EPS);
}
