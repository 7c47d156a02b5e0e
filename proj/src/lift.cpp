#include "affmod/lift.hpp"

namespace affmod {

Derivation lift_derivation(const AffineTriple& t, const ModPresentation& pres,
                           const Derivation& d) {
  require_same_ctx(d.ctx, t.ambient);
  if (!apply_derivation(d, t.f).is_zero())
    fail(ErrKind::InvalidInput, "lift requires d(f) = 0");

  const Ctx& ext = pres.extended;
  QPoly f_ext = embed(t.f, ext);

  // Reduction by the presentation for the coordinate-point case: each b_i
  // is a variable x_j with x_j = f*y_j on the modification.
  QPolyMap reduce_map = QPolyMap::identity(ext);
  bool have_reduction = true;
  for (size_t i = 0; i < t.center_gens.size(); ++i) {
    const QPoly& b = t.center_gens[i];
    if (b.term_count() == 1 && total_degree(b.terms().begin()->first) == 1 &&
        RationalField::eq(b.terms().begin()->second, Rational(1))) {
      size_t bi = 0;
      for (size_t j = 0; j < b.terms().begin()->first.size(); ++j)
        if (b.terms().begin()->first[j] == 1) bi = j;
      reduce_map.images[bi] = f_ext * QPoly::variable(ext, pres.new_vars[i]);
    } else {
      have_reduction = false;
    }
  }

  std::vector<QPoly> images;
  for (size_t j = 0; j < t.ambient->arity(); ++j) images.push_back(embed(d.images[j], ext));
  for (size_t i = 0; i < t.center_gens.size(); ++i) {
    QPoly db = embed(apply_derivation(d, t.center_gens[i]), ext);
    QPoly quotient(ext);
    if (divides(f_ext, db)) {
      quotient = exact_divide(db, f_ext);
    } else if (have_reduction) {
      QPoly reduced = substitute(db, reduce_map);
      if (!divides(f_ext, reduced))
        fail(ErrKind::NotDivisible, "d(I) is not contained in I: d(b_" +
                                        std::to_string(i + 1) + ") not divisible by f");
      quotient = exact_divide(reduced, f_ext);
    } else {
      fail(ErrKind::NotDivisible, "d(I) is not contained in I: d(b_" +
                                      std::to_string(i + 1) + ") not divisible by f");
    }
    images.push_back(std::move(quotient));
  }
  return Derivation(ext, std::move(images));
}

QPolyMap lift_auto_G(const QPolyMap& mu) {
  require_same_ctx(mu.source, mu.target);
  const Ctx& ctx = mu.source;
  if (ctx->arity() != 3) fail(ErrKind::InvalidInput, "lift_auto_G expects three variables");
  QPoly x = QPoly::variable(ctx, (size_t)0);
  QPoly y = QPoly::variable(ctx, (size_t)1);
  QPoly z = QPoly::variable(ctx, (size_t)2);

  if (mu.images[0] != x)
    fail(ErrKind::InvalidInput, "map does not fix the first coordinate");

  // images[1] = c1*y + x*g1, images[2] = c2*z + x*g2 with c_i nonzero
  // constants: both are recovered by specializing x = 0.
  auto split = [&](const QPoly& img, const QPoly& var) -> std::pair<Rational, QPoly> {
    QPolyMap at0 = QPolyMap::identity(ctx);
    at0.images[0] = QPoly(ctx); // x -> 0
    QPoly lin = substitute(img, at0);
    // lin must be c*var exactly
    QPoly rem = lin;
    Rational c(0);
    if (lin.term_count() == 1) {
      const auto& [e, coef] = *lin.terms().begin();
      if (e == var.lead_exps()) {
        c = coef;
        rem = QPoly(ctx);
      }
    }
    if (c == 0 || !rem.is_zero())
      fail(ErrKind::InvalidInput, "map is not of the liftable triangular shape");
    QPoly g = exact_divide(img - var.scaled(c), x);
    return {c, g};
  };

  auto [c1, g1] = split(mu.images[1], y);
  auto [c2, g2] = split(mu.images[2], z);

  // Substitute z -> x*z inside g1, g2.
  QPolyMap sigma(ctx, ctx, {x, y, x * z});
  QPoly g1s = substitute(g1, sigma);
  QPoly g2s = substitute(g2, sigma);

  QPolyMap lifted(ctx, ctx, {x, y.scaled(c1) + x * g1s, z.scaled(c2) + g2s});

  if (!(compose(mu, sigma) == compose(sigma, lifted)))
    fail(ErrKind::InvalidInput, "lift identity mu . sigma = sigma . mu' failed");
  return lifted;
}

} // namespace affmod
