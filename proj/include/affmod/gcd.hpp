#pragma once

#include "affmod/poly.hpp"

namespace affmod {

namespace detail {

// Coefficient of v^k, as a polynomial with zero v-degree.
inline QPoly coeff_of_power(const QPoly& p, size_t v, uint32_t k) {
  QPoly r(p.ctx());
  for (const auto& [e, c] : p.terms()) {
    if (e[v] != k) continue;
    Exps d = e;
    d[v] = 0;
    r.add_term(d, c);
  }
  return r;
}

inline QPoly times_power(const QPoly& p, size_t v, uint32_t k) {
  QPoly r(p.ctx());
  for (const auto& [e, c] : p.terms()) {
    Exps d = e;
    d[v] += k;
    r.add_term(d, c);
  }
  return r;
}

QPoly gcd_rec(const QPoly& a, const QPoly& b, long k);

// Sparse pseudo-remainder of a by b in variable v.
inline QPoly prem(QPoly r, const QPoly& b, size_t v) {
  long db = b.degree_in(v);
  QPoly lb = coeff_of_power(b, v, (uint32_t)db);
  while (!r.is_zero() && r.degree_in(v) >= db) {
    long dr = r.degree_in(v);
    QPoly lr = coeff_of_power(r, v, (uint32_t)dr);
    r = r * lb - times_power(b * lr, v, (uint32_t)(dr - db));
  }
  return r;
}

inline QPoly content_wrt(const QPoly& p, size_t v, long k) {
  QPoly c(p.ctx());
  long d = p.degree_in(v);
  for (long i = 0; i <= d; ++i) {
    QPoly ci = coeff_of_power(p, v, (uint32_t)i);
    if (!ci.is_zero()) c = gcd_rec(c, ci, k);
  }
  return c;
}

inline QPoly gcd_rec(const QPoly& a, const QPoly& b, long k) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  size_t v = (size_t)k;
  if (k == 0 || (a.degree_in(v) <= 0 && b.degree_in(v) <= 0)) {
    if (k == 0) {
      // Univariate Euclid over the field.
      QPoly r0 = a, r1 = b;
      while (!r1.is_zero()) {
        long db = r1.degree_in(0);
        QPoly r = r0;
        while (!r.is_zero() && r.degree_in(0) >= db) {
          long dr = r.degree_in(0);
          Rational c = RationalField::div(coeff_of_power(r, 0, (uint32_t)dr).constant_value(),
                                          coeff_of_power(r1, 0, (uint32_t)db).constant_value());
          Exps e(a.ctx()->arity(), 0);
          e[0] = (uint32_t)(dr - db);
          r = r - QPoly::monomial(a.ctx(), e, c) * r1;
        }
        r0 = r1;
        r1 = r;
      }
      return r0;
    }
    return gcd_rec(a, b, k - 1);
  }
  QPoly ca = content_wrt(a, v, k - 1);
  QPoly cb = content_wrt(b, v, k - 1);
  QPoly ppa = exact_divide(a, ca);
  QPoly ppb = exact_divide(b, cb);
  QPoly c = gcd_rec(ca, cb, k - 1);
  // Primitive PRS in v.
  QPoly r0 = ppa, r1 = ppb;
  if (r0.degree_in(v) < r1.degree_in(v)) std::swap(r0, r1);
  while (!r1.is_zero()) {
    QPoly r2 = prem(r0, r1, v);
    if (!r2.is_zero()) r2 = exact_divide(r2, content_wrt(r2, v, k - 1));
    r0 = r1;
    r1 = r2;
  }
  if (!r0.is_zero()) r0 = exact_divide(r0, content_wrt(r0, v, k - 1));
  return c * r0;
}

} // namespace detail

// Monic-normalized gcd via primitive PRS over the recursive univariate
// view; exact-rational field only.
inline QPoly gcd(const QPoly& a, const QPoly& b) {
  require_same_ctx(a.ctx(), b.ctx());
  QPoly g = detail::gcd_rec(a, b, (long)a.ctx()->arity() - 1);
  return monic(g);
}

inline bool coprime(const QPoly& a, const QPoly& b) {
  QPoly g = gcd(a, b);
  return g.is_constant() && !g.is_zero();
}

} // namespace affmod
