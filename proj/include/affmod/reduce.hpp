#pragma once

#include "affmod/poly.hpp"

namespace affmod {

// Normal form modulo (u*v - p): every occurrence of u*v in a monomial is
// rewritten to p(xbar) until no monomial contains both u and v. p must not
// involve u or v. Idempotent, and the result is congruent to f.
template <class F>
Poly<F> reduce_mod_uv(const Poly<F>& f, const Poly<F>& p, size_t u, size_t v) {
  require_same_ctx(f.ctx(), p.ctx());
  if (p.degree_in(u) > 0 || p.degree_in(v) > 0)
    fail(ErrKind::InvalidInput, "relation right side involves u or v");
  Poly<F> cur = f;
  for (;;) {
    Poly<F> next(f.ctx());
    bool changed = false;
    for (const auto& [e, c] : cur.terms()) {
      uint32_t m = std::min(e[u], e[v]);
      if (m == 0) {
        next.add_term(e, c);
        continue;
      }
      changed = true;
      Exps d = e;
      d[u] -= m;
      d[v] -= m;
      next = next + Poly<F>::monomial(f.ctx(), d, c) * p.pow(m);
    }
    if (!changed) return next;
    cur = next;
  }
}

template <class F>
Poly<F> reduce_mod_uv(const Poly<F>& f, const Poly<F>& p, const std::string& u,
                      const std::string& v) {
  return reduce_mod_uv(f, p, f.ctx()->require(u), f.ctx()->require(v));
}

} // namespace affmod
