#pragma once

#include <optional>

#include "affmod/polymap.hpp"

namespace affmod {

// Variable-indexed derivation: images[i] = d(x_i), extended by Leibniz.
struct Derivation {
  Ctx ctx;
  std::vector<QPoly> images;

  Derivation() = default;
  Derivation(Ctx c, std::vector<QPoly> imgs) : ctx(std::move(c)), images(std::move(imgs)) {
    if (images.size() != ctx->arity())
      fail(ErrKind::InvalidInput, "derivation image count != arity");
    for (const auto& p : images) require_same_ctx(p.ctx(), ctx);
  }
};

inline QPoly apply_derivation(const Derivation& d, const QPoly& f) {
  require_same_ctx(d.ctx, f.ctx());
  QPoly acc(d.ctx);
  for (size_t i = 0; i < d.ctx->arity(); ++i) {
    if (d.images[i].is_zero()) continue;
    acc = acc + f.diff(i) * d.images[i];
  }
  return acc;
}

// Per-variable nilpotency orders n_i with d^{n_i}(x_i) = 0, re-checkable by
// iterated application.
struct NilpotencyCertificate {
  std::vector<uint32_t> orders;
  uint32_t global_bound = 0;
};

inline NilpotencyCertificate check_lnd(const Derivation& d, uint32_t max_iter) {
  if (max_iter < 1) fail(ErrKind::InvalidInput, "max_iter must be >= 1");
  NilpotencyCertificate cert;
  cert.orders.resize(d.ctx->arity());
  for (size_t i = 0; i < d.ctx->arity(); ++i) {
    QPoly cur = QPoly::variable(d.ctx, i);
    uint32_t n = 0;
    while (!cur.is_zero()) {
      if (n >= max_iter)
        fail(ErrKind::NotNilpotentWithin,
             "derivation not nilpotent on " + d.ctx->name(i) + " within " +
                 std::to_string(max_iter) + " iterations");
      cur = apply_derivation(d, cur);
      ++n;
    }
    cert.orders[i] = n;
    cert.global_bound = std::max(cert.global_bound, n);
  }
  return cert;
}

// exp(t d) with polynomial time value t (a constant for numeric flows, a
// fresh variable for symbolic identity checks). The time polynomial lives
// in the target context.
inline QPolyMap exp_flow_poly(const Derivation& d, const NilpotencyCertificate& cert,
                              const Ctx& target, const QPoly& time) {
  require_same_ctx(time.ctx(), target);
  std::vector<QPoly> imgs;
  for (size_t i = 0; i < d.ctx->arity(); ++i) {
    QPoly term = QPoly::variable(d.ctx, i);
    QPoly acc(target);
    Rational fact(1);
    QPoly tpow = QPoly::constant(target, Rational(1));
    for (uint32_t n = 0; !term.is_zero(); ++n) {
      if (n > 0) {
        fact *= n;
        tpow = tpow * time;
      }
      if (n > cert.orders[i] + 64)
        fail(ErrKind::NotNilpotentWithin, "exp series did not terminate");
      acc = acc + embed(term, target).scaled(Rational(1) / fact) * tpow;
      term = apply_derivation(d, term);
    }
    imgs.push_back(acc);
  }
  return QPolyMap(d.ctx, target, std::move(imgs));
}

inline QPolyMap exp_flow(const Derivation& d, const NilpotencyCertificate& cert,
                         const Rational& t) {
  return exp_flow_poly(d, cert, d.ctx, QPoly::constant(d.ctx, t));
}

inline QPolyMap exp_flow_symbolic(const Derivation& d, const NilpotencyCertificate& cert,
                                  const std::string& tname) {
  Ctx ext = make_ctx([&] {
    auto ns = d.ctx->names();
    ns.push_back(tname);
    return ns;
  }());
  return exp_flow_poly(d, cert, ext, QPoly::variable(ext, tname));
}

} // namespace affmod
