#pragma once

#include "affmod/autoword.hpp"
#include "affmod/reduce.hpp"

namespace affmod {

// X = X(p): u*v = p(x1..xk) inside C^{k+2}. U_c = {u = c}, V_c = {v = c},
// X_0 = {p = 0}.
struct HypersurfaceX {
  Ctx xctx;      // x1..xk
  Ctx full;      // x1..xk, u, v
  QPoly p;       // over xctx, non-constant
  QPoly p_full;  // p embedded into full
  QPoly F;       // u*v - p over full
  size_t ui = 0, vi = 0;

  static HypersurfaceX make(const QPoly& p);
  size_t k() const { return xctx->arity(); }
};

struct XPoint {
  std::vector<Rational> x;
  Rational u, v;

  bool operator==(const XPoint& o) const { return x == o.x && u == o.u && v == o.v; }
  std::vector<Rational> coords() const {
    auto c = x;
    c.push_back(u);
    c.push_back(v);
    return c;
  }
};

XPoint make_xpoint(const HypersurfaceX& X, std::vector<Rational> x, Rational u, Rational v);
bool on_x(const HypersurfaceX& X, const XPoint& P);

// Singular iff u = v = 0 and grad p vanishes at xbar.
bool is_smooth_point(const HypersurfaceX& X, const XPoint& P);

// The generator as a polynomial map of C^{k+2} (exactly polynomial because
// q(0) = 0; raw generators with q(0) != 0 get the truncated quotient
// (q - q(0))/v, which is what verify_preserves_X detects).
QPolyMap xgen_polymap(const HypersurfaceX& X, const XGenerator& g);
// Same with the time replaced by the variable `tvar` of the extended context.
QPolyMap xgen_polymap_symbolic(const HypersurfaceX& X, const XGenerator& g,
                               const Ctx& ext, const std::string& tvar);

XPoint apply_xgen(const HypersurfaceX& X, const XGenerator& g, const XPoint& P);
XPoint apply_xword(const HypersurfaceX& X, const AutoWord& w, const XPoint& P);

// True iff F composed with the whole word (each generator with its own
// symbolic time) reduces to 0 modulo (uv - p).
bool verify_preserves_X(const HypersurfaceX& X, const AutoWord& w);

} // namespace affmod
