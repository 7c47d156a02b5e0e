#include "affmod/hypersurface.hpp"

namespace affmod {

HypersurfaceX HypersurfaceX::make(const QPoly& p) {
  if (p.is_constant()) fail(ErrKind::InvalidInput, "p must be non-constant");
  if (p.ctx()->index_of("u") >= 0 || p.ctx()->index_of("v") >= 0)
    fail(ErrKind::InvalidInput, "p must not involve u or v");
  HypersurfaceX X;
  X.xctx = p.ctx();
  X.p = p;
  X.full = std::make_shared<const VarContext>(p.ctx()->extended({"u", "v"}));
  X.ui = X.full->require("u");
  X.vi = X.full->require("v");
  X.p_full = embed(p, X.full);
  X.F = QPoly::variable(X.full, X.ui) * QPoly::variable(X.full, X.vi) - X.p_full;
  return X;
}

XPoint make_xpoint(const HypersurfaceX& X, std::vector<Rational> x, Rational u, Rational v) {
  XPoint P{std::move(x), std::move(u), std::move(v)};
  if (!on_x(X, P)) fail(ErrKind::InvalidInput, "point does not satisfy u*v = p(x)");
  return P;
}

bool on_x(const HypersurfaceX& X, const XPoint& P) {
  if (P.x.size() != X.k()) fail(ErrKind::InvalidInput, "point arity");
  return P.u * P.v == X.p.evaluate(P.x);
}

bool is_smooth_point(const HypersurfaceX& X, const XPoint& P) {
  if (!on_x(X, P)) fail(ErrKind::InvalidInput, "point is not on X");
  if (P.u != 0 || P.v != 0) return true;
  for (size_t i = 0; i < X.k(); ++i)
    if (X.p.diff(i).evaluate(P.x) != 0) return true;
  return false;
}

namespace {

// Common body: build the map over `target` (either full or full+[t]) with
// time polynomial `time`.
QPolyMap xgen_map(const HypersurfaceX& X, const XGenerator& g, const Ctx& target,
                  const QPoly& time) {
  QPolyMap m = QPolyMap::identity(X.full);
  if (*target != *X.full) {
    // Extend the identity to the target context.
    std::vector<QPoly> imgs;
    for (size_t i = 0; i < X.full->arity(); ++i)
      imgs.push_back(QPoly::variable(target, X.full->name(i)));
    m = QPolyMap(X.full, target, std::move(imgs));
  }
  if (g.kind == XKind::EPS) {
    std::swap(m.images[X.ui], m.images[X.vi]);
    return m;
  }

  bool side1 = g.kind == XKind::LIFT1;
  size_t fix = side1 ? X.vi : X.ui;   // the coordinate q is evaluated at
  size_t move = side1 ? X.ui : X.vi;  // the coordinate that compensates
  QPoly fix_var = QPoly::variable(target, X.full->name(fix));

  auto eval_univar = [&](const QPoly& qq) {
    QPolyMap sub(qq.ctx(), target, {fix_var});
    return substitute(qq, sub);
  };
  QPoly qv = eval_univar(g.q);
  std::vector<Rational> zero{Rational(0)};
  Rational q0 = g.q.evaluate(zero);
  QPoly qtilde = eval_univar(exact_divide(g.q - QPoly::constant(g.q.ctx(), q0),
                                          QPoly::variable(g.q.ctx(), (size_t)0)));

  QPoly h = embed(g.h, target);
  QPoly s = time * qv * h;
  size_t d = target->require(g.dir);

  // p(xbar + s e_d) - p(xbar) = s * Delta.
  QPolyMap shift = QPolyMap::identity(target);
  shift.images[d] = shift.images[d] + s;
  QPoly p_t = embed(X.p, target);
  QPoly num = substitute(p_t, shift) - p_t;
  QPoly delta = num.is_zero() ? QPoly(target) : exact_divide(num, s);

  m.images[d] = m.images[d] + s;
  m.images[move] = m.images[move] + time * h * qtilde * delta;
  return m;
}

} // namespace

QPolyMap xgen_polymap(const HypersurfaceX& X, const XGenerator& g) {
  return xgen_map(X, g, X.full, QPoly::constant(X.full, g.t));
}

QPolyMap xgen_polymap_symbolic(const HypersurfaceX& X, const XGenerator& g,
                               const Ctx& ext, const std::string& tvar) {
  return xgen_map(X, g, ext, QPoly::variable(ext, tvar));
}

XPoint apply_xgen(const HypersurfaceX& X, const XGenerator& g, const XPoint& P) {
  QPolyMap m = xgen_polymap(X, g);
  auto img = apply_point(m, P.coords());
  XPoint Q;
  Q.x.assign(img.begin(), img.begin() + X.k());
  Q.u = img[X.ui];
  Q.v = img[X.vi];
  if (!on_x(X, Q)) fail(ErrKind::InvalidInput, "generator left the hypersurface");
  return Q;
}

XPoint apply_xword(const HypersurfaceX& X, const AutoWord& w, const XPoint& P) {
  XPoint cur = P;
  for (const auto& g : w) {
    if (const auto* s = std::get_if<ElemShear>(&g)) {
      // Plain shears never occur in X words; lift them as LIFT1 with q = z.
      fail(ErrKind::InvalidInput, "un-lifted shear in X word: " + s->dir);
    }
    cur = apply_xgen(X, std::get<XGenerator>(g), cur);
  }
  return cur;
}

bool verify_preserves_X(const HypersurfaceX& X, const AutoWord& w) {
  // One fresh symbolic time per generator.
  std::vector<std::string> tnames;
  {
    VarContext cur = *X.full;
    for (size_t i = 0; i < w.size(); ++i) {
      std::string n = cur.fresh({"t" + std::to_string(i + 1)});
      tnames.push_back(n);
      cur = cur.extended({n});
    }
  }
  auto names = X.full->names();
  names.insert(names.end(), tnames.begin(), tnames.end());
  Ctx ext = make_ctx(names);

  QPolyMap acc = QPolyMap::identity(ext);
  for (size_t i = 0; i < w.size(); ++i) {
    const auto* xg = std::get_if<XGenerator>(&w[i]);
    if (!xg) fail(ErrKind::InvalidInput, "verify_preserves_X expects X generators");
    QPolyMap gi = xgen_polymap_symbolic(X, *xg, ext, tnames[i]);
    // Promote to an endomorphism of ext (times map to themselves).
    std::vector<QPoly> imgs = gi.images;
    for (const auto& tn : tnames) imgs.push_back(QPoly::variable(ext, tn));
    acc = compose(QPolyMap(ext, ext, std::move(imgs)), acc);
  }
  QPoly Fe = embed(X.F, ext);
  QPoly res = substitute(Fe, acc);
  QPoly red = reduce_mod_uv(res, embed(X.p, ext), ext->require("u"), ext->require("v"));
  return red.is_zero();
}

} // namespace affmod
