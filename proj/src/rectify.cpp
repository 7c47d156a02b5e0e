#include "affmod/rectify.hpp"

#include <map>
#include <sstream>

#include "affmod/ffcount.hpp"
#include "affmod/gcd.hpp"
#include "affmod/parse.hpp"
#include "affmod/transitivity.hpp"

namespace affmod {

static Ctx rect_ctx2() {
  static Ctx c = make_ctx({"x", "y"});
  return c;
}
static Ctx rect_ctx3() {
  static Ctx c = make_ctx({"x", "y", "z"});
  return c;
}

namespace {

long coeffs_degree(const std::vector<Rational>& c) {
  long d = (long)c.size() - 1;
  while (d >= 0 && c[(size_t)d] == 0) --d;
  return d;
}

Rational coeffs_eval(const std::vector<Rational>& c, const Rational& t) {
  Rational acc(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

// All divisors of |n|, or nullopt beyond the trial-division budget.
std::optional<std::vector<BigInt>> divisors_of(BigInt n) {
  if (n < 0) n = -n;
  if (n == 0) return std::nullopt;
  if (n > 1000000000) return std::nullopt;
  std::vector<BigInt> small, large;
  for (BigInt d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

struct RootSplit {
  std::vector<Rational> roots; // with multiplicity
  bool complete = false;       // the polynomial is a product of the factors found
};

// Deflate rational roots until none remain; complete iff what is left is
// a constant. The divisor search is exhaustive, so within budget the root
// list is exactly the set of rational roots.
std::optional<RootSplit> rational_roots(std::vector<Rational> cur) {
  RootSplit out;
  while (coeffs_degree(cur) > 0) {
    long d = coeffs_degree(cur);
    cur.resize((size_t)d + 1);
    std::optional<Rational> root;
    if (cur[0] == 0) {
      root = Rational(0);
    } else {
      BigInt lcm_den(1);
      for (const auto& c : cur) lcm_den = lcm(lcm_den, denominator(c));
      std::vector<BigInt> ic(cur.size());
      for (size_t i = 0; i < cur.size(); ++i)
        ic[i] = numerator(cur[i]) * (lcm_den / denominator(cur[i]));
      auto nums = divisors_of(ic[0]);
      auto dens = divisors_of(ic.back());
      if (!nums || !dens) return std::nullopt;
      for (const auto& nu : *nums) {
        for (const auto& de : *dens) {
          for (int sgn : {1, -1}) {
            Rational cand(sgn * nu, de);
            if (coeffs_eval(cur, cand) == 0) {
              root = cand;
              break;
            }
          }
          if (root) break;
        }
        if (root) break;
      }
    }
    if (!root) {
      out.complete = false;
      return out;
    }
    out.roots.push_back(*root);
    std::vector<Rational> next((size_t)d, Rational(0));
    Rational carry(0);
    for (long i = d; i >= 1; --i) {
      carry = cur[(size_t)i] + carry * *root;
      next[(size_t)(i - 1)] = carry;
    }
    cur = next;
  }
  out.complete = true;
  return out;
}

std::vector<Rational> univar_coeffs_at(const QPoly& p, size_t var, size_t other,
                                       const Rational& val) {
  long d = std::max(0L, p.degree_in(var));
  std::vector<Rational> cs((size_t)d + 1, Rational(0));
  for (const auto& [e, c] : p.terms()) {
    Rational t = c;
    for (uint32_t r = 0; r < e[other]; ++r) t *= val;
    cs[e[var]] += t;
  }
  return cs;
}

Rational resultant_uni(std::vector<Rational> A, std::vector<Rational> B) {
  // Only the zero set matters to the caller, so sign bookkeeping is
  // unnecessary; return the product of leading powers along Euclid.
  Rational res(1);
  for (;;) {
    long dA = coeffs_degree(A), dB = coeffs_degree(B);
    if (dA < dB) {
      std::swap(A, B);
      std::swap(dA, dB);
    }
    if (dB < 0) return Rational(0);
    if (dB == 0) {
      Rational r = res;
      for (long i = 0; i < dA; ++i) r *= B[0];
      return r;
    }
    Rational lb = B[(size_t)dB];
    std::vector<Rational> R = A;
    while (coeffs_degree(R) >= dB) {
      long dR = coeffs_degree(R);
      Rational f = R[(size_t)dR] / lb;
      for (long i = 0; i <= dB; ++i) R[(size_t)(dR - dB + i)] -= f * B[(size_t)i];
    }
    long dR = coeffs_degree(R);
    for (long i = 0; i < dA - std::max(dR, 0L); ++i) res *= lb;
    A = std::move(B);
    B = std::move(R);
    B.resize((size_t)std::max(dR, 0L) + 1);
  }
}

// Exact common rational zeros of two coprime bivariate polynomials, or
// nullopt when the intersection leaves the rationals (or the budget).
std::optional<std::vector<std::vector<Rational>>> common_zeros(const QPoly& a, const QPoly& b) {
  long da = a.degree_in(1), db = b.degree_in(1);
  if (da < 0 || db < 0) return std::nullopt;
  long need = (long)(a.degree() * db + b.degree() * da) + 1;
  std::vector<Rational> nodes, values;
  for (long i = 0; (long)nodes.size() < need && i <= 8 * need + 16; ++i) {
    Rational x0((i % 2 == 0) ? i / 2 : -(i / 2 + 1));
    auto A = univar_coeffs_at(a, 1, 0, x0);
    auto B = univar_coeffs_at(b, 1, 0, x0);
    if (coeffs_degree(A) != da || coeffs_degree(B) != db) continue; // degree drop
    nodes.push_back(x0);
    values.push_back(resultant_uni(A, B));
  }
  if ((long)nodes.size() < need) return std::nullopt;
  static Ctx uni = make_ctx({"_t"});
  QPoly res_poly = interpolate(uni, nodes, values);
  if (res_poly.is_zero()) return std::nullopt;

  std::vector<Rational> rcs((size_t)std::max(0L, res_poly.degree_in(0)) + 1, Rational(0));
  for (const auto& [e, c] : res_poly.terms()) rcs[e[0]] = c;
  auto xs = rational_roots(rcs);
  if (!xs || !xs->complete) return std::nullopt;

  std::vector<std::vector<Rational>> pts;
  std::vector<Rational> seen_x;
  for (const auto& x0 : xs->roots) {
    bool dup = false;
    for (const auto& s : seen_x) dup = dup || s == x0;
    if (dup) continue;
    seen_x.push_back(x0);
    // Common y-roots: gcd of the specializations.
    auto A = univar_coeffs_at(a, 1, 0, x0);
    auto B = univar_coeffs_at(b, 1, 0, x0);
    while (coeffs_degree(B) >= 0) {
      long dB = coeffs_degree(B);
      if (dB == 0) {
        B.assign(1, Rational(0));
        break;
      }
      Rational lb = B[(size_t)dB];
      std::vector<Rational> R = A;
      while (coeffs_degree(R) >= dB) {
        long dR = coeffs_degree(R);
        Rational f = R[(size_t)dR] / lb;
        for (long i = 0; i <= dB; ++i) R[(size_t)(dR - dB + i)] -= f * B[(size_t)i];
      }
      A = std::move(B);
      B = std::move(R);
    }
    long dU = coeffs_degree(A);
    if (dU < 1) continue;
    auto ys = rational_roots(A);
    if (!ys || !ys->complete) return std::nullopt;
    std::vector<Rational> seen_y;
    for (const auto& y0 : ys->roots) {
      bool dy = false;
      for (const auto& s : seen_y) dy = dy || s == y0;
      if (dy) continue;
      seen_y.push_back(y0);
      pts.push_back({x0, y0});
    }
  }
  return pts;
}

} // namespace

BinomialSurface BinomialSurface::make(const QPoly& f, const QPoly& g, long n) {
  if (n < 1) fail(ErrKind::InvalidInput, "n must be >= 1");
  if (*f.ctx() != *rect_ctx2() || *g.ctx() != *rect_ctx2())
    fail(ErrKind::InvalidInput, "f, g must live in C[x, y]");
  if (f.is_constant() || g.is_constant())
    fail(ErrKind::InvalidInput, "f and g must be non-constant");
  if (!coprime(f, g)) fail(ErrKind::InvalidInput, "f and g share a factor");
  BinomialSurface s;
  s.f = f;
  s.g = g;
  s.n = n;
  s.ctx3 = rect_ctx3();
  s.F = embed(f, s.ctx3) * QPoly::variable(s.ctx3, "z").pow(n) + embed(g, s.ctx3);
  return s;
}

SmoothnessReport smoothness_check(const BinomialSurface& s) {
  SmoothnessReport rep;
  QPoly fx = s.f.diff((size_t)0), fy = s.f.diff((size_t)1);
  QPoly gx = s.g.diff((size_t)0), gy = s.g.diff((size_t)1);

  auto exact_pts = common_zeros(s.f, s.g);
  bool exact_ok = exact_pts.has_value();
  if (exact_ok) {
    for (const auto& P : *exact_pts) {
      bool g_smooth = gx.evaluate(P) != 0 || gy.evaluate(P) != 0;
      if (!g_smooth) {
        rep.kind = SmoothnessReport::Kind::SingularWitness;
        rep.witness = {P[0], P[1], Rational(0)};
        rep.reason = "divisor of g is singular at a common point of f and g";
        return rep;
      }
      bool f_smooth = fx.evaluate(P) != 0 || fy.evaluate(P) != 0;
      if (f_smooth) {
        Rational det = fx.evaluate(P) * gy.evaluate(P) - fy.evaluate(P) * gx.evaluate(P);
        if (det == 0) {
          rep.kind = SmoothnessReport::Kind::SingularWitness;
          rep.witness = {P[0], P[1], Rational(0)};
          rep.reason = "divisors of f and g are tangent at a common point";
          return rep;
        }
      }
    }
    if (s.n > 1) {
      QPoly sing = gcd(s.g, gcd(gx, gy));
      if (!sing.is_constant()) {
        rep.kind = SmoothnessReport::Kind::Undecided;
        rep.reason = "divisor of g has a non-reduced or singular part (n > 1)";
        auto zs = common_zeros(sing, s.g);
        if (zs && !zs->empty()) {
          rep.kind = SmoothnessReport::Kind::SingularWitness;
          rep.witness = {(*zs)[0][0], (*zs)[0][1], Rational(0)};
          rep.reason = "divisor of g is singular (n > 1)";
        }
        return rep;
      }
      // Singular points of D_g off D_f would violate (ii) as well.
      auto zsing = common_zeros(s.g, gx);
      if (zsing) {
        for (const auto& P : *zsing)
          if (gy.evaluate(P) == 0) {
            rep.kind = SmoothnessReport::Kind::SingularWitness;
            rep.witness = {P[0], P[1], Rational(0)};
            rep.reason = "divisor of g is singular (n > 1)";
            return rep;
          }
      } else if (!gx.is_zero()) {
        exact_ok = false;
      }
    }
    if (exact_ok) {
      rep.kind = SmoothnessReport::Kind::Smooth;
      return rep;
    }
  }

  // Finite-field screening fallback.
  std::vector<QPoly> eqs{s.F};
  for (uint32_t q : {101u, 103u, 107u}) {
    auto w = singular_witness(eqs, q, 1200000, q);
    if (!w) continue;
    std::vector<Rational> cand;
    for (uint32_t c : *w) {
      long v = (long)c;
      if (v > (long)q / 2) v -= (long)q;
      cand.push_back(Rational(v));
    }
    bool sing = s.F.evaluate(cand) == 0;
    for (size_t i = 0; i < 3 && sing; ++i) sing = s.F.diff(i).evaluate(cand) == 0;
    if (sing) {
      rep.kind = SmoothnessReport::Kind::SingularWitness;
      rep.witness = cand;
      rep.reason = "singular point found by finite-field screening";
      return rep;
    }
  }
  rep.kind = SmoothnessReport::Kind::Undecided;
  rep.reason = "intersection locus not decidable over Q; no singular point mod {101,103,107}";
  return rep;
}

std::vector<Rational> rational_roots_of_split(const QPoly& p) {
  if (p.ctx()->arity() > 1 && p.degree_in(1) > 0)
    fail(ErrKind::InvalidInput, "p must be univariate in x");
  long d = p.degree_in(0);
  if (d < 1) fail(ErrKind::InvalidInput, "p must be non-constant");
  std::vector<Rational> cs((size_t)d + 1, Rational(0));
  for (const auto& [e, c] : p.terms()) cs[e[0]] = c;
  auto rs = rational_roots(cs);
  if (!rs || !rs->complete)
    fail(ErrKind::RootNotInField, "p does not split over Q");
  for (size_t i = 0; i < rs->roots.size(); ++i)
    for (size_t j = i + 1; j < rs->roots.size(); ++j)
      if (rs->roots[i] == rs->roots[j])
        fail(ErrKind::TransversalityViolated,
             "p has a repeated root (the divisor of f is non-reduced)");
  std::sort(rs->roots.begin(), rs->roots.end());
  return rs->roots;
}

namespace {

// g(root, y) must be gamma*(y - c) exactly; returns (gamma, c).
std::pair<Rational, Rational> transversal_data(const QPoly& g, const Rational& root) {
  std::map<uint32_t, Rational> per;
  for (const auto& [e, co] : g.terms()) {
    Rational t = co;
    for (uint32_t r = 0; r < e[0]; ++r) t *= root;
    per[e[1]] += t;
  }
  for (const auto& [pw, v] : per)
    if (pw >= 2 && v != 0)
      fail(ErrKind::TransversalityViolated,
           "g(x0, y) is not linear in y at the root x0 = " + rational_str(root));
  Rational lin = per.count(1) ? per.at(1) : Rational(0);
  Rational constant = per.count(0) ? per.at(0) : Rational(0);
  if (lin == 0)
    fail(ErrKind::TransversalityViolated,
         "g(x0, y) is constant in y at the root x0 = " + rational_str(root));
  return {lin, -constant / lin};
}

} // namespace

NormalForm normal_form(const QPoly& p, const QPoly& g) {
  require_same_ctx(p.ctx(), rect_ctx2());
  require_same_ctx(g.ctx(), rect_ctx2());
  auto roots = rational_roots_of_split(p);
  for (const auto& r : roots) (void)transversal_data(g, r);

  NormalForm nf;
  nf.root = roots.front();
  QPolyMap tau(rect_ctx2(), rect_ctx2(),
               {QPoly::variable(rect_ctx2(), "x") + QPoly::constant(rect_ctx2(), nf.root),
                QPoly::variable(rect_ctx2(), "y")});
  nf.p1 = substitute(p, tau);
  nf.g1 = substitute(g, tau);
  auto [gamma, c] = transversal_data(nf.g1, Rational(0));
  nf.gamma = gamma;
  nf.c = c;
  QPoly lin = (QPoly::variable(rect_ctx2(), "y") - QPoly::constant(rect_ctx2(), c)).scaled(gamma);
  nf.h = exact_divide(nf.g1 - lin, QPoly::variable(rect_ctx2(), "x"));
  if (nf.root != 0)
    nf.word.push_back(ElemShear{"x", QPoly::constant(rect_ctx3(), Rational(1)), -nf.root});
  return nf;
}

QPolyMap rectify_forward_map(const RectifyWord& w) {
  QPolyMap acc = QPolyMap::identity(w.ctx3);
  for (const auto& piece : w.pieces) {
    QPolyMap m = QPolyMap::identity(w.ctx3);
    if (const auto* s = std::get_if<ElemShear>(&piece)) {
      m = shear_polymap(*s, w.ctx3);
    } else if (const auto* sc = std::get_if<ScalePiece>(&piece)) {
      size_t d = w.ctx3->require(sc->dir);
      m.images[d] = m.images[d].scaled(sc->c);
    } else {
      m = std::get<TriMapPiece>(piece).fwd;
    }
    acc = compose(m, acc);
  }
  return acc;
}

QPolyMap rectify_inverse_map(const RectifyWord& w) {
  QPolyMap acc = QPolyMap::identity(w.ctx3);
  for (auto it = w.pieces.rbegin(); it != w.pieces.rend(); ++it) {
    QPolyMap m = QPolyMap::identity(w.ctx3);
    if (const auto* s = std::get_if<ElemShear>(&*it)) {
      ElemShear inv = *s;
      inv.t = -inv.t;
      m = shear_polymap(inv, w.ctx3);
    } else if (const auto* sc = std::get_if<ScalePiece>(&*it)) {
      size_t d = w.ctx3->require(sc->dir);
      m.images[d] = m.images[d].scaled(Rational(1) / sc->c);
    } else {
      m = std::get<TriMapPiece>(*it).inv;
    }
    acc = compose(m, acc);
  }
  return acc;
}

RectifyWord rectify_n1(const QPoly& p, const QPoly& g) {
  NormalForm nf = normal_form(p, g);
  RectifyWord word;
  word.ctx3 = rect_ctx3();
  word.pieces = nf.word;
  word.plane_c = nf.c;

  Ctx c3 = word.ctx3;
  QPoly x3 = QPoly::variable(c3, "x"), y3 = QPoly::variable(c3, "y"),
        z3 = QPoly::variable(c3, "z");

  QPoly q = exact_divide(embed(nf.p1, c3), x3);
  QPoly htilde = embed(nf.h, c3).scaled(Rational(1) / nf.gamma);

  // z-shift correction interpolated over every root of p1: at x = 0 it is
  // the h1(0, y) specialization restoring the triangular shape, at the
  // other roots it makes the lift through z -> q(x) z an exact division.
  auto roots1 = rational_roots_of_split(nf.p1);
  std::vector<Rational> nodes, s0v, s1v;
  static Ctx uni = make_ctx({"_t"});
  for (const auto& rho : roots1) {
    Rational a(0), b(0);
    for (const auto& [e, co] : htilde.terms()) {
      Rational t = co;
      for (uint32_t r = 0; r < e[0]; ++r) t *= rho;
      if (e[1] == 0) b += t;
      else if (e[1] == 1) a += t;
      else if (t != 0)
        fail(ErrKind::TransversalityViolated, "unexpected nonlinearity at a root");
    }
    Rational slope = Rational(1) + rho * a;
    if (slope == 0) fail(ErrKind::TransversalityViolated, "degenerate transversal slope");
    nodes.push_back(rho);
    s1v.push_back(a / slope);
    s0v.push_back(b - a * rho * b / slope);
  }
  QPolyMap to_x(uni, c3, {x3});
  QPoly s_poly =
      substitute(interpolate(uni, nodes, s0v), to_x) +
      substitute(interpolate(uni, nodes, s1v), to_x) * y3;

  auto shear_map = [&](size_t d, const QPoly& h, int sign) {
    QPolyMap m = QPolyMap::identity(c3);
    m.images[d] = sign > 0 ? m.images[d] + h : m.images[d] - h;
    return m;
  };
  QPolyMap S = QPolyMap::identity(c3), Sinv = QPolyMap::identity(c3);
  S.images[2] = z3.scaled(Rational(1) / nf.gamma);
  Sinv.images[2] = z3.scaled(nf.gamma);
  QPolyMap alpha = shear_map(2, htilde, -1), alpha_inv = shear_map(2, htilde, +1);
  QPolyMap beta = shear_map(1, x3 * z3, -1), beta_inv = shear_map(1, x3 * z3, +1);
  QPolyMap kappa = shear_map(2, s_poly, +1), kappa_inv = shear_map(2, s_poly, -1);

  QPolyMap W = compose(kappa, compose(beta, compose(alpha, S)));
  QPolyMap Winv = compose(Sinv, compose(alpha_inv, compose(beta_inv, kappa_inv)));

  QPolyMap sigma_q(c3, c3, {x3, y3, q * z3});
  auto lift = [&](const QPolyMap& M) {
    QPoly ly = substitute(M.images[1], sigma_q);
    QPoly lz = exact_divide(substitute(M.images[2], sigma_q), q);
    return QPolyMap(c3, c3, {x3, ly, lz});
  };
  QPolyMap lam = lift(W);
  QPolyMap lam_inv = lift(Winv);
  QPolyMap idm = QPolyMap::identity(c3);
  if (!(compose(lam, lam_inv) == idm) || !(compose(lam_inv, lam) == idm))
    fail(ErrKind::InvalidInput, "lifted rectifier is not invertible");
  word.pieces.push_back(TriMapPiece{lam, lam_inv});

  QPoly F = embed(p, c3) * z3 + embed(g, c3);
  QPoly pulled = substitute(F, rectify_inverse_map(word));
  QPoly target = y3 - QPoly::constant(c3, nf.c);
  if (!equal_up_to_unit(pulled, target))
    fail(ErrKind::InvalidInput, "rectification identity failed");
  return word;
}

bool verify_rectified(const BinomialSurface& s, const RectifyWord& w) {
  if (s.n != 1) return false;
  QPoly pulled = substitute(s.F, rectify_inverse_map(w));
  QPoly target = QPoly::variable(w.ctx3, "y") - QPoly::constant(w.ctx3, w.plane_c);
  return equal_up_to_unit(pulled, target);
}

std::string rectify_word_to_text(const RectifyWord& w) {
  std::ostringstream os;
  for (const auto& piece : w.pieces) {
    if (const auto* s = std::get_if<ElemShear>(&piece)) {
      os << "SHEAR d=" << s->dir << " h=" << print_poly(s->h)
         << " t=" << rational_str(s->t) << "\n";
    } else if (const auto* sc = std::get_if<ScalePiece>(&piece)) {
      os << "SCALE d=" << sc->dir << " c=" << rational_str(sc->c) << "\n";
    } else {
      const auto& tm = std::get<TriMapPiece>(piece);
      os << "TRIMAP y=" << print_poly(tm.fwd.images[1]) << " z=" << print_poly(tm.fwd.images[2])
         << " yinv=" << print_poly(tm.inv.images[1])
         << " zinv=" << print_poly(tm.inv.images[2]) << "\n";
    }
  }
  os << "PLANE c=" << rational_str(w.plane_c) << "\n";
  return os.str();
}

namespace {
std::string rfield(const std::string& line, const std::string& key,
                   const std::vector<std::string>& later) {
  std::string tag = " " + key + "=";
  size_t at = line.find(tag);
  if (at == std::string::npos) fail(ErrKind::SyntaxError, "missing " + key + "= in " + line);
  size_t start = at + tag.size();
  size_t end = line.size();
  for (const auto& k : later) {
    size_t e = line.find(" " + k + "=", start);
    if (e != std::string::npos && e < end) end = e;
  }
  std::string v = line.substr(start, end - start);
  while (!v.empty() && v.back() == ' ') v.pop_back();
  return v;
}
} // namespace

RectifyWord rectify_word_from_text(const std::string& text, const Ctx& c3) {
  RectifyWord w;
  w.ctx3 = c3;
  std::istringstream is(text);
  std::string line;
  bool saw_plane = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "SHEAR") {
      ElemShear s;
      s.dir = rfield(line, "d", {"h", "t"});
      s.h = qparse(rfield(line, "h", {"t"}), c3);
      s.t = parse_rational_str(rfield(line, "t", {}));
      w.pieces.push_back(std::move(s));
    } else if (kind == "SCALE") {
      ScalePiece sc;
      sc.dir = rfield(line, "d", {"c"});
      sc.c = parse_rational_str(rfield(line, "c", {}));
      w.pieces.push_back(std::move(sc));
    } else if (kind == "TRIMAP") {
      QPoly x3 = QPoly::variable(c3, "x");
      QPoly fy2 = qparse(rfield(line, "y", {"z", "yinv", "zinv"}), c3);
      QPoly fz2 = qparse(rfield(line, "z", {"yinv", "zinv"}), c3);
      QPoly iy = qparse(rfield(line, "yinv", {"zinv"}), c3);
      QPoly iz = qparse(rfield(line, "zinv", {}), c3);
      w.pieces.push_back(TriMapPiece{QPolyMap(c3, c3, {x3, fy2, fz2}),
                                     QPolyMap(c3, c3, {x3, iy, iz})});
    } else if (kind == "PLANE") {
      w.plane_c = parse_rational_str(rfield(line, "c", {}));
      saw_plane = true;
    } else {
      fail(ErrKind::SyntaxError, "unknown rectify word line: " + line);
    }
  }
  if (!saw_plane) fail(ErrKind::SyntaxError, "missing PLANE trailer");
  return w;
}

PairRectification rectify_pair(const QPoly& f, const QPoly& g,
                               const std::optional<QPoly>& f1_hint, long degree_bound) {
  require_same_ctx(f.ctx(), rect_ctx2());
  require_same_ctx(g.ctx(), rect_ctx2());
  std::vector<QPoly> candidates;
  if (f1_hint) candidates.push_back(embed(*f1_hint, rect_ctx2()));
  candidates.push_back(QPoly::variable(rect_ctx2(), "x"));
  candidates.push_back(QPoly::variable(rect_ctx2(), "y"));

  for (const auto& f1 : candidates) {
    QPolyMap m(rect_ctx2(), rect_ctx2(), {f1, g});
    long D = degree_bound > 0 ? degree_bound : default_inverse_degree_bound(m);
    QPolyMap alpha;
    try {
      alpha = invert_by_degree_bound(m, D);
    } catch (const Error& e) {
      if (e.kind == ErrKind::NoInverseWithinDegree) continue;
      throw;
    }
    QPoly fa = substitute(f, alpha);
    if (fa.degree_in(1) > 0) continue;
    if (substitute(g, alpha) != QPoly::variable(rect_ctx2(), "y")) continue;
    return PairRectification{alpha, fa};
  }
  fail(ErrKind::NoInverseWithinDegree,
       "no candidate f1 produced an invertible pair (f1, g) within the degree bound");
}

} // namespace affmod
