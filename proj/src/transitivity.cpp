#include "affmod/transitivity.hpp"

#include <algorithm>
#include <map>

namespace affmod {

QPoly interpolate(const Ctx& uni, const std::vector<Rational>& nodes,
                  const std::vector<Rational>& values) {
  if (uni->arity() != 1) fail(ErrKind::InvalidInput, "interpolate needs a univariate context");
  if (nodes.size() != values.size()) fail(ErrKind::InvalidInput, "node/value count mismatch");
  for (size_t i = 0; i < nodes.size(); ++i)
    for (size_t j = i + 1; j < nodes.size(); ++j)
      if (nodes[i] == nodes[j]) fail(ErrKind::InvalidInput, "duplicate interpolation node");

  QPoly acc(uni);
  QPoly t = QPoly::variable(uni, (size_t)0);
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (values[i] == 0) continue;
    QPoly li = QPoly::constant(uni, Rational(1));
    Rational denom(1);
    for (size_t j = 0; j < nodes.size(); ++j) {
      if (j == i) continue;
      li = li * (t - QPoly::constant(uni, nodes[j]));
      denom *= nodes[i] - nodes[j];
    }
    acc = acc + li.scaled(values[i] / denom);
  }
  return acc;
}

namespace {

// t = 1, -1, 2, -2, 1/2, -1/2, 3, -3, 1/3, ... (never 0)
Rational time_candidate(size_t n) {
  size_t block = n / 4;
  switch (n % 4) {
    case 0: return Rational((long)block + 1);
    case 1: return Rational(-(long)block - 1);
    case 2: return Rational(1, (long)block + 2);
    default: return Rational(-1, (long)block + 2);
  }
}

// assignment sweep 0, 1, 2, ... B, -1, -2, ... -B
Rational sweep_value(size_t n, size_t B) {
  if (n <= B) return Rational((long)n);
  return Rational(-(long)(n - B));
}

} // namespace

AutoWord separating_shear_setup(const Ctx& ctx,
                                const std::vector<std::vector<Rational>>& list_a,
                                const std::vector<std::vector<Rational>>& list_b) {
  size_t k = ctx->arity();
  std::vector<std::vector<std::vector<Rational>>> lists;
  if (!list_a.empty()) lists.push_back(list_a);
  if (!list_b.empty()) lists.push_back(list_b);
  AutoWord word;

  auto collision = [&](size_t* li, size_t* i, size_t* j, size_t* coord) {
    for (size_t L = 0; L < lists.size(); ++L)
      for (size_t a = 0; a < lists[L].size(); ++a)
        for (size_t b = a + 1; b < lists[L].size(); ++b) {
          if (lists[L][a] == lists[L][b])
            fail(ErrKind::InvalidInput, "points must be pairwise distinct");
          for (size_t c = 0; c < k; ++c)
            if (lists[L][a][c] == lists[L][b][c]) {
              *li = L; *i = a; *j = b; *coord = c;
              return true;
            }
        }
    return false;
  };

  size_t li, i, j, coord;
  size_t guard = 0;
  while (collision(&li, &i, &j, &coord)) {
    if (++guard > 10000) fail(ErrKind::InvalidInput, "separation did not terminate");
    // A coordinate where the colliding pair differs.
    size_t jq = k;
    for (size_t c = 0; c < k; ++c)
      if (c != coord && lists[li][i][c] != lists[li][j][c]) { jq = c; break; }
    if (jq == k) fail(ErrKind::InvalidInput, "identical points");

    // Transvection x_coord += t*x_jq with t avoiding every new collision
    // among pairs currently separated in `coord`.
    for (size_t n = 0;; ++n) {
      Rational t = time_candidate(n);
      bool ok = true;
      for (const auto& L : lists)
        for (size_t a = 0; a < L.size() && ok; ++a)
          for (size_t b = a + 1; b < L.size() && ok; ++b) {
            Rational dc = L[a][coord] - L[b][coord];
            Rational dj = L[a][jq] - L[b][jq];
            if (dc == 0 && dj == 0) continue; // unchanged collision
            if (dc + t * dj == 0) ok = false;
          }
      if (!ok) continue;
      for (auto& L : lists)
        for (auto& P : L) P[coord] += t * P[jq];
      word.push_back(ElemShear{ctx->name(coord), QPoly::variable(ctx, jq), t});
      break;
    }
  }
  return word;
}

namespace {

// Recursion of the m-transitivity of the shear-generated group on C^k:
// both lists have all single-coordinate projections pairwise distinct.
void g0_rec(const Ctx& ctx, size_t k, std::vector<std::vector<Rational>> src,
            const std::vector<std::vector<Rational>>& tgt, AutoWord& out) {
  static Ctx uni = make_ctx({"_t"});
  size_t m = src.size();
  auto push_shear = [&](size_t dir, const QPoly& h_of, size_t arg) {
    // h = r(x_arg) where r is interpolated; skip identity shears.
    if (h_of.is_zero()) return;
    QPolyMap sub(uni, ctx, {QPoly::variable(ctx, arg)});
    out.push_back(ElemShear{ctx->name(dir), substitute(h_of, sub), Rational(1)});
  };

  if (k == 2) {
    std::vector<Rational> nodes, values;
    for (size_t i = 0; i < m; ++i) {
      nodes.push_back(src[i][1]);
      values.push_back(tgt[i][0] - src[i][0]);
    }
    push_shear(0, interpolate(uni, nodes, values), 1);
    for (size_t i = 0; i < m; ++i) src[i][0] = tgt[i][0];
    nodes.clear();
    values.clear();
    for (size_t i = 0; i < m; ++i) {
      nodes.push_back(src[i][0]);
      values.push_back(tgt[i][1] - src[i][1]);
    }
    push_shear(1, interpolate(uni, nodes, values), 0);
    return;
  }
  g0_rec(ctx, k - 1, src, tgt, out);
  for (size_t i = 0; i < m; ++i)
    for (size_t c = 0; c + 1 < k; ++c) src[i][c] = tgt[i][c];
  std::vector<Rational> nodes, values;
  for (size_t i = 0; i < m; ++i) {
    nodes.push_back(src[i][0]);
    values.push_back(tgt[i][k - 1] - src[i][k - 1]);
  }
  push_shear(k - 1, interpolate(uni, nodes, values), 0);
}

} // namespace

AutoWord g0_transitive(const Ctx& ctx, const std::vector<std::vector<Rational>>& sources,
                       const std::vector<std::vector<Rational>>& targets) {
  size_t k = ctx->arity();
  if (k < 2) fail(ErrKind::InvalidInput, "g0_transitive needs k >= 2");
  if (sources.size() != targets.size() || sources.empty())
    fail(ErrKind::InvalidInput, "source/target count mismatch");
  for (const auto& P : sources)
    if (P.size() != k) fail(ErrKind::InvalidInput, "point arity");
  for (const auto& P : targets)
    if (P.size() != k) fail(ErrKind::InvalidInput, "point arity");
  if (sources == targets) return {};

  auto src = sources;
  auto tgt = targets;
  AutoWord conj = separating_shear_setup(ctx, src, tgt);
  for (const auto& g : conj) {
    const auto& s = std::get<ElemShear>(g);
    size_t d = ctx->require(s.dir);
    for (auto& P : src) P[d] += s.t * embed(s.h, ctx).evaluate(P);
    for (auto& P : tgt) P[d] += s.t * embed(s.h, ctx).evaluate(P);
  }

  AutoWord inner;
  g0_rec(ctx, k, src, tgt, inner);

  AutoWord word = conj;
  word.insert(word.end(), inner.begin(), inner.end());
  AutoWord back = invert_word(conj);
  word.insert(word.end(), back.begin(), back.end());

  for (size_t i = 0; i < sources.size(); ++i)
    if (apply_word_point(word, ctx, sources[i]) != targets[i])
      fail(ErrKind::InvalidInput, "g0_transitive verification failed");
  return word;
}

std::vector<std::vector<Rational>> fiber_points(const QPoly& p, const Rational& c, size_t m,
                                                const std::vector<std::vector<Rational>>& avoid) {
  if (p.is_constant()) fail(ErrKind::InvalidInput, "p must be non-constant");
  size_t k = p.ctx()->arity();
  std::vector<std::vector<Rational>> found;
  auto taken = [&](const std::vector<Rational>& pt) {
    for (const auto& a : avoid)
      if (a == pt) return true;
    for (const auto& a : found)
      if (a == pt) return true;
    return false;
  };

  const size_t B = 12; // assignment sweep bound per variable
  // Heuristic (1): specializations linear in one variable; heuristic (2):
  // bounded rational root search on the remaining univariate cases.
  for (int phase = 1; phase <= 2 && found.size() < m; ++phase) {
    for (size_t j = 0; j < k && found.size() < m; ++j) {
      if (p.degree_in(j) < 1) continue;
      size_t combos = 1;
      for (size_t i = 0; i + 1 < k; ++i) combos *= (2 * B + 1);
      if (k == 1) combos = 1;
      for (size_t n = 0; n < combos && found.size() < m; ++n) {
        // Decode the assignment of the other variables.
        std::vector<Rational> assign(k, Rational(0));
        size_t code = n;
        for (size_t i = 0; i < k; ++i) {
          if (i == j) continue;
          assign[i] = sweep_value(code % (2 * B + 1), B);
          code /= (2 * B + 1);
        }
        // Specialized univariate coefficients of x_j.
        long dj = p.degree_in(j);
        std::vector<Rational> coeff((size_t)dj + 1, Rational(0));
        for (const auto& [e, co] : p.terms()) {
          Rational term = co;
          for (size_t i = 0; i < k; ++i) {
            if (i == j) continue;
            for (uint32_t r = 0; r < e[i]; ++r) term *= assign[i];
          }
          coeff[e[j]] += term;
        }
        coeff[0] -= c;
        long deg = dj;
        while (deg > 0 && coeff[(size_t)deg] == 0) --deg;
        auto push_root = [&](const Rational& root) {
          auto pt = assign;
          pt[j] = root;
          if (!taken(pt)) found.push_back(pt);
        };
        if (phase == 1) {
          if (deg != 1) continue;
          push_root(-coeff[0] / coeff[1]);
        } else {
          if (deg < 2) continue;
          // Clear denominators, then try num/den candidates with
          // num | a_0 and den | a_deg, both bounded.
          BigInt lcm_den(1);
          for (long i = 0; i <= deg; ++i)
            lcm_den = lcm(lcm_den, denominator(coeff[(size_t)i]));
          std::vector<BigInt> ic((size_t)deg + 1);
          for (long i = 0; i <= deg; ++i)
            ic[(size_t)i] = numerator(coeff[(size_t)i]) * (lcm_den / denominator(coeff[(size_t)i]));
          if (ic[0] == 0) {
            push_root(Rational(0));
            continue;
          }
          const long RB = 50;
          for (long num = -RB; num <= RB && found.size() < m; ++num) {
            if (num == 0 || ic[0] % num != 0) continue;
            for (long den = 1; den <= RB; ++den) {
              if (ic[(size_t)deg] % den != 0) continue;
              Rational cand(num, den);
              Rational val(0);
              for (long i = deg; i >= 0; --i) val = val * cand + Rational(ic[(size_t)i]);
              if (val == 0) {
                push_root(cand);
                break;
              }
            }
          }
        }
      }
    }
  }
  if (found.size() < m)
    fail(ErrKind::FiberPointsNotFound,
         "no " + std::to_string(m) + " rational points with p = " + rational_str(c) +
             " found by the exact heuristics");
  found.resize(m);
  return found;
}

std::vector<std::vector<std::complex<double>>> fiber_points_approx(const QPoly& p,
                                                                   const Rational& c,
                                                                   size_t m) {
  if (p.is_constant()) fail(ErrKind::InvalidInput, "p must be non-constant");
  size_t k = p.ctx()->arity();
  size_t j = 0;
  for (size_t i = 0; i < k; ++i)
    if (p.degree_in(i) >= 1) { j = i; break; }
  std::vector<std::vector<std::complex<double>>> out;
  for (size_t n = 0; out.size() < m && n < 64 * m + 64; ++n) {
    std::vector<std::complex<double>> assign(k, {0.0, 0.0});
    size_t code = n;
    for (size_t i = 0; i < k; ++i) {
      if (i == j) continue;
      assign[i] = {(double)(code % 7), (double)((code / 7) % 3)};
      code /= 21;
    }
    long dj = p.degree_in(j);
    std::vector<std::complex<double>> coeff((size_t)dj + 1);
    for (const auto& [e, co] : p.terms()) {
      std::complex<double> term((double)numerator(co) / (double)denominator(co), 0.0);
      for (size_t i = 0; i < k; ++i) {
        if (i == j) continue;
        for (uint32_t r = 0; r < e[i]; ++r) term *= assign[i];
      }
      coeff[e[j]] += term;
    }
    coeff[0] -= std::complex<double>((double)numerator(c) / (double)denominator(c), 0.0);
    long deg = dj;
    while (deg > 0 && std::abs(coeff[(size_t)deg]) < 1e-12) --deg;
    if (deg < 1) continue;
    // Durand-Kerner.
    std::vector<std::complex<double>> roots(deg);
    for (long i = 0; i < deg; ++i)
      roots[(size_t)i] = std::pow(std::complex<double>(0.4, 0.9), (double)i);
    for (int it = 0; it < 200; ++it) {
      for (long i = 0; i < deg; ++i) {
        std::complex<double> num = coeff[(size_t)deg];
        std::complex<double> x = roots[(size_t)i];
        std::complex<double> val(0.0, 0.0);
        for (long d = deg; d >= 0; --d) val = val * x + coeff[(size_t)d];
        std::complex<double> den = coeff[(size_t)deg];
        for (long q2 = 0; q2 < deg; ++q2)
          if (q2 != i) den *= (x - roots[(size_t)q2]);
        (void)num;
        roots[(size_t)i] = x - val / den;
      }
    }
    for (long i = 0; i < deg && out.size() < m; ++i) {
      auto pt = assign;
      pt[j] = roots[(size_t)i];
      bool dup = false;
      for (const auto& o : out) {
        bool same = true;
        for (size_t u2 = 0; u2 < k; ++u2)
          if (std::abs(o[u2] - pt[u2]) > 1e-7) { same = false; break; }
        dup = dup || same;
      }
      if (!dup) out.push_back(pt);
    }
  }
  if (out.size() < m) fail(ErrKind::FiberPointsNotFound, "approximate fiber search failed");
  return out;
}

namespace {

// u (or v) image of a one-parameter coordinate flow applied to P as a
// univariate polynomial in the time. q(z) = z throughout.
std::vector<Rational> flow_moved_coord(const HypersurfaceX& X, Side side, size_t dir,
                                       const XPoint& P) {
  // LIFT1: x_d' = x_d + t*v, u' = u + (p(x + t*v e_d) - p(x))/v; with v = 0
  // the exact divided form leaves u' = u + t * dp/dx_d(x).
  Rational fixv = side == Side::U0 ? P.v : P.u;
  Rational moving = side == Side::U0 ? P.u : P.v;
  // Coefficients in t of (p(x + t*fixv*e_d) - p(x)) / fixv, computed via a
  // univariate shift: exact when fixv != 0; when fixv == 0 the flow only
  // contributes t * dp/dx_d.
  std::vector<Rational> out;
  if (fixv == 0) {
    out = {moving, X.p.diff(dir).evaluate(P.x)};
    return out;
  }
  long d = X.p.degree_in(dir);
  out.assign((size_t)std::max(1L, d) + 1, Rational(0));
  out[0] = moving;
  // p(x + s e_d) = sum_n p^{(n)}_dir(x)/n! * s^n with s = t*fixv.
  QPoly dn = X.p;
  Rational fact(1);
  Rational spow(1);
  for (long n = 1; n <= d; ++n) {
    dn = dn.diff(dir);
    fact *= n;
    spow *= fixv;
    out[(size_t)n] = dn.evaluate(P.x) * spow / (fact * fixv);
  }
  return out;
}

bool poly_is_zero(const std::vector<Rational>& c) {
  for (const auto& x : c)
    if (x != 0) return false;
  return true;
}

Rational eval_coeffs(const std::vector<Rational>& c, const Rational& t) {
  Rational acc(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

XGenerator coordinate_flow(const HypersurfaceX& X, Side side, size_t dir, const Rational& t) {
  static Ctx uni = make_ctx({"z"});
  return XGenerator::lift(side == Side::U0 ? XKind::LIFT1 : XKind::LIFT2, X.xctx->name(dir),
                          QPoly::constant(X.xctx, Rational(1)), QPoly::variable(uni, (size_t)0),
                          t);
}

void apply_gen_all(const HypersurfaceX& X, const XGenerator& g, std::vector<XPoint>& pts) {
  for (auto& P : pts) P = apply_xgen(X, g, P);
}

// Deterministic time choice: the current point's moved coordinate must
// become nonzero while all `protected_idx` points keep theirs nonzero.
Rational choose_time(const HypersurfaceX& X, Side side, size_t dir,
                     const std::vector<XPoint>& pts, size_t current,
                     const std::vector<size_t>& protected_idx) {
  auto cur_poly = flow_moved_coord(X, side, dir, pts[current]);
  for (size_t n = 0;; ++n) {
    Rational t = time_candidate(n);
    if (eval_coeffs(cur_poly, t) == 0) continue;
    bool ok = true;
    for (size_t idx : protected_idx) {
      auto c = flow_moved_coord(X, side, dir, pts[idx]);
      if (eval_coeffs(c, t) == 0) { ok = false; break; }
    }
    if (ok) return t;
    if (n > 10000) fail(ErrKind::InvalidInput, "time search did not terminate");
  }
}

// Make g(xbar(P)) != 0 by coordinate flows (side's fixed coordinate is
// nonzero at P, so the flows actually move xbar). Emits the flows into
// `word` and updates all points.
void make_nonzero_at(const HypersurfaceX& X, Side side, const QPoly& g, size_t current,
                     std::vector<XPoint>& pts, const std::vector<size_t>& protected_idx,
                     AutoWord& word, int depth = 0) {
  if (depth > (int)X.k() + 2) fail(ErrKind::InvalidInput, "escape recursion too deep");
  if (g.is_zero()) fail(ErrKind::InvalidInput, "cannot make the zero polynomial nonzero");
  if (g.evaluate(pts[current].x) != 0) return;
  // g is zero at the point, hence non-constant.
  size_t e = 0;
  for (size_t i = 0; i < X.k(); ++i)
    if (g.degree_in(i) >= 1) { e = i; break; }
  long J = g.degree_in(e);
  QPoly lead(g.ctx());
  for (const auto& [ex, co] : g.terms())
    if ((long)ex[e] == J) {
      Exps d2 = ex;
      d2[e] = 0;
      lead.add_term(d2, co);
    }
  make_nonzero_at(X, side, lead, current, pts, protected_idx, word, depth + 1);
  // Flow along e: x_e moves by t*fix (fix != 0); g restricted to that line
  // is a degree-J polynomial in t with nonzero leading coefficient.
  Rational fix = side == Side::U0 ? pts[current].v : pts[current].u;
  if (fix == 0) fail(ErrKind::InvalidInput, "escape flow requires a nonzero fixed coordinate");
  for (size_t n = 0;; ++n) {
    Rational t = time_candidate(n);
    // value of g after the flow
    auto probe = pts[current];
    probe.x[e] += t * fix;
    if (g.evaluate(probe.x) == 0) continue;
    bool ok = true;
    for (size_t idx : protected_idx) {
      auto c = flow_moved_coord(X, side, e, pts[idx]);
      if (eval_coeffs(c, t) == 0) { ok = false; break; }
    }
    if (!ok) continue;
    XGenerator gen = coordinate_flow(X, side, e, t);
    apply_gen_all(X, gen, pts);
    word.push_back(gen);
    return;
  }
}

} // namespace

AutoWord move_off_hypersurface(const HypersurfaceX& X, std::vector<XPoint>& pts, Side side) {
  for (size_t i = 0; i < pts.size(); ++i) {
    if (!is_smooth_point(X, pts[i])) fail(ErrKind::InvalidInput, "singular input point");
    for (size_t j = i + 1; j < pts.size(); ++j)
      if (pts[i] == pts[j]) fail(ErrKind::InvalidInput, "duplicate input point");
  }
  AutoWord word;
  auto moved = [&](const XPoint& P) { return side == Side::U0 ? P.u : P.v; };

  for (size_t i = 0; i < pts.size(); ++i) {
    std::vector<size_t> protected_idx;
    for (size_t j = 0; j < i; ++j) protected_idx.push_back(j);
    int guard = 0;
    while (moved(pts[i]) == 0) {
      if (++guard > 64) fail(ErrKind::InvalidInput, "move_off did not terminate");
      // A coordinate flow whose effect on the moved coordinate is a
      // nonzero polynomial in t.
      size_t dir = X.k();
      for (size_t d = 0; d < X.k(); ++d) {
        auto c = flow_moved_coord(X, side, d, pts[i]);
        c[0] = Rational(0);
        if (!poly_is_zero(c)) { dir = d; break; }
      }
      if (dir < X.k()) {
        Rational t = choose_time(X, side, dir, pts, i, protected_idx);
        XGenerator g = coordinate_flow(X, side, dir, t);
        apply_gen_all(X, g, pts);
        word.push_back(g);
        continue;
      }
      // Stuck: every coordinate line through xbar keeps p constant. Move
      // xbar first so that the top coefficient of p in some variable
      // becomes nonzero (possible: the fixed coordinate is nonzero here,
      // since a stuck point with both u = v = 0 would be singular).
      size_t d0 = 0;
      for (size_t d = 0; d < X.k(); ++d)
        if (X.p.degree_in(d) >= 1) { d0 = d; break; }
      long J = X.p.degree_in(d0);
      QPoly lead(X.p.ctx());
      for (const auto& [ex, co] : X.p.terms())
        if ((long)ex[d0] == J) {
          Exps d2 = ex;
          d2[d0] = 0;
          lead.add_term(d2, co);
        }
      make_nonzero_at(X, side, lead, i, pts, protected_idx, word);
    }
  }
  return word;
}

StagedWord gather_into_U1(const HypersurfaceX& X, std::vector<XPoint> pts) {
  StagedWord out;
  auto mark_stage = [&](const std::string& name, size_t begin) {
    out.stages.push_back({name, begin, out.word.size(), pts});
  };

  size_t begin = out.word.size();
  AutoWord off = move_off_hypersurface(X, pts, Side::V0);
  out.word.insert(out.word.end(), off.begin(), off.end());
  mark_stage("move-off-V0", begin);

  // Group by v value, ascending.
  std::map<Rational, std::vector<size_t>> groups;
  for (size_t i = 0; i < pts.size(); ++i) groups[pts[i].v].push_back(i);

  static Ctx uni = make_ctx({"z"});
  for (auto& [c0, idxs] : groups) {
    bool all_in = true;
    for (size_t i : idxs) all_in = all_in && pts[i].u == 1;
    if (all_in) continue;
    begin = out.word.size();

    std::vector<Rational> others;
    for (auto& [cj, _] : groups)
      if (cj != c0) others.push_back(cj);

    std::vector<std::vector<Rational>> srcs, tgts;
    for (size_t i : idxs) srcs.push_back(pts[i].x);
    tgts = fiber_points(X.p, c0, idxs.size());

    AutoWord base = g0_transitive(X.xctx, srcs, tgts);

    // Stabilizer polynomial: q(z) = z^2 * prod (z - c_j), normalized so
    // q(c0) = 1; the double root at 0 keeps V_0 fixed pointwise.
    QPoly z = QPoly::variable(uni, (size_t)0);
    QPoly q = z * z;
    for (const auto& cj : others) q = q * (z - QPoly::constant(uni, cj));
    Rational norm = q.evaluate({c0});
    if (norm == 0) fail(ErrKind::InvalidInput, "stabilizer normalization vanished");
    q = q.scaled(Rational(1) / norm);

    for (const auto& g : base) {
      const auto& s = std::get<ElemShear>(g);
      XGenerator lg = XGenerator::lift(XKind::LIFT1, s.dir, s.h, q, s.t);
      apply_gen_all(X, lg, pts);
      out.word.push_back(lg);
    }
    for (size_t n = 0; n < idxs.size(); ++n) {
      if (pts[idxs[n]].x != tgts[n] || pts[idxs[n]].u != 1 || pts[idxs[n]].v != c0)
        fail(ErrKind::InvalidInput, "group gather verification failed");
    }
    mark_stage("gather-v=" + rational_str(c0), begin);
  }
  return out;
}

TransitivityPlan solve(const HypersurfaceX& X, const std::vector<XPoint>& sources,
                       const std::vector<XPoint>& targets) {
  if (X.k() < 2)
    fail(ErrKind::InvalidInput,
         "k >= 2 required: for k = 1 the action is transitive but not 2-transitive");
  if (sources.size() != targets.size() || sources.empty())
    fail(ErrKind::InvalidInput, "source/target count mismatch");
  for (const auto& P : sources)
    if (!is_smooth_point(X, P)) fail(ErrKind::InvalidInput, "singular source point");
  for (const auto& P : targets)
    if (!is_smooth_point(X, P)) fail(ErrKind::InvalidInput, "singular target point");

  TransitivityPlan plan;
  auto push_stage = [&](const StagedWord& sw, size_t offset, const std::string& prefix) {
    for (auto st : sw.stages) {
      st.word_begin += offset;
      st.word_end += offset;
      st.name = prefix + st.name;
      plan.trace.push_back(std::move(st));
    }
  };

  StagedWord wp = gather_into_U1(X, sources);
  std::vector<XPoint> simg =
      wp.stages.empty() ? sources : wp.stages.back().points_after;
  StagedWord wq = gather_into_U1(X, targets);
  std::vector<XPoint> timg =
      wq.stages.empty() ? targets : wq.stages.back().points_after;

  plan.word = wp.word;
  push_stage(wp, 0, "P:");

  // Midgame in U_1 through the LIFT2 side with q(z) = z.
  std::vector<std::vector<Rational>> sx, tx;
  for (const auto& P : simg) sx.push_back(P.x);
  for (const auto& P : timg) tx.push_back(P.x);
  static Ctx uni = make_ctx({"z"});
  size_t mid_begin = plan.word.size();
  std::vector<XPoint> mid_pts = simg;
  if (sx != tx) {
    AutoWord base = g0_transitive(X.xctx, sx, tx);
    for (const auto& g : base) {
      const auto& s = std::get<ElemShear>(g);
      XGenerator lg =
          XGenerator::lift(XKind::LIFT2, s.dir, s.h, QPoly::variable(uni, (size_t)0), s.t);
      for (auto& P : mid_pts) P = apply_xgen(X, lg, P);
      plan.word.push_back(lg);
    }
  }
  plan.trace.push_back({"midgame", mid_begin, plan.word.size(), mid_pts});

  size_t inv_begin = plan.word.size();
  AutoWord winv = invert_word(wq.word);
  plan.word.insert(plan.word.end(), winv.begin(), winv.end());
  std::vector<XPoint> final_pts = mid_pts;
  for (auto& P : final_pts) {
    XPoint cur = P;
    for (const auto& g : winv) cur = apply_xgen(X, std::get<XGenerator>(g), cur);
    P = cur;
  }
  plan.trace.push_back({"undo-target-gather", inv_begin, plan.word.size(), final_pts});

  for (size_t i = 0; i < targets.size(); ++i)
    if (!(final_pts[i] == targets[i]))
      fail(ErrKind::InvalidInput, "transitivity plan verification failed");

  plan.word_length = plan.word.size();
  plan.max_coeff_bits = word_max_coeff_bits(plan.word);
  return plan;
}

bool verify_plan(const HypersurfaceX& X, const TransitivityPlan& plan,
                 const std::vector<XPoint>& sources, const std::vector<XPoint>& targets) {
  if (sources.size() != targets.size()) return false;
  std::vector<XPoint> pts = sources;
  size_t at = 0;
  auto stage = plan.trace.begin();
  try {
    for (const auto& g : plan.word) {
      const auto* xg = std::get_if<XGenerator>(&g);
      if (!xg) return false;
      for (auto& P : pts) {
        P = apply_xgen(X, *xg, P); // throws if any image leaves X
      }
      ++at;
      while (stage != plan.trace.end() && stage->word_end == at) {
        if (stage->word_begin <= at && !stage->points_after.empty() &&
            stage->points_after != pts)
          return false;
        ++stage;
      }
    }
  } catch (const Error&) {
    return false;
  }
  for (size_t i = 0; i < targets.size(); ++i)
    if (!(pts[i] == targets[i])) return false;
  return true;
}

int word_max_coeff_bits(const AutoWord& w) {
  int bits = 0;
  auto upd_poly = [&](const QPoly& p) {
    for (const auto& [e, c] : p.terms()) bits = std::max(bits, bit_size(c));
  };
  for (const auto& g : w) {
    if (const auto* s = std::get_if<ElemShear>(&g)) {
      bits = std::max(bits, bit_size(s->t));
      upd_poly(s->h);
    } else {
      const auto& x = std::get<XGenerator>(g);
      if (x.kind == XKind::EPS) continue;
      bits = std::max(bits, bit_size(x.t));
      upd_poly(x.h);
      upd_poly(x.q);
    }
  }
  return bits;
}

} // namespace affmod
