#include "affmod/autoword.hpp"

#include <sstream>

#include "affmod/parse.hpp"

namespace affmod {

Rational parse_rational_str(const std::string& s) {
  size_t slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) fail(ErrKind::SyntaxError, "zero denominator in rational");
    return Rational(num, den);
  } catch (const std::exception&) {
    fail(ErrKind::SyntaxError, "bad rational literal '" + s + "'");
  }
}

static Ctx qvar_ctx() {
  static Ctx c = make_ctx({"z"});
  return c;
}

XGenerator XGenerator::lift(XKind kind, std::string dir, QPoly h, QPoly q, Rational t) {
  if (kind == XKind::EPS) fail(ErrKind::InvalidInput, "EPS takes no data");
  std::vector<Rational> zero{Rational(0)};
  if (q.evaluate(zero) != 0)
    fail(ErrKind::InvalidInput, "q(0) != 0: the lift is not polynomial");
  return raw(kind, std::move(dir), std::move(h), std::move(q), std::move(t));
}

XGenerator XGenerator::raw(XKind kind, std::string dir, QPoly h, QPoly q, Rational t) {
  XGenerator g;
  g.kind = kind;
  g.dir = std::move(dir);
  g.h = std::move(h);
  g.q = std::move(q);
  g.t = std::move(t);
  if (g.h.ctx()->index_of(g.dir) < 0) fail(ErrKind::InvalidInput, "unknown direction");
  if (g.h.degree_in(g.h.ctx()->require(g.dir)) > 0)
    fail(ErrKind::InvalidInput, "shear coefficient depends on its own direction");
  if (*g.q.ctx() != *qvar_ctx()) g.q = rename_ctx(g.q, qvar_ctx());
  return g;
}

AutoWord invert_word(const AutoWord& w) {
  AutoWord out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    WordGen g = *it;
    if (auto* s = std::get_if<ElemShear>(&g)) s->t = -s->t;
    else {
      auto& x = std::get<XGenerator>(g);
      if (x.kind != XKind::EPS) x.t = -x.t;
    }
    out.push_back(std::move(g));
  }
  return out;
}

QPolyMap shear_polymap(const ElemShear& s, const Ctx& ctx) {
  QPolyMap m = QPolyMap::identity(ctx);
  size_t d = ctx->require(s.dir);
  m.images[d] = m.images[d] + embed(s.h, ctx).scaled(s.t);
  return m;
}

QPolyMap shear_polymap_symbolic(const ElemShear& s, const Ctx& ext, const std::string& tvar) {
  QPolyMap m = QPolyMap::identity(ext);
  size_t d = ext->require(s.dir);
  m.images[d] = m.images[d] + embed(s.h, ext) * QPoly::variable(ext, tvar);
  return m;
}

QPolyMap word_polymap(const AutoWord& w, const Ctx& ctx) {
  QPolyMap acc = QPolyMap::identity(ctx);
  for (const auto& g : w) {
    const auto* s = std::get_if<ElemShear>(&g);
    if (!s) fail(ErrKind::InvalidInput, "word contains non-shear generators");
    acc = compose(shear_polymap(*s, ctx), acc);
  }
  return acc;
}

std::vector<Rational> apply_word_point(const AutoWord& w, const Ctx& ctx,
                                       std::vector<Rational> p) {
  for (const auto& g : w) {
    const auto* s = std::get_if<ElemShear>(&g);
    if (!s) fail(ErrKind::InvalidInput, "word contains non-shear generators");
    size_t d = ctx->require(s->dir);
    p[d] += s->t * embed(s->h, ctx).evaluate(p);
  }
  return p;
}

std::string word_to_text(const AutoWord& w) {
  std::ostringstream os;
  for (const auto& g : w) {
    if (const auto* s = std::get_if<ElemShear>(&g)) {
      os << "SHEAR d=" << s->dir << " h=" << print_poly(s->h)
         << " t=" << rational_str(s->t) << "\n";
    } else {
      const auto& x = std::get<XGenerator>(g);
      if (x.kind == XKind::EPS) {
        os << "EPS\n";
      } else {
        os << (x.kind == XKind::LIFT1 ? "LIFT1" : "LIFT2") << " d=" << x.dir
           << " h=" << print_poly(x.h) << " q=" << print_poly(x.q)
           << " t=" << rational_str(x.t) << "\n";
      }
    }
  }
  return os.str();
}

namespace {

// Values run from after "key=" to the next " <k>=" (keys are single
// letters and '=' never occurs inside canonical polynomials).
std::string field_of(const std::string& line, const std::string& key,
                     const std::vector<std::string>& later_keys) {
  std::string tag = key + "=";
  size_t at = line.find(" " + tag);
  if (at == std::string::npos) fail(ErrKind::SyntaxError, "missing " + tag + " in: " + line);
  size_t start = at + tag.size() + 1;
  size_t end = line.size();
  for (const auto& k : later_keys) {
    size_t e = line.find(" " + k + "=", start);
    if (e != std::string::npos && e < end) end = e;
  }
  std::string v = line.substr(start, end - start);
  while (!v.empty() && v.back() == ' ') v.pop_back();
  return v;
}

} // namespace

AutoWord word_from_text(const std::string& text, const Ctx& base_ctx) {
  AutoWord out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "EPS") {
      out.push_back(XGenerator::eps());
    } else if (kind == "SHEAR") {
      ElemShear s;
      s.dir = field_of(line, "d", {"h", "t"});
      s.h = qparse(field_of(line, "h", {"t"}), base_ctx);
      s.t = parse_rational_str(field_of(line, "t", {}));
      out.push_back(std::move(s));
    } else if (kind == "LIFT1" || kind == "LIFT2") {
      std::string d = field_of(line, "d", {"h", "q", "t"});
      QPoly h = qparse(field_of(line, "h", {"q", "t"}), base_ctx);
      QPoly q = qparse(field_of(line, "q", {"t"}), qvar_ctx());
      Rational t = parse_rational_str(field_of(line, "t", {}));
      out.push_back(XGenerator::raw(kind == "LIFT1" ? XKind::LIFT1 : XKind::LIFT2,
                                    d, std::move(h), std::move(q), std::move(t)));
    } else if (kind == "PLANE") {
      // Consumed by the rectify reader; ignore here.
      continue;
    } else {
      fail(ErrKind::SyntaxError, "unknown word line: " + line);
    }
  }
  return out;
}

AutoWord sl_decompose(const std::vector<std::vector<Rational>>& mat, const Ctx& ctx) {
  size_t n = mat.size();
  if (n == 0 || n != ctx->arity()) fail(ErrKind::InvalidInput, "matrix size mismatch");
  for (const auto& row : mat)
    if (row.size() != n) fail(ErrKind::InvalidInput, "matrix is not square");

  // det via fraction-free-ish Gaussian elimination on a copy.
  {
    auto a = mat;
    Rational det(1);
    for (size_t c = 0; c < n; ++c) {
      size_t piv = c;
      while (piv < n && a[piv][c] == 0) ++piv;
      if (piv == n) fail(ErrKind::InvalidInput, "matrix is singular");
      if (piv != c) {
        std::swap(a[piv], a[c]);
        det = -det;
      }
      det *= a[c][c];
      for (size_t r = c + 1; r < n; ++r) {
        Rational f = a[r][c] / a[c][c];
        for (size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
      }
    }
    if (det != 1) fail(ErrKind::InvalidInput, "matrix determinant is not 1");
  }

  auto a = mat;
  std::vector<std::tuple<size_t, size_t, Rational>> ops; // row_i += c * row_j
  auto rowop = [&](size_t i, size_t j, const Rational& c) {
    if (c == 0) return;
    for (size_t col = 0; col < n; ++col) a[i][col] += c * a[j][col];
    ops.emplace_back(i, j, c);
  };

  for (size_t c = 0; c < n; ++c) {
    if (a[c][c] == 0) {
      size_t r = c;
      for (size_t k = 0; k < n; ++k)
        if (k != c && a[k][c] != 0) { r = k; break; }
      rowop(c, r, Rational(1));
    }
    if (a[c][c] != 1) {
      size_t r = n; // a helper row with nonzero entry in column c
      for (size_t k = 0; k < n; ++k)
        if (k != c && a[k][c] != 0) { r = k; break; }
      if (r == n) {
        r = (c + 1) % n;
        rowop(r, c, Rational(1));
      }
      rowop(c, r, (Rational(1) - a[c][c]) / a[r][c]);
    }
    for (size_t r = 0; r < n; ++r)
      if (r != c && a[r][c] != 0) rowop(r, c, -a[r][c]);
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (a[i][j] != (i == j ? 1 : 0))
        fail(ErrKind::InvalidInput, "transvection elimination failed");

  // ops give F_s...F_1 M = I; the word applies the inverted ops reversed.
  AutoWord word;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    auto [i, j, c] = *it;
    word.push_back(ElemShear{ctx->name(i), QPoly::variable(ctx, j), -c});
  }

  // Verify by matrix multiply: applying the word to e_k columns recovers mat.
  for (size_t k = 0; k < n; ++k) {
    std::vector<Rational> e(n, Rational(0));
    e[k] = 1;
    auto img = apply_word_point(word, ctx, e);
    for (size_t i = 0; i < n; ++i)
      if (img[i] != mat[i][k]) fail(ErrKind::InvalidInput, "sl_decompose verification failed");
  }
  return word;
}

long default_inverse_degree_bound(const QPolyMap& m) {
  long dmax = 1;
  for (const auto& p : m.images) dmax = std::max(dmax, p.degree());
  long D = 1;
  for (size_t i = 1; i < m.images.size(); ++i) {
    D *= dmax;
    if (D > 64) return 64; // keep the linear solve at desk scale
  }
  return D;
}

QPolyMap invert_by_degree_bound(const QPolyMap& m, long D) {
  require_same_ctx(m.source, m.target);
  const Ctx& ctx = m.source;
  size_t n = ctx->arity();

  // Basis monomials of total degree <= D and their images under m.
  std::vector<Exps> basis;
  Exps cur(n, 0);
  auto rec = [&](auto&& self, size_t pos, long left) -> void {
    if (pos == n) {
      basis.push_back(cur);
      return;
    }
    for (long e = 0; e <= left; ++e) {
      cur[pos] = (uint32_t)e;
      self(self, pos + 1, left - e);
    }
    cur[pos] = 0;
  };
  rec(rec, 0, D);

  std::vector<QPoly> basis_img;
  basis_img.reserve(basis.size());
  for (const auto& e : basis)
    basis_img.push_back(substitute(QPoly::monomial(ctx, e, Rational(1)), m));

  // Row space: all monomials appearing in any image or target.
  std::map<Exps, size_t, GradedLexLess> rows;
  for (const auto& p : basis_img)
    for (const auto& [e, c] : p.terms()) rows.emplace(e, 0);
  for (size_t i = 0; i < n; ++i) {
    Exps e(n, 0);
    e[i] = 1;
    rows.emplace(e, 0);
  }
  size_t ri = 0;
  for (auto& [e, idx] : rows) idx = ri++;

  size_t R = rows.size(), C = basis.size();
  std::vector<QPoly> out_imgs;
  for (size_t comp = 0; comp < n; ++comp) {
    std::vector<std::vector<Rational>> M(R, std::vector<Rational>(C + 1, Rational(0)));
    for (size_t c = 0; c < C; ++c)
      for (const auto& [e, coef] : basis_img[c].terms()) M[rows.at(e)][c] = coef;
    Exps te(n, 0);
    te[comp] = 1;
    M[rows.at(te)][C] = 1;

    // Gaussian elimination with partial pivoting by first nonzero.
    std::vector<long> where(C, -1);
    size_t row = 0;
    for (size_t col = 0; col < C && row < R; ++col) {
      size_t sel = row;
      while (sel < R && M[sel][col] == 0) ++sel;
      if (sel == R) continue;
      std::swap(M[sel], M[row]);
      Rational inv = Rational(1) / M[row][col];
      for (size_t j = col; j <= C; ++j) M[row][j] *= inv;
      for (size_t r = 0; r < R; ++r) {
        if (r == row || M[r][col] == 0) continue;
        Rational f = M[r][col];
        for (size_t j = col; j <= C; ++j) M[r][j] -= f * M[row][j];
      }
      where[col] = (long)row;
      ++row;
    }
    for (size_t r = row; r < R; ++r)
      if (M[r][C] != 0)
        fail(ErrKind::NoInverseWithinDegree,
             "no polynomial inverse with components of degree <= " + std::to_string(D));

    QPoly g(ctx);
    for (size_t c = 0; c < C; ++c)
      if (where[c] >= 0 && M[(size_t)where[c]][C] != 0)
        g.add_term(basis[c], M[(size_t)where[c]][C]);
    out_imgs.push_back(std::move(g));
  }

  QPolyMap inv(ctx, ctx, std::move(out_imgs));
  QPolyMap idm = QPolyMap::identity(ctx);
  if (!(compose(inv, m) == idm) || !(compose(m, inv) == idm))
    fail(ErrKind::NoInverseWithinDegree, "inverse verification failed");
  return inv;
}

} // namespace affmod
