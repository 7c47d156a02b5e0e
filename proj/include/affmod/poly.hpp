#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "affmod/context.hpp"
#include "affmod/fields.hpp"

namespace affmod {

using Exps = std::vector<uint32_t>;

inline uint64_t total_degree(const Exps& e) {
  uint64_t d = 0;
  for (auto x : e) d += x;
  return d;
}

// Graded lexicographic: total degree first, then lex with earlier
// variables ranked higher.
struct GradedLexLess {
  bool operator()(const Exps& a, const Exps& b) const {
    uint64_t da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  }
};

// Sparse multivariate polynomial over F. Immutable by convention: every
// operation returns a fresh value in canonical form (no zero coefficients,
// exponent arity == context arity).
template <class F>
class Poly {
public:
  using Elem = typename F::Elem;
  using Terms = std::map<Exps, Elem, GradedLexLess>;

  Poly() = default;
  explicit Poly(Ctx ctx) : ctx_(std::move(ctx)) {}

  static Poly zero(Ctx ctx) { return Poly(std::move(ctx)); }
  static Poly constant(Ctx ctx, const Elem& c) {
    Poly p(std::move(ctx));
    if (!F::is_zero(c)) p.terms_[Exps(p.ctx_->arity(), 0)] = c;
    return p;
  }
  static Poly variable(Ctx ctx, size_t i) {
    Poly p(std::move(ctx));
    Exps e(p.ctx_->arity(), 0);
    e.at(i) = 1;
    p.terms_[e] = F::from_long(1);
    return p;
  }
  static Poly variable(const Ctx& ctx, const std::string& name) {
    return variable(ctx, ctx->require(name));
  }
  static Poly monomial(Ctx ctx, Exps e, const Elem& c) {
    Poly p(std::move(ctx));
    if (e.size() != p.ctx_->arity()) fail(ErrKind::InvalidInput, "exponent arity");
    if (!F::is_zero(c)) p.terms_[std::move(e)] = c;
    return p;
  }

  const Ctx& ctx() const { return ctx_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
  }
  Elem constant_value() const {
    if (terms_.empty()) return F::zero();
    if (!is_constant()) fail(ErrKind::InvalidInput, "not a constant polynomial");
    return terms_.begin()->second;
  }

  long degree() const {
    if (terms_.empty()) return -1;
    return (long)total_degree(terms_.rbegin()->first);
  }
  long degree_in(size_t var) const {
    long d = -1;
    for (const auto& [e, c] : terms_)
      if ((long)e[var] > d) d = e[var];
    return terms_.empty() ? -1 : d;
  }

  // Leading term in graded lex.
  const Exps& lead_exps() const {
    if (terms_.empty()) fail(ErrKind::InvalidInput, "zero polynomial has no lead");
    return terms_.rbegin()->first;
  }
  const Elem& lead_coeff() const {
    if (terms_.empty()) fail(ErrKind::InvalidInput, "zero polynomial has no lead");
    return terms_.rbegin()->second;
  }

  bool operator==(const Poly& o) const {
    if (*ctx_ != *o.ctx_ || terms_.size() != o.terms_.size()) return false;
    auto it = terms_.begin();
    auto jt = o.terms_.begin();
    for (; it != terms_.end(); ++it, ++jt)
      if (it->first != jt->first || !F::eq(it->second, jt->second)) return false;
    return true;
  }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  Poly operator+(const Poly& o) const {
    require_same_ctx(ctx_, o.ctx_);
    Poly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
  }
  Poly operator-(const Poly& o) const {
    require_same_ctx(ctx_, o.ctx_);
    Poly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, F::neg(c));
    return r;
  }
  Poly operator-() const {
    Poly r(ctx_);
    for (const auto& [e, c] : terms_) r.terms_[e] = F::neg(c);
    return r;
  }
  Poly operator*(const Poly& o) const {
    require_same_ctx(ctx_, o.ctx_);
    Poly r(ctx_);
    for (const auto& [e1, c1] : terms_)
      for (const auto& [e2, c2] : o.terms_) {
        Exps e = e1;
        for (size_t i = 0; i < e.size(); ++i) e[i] += e2[i];
        r.add_term(e, F::mul(c1, c2));
      }
    return r;
  }
  Poly scaled(const Elem& c) const {
    Poly r(ctx_);
    if (F::is_zero(c)) return r;
    for (const auto& [e, k] : terms_) r.terms_[e] = F::mul(k, c);
    return r;
  }
  Poly pow(long n) const {
    if (n < 0) fail(ErrKind::InvalidInput, "pow with negative exponent");
    Poly r = constant(ctx_, F::from_long(1));
    Poly b = *this;
    while (n) {
      if (n & 1) r = r * b;
      b = b * b;
      n >>= 1;
    }
    return r;
  }

  // Formal partial derivative.
  Poly diff(size_t var) const {
    Poly r(ctx_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exps d = e;
      d[var] -= 1;
      r.add_term(d, F::mul(c, F::from_long((long)e[var])));
    }
    return r;
  }
  Poly diff(const std::string& v) const { return diff(ctx_->require(v)); }

  Elem evaluate(const std::vector<Elem>& point) const {
    if (point.size() != ctx_->arity()) fail(ErrKind::InvalidInput, "point arity");
    Elem acc = F::zero();
    for (const auto& [e, c] : terms_) {
      Elem t = c;
      for (size_t i = 0; i < e.size(); ++i)
        for (uint32_t k = 0; k < e[i]; ++k) t = F::mul(t, point[i]);
      acc = F::add(acc, t);
    }
    return acc;
  }

  void add_term(const Exps& e, const Elem& c) {
    if (F::is_zero(c)) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second = F::add(it->second, c);
      if (F::is_zero(it->second)) terms_.erase(it);
    }
  }

private:
  Ctx ctx_;
  Terms terms_;
};

// q with a = b*q, or NotDivisible. Leading-term reduction in graded lex;
// when b | a the leading term of the remainder is always reducible, so the
// loop terminates with remainder zero exactly when the division is exact.
template <class F>
Poly<F> exact_divide(const Poly<F>& a, const Poly<F>& b) {
  require_same_ctx(a.ctx(), b.ctx());
  if (b.is_zero()) fail(ErrKind::InvalidInput, "division by zero polynomial");
  Poly<F> q(a.ctx());
  Poly<F> r = a;
  const Exps& be = b.lead_exps();
  while (!r.is_zero()) {
    const Exps& re = r.lead_exps();
    Exps d(re.size());
    for (size_t i = 0; i < re.size(); ++i) {
      if (re[i] < be[i]) fail(ErrKind::NotDivisible, "polynomial division is not exact");
      d[i] = re[i] - be[i];
    }
    auto c = F::div(r.lead_coeff(), b.lead_coeff());
    Poly<F> m = Poly<F>::monomial(a.ctx(), d, c);
    q = q + m;
    r = r - m * b;
  }
  return q;
}

template <class F>
bool divides(const Poly<F>& b, const Poly<F>& a) {
  try {
    (void)exact_divide(a, b);
    return true;
  } catch (const Error& e) {
    if (e.kind == ErrKind::NotDivisible) return false;
    throw;
  }
}

// g = v^mu * g1 with g1 not divisible by v, mu maximal.
template <class F>
std::pair<uint32_t, Poly<F>> divide_out_power(const Poly<F>& g, size_t var) {
  if (g.is_zero()) fail(ErrKind::InvalidInput, "divide_out_power of zero");
  uint32_t mu = UINT32_MAX;
  for (const auto& [e, c] : g.terms()) mu = e[var] < mu ? e[var] : mu;
  Poly<F> g1(g.ctx());
  for (const auto& [e, c] : g.terms()) {
    Exps d = e;
    d[var] -= mu;
    g1.add_term(d, c);
  }
  return {mu, g1};
}

template <class F>
std::pair<uint32_t, Poly<F>> divide_out_power(const Poly<F>& g, const std::string& v) {
  return divide_out_power(g, g.ctx()->require(v));
}

// a with the coefficients of b applied on a different context of the same
// arity (pure renaming).
template <class F>
Poly<F> rename_ctx(const Poly<F>& a, const Ctx& to) {
  if (to->arity() != a.ctx()->arity()) fail(ErrKind::ContextMismatch, "rename arity");
  Poly<F> r(to);
  for (const auto& [e, c] : a.terms()) r.add_term(e, c);
  return r;
}

// Embed into a context that contains all of a's variables (by name).
template <class F>
Poly<F> embed(const Poly<F>& a, const Ctx& to) {
  std::vector<size_t> where(a.ctx()->arity());
  for (size_t i = 0; i < a.ctx()->arity(); ++i) where[i] = to->require(a.ctx()->name(i));
  Poly<F> r(to);
  for (const auto& [e, c] : a.terms()) {
    Exps d(to->arity(), 0);
    for (size_t i = 0; i < e.size(); ++i) d[where[i]] = e[i];
    r.add_term(d, c);
  }
  return r;
}

using QPoly = Poly<RationalField>;
using CPoly = Poly<ComplexField>;

// Unit normalization: p / lead_coeff(p), used by golden comparisons.
template <class F>
Poly<F> monic(const Poly<F>& p) {
  if (p.is_zero()) return p;
  return p.scaled(F::inv(p.lead_coeff()));
}

template <class F>
bool equal_up_to_unit(const Poly<F>& a, const Poly<F>& b) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  return a.scaled(b.lead_coeff()) == b.scaled(a.lead_coeff());
}

} // namespace affmod
