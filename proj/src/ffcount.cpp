#include "affmod/ffcount.hpp"

#include <random>

namespace affmod {

bool is_prime_u32(uint32_t q) {
  if (q < 2) return false;
  for (uint32_t d = 2; (uint64_t)d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

namespace {

struct ModPoly {
  // Dense-ish: terms as (exps, coeff mod q).
  std::vector<std::pair<Exps, uint32_t>> terms;
  size_t arity = 0;

  static ModPoly from(const QPoly& p, uint32_t q) {
    ModPoly m;
    m.arity = p.ctx()->arity();
    for (const auto& [e, c] : p.terms()) {
      BigInt num = numerator(c) % q;
      BigInt den = denominator(c) % q;
      if (den == 0) fail(ErrKind::InvalidInput, "coefficient denominator not invertible mod q");
      long nv = (long)num, dv = (long)den;
      if (nv < 0) nv += q;
      // dv in (0, q)
      uint64_t inv = 1, base = (uint64_t)dv, e2 = q - 2;
      while (e2) {
        if (e2 & 1) inv = inv * base % q;
        base = base * base % q;
        e2 >>= 1;
      }
      uint32_t v = (uint32_t)((uint64_t)nv * inv % q);
      if (v) m.terms.emplace_back(e, v);
    }
    return m;
  }

  uint32_t eval(const std::vector<uint32_t>& pt, uint32_t q) const {
    uint64_t acc = 0;
    for (const auto& [e, c] : terms) {
      uint64_t t = c;
      for (size_t i = 0; i < arity; ++i)
        for (uint32_t r = 0; r < e[i]; ++r) t = t * pt[i] % q;
      acc = (acc + t) % q;
    }
    return (uint32_t)acc;
  }
};

} // namespace

uint64_t count_points(const std::vector<QPoly>& eqs, uint32_t q, uint64_t max_cells) {
  if (!is_prime_u32(q) || q > 251) fail(ErrKind::InvalidInput, "q must be prime and <= 251");
  if (eqs.empty()) fail(ErrKind::InvalidInput, "no equations");
  size_t vars = eqs[0].ctx()->arity();
  for (const auto& e : eqs) require_same_ctx(e.ctx(), eqs[0].ctx());
  uint64_t cells = 1;
  for (size_t i = 0; i < vars; ++i) {
    cells *= q;
    if (cells > max_cells) fail(ErrKind::BudgetExceeded, "enumeration budget exceeded");
  }
  std::vector<ModPoly> ms;
  for (const auto& e : eqs) ms.push_back(ModPoly::from(e, q));

  std::vector<uint32_t> pt(vars, 0);
  uint64_t count = 0;
  for (uint64_t idx = 0; idx < cells; ++idx) {
    uint64_t code = idx;
    for (size_t i = 0; i < vars; ++i) {
      pt[i] = (uint32_t)(code % q);
      code /= q;
    }
    bool all = true;
    for (const auto& m : ms)
      if (m.eval(pt, q) != 0) {
        all = false;
        break;
      }
    if (all) ++count;
  }
  return count;
}

CountReport uv_identity(const QPoly& p, uint32_t q, uint64_t max_cells) {
  if (!is_prime_u32(q) || q > 251) fail(ErrKind::InvalidInput, "q must be prime and <= 251");
  size_t k = p.ctx()->arity();
  uint64_t cells = 1;
  for (size_t i = 0; i < k + 2; ++i) {
    cells *= q;
    if (cells > max_cells) fail(ErrKind::BudgetExceeded, "enumeration budget exceeded");
  }
  ModPoly mp = ModPoly::from(p, q);

  // #{(u,v) : uv = c} per c, precomputed by enumeration of all q^2 pairs.
  std::vector<uint64_t> pair_count(q, 0);
  for (uint32_t u = 0; u < q; ++u)
    for (uint32_t v = 0; v < q; ++v) pair_count[(uint32_t)((uint64_t)u * v % q)]++;

  CountReport rep;
  rep.q = q;
  rep.k = k;
  std::vector<uint32_t> pt(k, 0);
  uint64_t xcells = 1;
  for (size_t i = 0; i < k; ++i) xcells *= q;
  for (uint64_t idx = 0; idx < xcells; ++idx) {
    uint64_t code = idx;
    for (size_t i = 0; i < k; ++i) {
      pt[i] = (uint32_t)(code % q);
      code /= q;
    }
    uint32_t val = mp.eval(pt, q);
    rep.n_x += pair_count[val];
    if (val == 0) ++rep.n_zero;
  }
  uint64_t qk = 1;
  for (size_t i = 0; i < k; ++i) qk *= q;
  rep.predicted = qk * (q - 1) + rep.n_zero * q;
  rep.match = rep.n_x == rep.predicted;
  return rep;
}

std::optional<std::vector<uint32_t>> singular_witness(const std::vector<QPoly>& eqs,
                                                      uint32_t q, uint64_t sample_budget,
                                                      uint64_t seed) {
  if (sample_budget < 1) fail(ErrKind::InvalidInput, "budget must be >= 1");
  if (eqs.empty()) return std::nullopt;
  if (!is_prime_u32(q) || q > 65521) fail(ErrKind::InvalidInput, "q must be a small prime");
  size_t vars = eqs[0].ctx()->arity();
  std::vector<ModPoly> ms, grads;
  for (const auto& e : eqs) {
    require_same_ctx(e.ctx(), eqs[0].ctx());
    ms.push_back(ModPoly::from(e, q));
    for (size_t i = 0; i < vars; ++i) grads.push_back(ModPoly::from(e.diff(i), q));
  }

  // Exhaust the cube when it is smaller than the budget, otherwise sample.
  uint64_t cells = 1;
  bool small = true;
  for (size_t i = 0; i < vars && small; ++i) {
    cells *= q;
    if (cells > sample_budget) small = false;
  }
  auto test = [&](const std::vector<uint32_t>& pt) {
    for (const auto& m : ms)
      if (m.eval(pt, q) != 0) return false;
    for (const auto& g : grads)
      if (g.eval(pt, q) != 0) return false;
    return true;
  };
  std::vector<uint32_t> pt(vars, 0);
  if (small) {
    for (uint64_t idx = 0; idx < cells; ++idx) {
      uint64_t code = idx;
      for (size_t i = 0; i < vars; ++i) {
        pt[i] = (uint32_t)(code % q);
        code /= q;
      }
      if (test(pt)) return pt;
    }
    return std::nullopt;
  }
  std::mt19937_64 rng(seed);
  for (uint64_t n = 0; n < sample_budget; ++n) {
    for (size_t i = 0; i < vars; ++i) pt[i] = (uint32_t)(rng() % q);
    if (test(pt)) return pt;
  }
  return std::nullopt;
}

} // namespace affmod
