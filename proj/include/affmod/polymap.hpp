#pragma once

#include <vector>

#include "affmod/poly.hpp"

namespace affmod {

// One polynomial over the target context per source variable. A PolyMap is
// simultaneously the pullback C[source] -> C[target] (substitute) and the
// point map target-space -> source-space given by its component formulas;
// for automorphisms source == target and both readings act on points.
template <class F>
struct PolyMap {
  Ctx source;
  Ctx target;
  std::vector<Poly<F>> images; // images.size() == source->arity()

  PolyMap() = default;
  PolyMap(Ctx src, Ctx tgt, std::vector<Poly<F>> imgs)
      : source(std::move(src)), target(std::move(tgt)), images(std::move(imgs)) {
    if (images.size() != source->arity())
      fail(ErrKind::InvalidInput, "component count != source arity");
    for (const auto& p : images) require_same_ctx(p.ctx(), target);
  }

  static PolyMap identity(const Ctx& ctx) {
    std::vector<Poly<F>> imgs;
    for (size_t i = 0; i < ctx->arity(); ++i) imgs.push_back(Poly<F>::variable(ctx, i));
    return PolyMap(ctx, ctx, std::move(imgs));
  }

  const Poly<F>& image(const std::string& var) const {
    return images[source->require(var)];
  }

  bool operator==(const PolyMap& o) const {
    if (*source != *o.source || *target != *o.target) return false;
    for (size_t i = 0; i < images.size(); ++i)
      if (images[i] != o.images[i]) return false;
    return true;
  }
};

// f with each variable replaced by its image polynomial; a ring
// homomorphism C[source] -> C[target].
template <class F>
Poly<F> substitute(const Poly<F>& f, const PolyMap<F>& m) {
  require_same_ctx(f.ctx(), m.source);
  // Per-variable power cache.
  std::vector<std::vector<Poly<F>>> pows(m.images.size());
  auto power = [&](size_t i, uint32_t k) -> const Poly<F>& {
    auto& cache = pows[i];
    if (cache.empty()) cache.push_back(Poly<F>::constant(m.target, F::from_long(1)));
    while (cache.size() <= k) cache.push_back(cache.back() * m.images[i]);
    return cache[k];
  };
  Poly<F> acc(m.target);
  for (const auto& [e, c] : f.terms()) {
    Poly<F> t = Poly<F>::constant(m.target, c);
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0) t = t * power(i, e[i]);
    acc = acc + t;
  }
  return acc;
}

// Point-action composition: (outer . inner)(P) = outer(inner(P)); the
// pullback reverses, (outer . inner)* = inner* . outer*.
template <class F>
PolyMap<F> compose(const PolyMap<F>& outer, const PolyMap<F>& inner) {
  require_same_ctx(outer.target, inner.source);
  std::vector<Poly<F>> imgs;
  imgs.reserve(outer.images.size());
  for (const auto& p : outer.images) imgs.push_back(substitute(p, inner));
  return PolyMap<F>(outer.source, inner.target, std::move(imgs));
}

template <class F>
PolyMap<F> compose_chain(const std::vector<PolyMap<F>>& ms) {
  if (ms.empty()) fail(ErrKind::InvalidInput, "empty composition");
  PolyMap<F> acc = ms.front();
  for (size_t i = 1; i < ms.size(); ++i) acc = compose(acc, ms[i]);
  return acc;
}

template <class F>
std::vector<typename F::Elem> apply_point(const PolyMap<F>& m,
                                          const std::vector<typename F::Elem>& p) {
  std::vector<typename F::Elem> out;
  out.reserve(m.images.size());
  for (const auto& img : m.images) out.push_back(img.evaluate(p));
  return out;
}

using QPolyMap = PolyMap<RationalField>;

} // namespace affmod
