#pragma once

#include <optional>
#include <string>
#include <vector>

#include "affmod/polymap.hpp"

namespace affmod {

// The triple (A, I, f) with chosen generators: A = C[ambient] (or a
// hypersurface when `relation` is present), I = (f, b_1..b_s).
struct AffineTriple {
  Ctx ambient;
  std::optional<QPoly> relation; // single defining equation of X, absent for C^r
  QPoly f;
  std::vector<QPoly> center_gens; // b_1..b_s (b_0 = f implicit)
};

enum class Certification {
  Auto,          // require one of the two built-in certified cases
  CallerAsserts, // caller vouches for primality of the presentation ideal
};

// The presentation f*y_i - b_i = 0 in the extended context, with the
// blowdown substitution map and the equations of the exceptional divisor.
struct ModPresentation {
  Ctx ambient;
  Ctx extended;                   // ambient + new_vars
  std::vector<std::string> new_vars;
  std::vector<QPoly> equations;   // f*y_i - b_i over extended
  QPolyMap blowdown;              // pullback C[ambient] -> C[extended]
  std::vector<QPoly> exceptional_eqs; // b_0..b_s over extended
  std::optional<QPoly> relation;  // carried over, embedded in extended
};

ModPresentation modify(const AffineTriple& t,
                       Certification cert = Certification::Auto,
                       const std::vector<std::string>& new_var_names = {});

// substitute(g, blowdown) = exc^mu * g1 with g1 not divisible by exc.
std::pair<uint32_t, QPoly> strict_transform(const QPoly& g, const QPolyMap& blowdown,
                                            const std::string& exc_var);

// (p(y*x1,...,y*xk) - y)/y over the context extended by a fresh variable.
QPoly modify_at_point(const QPoly& p);

struct CiDecomposition {
  ModPresentation stage1;
  QPolyMap stage2;
  bool check = false;
};

CiDecomposition decompose_ci(const QPoly& f1, const QPoly& f2, const QPoly& g);

// Thm-style presentation of A[a_1/f_1,...,a_k/f_k]: f = prod f_i,
// b_i = f*a_i/f_i.
AffineTriple present_birational(const Ctx& ambient,
                                const std::vector<std::pair<QPoly, QPoly>>& fractions);

struct GalleryResult {
  std::vector<QPoly> polys;
  std::optional<ModPresentation> presentation;
};

struct GalleryParams {
  long k = 0, l = 0, s = 0, m = 0;
  std::vector<QPoly> ps;      // uv_system / uv_powers inputs
  std::vector<long> exponents; // s_0..s_m for uv_powers
};

// Stable CLI-visible names: russell, tdp, tdp_general, ex73_cubic,
// ex73_surface, uv_system, uv_powers. Every named polynomial is built
// through the modification pipeline and checked against its closed form.
GalleryResult gallery(const std::string& name, const GalleryParams& params = {});

} // namespace affmod
