#pragma once

#include <optional>
#include <variant>

#include "affmod/autoword.hpp"

namespace affmod {

// f(x,y) z^n + g(x,y) = 0 in C^3; f, g non-constant without common factor.
struct BinomialSurface {
  QPoly f, g; // over (x, y)
  long n = 1;
  Ctx ctx3;   // (x, y, z)
  QPoly F;    // f*z^n + g over ctx3

  static BinomialSurface make(const QPoly& f, const QPoly& g, long n);
};

struct SmoothnessReport {
  enum class Kind { Smooth, SingularWitness, Undecided } kind;
  std::vector<Rational> witness; // (x, y, z) when kind == SingularWitness
  std::string reason;
};

SmoothnessReport smoothness_check(const BinomialSurface& s);

// Triangular/affine pieces with tracked inverses, stored in geometric
// application order; the inverse chain plugged into F gives const*(y - c).
struct ScalePiece {
  std::string dir;
  Rational c;
};
struct TriMapPiece {
  QPolyMap fwd, inv;
};
using RectifyPiece = std::variant<ElemShear, ScalePiece, TriMapPiece>;

struct RectifyWord {
  Ctx ctx3;
  std::vector<RectifyPiece> pieces;
  Rational plane_c;
};

QPolyMap rectify_forward_map(const RectifyWord& w);
QPolyMap rectify_inverse_map(const RectifyWord& w);

std::string rectify_word_to_text(const RectifyWord& w);
RectifyWord rectify_word_from_text(const std::string& text, const Ctx& ctx3);

struct NormalForm {
  QPoly h;        // g_translated = gamma*(y - c) + x*h
  Rational c;
  Rational gamma;
  Rational root;  // the distinguished root moved to x = 0
  QPoly p1, g1;   // translated p and g
  std::vector<RectifyPiece> word;
};

// Distinct rational roots of p (error kinds: RootNotInField when p does
// not split, TransversalityViolated on a repeated root).
std::vector<Rational> rational_roots_of_split(const QPoly& p_univar_in_x);

NormalForm normal_form(const QPoly& p, const QPoly& g);

RectifyWord rectify_n1(const QPoly& p, const QPoly& g);

bool verify_rectified(const BinomialSurface& s, const RectifyWord& w);

struct PairRectification {
  QPolyMap alpha;  // f . alpha = p(x), g . alpha = y
  QPoly p_univar;  // over (x, y), univariate in x
};

PairRectification rectify_pair(const QPoly& f, const QPoly& g,
                               const std::optional<QPoly>& f1_hint = std::nullopt,
                               long degree_bound = 0);

} // namespace affmod
