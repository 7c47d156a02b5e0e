#pragma once

#include <variant>
#include <vector>

#include "affmod/polymap.hpp"

namespace affmod {

// delta = h * d/dx_d with h free of x_d; exp(t*delta) is the elementary
// shear x_d -> x_d + t*h.
struct ElemShear {
  std::string dir;
  QPoly h; // over the base context, no x_dir dependence
  Rational t;
};

// Lifted flow generators on X(p): LIFT1 fixes v (the G1 side), LIFT2 fixes
// u, EPS swaps u and v. q is univariate with q(0) = 0 so the lift stays
// polynomial; raw construction may violate that for mutation tests.
enum class XKind { LIFT1, LIFT2, EPS };

struct XGenerator {
  XKind kind = XKind::EPS;
  std::string dir;  // x-variable of the base shear
  QPoly h;          // over the x̄ context, free of dir
  QPoly q;          // univariate over context ("z")
  Rational t;

  static XGenerator eps() { return XGenerator{}; }
  static XGenerator lift(XKind kind, std::string dir, QPoly h, QPoly q, Rational t);
  // Bypasses the q(0) = 0 check.
  static XGenerator raw(XKind kind, std::string dir, QPoly h, QPoly q, Rational t);
};

using WordGen = std::variant<ElemShear, XGenerator>;
using AutoWord = std::vector<WordGen>;

// Reverse the list and negate every time (EPS is its own inverse).
AutoWord invert_word(const AutoWord& w);

// Elementary shear as a PolyMap on its context.
QPolyMap shear_polymap(const ElemShear& s, const Ctx& ctx);
QPolyMap shear_polymap_symbolic(const ElemShear& s, const Ctx& ext, const std::string& tvar);

// Word of C^k shears as one PolyMap (generators applied first-to-last).
QPolyMap word_polymap(const AutoWord& w, const Ctx& ctx);

std::vector<Rational> apply_word_point(const AutoWord& w, const Ctx& ctx,
                                       std::vector<Rational> p);

// Line-oriented text format, one generator per line:
//   LIFT1 d=<var> h=<poly> q=<poly> t=<rational>
//   LIFT2 d=<var> h=<poly> q=<poly> t=<rational>
//   EPS
//   SHEAR d=<var> h=<poly> t=<rational>
// h parses against the base context, q against the univariate context (z).
std::string word_to_text(const AutoWord& w);
AutoWord word_from_text(const std::string& text, const Ctx& base_ctx);

// Word of transvections x_i -> x_i + c*x_j realizing a det-1 matrix;
// verified by multiplying back.
AutoWord sl_decompose(const std::vector<std::vector<Rational>>& mat, const Ctx& ctx);

// The unique inverse with components of total degree <= D, by solving the
// linear system substitute(g_i, m) = x_i in undetermined coefficients;
// verified by both-sided composition.
QPolyMap invert_by_degree_bound(const QPolyMap& m, long D);

long default_inverse_degree_bound(const QPolyMap& m);

Rational parse_rational_str(const std::string& s);

} // namespace affmod
