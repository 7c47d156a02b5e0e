#pragma once

#include "affmod/hypersurface.hpp"

namespace affmod {

// Exact Lagrange interpolant, degree < #nodes, over a univariate context.
QPoly interpolate(const Ctx& uni, const std::vector<Rational>& nodes,
                  const std::vector<Rational>& values);

// Transvection word after which, in each point list separately, every
// single-coordinate projection is pairwise distinct. Deterministic search
// over integer shear parameters.
AutoWord separating_shear_setup(const Ctx& ctx,
                                const std::vector<std::vector<Rational>>& list_a,
                                const std::vector<std::vector<Rational>>& list_b = {});

// Word of elementary shears (with conjugating transvections) mapping
// source i to target i exactly; k >= 2.
AutoWord g0_transitive(const Ctx& ctx, const std::vector<std::vector<Rational>>& sources,
                       const std::vector<std::vector<Rational>>& targets);

// m distinct exact points with p = c avoiding `avoid`; deterministic
// heuristics over the rationals, FiberPointsNotFound when they are
// exhausted (a documented incompleteness of the exact backend).
std::vector<std::vector<Rational>> fiber_points(const QPoly& p, const Rational& c, size_t m,
                                                const std::vector<std::vector<Rational>>& avoid = {});

// Complex fallback: always succeeds for non-constant p (univariate root
// refinement after specializing all but one variable).
std::vector<std::vector<std::complex<double>>> fiber_points_approx(const QPoly& p,
                                                                   const Rational& c,
                                                                   size_t m);

enum class Side { U0, V0 };

// Word after which every point has u != 0 (side U0) or v != 0 (side V0);
// the points are updated in place.
AutoWord move_off_hypersurface(const HypersurfaceX& X, std::vector<XPoint>& pts, Side side);

struct StagedWord {
  AutoWord word;
  struct Stage {
    std::string name;
    size_t word_begin = 0, word_end = 0;
    std::vector<XPoint> points_after;
  };
  std::vector<Stage> stages;
};

// Word landing every point in U_1 (u = 1 exactly); group moves fix all the
// other v-level hypersurfaces and V_0 pointwise.
StagedWord gather_into_U1(const HypersurfaceX& X, std::vector<XPoint> pts);

struct TransitivityPlan {
  AutoWord word;
  std::vector<StagedWord::Stage> trace;
  size_t word_length = 0;
  int max_coeff_bits = 0;
};

TransitivityPlan solve(const HypersurfaceX& X, const std::vector<XPoint>& sources,
                       const std::vector<XPoint>& targets);

// Replays the word on the sources with exact arithmetic; true iff the
// images equal the targets and every intermediate point stays on X.
bool verify_plan(const HypersurfaceX& X, const TransitivityPlan& plan,
                 const std::vector<XPoint>& sources, const std::vector<XPoint>& targets);

int word_max_coeff_bits(const AutoWord& w);

} // namespace affmod
