#pragma once

#include "affmod/derivation.hpp"
#include "affmod/modification.hpp"

namespace affmod {

// The unique lift of a derivation with d(f) = 0 and d(I) in I to the
// modification: d'(x_j) = d(x_j), d'(y_i) = d(b_i)/f. Divisibility is
// checked directly and, for the point-center case, after reduction by the
// presentation equations (x_j -> f*y_j).
Derivation lift_derivation(const AffineTriple& t, const ModPresentation& pres,
                           const Derivation& d);

// Ex 2.2 / Claim 3 lift through sigma(x, y, z) = (x, y, x z): a map
// (x, c1*y + x*g1(x,y,z), c2*z + x*g2(x,y,z)) lifts to
// (x, c1*y + x*g1(x,y,xz), c2*z + g2(x,y,xz)); mu . sigma = sigma . mu' is
// verified as an exact polynomial identity.
QPolyMap lift_auto_G(const QPolyMap& mu);

} // namespace affmod
