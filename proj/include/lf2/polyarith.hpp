// Taylor normalization and Hensel lifting over F.

#pragma once

#include "lf2/poly.hpp"
#include "lf2/tower.hpp"

namespace lf2 {

// h(a + t^c X) = constant + t^shift * normalized(X) with normalized having
// integral coefficients, no constant term, and nonzero reduction.
struct TaylorNormalization {
    FElem constant;
    int shift = 0;
    FPoly normalized;
};

TaylorNormalization taylor_normalize(const FPoly& h, const FElem& a, int c);

// Newton iteration in F: returns a (reduced mod t^N) with nu(q(a) - b) >= N
// and residue(a) = omega.  Requires q integral, reduce(q)(omega) = residue(b),
// reduce(q)'(omega) != 0.  The postcondition is re-checked by substitution.
FElem hensel_lift(const FPoly& q, const KElem& omega, const FElem& b, int N);

} // namespace lf2
