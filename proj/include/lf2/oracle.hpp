// Independent brute-force verification on digit grids.
//
// The verifiers here share no decomposition or integration machinery with
// the engine modules: they re-derive everything from tower arithmetic,
// polynomial evaluation, and the raw data of the objects under test.  The
// grids are exact; only which points exist is approximate.

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lf2/decompose.hpp"
#include "lf2/measure.hpp"
#include "lf2/ratfunc.hpp"

namespace lf2 {

struct GridSpec {
    int t_depth = 2;
    int u_depth = 1;
    uint64_t cap = 1 << 20;

    uint64_t size(const FieldTowerSpec& s) const;
    void check(const FieldTowerSpec& s) const;  // grid_too_large on overflow
};

struct OracleReport {
    bool pass = true;
    std::string detail;
    // first counterexample, when failing
    std::optional<FElem> witness;
};

// For every grid point x: (q(x) in b + t^A O_F) iff x lies in exactly one
// piece; every non-constant psi is re-checked by substitution.  Approximate
// pieces are checked modulo the working threshold they were built at.
OracleReport verify_decomposition(const FPoly& q, const FElem& b, int A,
                                  const Decomposition& dec, const GridSpec& grid,
                                  int kprec = DEFAULT_KPREC);

// Integral of an IntegrableFunctionF recomputed from raw term data.
RatFunc oracle_integral(const IntegrableFunctionF& g);

// Randomized exact checks of linearity, translation invariance and the
// scaling law, with the measure module as the subject under test.
OracleReport verify_integral_laws(int samples, uint64_t seed,
                                  const FieldTowerSpec& spec);

struct RepeatedReport {
    bool pass = true;
    Rat x0;         // specialization point: q^(-u_depth)
    Rat dydx_sum;
    Rat dxdy_sum;
    Rat bound;      // truncation bound from local-constancy scales
    std::string detail;
};

// Riemann-style sums of both repeated integrals of
// Phi(x,y) = f^0(x, y - t^R q(x)) over digit grids, compared with the
// engine's values specialized at x0.
RepeatedReport verify_repeated(const SBFunction2& f, int R, const FPoly& q,
                               const GridSpec& grid, const RatFunc& engine_dydx,
                               const std::optional<RatFunc>& engine_dxdy);

} // namespace lf2
