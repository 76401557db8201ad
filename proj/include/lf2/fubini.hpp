// The conjecture engine: decide whether (x,y) -> f^0(x, y - t^R q(x)) is
// Fubini, with exact certificates.
//
// Verdict paths, by depth R and the reduction qbar:
//   R >= 0                          -> HOLDS (section is the lift of an exact
//                                      Schwartz-Bruhat marginal)
//   R < 0, qbar purely inseparable  -> dxdy = 0; COUNTEREXAMPLE when the
//                                      double integral of f is nonzero
//   R < 0, otherwise                -> nonsingular part integrates to the
//                                      double integral of f (computed by
//                                      change of variables on certified ball
//                                      partitions plus geometric shell
//                                      ladders at critical points); the
//                                      singular part is zero for R = -1,
//                                      analyzed through singular targets for
//                                      R = -2 and through the monomial fiber
//                                      analysis for deeper R.  A certified
//                                      divergent ladder gives
//                                      NOT_INTEGRABLE; anything the
//                                      certificates cannot resolve is
//                                      UNKNOWN.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lf2/decompose.hpp"
#include "lf2/measure.hpp"

namespace lf2 {

struct ConjectureData {
    FElem a1, a2;
    int n1 = 0, n2 = 0;
    FPoly h;
    SBFunction2 f;
};

struct DepthNormalization {
    int depth = 0;  // R - n2 in the paper's normalization
    FPoly q;        // integral, q(0) = 0, nonzero reduction
};

DepthNormalization normalize(const ConjectureData& d, int kprec = DEFAULT_KPREC);

// Exact masses of a v-shell family nu(v - center) = level0 + j*step with a
// certified geometric tail: masses[j+1] = ratio * masses[j] from the last
// stored mass on.  step < 0 walks outward (|v| growing).
struct MassLadder {
    KElem center;
    int level0 = 0;
    int step = 1;
    std::vector<Rat> masses;  // at least one entry
    Rat ratio;
    int xpow = 0;          // X-power carried by the family's values
    std::string origin;    // "ns" | "sing-m" | "sing-monomial"

    bool divergent() const;
    bool convergent() const;
    Rat total() const;  // requires convergent()
};

// y -> integral of Phi(x, y) dx, split into its nonsingular and singular
// parts.  Pointwise evaluation is exact: the nonsingular part through root
// enumeration (Prop-6.2 shape), the singular part through a fresh preimage
// decomposition at depth -R (Prop-6.5 shape).
struct SectionFunction {
    FieldTowerSpec spec;
    SBFunction2 f;
    FPoly q;
    int R = 0;
    KPoly qbar;
    int kprec = DEFAULT_KPREC;
    bool has_ns = true;

    std::vector<MassLadder> ladders;     // ns + sing mass data
    std::optional<Rat> ns_total;         // exact integral of the ns part

    RatFunc eval_ns(const FElem& y) const;
    RatFunc eval_sing(const FElem& y) const;
    RatFunc eval(const FElem& y) const;
};

enum class VerdictKind { holds, not_integrable, counterexample, unknown };

struct FubiniVerdict {
    VerdictKind kind = VerdictKind::unknown;
    RatFunc dydx;                 // always computed
    std::optional<RatFunc> dxdy;  // when well-defined
    std::optional<RatFunc> value; // HOLDS value
    SectionFunction section;
    std::string diagnostics;

    std::string kind_str() const;
};

// J(v) = sum over simple roots of qbar = v of |qbar'(omega)|^-1 * (integral
// of f's section at omega); the Prop-6.2 section value at v.
Rat eval_J(const KPoly& qbar, const SBFunction2& f, const KElem& v, int kprec);

// The two repeated integrals.
RatFunc dydx_integral(const SBFunction2& f, int R, const FPoly& q);
SectionFunction section_nonsingular(const SBFunction2& f, int R, const FPoly& q,
                                    int kprec = DEFAULT_KPREC);
RatFunc section_singular(const SBFunction2& f, int R, const FPoly& q, const FElem& y,
                         int kprec = DEFAULT_KPREC);
SectionFunction section_singular_fn(const SBFunction2& f, int R, const FPoly& q,
                                    int kprec = DEFAULT_KPREC);

FubiniVerdict classify(const SBFunction2& f, int R, const FPoly& q,
                       int kprec = DEFAULT_KPREC);
FubiniVerdict classify_data(const ConjectureData& d, int kprec = DEFAULT_KPREC);

// Appendix identity: integral of J over K, computed by change of variables
// on certified ball partitions; equals the double integral of f.
Rat j_integral(const KPoly& qbar, const SBFunction2& f, int kprec = DEFAULT_KPREC);

// Experimental, opt-in: evaluates a NOT_INTEGRABLE witness under the
// convention that lifted copies of K carry zero total mass.  Only the
// recognized witness shapes are accepted.
RatFunc extended_null_convention(const FubiniVerdict& verdict);

// R >= 0 marginal: v -> integral of f(u, v - hbar(u)) du as an exact step
// function (exposed for the invariant tests).
SBFunction nonneg_depth_marginal(const SBFunction2& f, int R, const FPoly& q,
                                 int kprec = DEFAULT_KPREC);

} // namespace lf2
