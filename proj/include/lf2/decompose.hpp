// Preimage decomposition into translated fractional ideals.
//
// decompose_preimage(q, b, A) writes {x in O_F : q(x) in b + t^A O_F} as a
// disjoint union of balls a + t^c O_F, each with the residue field
// approximation psi in K[X] that makes the square
//
//      a + t^c O_F --q--> b + t^A O_F
//           |                  |
//           v                  v
//           K     --psi-->     K
//
// commute.  Simple residue roots are Hensel-lifted directly to depth A; a
// repeated residue root starts at depth 1 and is refined one depth at a
// time, at each step solving psi(w) = 0 over K: constant psi pieces survive
// whole (constant 0) or die, roots w refine the center by one t-digit.
//
// Over Q_p, roots of residue polynomials need not be rational; the engine
// then carries canonical approximants modulo p^kprec and all zero tests run
// at that working threshold.  Pieces built from exact roots are flagged
// exact and satisfy their contracts strictly.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lf2/polyarith.hpp"
#include "lf2/roots.hpp"

namespace lf2 {

constexpr int DEFAULT_KPREC = 24;

struct TranslatedIdeal {
    FElem center;  // reduced mod t^c
    int c = 0;

    TranslatedIdeal() = default;
    TranslatedIdeal(const FElem& a, int exponent);
    std::string str() const;
    bool operator==(const TranslatedIdeal& o) const {
        return c == o.c && center == o.center;
    }
};

struct ResidueApprox {
    KPoly psi;
    TranslatedIdeal src, dst;
};

struct DecompPiece {
    TranslatedIdeal ideal;
    KPoly psi;
    bool exact = true;          // false when built from approximate K-roots
    bool from_singular = false; // refined from a repeated residue root
};

struct Decomposition {
    FPoly q;
    FElem b;
    int A = 1;
    std::vector<DecompPiece> pieces;
    std::string str() const;
};

// Exact residue field approximation (Lemma: psi = Hbar + res((h(a)-b)t^-A)
// when A = R, the constant res((h(a)-b)t^-A) when A < R).  Throws
// not_contained when h(src) is not a subset of dst.
ResidueApprox residue_approximation(const FPoly& h, const TranslatedIdeal& src,
                                    const TranslatedIdeal& dst);

Decomposition decompose_preimage(const FPoly& q, const FElem& b, int A,
                                 int kprec = DEFAULT_KPREC);

// Lemma "finitely many b_1..b_m": representatives, distinct mod t^A, such
// that the singular preimage is nonempty only for b congruent to one.
// A must be 1 or 2; q with q'bar = 0 raises purely_inseparable_error.
std::vector<FElem> singular_targets(const FPoly& q, int A, int kprec = DEFAULT_KPREC);

// nu(x - a) >= c, provable; undecidable raises insufficient_precision.
bool membership(const FElem& x, const TranslatedIdeal& piece);

// --- effective-arithmetic helpers shared with the conjecture engine ---

// residue allowing effectively-zero digits below t^0
KElem effective_residue(const FElem& x, int kthresh);
KPoly effective_reduce_poly(const FPoly& q, int kthresh);
TaylorNormalization taylor_normalize_eff(const FPoly& h, const FElem& a, int c,
                                         int kthresh);
FElem effective_reduce_f(const FElem& x, int kthresh);  // canonical digits

} // namespace lf2
