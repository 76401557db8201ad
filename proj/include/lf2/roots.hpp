// Root finding over the middle field K.
//
// Strategy: Newton-polygon slopes give candidate root valuations; within a
// valuation the search exhausts residue digits, Hensel-lifts simple residue
// roots, and recurses on repeated ones with a budget.  Exact roots (rational
// for Q_p, terminating for F_q((u))) are recognized and deflated; everything
// else is reported to precision pi^m.  An exhausted budget yields an honest
// incomplete result instead of a guess.

#pragma once

#include <string>
#include <vector>

#include "lf2/poly.hpp"
#include "lf2/tower.hpp"

namespace lf2 {

struct KRoot {
    KElem value;
    bool simple = true;   // psi'(root) provably nonzero
    bool exact = false;   // value is the root itself, not an approximation
};

struct RootSearchResult {
    std::vector<KRoot> roots;
    bool complete = true;
    std::vector<std::string> unresolved;  // residue classes left undecided
};

RootSearchResult roots_over_K(const KPoly& psi, int prec_m, int budget = 64);

// Zero-testing at a working threshold: for Q_p treats p-valuation >= thresh
// as zero (the modulus under which approximate Hensel data is exact); for
// F_q((u)) tests the stored digits below min(thresh, precision).
bool effectively_zero(const KElem& x, int thresh);

// Valuation with effectively-zero coefficient tests (bounded by thresh).
ValuationResult effective_valuation(const FElem& x, int thresh);
ValuationResult effective_valuation(const KElem& x, int thresh);

// Canonicalize a K value under the working threshold: padic values reduce
// to the canonical representative mod p^thresh, laurent values truncate.
KElem effective_reduce(const KElem& x, int thresh);

} // namespace lf2
