// Ultrametric ball calculus over the middle field K.
//
// A KBall is center + pi^m O_K with the center reduced mod pi^m.  Balls are
// nested or disjoint; a ball splits into exactly q children.  The preimage
// of a ball under a polynomial decomposes into finitely many balls, found by
// residue-digit recursion (the residue field of K is finite).

#pragma once

#include <vector>

#include "lf2/poly.hpp"
#include "lf2/rat.hpp"
#include "lf2/tower.hpp"

namespace lf2 {

struct KBall {
    KElem center;
    int m = 0;

    KBall() = default;
    KBall(const KElem& c, int radius_exp);  // canonicalizes the center

    const FieldTowerSpec& spec() const { return center.spec(); }
    Rat measure() const;  // q^(-m)

    bool contains(const KElem& x) const;   // throws insufficient_precision if undecidable
    bool contains(const KBall& o) const;   // o subset of this
    bool disjoint(const KBall& o) const;
    std::vector<KBall> split() const;      // the q children at radius m+1

    bool operator==(const KBall& o) const { return m == o.m && center == o.center; }
    int cmp(const KBall& o) const;
    std::string str() const;
};

// Disjoint balls covering {x in domain : g(x) in target}, exact for exact
// inputs; zero-tests at the working threshold kthresh (PREC_INF = strict).
// Throws grid_too_large if more than max_pieces accumulate.
std::vector<KBall> kball_preimage(const KPoly& g, const KBall& target,
                                  const KBall& domain, int kthresh = PREC_INF,
                                  std::size_t max_pieces = 1 << 18);

Rat kball_preimage_measure(const KPoly& g, const KBall& target, const KBall& domain,
                           int kthresh = PREC_INF);

} // namespace lf2
