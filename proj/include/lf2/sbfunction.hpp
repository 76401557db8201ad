// Schwartz-Bruhat step functions on K and K x K.
//
// An SBFunction is a finite sum of rational multiples of ball indicators,
// kept in canonical form: pairwise disjoint balls, complete sibling sets
// with equal values merged, zero terms dropped, sorted.  Canonical form
// makes equality a term-list comparison.
//
// In addition to balls, an SBFunction may carry finitely many point masses
// (indicators of single K-points).  These are Haar-null but not pointwise
// zero; their lifts to F are the indicators of translated fractional
// ideals, which is how mu(O_F) = 0 manifests.

#pragma once

#include <vector>

#include "lf2/kball.hpp"
#include "lf2/rat.hpp"

namespace lf2 {

class SBFunction {
public:
    SBFunction() = default;
    explicit SBFunction(const FieldTowerSpec& s) : spec_(s) {}
    SBFunction(const FieldTowerSpec& s, std::vector<std::pair<KBall, Rat>> terms);

    static SBFunction zero(const FieldTowerSpec& s) { return SBFunction(s); }
    static SBFunction indicator(const KBall& b, const Rat& v = Rat(1));
    // characteristic function of O_K
    static SBFunction unit_ball(const FieldTowerSpec& s);
    // Haar-null indicator of the single point {c}
    static SBFunction point_mass(const KElem& c, const Rat& v = Rat(1));

    const FieldTowerSpec& spec() const { return spec_; }
    const std::vector<std::pair<KBall, Rat>>& terms() const { return terms_; }
    const std::vector<std::pair<KElem, Rat>>& points() const { return points_; }
    bool is_zero() const { return terms_.empty() && points_.empty(); }

    SBFunction operator+(const SBFunction& o) const;
    SBFunction operator-(const SBFunction& o) const;
    SBFunction operator-() const;
    SBFunction scale(const Rat& r) const;

    Rat haar_integral() const;  // mu(O_K) = 1
    Rat eval(const KElem& x) const;

    // g(x) = f(alpha x + beta); alpha nonzero with finite valuation
    SBFunction pullback_affine(const KElem& alpha, const KElem& beta) const;
    SBFunction translate(const KElem& b) const;  // x -> f(x + b)

    // finest ball scale (largest radius exponent); 0 for the zero function
    int max_scale() const;
    // coarsest scale (smallest radius exponent)
    int min_scale() const;
    // lower bound for the valuation of support points (support in pi^n O_K... )
    int support_val_lb() const;

    bool operator==(const SBFunction& o) const {
        return spec_ == o.spec_ && terms_ == o.terms_ && points_ == o.points_;
    }
    bool operator!=(const SBFunction& o) const { return !(*this == o); }
    std::string str() const;

private:
    FieldTowerSpec spec_;
    std::vector<std::pair<KBall, Rat>> terms_;
    std::vector<std::pair<KElem, Rat>> points_;
    void canonicalize();
};

struct SBRect {
    KBall b1, b2;
    Rat value;
    bool operator==(const SBRect& o) const {
        return b1 == o.b1 && b2 == o.b2 && value == o.value;
    }
};

class SBFunction2 {
public:
    SBFunction2() = default;
    explicit SBFunction2(const FieldTowerSpec& s) : spec_(s) {}
    SBFunction2(const FieldTowerSpec& s, std::vector<SBRect> rects);

    static SBFunction2 zero(const FieldTowerSpec& s) { return SBFunction2(s); }
    static SBFunction2 indicator(const KBall& b1, const KBall& b2, const Rat& v = Rat(1));
    // characteristic function of O_K x O_K
    static SBFunction2 unit_square(const FieldTowerSpec& s);

    const FieldTowerSpec& spec() const { return spec_; }
    const std::vector<SBRect>& rects() const { return rects_; }
    bool is_zero() const { return rects_.empty(); }

    SBFunction2 operator+(const SBFunction2& o) const;
    SBFunction2 scale(const Rat& r) const;

    Rat double_integral() const;
    Rat eval(const KElem& x, const KElem& y) const;

    // v -> f(omega, v)
    SBFunction section1(const KElem& omega) const;
    // u -> f(u, w)
    SBFunction section2(const KElem& w) const;
    // omega -> integral of f(omega, v) dv
    SBFunction marginal1() const;
    // v -> integral of f(u, v) du
    SBFunction marginal2() const;

    bool operator==(const SBFunction2& o) const {
        return spec_ == o.spec_ && rects_ == o.rects_;
    }
    std::string str() const;

private:
    FieldTowerSpec spec_;
    std::vector<SBRect> rects_;
    void canonicalize();
};

} // namespace lf2
