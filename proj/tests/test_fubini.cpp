#include "doctest.h"

#include "lf2/fubini.hpp"
#include "lf2/parse.hpp"

#include <random>

using namespace lf2;

static FieldTowerSpec q5 = FieldTowerSpec::make_padic(5);
static FieldTowerSpec f2s = FieldTowerSpec::make_laurent(2);
static FieldTowerSpec f3 = FieldTowerSpec::make_laurent(3);
static FieldTowerSpec f5 = FieldTowerSpec::make_laurent(5);

static KBall ball(const FieldTowerSpec& s, const char* c, int m) {
    return KBall(parse_kelem(s, c), m);
}

TEST_CASE("normalize: depth and normalised polynomial") {
    // h = t^-1 X^p, trivial data: R = -1, q = X^p
    ConjectureData d1{FElem::zero(f5), FElem::zero(f5), 0, 0,
                      parse_fpoly(f5, "t^-1*X^5"), SBFunction2::unit_square(f5)};
    auto n1 = normalize(d1);
    CHECK(n1.depth == -1);
    CHECK(n1.q == parse_fpoly(f5, "X^5"));

    // h = X^2 + tX: R = 0, q = X^2 + tX
    ConjectureData d2{FElem::zero(q5), FElem::zero(q5), 0, 0,
                      parse_fpoly(q5, "X^2 + t*X"), SBFunction2::unit_square(q5)};
    auto n2 = normalize(d2);
    CHECK(n2.depth == 0);
    CHECK(n2.q == parse_fpoly(q5, "X^2 + t*X"));

    // h = t^-3 X^2: R = -3, q = X^2
    ConjectureData d3{FElem::zero(q5), FElem::zero(q5), 0, 0,
                      parse_fpoly(q5, "t^-3*X^2"), SBFunction2::unit_square(q5)};
    auto n3 = normalize(d3);
    CHECK(n3.depth == -3);
    CHECK(n3.q == parse_fpoly(q5, "X^2"));

    // depth shifts by -n2 and the a1/n1 shear enters through Taylor
    ConjectureData d4{parse_felem(q5, "1"), FElem::zero(q5), 1, 2,
                      parse_fpoly(q5, "X^2"), SBFunction2::unit_square(q5)};
    auto n4 = normalize(d4);
    // (1 + tX)^2 = 1 + t(2X + tX^2): R_taylor = 1, depth = 1 - 2 = -1
    CHECK(n4.depth == -1);
    CHECK(n4.q == parse_fpoly(q5, "2*X + t*X^2"));
}

TEST_CASE("dydx integral is the double integral") {
    CHECK(dydx_integral(SBFunction2::unit_square(q5), -1, parse_fpoly(q5, "X^2")) ==
          RatFunc::one());
    SBFunction2 g = SBFunction2::indicator(ball(f2s, "0", 0), ball(f2s, "0", 1),
                                           Rat(3));
    CHECK(dydx_integral(g, 0, parse_fpoly(f2s, "X")) == RatFunc(Rat(3, 2)));
    SBFunction2 zero_mass = SBFunction2::indicator(ball(f2s, "0", 1), ball(f2s, "0", 0)) +
                            SBFunction2::indicator(ball(f2s, "1", 1), ball(f2s, "0", 0),
                                                   Rat(-1));
    CHECK(dydx_integral(zero_mass, -2, parse_fpoly(f2s, "X^2")) == RatFunc::zero());
}

TEST_CASE("nonnegative depth: HOLDS with exact section") {
    for (const char* qtxt : {"X^2 + t*X", "X^3 + X^2", "X"}) {
        FubiniVerdict v = classify(SBFunction2::unit_square(q5), 0, parse_fpoly(q5, qtxt));
        CHECK(v.kind == VerdictKind::holds);
        CHECK(*v.value == RatFunc::one());
        CHECK(v.dydx == RatFunc::one());
    }
    // the intermediate section equals the lift of v -> integral f(u, v - hbar(u)) du
    FPoly q = parse_fpoly(q5, "X^2 + t*X");
    SBFunction2 f = SBFunction2::unit_square(q5) +
                    SBFunction2::indicator(ball(q5, "1", 1), ball(q5, "2", 1), Rat(3));
    FubiniVerdict v = classify(f, 0, q);
    REQUIRE(v.kind == VerdictKind::holds);
    SBFunction marg = nonneg_depth_marginal(f, 0, q);
    KPoly hbar = reduce(q);
    // compare against a brute-force residue-level computation on a grid
    for (const KElem& vv : KElem::grid(q5, 2, 100)) {
        Rat direct(0);
        uint64_t n = KElem::grid_size(q5, 3);
        for (uint64_t i = 0; i < n; ++i) {
            KElem u = KElem::grid_element(q5, 3, i);
            direct += f.eval(u, vv - hbar.eval(u));
        }
        direct /= Rat(static_cast<long>(n));
        CHECK(marg.eval(vv) == direct);
        CHECK(v.section.eval(FElem::from_k(vv)) == RatFunc(marg.eval(vv)));
    }
}

TEST_CASE("eval_J and the nonsingular section") {
    // qbar = X: J(v) = Char_{O}(v) for f = Char(O x O)
    SBFunction2 f = SBFunction2::unit_square(f5);
    CHECK(eval_J(parse_kpoly(f5, "X"), f, KElem::from_int(f5, 2), 24) == 1);
    CHECK(eval_J(parse_kpoly(f5, "X"), f, parse_kelem(f5, "u^-1"), 24) == 0);

    // identity fiber: section at R = -1 is the lift at (0,-1) of Char_O * X
    SectionFunction s = section_nonsingular(f, -1, parse_fpoly(f5, "X"));
    CHECK(s.eval_ns(parse_felem(f5, "t^-1")) == RatFunc::monomial(Rat(1), 1));
    CHECK(s.eval_ns(parse_felem(f5, "u*t^-1 + 1")) == RatFunc::monomial(Rat(1), 1));
    CHECK(s.eval_ns(parse_felem(f5, "t^-2")) == RatFunc::zero());
    CHECK(s.eval_ns(parse_felem(f5, "u^-1*t^-1")) == RatFunc::zero());
    REQUIRE(s.ns_total.has_value());
    CHECK(*s.ns_total == 1);

    // qbar = X^2 over Q_5: shells around 0, J(v) = 2 q^{nu(v)/2} on squares
    SectionFunction s2 = section_nonsingular(SBFunction2::unit_square(q5), -1,
                                             parse_fpoly(q5, "X^2"));
    REQUIRE(!s2.ladders.empty());
    CHECK(*s2.ns_total == 1);
    CHECK(s2.eval_ns(parse_felem(q5, "4*t^-1")) == RatFunc::monomial(Rat(2), 1));
    CHECK(s2.eval_ns(parse_felem(q5, "2*t^-1")) == RatFunc::zero());  // nonsquare
    // v = 25: sqrt valuation 1, J = 2 * 5
    CHECK(s2.eval_ns(parse_felem(q5, "25*t^-1")) == RatFunc::monomial(Rat(10), 1));
}

TEST_CASE("J against brute-force shell sums") {
    // qbar = X^2 over F_3((u)): compare eval_J with a grid enumeration.  A
    // root with slope valuation s matches q^s grid points at grid depth 4,
    // so each matching point contributes the section integral once.
    SBFunction2 f = SBFunction2::unit_square(f3);
    KPoly qbar = parse_kpoly(f3, "X^2");
    for (uint64_t i = 0; i < KElem::grid_size(f3, 4); ++i) {
        KElem v = KElem::grid_element(f3, 4, i);
        Rat direct(0);
        for (uint64_t j = 0; j < KElem::grid_size(f3, 4); ++j) {
            KElem w = KElem::grid_element(f3, 4, j);
            KElem err = qbar.eval(w) - v;
            if (!(err.valuation().lower_bound() >= 4)) continue;
            KElem slope = qbar.derivative().eval(w);
            auto sv = slope.valuation();
            if (!sv.is_finite() || sv.value() >= 2) continue;  // near-critical skipped
            direct += f.section1(w).haar_integral();
        }
        CHECK(eval_J(qbar, f, v, 24) == direct);
    }
}

TEST_CASE("j_integral: appendix identity") {
    std::mt19937_64 rng(4242);
    auto rand_rat = [&]() {
        Rat r(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 3));
        r.canonicalize();
        return r;
    };
    for (const auto& spec : {q5, f5}) {
        for (const char* qtxt : {"X", "X^2", "X^3 + X^2"}) {
            KPoly qbar = parse_kpoly(spec, qtxt);
            CHECK(j_integral(qbar, SBFunction2::unit_square(spec)) == 1);
            for (int iter = 0; iter < 10; ++iter) {
                SBFunction2 f = SBFunction2::zero(spec);
                int nr = 1 + static_cast<int>(rng() % 3);
                for (int i = 0; i < nr; ++i) {
                    KElem c1 = KElem::grid_element(spec, 2, rng() % (spec.q() * spec.q()));
                    KElem c2 = KElem::grid_element(spec, 2, rng() % (spec.q() * spec.q()));
                    int m1 = static_cast<int>(rng() % 3) - 1;
                    int m2 = static_cast<int>(rng() % 3) - 1;
                    f = f + SBFunction2::indicator(KBall(c1, m1), KBall(c2, m2), rand_rat());
                }
                if (f.is_zero()) continue;
                CHECK(j_integral(qbar, f) == f.double_integral());
            }
        }
    }
    CHECK_THROWS_AS(j_integral(parse_kpoly(f5, "X^5"), SBFunction2::unit_square(f5)),
                    purely_inseparable_error);
}

TEST_CASE("depth -1 separable: HOLDS") {
    for (const auto& spec : {q5, f5}) {
        for (const char* qtxt : {"X^2", "X^3 + X^2", "X^2 + X"}) {
            FubiniVerdict v = classify(SBFunction2::unit_square(spec), -1,
                                       parse_fpoly(spec, qtxt));
            CHECK(v.kind == VerdictKind::holds);
            CHECK(*v.value == RatFunc::one());
        }
    }
}

TEST_CASE("depth -1 singular section vanishes pointwise") {
    FPoly q = parse_fpoly(f5, "X^3 + X^2 + t^2");
    for (uint64_t i = 0; i < FElem::grid_size(f5, 2, 1); ++i) {
        FElem y0 = FElem::grid_element(f5, 2, 1, i, -1);
        CHECK(section_singular(SBFunction2::unit_square(f5), -1, q, y0) ==
              RatFunc::zero());
    }
}

TEST_CASE("positive characteristic counterexample") {
    // K = F_5((u)), h = t^-1 X^5, f = Char(O x O)
    ConjectureData d{FElem::zero(f5), FElem::zero(f5), 0, 0,
                     parse_fpoly(f5, "t^-1*X^5"), SBFunction2::unit_square(f5)};
    FubiniVerdict v = classify_data(d);
    CHECK(v.kind == VerdictKind::counterexample);
    CHECK(v.dydx == RatFunc::one());
    REQUIRE(v.dxdy.has_value());
    CHECK(*v.dxdy == RatFunc::zero());

    // same over F_2((u)) with X^2
    ConjectureData d2{FElem::zero(f2s), FElem::zero(f2s), 0, 0,
                      parse_fpoly(f2s, "t^-1*X^2"), SBFunction2::unit_square(f2s)};
    FubiniVerdict v2 = classify_data(d2);
    CHECK(v2.kind == VerdictKind::counterexample);
    CHECK(v2.dydx == RatFunc::one());
    CHECK(*v2.dxdy == RatFunc::zero());

    // with zero double integral the failure disappears
    SBFunction2 odd = SBFunction2::indicator(ball(f5, "0", 1), ball(f5, "0", 0)) +
                      SBFunction2::indicator(ball(f5, "1", 1), ball(f5, "0", 0), Rat(-1));
    FubiniVerdict v3 = classify(odd, -1, parse_fpoly(f5, "X^5"));
    CHECK(v3.kind == VerdictKind::holds);
    CHECK(*v3.value == RatFunc::zero());
}

TEST_CASE("depth -3 with q = X^2: NOT_INTEGRABLE and the witness formula") {
    FubiniVerdict v = classify(SBFunction2::unit_square(q5), -3, parse_fpoly(q5, "X^2"));
    REQUIRE(v.kind == VerdictKind::not_integrable);
    bool saw_divergent = false;
    for (const auto& lad : v.section.ladders)
        if (lad.divergent()) {
            saw_divergent = true;
            CHECK(lad.origin == "sing-monomial");
            CHECK(lad.ratio == Rat(5));
        }
    CHECK(saw_divergent);

    // witness values against the displayed piecewise formula: for
    // y in t^-1 O_F with res(ty) a nonzero square v, the value is
    // 2 |2 v^(1/2)|^{-1} X^2; otherwise 0.
    auto expected = [&](const FElem& y) -> RatFunc {
        ValuationResult vy = y.valuation();
        if (vy.lower_bound() < -1) return RatFunc::zero();
        KElem vres = (y * FElem::t(q5)).residue();
        auto vv = vres.valuation();
        if (!vv.is_finite()) return RatFunc::zero();
        long nu = vv.value();
        if (nu % 2 != 0) return RatFunc::zero();
        unsigned long lead = padic_digit(vres.rat(), 5, nu);
        if (lead != 1 && lead != 4) return RatFunc::zero();
        // sum of the two branches: each |2 v^(1/2)|^-1 = 5^(nu/2)
        return RatFunc::monomial(2 * rat_pow(Rat(5), -nu / 2), 2);
    };
    std::mt19937_64 rng(99);
    int checked = 0;
    for (int i = 0; checked < 50 && i < 400; ++i) {
        FElem y = FElem::grid_element(q5, 4, 2, rng() % 390625, -3);
        if (!y.valuation().is_finite()) continue;
        RatFunc got = section_singular(SBFunction2::unit_square(q5), -3,
                                       parse_fpoly(q5, "X^2"), y);
        CHECK(got == expected(y));
        ++checked;
    }
    REQUIRE(checked == 50);

    // extended mode evaluates the witness to zero
    CHECK(extended_null_convention(v) == RatFunc::zero());
}

TEST_CASE("depth -2: divergent singular ladder") {
    FubiniVerdict v = classify(SBFunction2::unit_square(q5), -2, parse_fpoly(q5, "X^2"));
    CHECK(v.kind == VerdictKind::not_integrable);
    CHECK_NOTHROW(extended_null_convention(v));

    // f vanishing on the singular column: the obstruction disappears
    SBFunction2 away = SBFunction2::indicator(ball(q5, "1", 1), ball(q5, "0", 0));
    FubiniVerdict v2 = classify(away, -2, parse_fpoly(q5, "X^2"));
    CHECK(v2.kind == VerdictKind::holds);
    CHECK(*v2.value == RatFunc(Rat(1, 5)));
}

TEST_CASE("nowhere vanishing derivative: HOLDS at any negative depth") {
    for (int R : {-1, -2, -3}) {
        FubiniVerdict v = classify(SBFunction2::unit_square(f5), R, parse_fpoly(f5, "X"));
        CHECK(v.kind == VerdictKind::holds);
        CHECK(*v.value == RatFunc::one());
    }
}

TEST_CASE("depth invariance of classify") {
    // two data sets with the same normalization give identical verdicts
    SBFunction2 f = SBFunction2::unit_square(q5);
    ConjectureData a{FElem::zero(q5), FElem::zero(q5), 0, 0,
                     parse_fpoly(q5, "t^-3*X^2"), f};
    ConjectureData b{FElem::zero(q5), parse_felem(q5, "7 + t"), 0, 0,
                     parse_fpoly(q5, "t^-3*X^2 + 4"), f};
    FubiniVerdict va = classify_data(a), vb = classify_data(b);
    CHECK(va.kind == vb.kind);
    CHECK(va.dydx == vb.dydx);

    // positive depth through the (a1, n1) shear
    ConjectureData c{parse_felem(q5, "t"), FElem::zero(q5), 2, 0,
                     parse_fpoly(q5, "X"), f};
    auto nc = normalize(c);
    CHECK(nc.depth == 2);
    CHECK(classify_data(c).kind == VerdictKind::holds);
}

TEST_CASE("extended null convention pattern guard") {
    FubiniVerdict holds = classify(SBFunction2::unit_square(q5), 0, parse_fpoly(q5, "X^2"));
    CHECK_THROWS_AS(extended_null_convention(holds), pattern_not_recognized);
}
