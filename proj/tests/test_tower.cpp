#include "doctest.h"

#include "lf2/parse.hpp"
#include "lf2/tower.hpp"

#include <random>

using namespace lf2;

static FieldTowerSpec q3 = FieldTowerSpec::make_padic(3);
static FieldTowerSpec q5 = FieldTowerSpec::make_padic(5);
static FieldTowerSpec f5 = FieldTowerSpec::make_laurent(5);
static FieldTowerSpec f2 = FieldTowerSpec::make_laurent(2);
static FieldTowerSpec f4 = FieldTowerSpec::make_laurent(2, 2);

TEST_CASE("field tower specs") {
    CHECK(q5.str() == "Qp(5)((t))");
    CHECK(f5.str() == "Fq(5,1)((u))((t))");
    CHECK(FieldTowerSpec::parse("Qp(5)((t))") == q5);
    CHECK(FieldTowerSpec::parse("Fq(2,2)((u))((t))") == f4);
    CHECK(f4.q() == 4);
    CHECK_THROWS_AS(FieldTowerSpec::make_padic(4), error);
    CHECK_THROWS_AS(FieldTowerSpec::parse("Qp(4)((t))"), error);
}

TEST_CASE("valuation examples") {
    // nu_F(t^2 u) over F_5((u))((t)) = 2
    FElem x = parse_felem(f5, "u*t^2");
    CHECK(x.valuation() == ValuationResult::finite(2));

    // nu_K(3/9) in Q_3 = -1
    KElem y = KElem::from_rat(q3, Rat(3) / 9);
    CHECK(y.valuation() == ValuationResult::finite(-1));

    // all digits zero up to t-precision 4
    FElem z = FElem::zero(f5).truncate(4);
    CHECK(z.valuation() == ValuationResult::at_least(4));
}

TEST_CASE("residue examples") {
    FElem a = parse_felem(f5, "3 + u*t");
    CHECK(a.residue() == KElem::from_int(f5, 3));

    FElem b = parse_felem(f5, "t^-1");
    CHECK_THROWS_AS(b.residue(), negative_valuation);

    FElem c = parse_felem(f5, "u + t^2");
    CHECK(c.residue() == KElem::uniformizer(f5));
}

TEST_CASE("arithmetic examples") {
    // (t + t^2) * t^-1 = 1 + t
    FElem lhs = parse_felem(q5, "(t + t^2) * t^-1");
    CHECK(lhs == parse_felem(q5, "1 + t"));

    // inv(1 + t) to precision 3 = 1 - t + t^2 + O(t^3)
    FElem inv3 = parse_felem(q5, "1 + t").inv(3);
    CHECK(inv3 == parse_felem(q5, "1 - t + t^2 + O(t^3)"));

    // inverting an element whose valuation is undecided
    FElem amb = FElem::zero(f5).truncate(2);  // O(t^2)
    CHECK_THROWS_AS(amb.inv(3), insufficient_precision);
    CHECK_THROWS_AS(FElem::zero(f5).inv(3), division_by_zero);
}

TEST_CASE("laurent precision tracking") {
    KElem x = parse_kelem(f5, "1 + u + O(u^4)");
    KElem ix = x.inv(4);
    CHECK(ix.precision() == 4);
    KElem prod = x * ix;
    CHECK(prod.residue() == Fq::one(5, 1));
    // 1/(1+u) = 1 - u + u^2 - u^3 + O(u^4)
    CHECK(ix == parse_kelem(f5, "1 + 4*u + u^2 + 4*u^3 + O(u^4)"));
    CHECK_THROWS_AS(x.inv(7), insufficient_precision);

    // u-precision flows through t-coefficients
    FElem y = parse_felem(f5, "(1 + O(u^2))*t");
    FElem z = y * y;
    CHECK(z.digit(2).precision() == 2);
}

TEST_CASE("digit grids") {
    auto g1 = digit_grid(f2, 1, 1);
    CHECK(g1.size() == 2);
    auto g2 = digit_grid(f2, 2, 1);
    REQUIRE(g2.size() == 4);
    CHECK(g2[0] == FElem::zero(f2));
    CHECK(g2[1] == FElem::one(f2));
    CHECK(g2[2] == FElem::t(f2));
    CHECK(g2[3] == parse_felem(f2, "1 + t"));

    FieldTowerSpec q2 = FieldTowerSpec::make_padic(2);
    auto g3 = digit_grid(q2, 1, 3);
    REQUIRE(g3.size() == 8);
    for (int i = 0; i < 8; ++i) CHECK(g3[i] == FElem::from_int(q2, i));

    CHECK_THROWS_AS(digit_grid(q5, 8, 8, 1000), grid_too_large);
}

TEST_CASE("ultrametric and multiplicativity on grids") {
    for (const auto& spec : {f2, f5}) {
        auto g = digit_grid(spec, 2, 2);
        for (size_t i = 0; i < g.size(); i += 3)
            for (size_t j = 0; j < g.size(); j += 5) {
                const FElem &x = g[i], &y = g[j];
                auto vx = x.valuation(), vy = y.valuation(), vs = (x + y).valuation();
                int lb = std::min(vx.lower_bound(), vy.lower_bound());
                CHECK(vs.lower_bound() >= std::min(lb, PREC_INF));
                if (vx.is_finite() && vy.is_finite() && vx.value() != vy.value()) {
                    REQUIRE(vs.is_finite());
                    CHECK(vs.value() == std::min(vx.value(), vy.value()));
                }
                if (vx.is_finite() && vy.is_finite()) {
                    auto vp = (x * y).valuation();
                    REQUIRE(vp.is_finite());
                    CHECK(vp.value() == vx.value() + vy.value());
                }
            }
    }
}

TEST_CASE("residue is a ring homomorphism on integral elements") {
    auto g = digit_grid(f5, 2, 1);
    for (size_t i = 0; i < g.size(); i += 7)
        for (size_t j = 0; j < g.size(); j += 11) {
            const FElem &x = g[i], &y = g[j];
            CHECK((x + y).residue() == x.residue() + y.residue());
            CHECK((x * y).residue() == x.residue() * y.residue());
        }
}

TEST_CASE("precision monotonicity") {
    // Recomputing with higher-precision inputs never changes reported digits.
    FElem a4 = parse_felem(f5, "1 + u*t + O(t^4)");
    FElem a6 = parse_felem(f5, "1 + u*t + O(t^6)");
    FElem b = parse_felem(f5, "u + t + t^3");
    FElem p4 = a4 * b, p6 = a6 * b;
    for (int e = -2; e < p4.precision(); ++e) CHECK(p4.digit(e) == p6.digit(e));
    FElem i4 = a4.inv(4), i6 = a6.inv(6);
    for (int e = 0; e < 4; ++e) CHECK(i4.digit(e) == i6.digit(e));
}

TEST_CASE("print/parse round trip") {
    std::mt19937_64 rng(12345);
    for (const auto& spec : {q5, f5, f4}) {
        for (int iter = 0; iter < 50; ++iter) {
            std::map<int, KElem> co;
            int nterms = 1 + static_cast<int>(rng() % 3);
            for (int k = 0; k < nterms; ++k) {
                int e = static_cast<int>(rng() % 7) - 3;
                if (spec.kind == MidKind::padic) {
                    long num = static_cast<long>(rng() % 19) - 9;
                    long den = 1 + static_cast<long>(rng() % 9);
                    co[e] = KElem::from_rat(spec, Rat(num, den));
                } else {
                    co[e] = KElem::grid_element(spec, 2, rng() % spec.q() / 1 + rng() % 3);
                }
            }
            int prec = (rng() % 2) ? PREC_INF : 4;
            FElem x = FElem::make(spec, co, prec);
            CHECK(parse_felem(spec, x.str()) == x);
        }
    }
    // the spec's example string parses
    FElem ex = parse_felem(f5, "(3 + 2*u^2 + O(u^5))*t^-1 + 1 + O(t^3)");
    CHECK(parse_felem(f5, ex.str()) == ex);
    CHECK(ex.digit(-1).precision() == 5);
}

TEST_CASE("reduce_mod and canonical centers") {
    FElem x = parse_felem(q5, "2 + 3*t + t^2 + 4*t^3");
    CHECK(x.reduce_mod_t(2) == parse_felem(q5, "2 + 3*t"));
    KElem y = KElem::from_rat(q5, Rat(-1));
    CHECK(y.reduce_mod(2) == KElem::from_int(q5, 24));
    KElem z = KElem::from_rat(q5, Rat(1) / 2);  // 1/2 = 3 + 2*5 + 2*25 + ... in Z_5
    CHECK(z.reduce_mod(2) == KElem::from_int(q5, 13));
}
