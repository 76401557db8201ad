#include "doctest.h"

#include "lf2/fubini.hpp"
#include "lf2/oracle.hpp"
#include "lf2/parse.hpp"

using namespace lf2;

static FieldTowerSpec q5 = FieldTowerSpec::make_padic(5);
static FieldTowerSpec f3 = FieldTowerSpec::make_laurent(3);
static FieldTowerSpec f5 = FieldTowerSpec::make_laurent(5);

TEST_CASE("verify_decomposition: worked example passes") {
    FPoly q = parse_fpoly(q5, "X^3 + X^2 + t^2");
    Decomposition dec = decompose_preimage(q, FElem::zero(q5), 2);
    GridSpec grid{3, 2, 1 << 20};
    OracleReport rep = verify_decomposition(q, FElem::zero(q5), 2, dec, grid);
    CHECK(rep.pass);

    // depth 3 over Q_5 with approximate centers: checked modulo the
    // working threshold
    Decomposition dec3 = decompose_preimage(q, FElem::zero(q5), 3);
    GridSpec grid3{4, 1, 1 << 20};
    CHECK(verify_decomposition(q, FElem::zero(q5), 3, dec3, grid3).pass);

    // laurent side at depth 3, fully exact
    FPoly q2 = parse_fpoly(f5, "X^3 + X^2 + t^2");
    Decomposition dec4 = decompose_preimage(q2, FElem::zero(f5), 3);
    CHECK(verify_decomposition(q2, FElem::zero(f5), 3, dec4, GridSpec{4, 1}).pass);
}

TEST_CASE("verify_decomposition: mutation tests") {
    FPoly q = parse_fpoly(f5, "X^3 + X^2 + t^2");
    Decomposition dec = decompose_preimage(q, FElem::zero(f5), 2);
    GridSpec grid{3, 1, 1 << 20};

    // deleting a piece loses coverage
    Decomposition missing = dec;
    missing.pieces.pop_back();
    OracleReport rep1 = verify_decomposition(q, FElem::zero(f5), 2, missing, grid);
    CHECK_FALSE(rep1.pass);
    CHECK(rep1.witness.has_value());

    // duplicating a piece breaks disjointness
    Decomposition dup = dec;
    dup.pieces.push_back(dup.pieces[0]);
    CHECK_FALSE(verify_decomposition(q, FElem::zero(f5), 2, dup, grid).pass);

    // corrupting a psi breaks the substitution check
    Decomposition bad = dec;
    bad.pieces[0].psi = bad.pieces[0].psi + KPoly::constant(KElem::one(f5));
    CHECK_FALSE(verify_decomposition(q, FElem::zero(f5), 2, bad, grid).pass);
}

TEST_CASE("verify_integral_laws") {
    for (const auto& spec : {q5, f3}) {
        OracleReport rep = verify_integral_laws(100, 20250809, spec);
        CHECK(rep.pass);
    }

    // a deliberately wrong scaling is caught by the oracle integral
    auto g = IntegrableFunctionF::lift(SBFunction::unit_ball(q5), FElem::zero(q5), 0);
    FElem alpha = parse_felem(q5, "5*t^-1");
    auto scaled = scale_arg(g, alpha);
    auto [r, nu] = abs_value(alpha);
    RatFunc absval = RatFunc::monomial(r, nu);
    CHECK(oracle_integral(scaled) == absval.inv() * oracle_integral(g));
    // corrupt the rewrite: shift the lift level
    auto corrupt = scaled;
    corrupt.terms[0].second.n += 1;
    CHECK_FALSE(oracle_integral(corrupt) == absval.inv() * oracle_integral(g));

    // empty function list passes vacuously
    CHECK(oracle_integral(IntegrableFunctionF::zero(q5)) == RatFunc::zero());
}

TEST_CASE("verify_repeated: nonnegative depth") {
    FPoly q = parse_fpoly(f3, "X^2 + t*X");
    SBFunction2 f = SBFunction2::unit_square(f3);
    FubiniVerdict v = classify(f, 0, q);
    REQUIRE(v.kind == VerdictKind::holds);
    RepeatedReport rep = verify_repeated(f, 0, q, GridSpec{4, 2}, v.dydx, v.dxdy);
    CHECK(rep.pass);
    // the sums are exact here
    CHECK(rep.dydx_sum == 1);
    CHECK(rep.dxdy_sum == 1);
}

TEST_CASE("verify_repeated: positive characteristic counterexample") {
    // K = F_5((u)), q = X^5, R = -1: dydx = 1, dxdy = 0
    FPoly q = parse_fpoly(f5, "X^5");
    SBFunction2 f = SBFunction2::unit_square(f5);
    FubiniVerdict v = classify(f, -1, q);
    REQUIRE(v.kind == VerdictKind::counterexample);
    RepeatedReport rep = verify_repeated(f, -1, q, GridSpec{3, 1}, v.dydx, v.dxdy);
    CHECK(rep.pass);
    CHECK(rep.dydx_sum == 1);
    // the dxdy sum concentrates on a slab of K-width q^-e around the
    // solvable digits; it must sit inside the reported bound
    CHECK(rep.dxdy_sum <= rep.bound);

    // a mutated engine value is rejected (the dydx side is exact here)
    RepeatedReport bad = verify_repeated(f, -1, q, GridSpec{3, 1},
                                         RatFunc(Rat(1, 2)), v.dxdy);
    CHECK_FALSE(bad.pass);
}

TEST_CASE("verify_repeated: depth -1 separable") {
    FPoly q = parse_fpoly(f3, "X^2");
    SBFunction2 f = SBFunction2::unit_square(f3);
    FubiniVerdict v = classify(f, -1, q);
    REQUIRE(v.kind == VerdictKind::holds);
    RepeatedReport rep = verify_repeated(f, -1, q, GridSpec{3, 2}, v.dydx, v.dxdy);
    CHECK(rep.pass);
}

TEST_CASE("grid caps") {
    GridSpec tiny{8, 8, 1000};
    CHECK_THROWS_AS(tiny.check(q5), grid_too_large);
}
