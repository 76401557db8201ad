#include "doctest.h"

#include "lf2/measure.hpp"
#include "lf2/parse.hpp"

#include <random>

using namespace lf2;

static FieldTowerSpec q5 = FieldTowerSpec::make_padic(5);
static FieldTowerSpec f2 = FieldTowerSpec::make_laurent(2);
static FieldTowerSpec f3 = FieldTowerSpec::make_laurent(3);
static FieldTowerSpec f4 = FieldTowerSpec::make_laurent(2, 2);

static KBall ball(const FieldTowerSpec& s, const char* c, int m) {
    return KBall(parse_kelem(s, c), m);
}

TEST_CASE("haar integral of step functions") {
    CHECK(SBFunction::unit_ball(q5).haar_integral() == 1);
    // Char(a + pi^2 O_K) over Q_5 -> 1/25
    CHECK(SBFunction::indicator(ball(q5, "3", 2)).haar_integral() == Rat(1, 25));
    // 3 Char(O_K) - Char(pi O_K) over F_2((u)) -> 3 - 1/2 = 5/2
    SBFunction g = SBFunction::unit_ball(f2).scale(3) -
                   SBFunction::indicator(ball(f2, "0", 1));
    CHECK(g.haar_integral() == Rat(5, 2));
}

TEST_CASE("step function canonical form") {
    // splitting a ball into its children and summing is the identity
    SBFunction whole = SBFunction::unit_ball(q5);
    SBFunction sum = SBFunction::zero(q5);
    for (const KBall& k : KBall(KElem::zero(q5), 0).split())
        sum = sum + SBFunction::indicator(k);
    CHECK(sum == whole);

    // overlapping terms add
    SBFunction h = SBFunction::unit_ball(q5) + SBFunction::indicator(ball(q5, "1", 1));
    CHECK(h.eval(KElem::from_int(q5, 1)) == 2);
    CHECK(h.eval(KElem::from_int(q5, 2)) == 1);
    CHECK(h.eval(KElem::from_rat(q5, Rat(1, 5))) == 0);
    CHECK(h.haar_integral() == Rat(6, 5));

    // point masses are pointwise visible but Haar-null
    SBFunction pm = SBFunction::point_mass(KElem::zero(q5));
    CHECK(pm.haar_integral() == 0);
    CHECK(pm.eval(KElem::zero(q5)) == 1);
    CHECK(pm.eval(KElem::from_int(q5, 5)) == 0);
}

TEST_CASE("null measure of translated ideals") {
    // mu(O_F) = 0, via Char_{O_F} = Char_{tO_F}(t x)
    auto charOF = IntegrableFunctionF::char_ideal(FElem::zero(q5), 0);
    CHECK(integral_F(charOF) == RatFunc::zero());
    // pointwise it is the indicator of O_F
    CHECK(evaluate(charOF, parse_felem(q5, "t")) == RatFunc::one());
    CHECK(evaluate(charOF, parse_felem(q5, "1 + 2*t^2")) == RatFunc::one());
    CHECK(evaluate(charOF, parse_felem(q5, "t^-1")) == RatFunc::zero());

    for (int c : {1, 2, 3}) {
        auto ch = IntegrableFunctionF::char_ideal(parse_felem(f3, "1 + u*t"), c);
        CHECK(integral_F(ch) == RatFunc::zero());
    }
}

TEST_CASE("paper example: -2X") {
    // g1 = Char_{tO_F}, g2 = -2 Char_{t{x : res x in S}}, mu(S) = 1
    auto g1 = IntegrableFunctionF::char_ideal(FElem::zero(q5), 1);
    auto g2 = IntegrableFunctionF::lift(SBFunction::unit_ball(q5).scale(-2),
                                        FElem::zero(q5), 1);
    IntegrableFunctionF g{q5, {}};
    for (auto& t : g1.terms) g.terms.push_back(t);
    for (auto& t : g2.terms) g.terms.push_back(t);
    CHECK(integral_F(g) == RatFunc::monomial(Rat(-2), 1));
}

TEST_CASE("integral of lifts") {
    // f^{0,0} with haar 1 integrates to 1
    auto f00 = IntegrableFunctionF::lift(SBFunction::unit_ball(f3), FElem::zero(f3), 0);
    CHECK(integral_F(f00) == RatFunc::one());
    // f^{a,n}: integral X^n / 5
    SBFunction fifth = SBFunction::indicator(ball(q5, "2", 1), Rat(5, 4));
    CHECK(fifth.haar_integral() == Rat(1, 4));
    auto fan = IntegrableFunctionF::lift(fifth.scale(Rat(4, 5)), parse_felem(q5, "t^-2"), 3);
    CHECK(integral_F(fan) == RatFunc::monomial(Rat(1, 5), 3));
}

TEST_CASE("translate and scale laws") {
    auto f00 = IntegrableFunctionF::lift(SBFunction::unit_ball(q5), FElem::zero(q5), 0);
    // translate(f^{0,0}, t) = f^{t,0}
    auto tr = translate(f00, FElem::t(q5));
    REQUIRE(tr.terms.size() == 1);
    CHECK(tr.terms[0].second.a == FElem::t(q5));
    CHECK(integral_F(tr) == integral_F(f00));

    // scaling Char_{tO_F} by t^-1 gives Char_{O_F}: X^-1 times the integral
    auto chtof = IntegrableFunctionF::char_ideal(FElem::zero(q5), 1);
    auto sc = scale_arg(chtof, FElem::t(q5));  // x -> Char_{tO_F}(t x) = Char_{O_F}(x)
    CHECK(evaluate(sc, FElem::one(q5)) == RatFunc::one());
    CHECK(evaluate(sc, parse_felem(q5, "t^-1")) == RatFunc::zero());
    auto [r, n] = abs_value(FElem::t(q5));
    CHECK(r == 1);
    CHECK(n == 1);
    CHECK(integral_F(sc) == RatFunc::monomial(r, n).inv() * integral_F(chtof));

    // translate by a then -a is the identity
    FElem a = parse_felem(q5, "2*t^-1 + 3");
    auto back = translate(translate(f00, a), -a);
    CHECK(back.terms[0].second.a == f00.terms[0].second.a);
}

TEST_CASE("absolute value") {
    CHECK(abs_value(FElem::t(q5)) == std::make_pair(Rat(1), 1));
    // |p t^-2| over Q_p((t)) = (1/p, -2)
    CHECK(abs_value(parse_felem(q5, "5*t^-2")) == std::make_pair(Rat(1, 5), -2));
    // |u^-1| over F_4((u))((t)) = (4, 0)
    CHECK(abs_value(parse_felem(f4, "u^-1")) == std::make_pair(Rat(4), 0));
    CHECK_THROWS_AS(abs_value(FElem::zero(q5)), division_by_zero);
}

TEST_CASE("evaluate lifted functions") {
    auto charOF = IntegrableFunctionF::char_ideal(FElem::zero(f3), 0);
    CHECK(evaluate(charOF, FElem::t(f3)) == RatFunc::one());
    CHECK(evaluate(charOF, parse_felem(f3, "t^-1")) == RatFunc::zero());
    // f^{0,1} at t*x0 equals f(res x0)
    SBFunction f = SBFunction::indicator(ball(f3, "1", 1), Rat(7));
    auto g = IntegrableFunctionF::lift(f, FElem::zero(f3), 1);
    FElem x0 = parse_felem(f3, "1 + u*t");
    CHECK(evaluate(g, FElem::t(f3) * x0) == RatFunc(f.eval(x0.residue())));
    CHECK(evaluate(g, parse_felem(f3, "2*t")) == RatFunc(Rat(0)));
}

TEST_CASE("repeated integrals of 2D lifts") {
    Lifted2Term g{SBFunction2::unit_square(f2), FElem::zero(f2), FElem::zero(f2), 0, 0};
    CHECK(repeated_integral_2(g, RepeatOrder::dxdy) == RatFunc::one());
    CHECK(repeated_integral_2(g, RepeatOrder::dydx) == RatFunc::one());

    Lifted2Term g2{SBFunction2::unit_square(f2), FElem::zero(f2), FElem::zero(f2), 1, 2};
    CHECK(repeated_integral_2(g2, RepeatOrder::dxdy) == RatFunc::monomial(Rat(1), 3));
    CHECK(repeated_integral_2(g2, RepeatOrder::dydx) == RatFunc::monomial(Rat(1), 3));

    // a function with zero double integral
    SBFunction2 odd = SBFunction2::indicator(ball(f2, "0", 1), ball(f2, "0", 0)) +
                      SBFunction2::indicator(ball(f2, "1", 1), ball(f2, "0", 0), Rat(-1));
    CHECK(odd.double_integral() == 0);
    Lifted2Term g3{odd, FElem::zero(f2), FElem::zero(f2), 0, 5};
    CHECK(repeated_integral_2(g3, RepeatOrder::dxdy) == RatFunc::zero());
}

TEST_CASE("randomized integral laws") {
    std::mt19937_64 rng(777);
    auto rand_rat = [&]() {
        Rat r(static_cast<long>(rng() % 11) - 5, 1 + static_cast<long>(rng() % 4));
        r.canonicalize();
        return r;
    };
    for (const auto& spec : {q5, f3}) {
        for (int iter = 0; iter < 60; ++iter) {
            // random step function and lift data
            SBFunction f = SBFunction::zero(spec);
            int nb = 1 + static_cast<int>(rng() % 3);
            for (int i = 0; i < nb; ++i) {
                KElem c = KElem::grid_element(spec, 2, rng() % (spec.q() * spec.q()));
                int m = static_cast<int>(rng() % 4) - 1;
                f = f + SBFunction::indicator(KBall(c, m), rand_rat());
            }
            FElem a = FElem::grid_element(spec, 2, 1, rng() % (spec.q() * spec.q()), -1);
            int n = static_cast<int>(rng() % 5) - 2;
            auto g = IntegrableFunctionF::lift(f, a, n, RatFunc::monomial(rand_rat(), 1));

            // translation invariance
            FElem sh = FElem::grid_element(spec, 2, 1, rng() % (spec.q() * spec.q()), -2);
            CHECK(integral_F(translate(g, sh)) == integral_F(g));

            // scaling law with |alpha|
            FElem alpha = FElem::grid_element(spec, 2, 1, 1 + rng() % (spec.q() * spec.q() - 1), -1);
            if (alpha.valuation().is_finite()) {
                auto [r, nu] = abs_value(alpha);
                CHECK(integral_F(scale_arg(g, alpha)) ==
                      RatFunc::monomial(r, nu).inv() * integral_F(g));
            }

            // linearity over Q(X) coefficients
            auto g2 = IntegrableFunctionF::lift(f, a, n - 1, RatFunc::monomial(rand_rat(), -2));
            IntegrableFunctionF s{spec, {}};
            for (auto& t : g.terms) s.terms.push_back(t);
            for (auto& t : g2.terms) s.terms.push_back(t);
            CHECK(integral_F(s) == integral_F(g) + integral_F(g2));

            // lifting property: integral of f^{0,0} is the Haar integral
            auto f00 = IntegrableFunctionF::lift(f, FElem::zero(spec), 0);
            CHECK(integral_F(f00) == RatFunc(f.haar_integral()));
        }
    }
}
