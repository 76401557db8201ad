#include "lf2/measure.hpp"

namespace lf2 {

Rat LiftedTerm::eval(const FElem& x) const {
    FElem rel = x - a;
    ValuationResult v = rel.valuation();
    if (v.lower_bound() >= n) return f.eval(rel.shift(-n).residue());
    if (v.is_finite()) return Rat(0);
    throw insufficient_precision("lifted-term support membership undecidable", n);
}

std::string LiftedTerm::str() const {
    return "[" + f.str() + "]^(" + a.str() + ", " + std::to_string(n) + ")";
}

IntegrableFunctionF IntegrableFunctionF::lift(const SBFunction& f, const FElem& a, int n,
                                              const RatFunc& coeff) {
    IntegrableFunctionF g{a.spec(), {}};
    g.terms.push_back({coeff, LiftedTerm{f, a, n}});
    return g;
}

IntegrableFunctionF IntegrableFunctionF::char_ideal(const FElem& a, int c) {
    // Char_{a + t^c O_F} is the lift of the point mass at 0 in K at (a, c-1):
    // its value at a + t^(c-1) x is [res x = 0] = [x in t O_F].  Point masses
    // are Haar-null, which is exactly why translated ideals have measure 0.
    return lift(SBFunction::point_mass(KElem::zero(a.spec())), a, c - 1);
}

Rat haar_integral(const SBFunction& f) { return f.haar_integral(); }

RatFunc integral_F(const IntegrableFunctionF& g) {
    RatFunc total = RatFunc::zero();
    for (const auto& [coeff, term] : g.terms)
        total = total + coeff * RatFunc::monomial(term.f.haar_integral(), term.n);
    return total;
}

IntegrableFunctionF translate(const IntegrableFunctionF& g, const FElem& a) {
    // x -> g(x - a): each lift at a_i moves to a_i + a, so
    // translate(f^{0,0}, a) = f^{a,0}.
    IntegrableFunctionF out{g.spec, {}};
    for (const auto& [coeff, term] : g.terms)
        out.terms.push_back({coeff, LiftedTerm{term.f, term.a + a, term.n}});
    return out;
}

IntegrableFunctionF scale_arg(const IntegrableFunctionF& g, const FElem& alpha) {
    // x -> g(alpha x).  f^{a,n}(alpha x) = (f o (beta .))^{alpha^-1 a, n - nu},
    // where beta = res(alpha t^-nu) in K^x.
    ValuationResult v = alpha.valuation();
    if (v.is_infinite()) throw division_by_zero("scaling by zero");
    if (!v.is_finite())
        throw insufficient_precision("scaling by element of undecided valuation",
                                     v.lower_bound() + 1);
    int nu = v.value();
    KElem beta = alpha.shift(-nu).residue();
    FElem alpha_inv = alpha.inv(PREC_INF);
    IntegrableFunctionF out{g.spec, {}};
    for (const auto& [coeff, term] : g.terms) {
        SBFunction fb = term.f.pullback_affine(beta, KElem::zero(g.spec));
        out.terms.push_back({coeff, LiftedTerm{fb, alpha_inv * term.a, term.n - nu}});
    }
    return out;
}

std::pair<Rat, int> abs_value(const FElem& alpha) {
    ValuationResult v = alpha.valuation();
    if (v.is_infinite()) throw division_by_zero("absolute value of zero");
    if (!v.is_finite())
        throw insufficient_precision("absolute value of element of undecided valuation",
                                     v.lower_bound() + 1);
    int nu = v.value();
    KElem lead = alpha.shift(-nu).residue();
    ValuationResult lv = lead.valuation();
    if (!lv.is_finite())
        throw insufficient_precision("leading digit valuation undecided", 1);
    // |pi_K|_K = q^-1
    Rat r = rat_pow(Rat(1, static_cast<long>(alpha.spec().q())), lv.value());
    return {r, nu};
}

RatFunc evaluate(const IntegrableFunctionF& g, const FElem& x) {
    RatFunc total = RatFunc::zero();
    for (const auto& [coeff, term] : g.terms) total = total + coeff * RatFunc(term.eval(x));
    return total;
}

Rat Lifted2Term::eval(const FElem& x, const FElem& y) const {
    FElem r1 = x - a1, r2 = y - a2;
    ValuationResult v1 = r1.valuation(), v2 = r2.valuation();
    if (v1.lower_bound() >= n1 && v2.lower_bound() >= n2)
        return f.eval(r1.shift(-n1).residue(), r2.shift(-n2).residue());
    if ((v1.is_finite() && v1.value() < n1) || (v2.is_finite() && v2.value() < n2))
        return Rat(0);
    throw insufficient_precision("lifted-rectangle membership undecidable",
                                 std::max(n1, n2));
}

RatFunc repeated_integral_2(const Lifted2Term& g, RepeatOrder order) {
    // dydx: integrate the inner variable section-wise, producing the lift of
    // a marginal at (a_outer, n_outer), then integrate that.
    SBFunction marginal =
        order == RepeatOrder::dydx ? g.f.marginal1() : g.f.marginal2();
    int inner_n = order == RepeatOrder::dydx ? g.n2 : g.n1;
    int outer_n = order == RepeatOrder::dydx ? g.n1 : g.n2;
    // inner integral contributes X^inner_n, the outer lift X^outer_n
    return RatFunc::monomial(marginal.haar_integral(), inner_n + outer_n);
}

} // namespace lf2
