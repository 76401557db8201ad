// The lifted integral on F and repeated integrals on F x F.
//
// A LiftedTerm (f, a, n) denotes f^{a,n}, the function supported on
// a + t^n O_F with f^{a,n}(a + t^n x) = f(res x).  IntegrableFunctionF is a
// finite Q(X)-combination of such terms; its integral is
//   sum coeff * haar(f) * X^n.
// Translation and scaling are representation-level rewrites, so the
// invariance laws of the integral hold exactly.

#pragma once

#include <optional>
#include <vector>

#include "lf2/ratfunc.hpp"
#include "lf2/sbfunction.hpp"
#include "lf2/tower.hpp"

namespace lf2 {

struct LiftedTerm {
    SBFunction f;
    FElem a;
    int n = 0;

    // value at x (0 off the supporting ball); undecidable membership throws
    Rat eval(const FElem& x) const;
    std::string str() const;
};

struct IntegrableFunctionF {
    FieldTowerSpec spec;
    std::vector<std::pair<RatFunc, LiftedTerm>> terms;

    static IntegrableFunctionF zero(const FieldTowerSpec& s) { return {s, {}}; }
    static IntegrableFunctionF lift(const SBFunction& f, const FElem& a, int n,
                                    const RatFunc& coeff = RatFunc::one());
    // Char of the translated ideal a + t^c O_F (the lift of Char_{O_K}
    // one level down: a + t^c O_F = a + t^(c-1) (t O_F) ... realized here
    // as the lift of Char_{O_K} at a, c).
    static IntegrableFunctionF char_ideal(const FElem& a, int c);
};

// Theorem-level operations.
Rat haar_integral(const SBFunction& f);
RatFunc integral_F(const IntegrableFunctionF& g);
IntegrableFunctionF translate(const IntegrableFunctionF& g, const FElem& a);
IntegrableFunctionF scale_arg(const IntegrableFunctionF& g, const FElem& alpha);
// |alpha| = |res(alpha t^-nu)|_K * X^nu, returned as (rational, X-power)
std::pair<Rat, int> abs_value(const FElem& alpha);
RatFunc evaluate(const IntegrableFunctionF& g, const FElem& x);

struct Lifted2Term {
    SBFunction2 f;
    FElem a1, a2;
    int n1 = 0, n2 = 0;

    Rat eval(const FElem& x, const FElem& y) const;
};

enum class RepeatOrder { dxdy, dydx };

// Both orders equal integral(integral f) * X^(n1+n2); computed through
// marginal sections, not assumed.
RatFunc repeated_integral_2(const Lifted2Term& g, RepeatOrder order);

} // namespace lf2
