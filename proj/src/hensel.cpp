#include "lf2/polyarith.hpp"

namespace lf2 {

TaylorNormalization taylor_normalize(const FPoly& h, const FElem& a, int c) {
    if (h.is_zero()) throw error("taylor_normalize of the zero polynomial");
    std::vector<FElem> tay = h.taylor_at(a);
    const FieldTowerSpec& spec = h.spec();

    // R = min over k >= 1 of (c*k + nu(coeff_k)); decide it soundly.
    bool have = false;
    int R = 0;
    for (size_t k = 1; k < tay.size(); ++k) {
        ValuationResult v = tay[k].valuation();
        if (v.is_infinite()) continue;
        int lb = v.lower_bound() + c * static_cast<int>(k);
        if (v.is_finite()) {
            if (!have || lb < R) {
                have = true;
                R = lb;
            }
        } else if (!have || lb <= R) {
            // An undecided coefficient could lower the minimum.
            throw insufficient_precision("shift exponent undecidable in taylor_normalize",
                                         v.lower_bound() + 1);
        }
    }
    if (!have) throw error("taylor_normalize: polynomial constant on the disc");

    std::vector<FElem> norm;
    norm.push_back(FElem::zero(spec));
    for (size_t k = 1; k < tay.size(); ++k)
        norm.push_back(tay[k].shift(c * static_cast<int>(k) - R));
    TaylorNormalization out;
    out.constant = tay[0];
    out.shift = R;
    out.normalized = FPoly(spec, std::move(norm));
    return out;
}

FElem hensel_lift(const FPoly& q, const KElem& omega, const FElem& b, int N) {
    KPoly qbar = reduce(q);
    if (!(qbar.eval(omega) == b.residue()))
        throw error("hensel_lift: omega is not a residue-level solution");
    KElem slope = qbar.derivative().eval(omega);
    if (!slope.provably_nonzero())
        throw not_simple_root("hensel_lift at " + omega.str());
    if (N < 1) N = 1;

    FPoly dq = q.derivative();
    int work = N + 2;
    FElem x = FElem::from_k(omega);
    for (int iter = 0; iter < 64; ++iter) {
        FElem err = (q.eval(x) - b).truncate(work);
        ValuationResult v = err.valuation();
        if (v.lower_bound() >= N) {
            FElem out = x.reduce_mod_t(N);
            FElem check = q.eval(out) - b;
            if (check.valuation().lower_bound() < N)
                throw error("hensel_lift: postcondition failed");
            return out;
        }
        FElem corr = err * dq.eval(x).inv(work);
        x = (x - corr).truncate(work);
    }
    throw error("hensel_lift: no convergence (is q integral?)");
}

} // namespace lf2
