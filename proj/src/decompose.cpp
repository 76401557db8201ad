#include "lf2/decompose.hpp"

#include <algorithm>

namespace lf2 {

TranslatedIdeal::TranslatedIdeal(const FElem& a, int exponent) : c(exponent) {
    center = a.reduce_mod_t(c);
}

std::string TranslatedIdeal::str() const {
    if (center.provably_zero()) return "t^" + std::to_string(c) + "*O_F";
    return center.str() + " + t^" + std::to_string(c) + "*O_F";
}

std::string Decomposition::str() const {
    std::string s;
    for (const auto& p : pieces) {
        if (!s.empty()) s += "\n";
        s += p.ideal.str() + "  psi = " + p.psi.str();
    }
    return s.empty() ? "(empty)" : s;
}

KElem effective_residue(const FElem& x, int kthresh) {
    // like residue(), but digits below t^0 that vanish at the working
    // threshold are treated as zero; the returned digit is NOT canonicalized
    for (const auto& [e, c] : x.coeffs()) {
        if (e >= 0) break;
        if (!effectively_zero(c, kthresh))
            throw negative_valuation("effective residue of " + x.str());
    }
    if (x.precision() <= 0)
        throw insufficient_precision("residue digit not visible", 1);
    auto it = x.coeffs().find(0);
    if (it == x.coeffs().end()) return KElem::zero(x.spec());
    return it->second;
}

KPoly effective_reduce_poly(const FPoly& q, int kthresh) {
    std::vector<KElem> cs;
    for (int i = 0; i <= q.degree(); ++i) cs.push_back(effective_residue(q.coeff(i), kthresh));
    return KPoly(q.spec(), std::move(cs));
}

FElem effective_reduce_f(const FElem& x, int kthresh) {
    std::map<int, KElem> co;
    for (const auto& [e, c] : x.coeffs()) {
        KElem r = effective_reduce(c, kthresh);
        if (!r.provably_zero()) co[e] = r;
    }
    return FElem::make(x.spec(), std::move(co), x.precision());
}

TaylorNormalization taylor_normalize_eff(const FPoly& h, const FElem& a, int c,
                                         int kthresh) {
    if (h.is_zero()) throw error("taylor_normalize of the zero polynomial");
    std::vector<FElem> tay = h.taylor_at(a);
    const FieldTowerSpec& spec = h.spec();
    bool have = false;
    int R = 0;
    for (size_t k = 1; k < tay.size(); ++k) {
        ValuationResult v = effective_valuation(tay[k], kthresh);
        if (v.is_infinite()) continue;
        int lb = v.lower_bound() + c * static_cast<int>(k);
        if (v.is_finite()) {
            if (!have || lb < R) {
                have = true;
                R = lb;
            }
        } else if (!have || lb <= R) {
            throw insufficient_precision("shift exponent undecidable", v.lower_bound() + 1);
        }
    }
    if (!have) throw error("taylor_normalize: polynomial constant on the disc");
    std::vector<FElem> norm;
    norm.push_back(FElem::zero(spec));
    for (size_t k = 1; k < tay.size(); ++k)
        norm.push_back(tay[k].shift(c * static_cast<int>(k) - R));
    return {tay[0], R, FPoly(spec, std::move(norm))};
}

namespace {

// psi of q on (a, c) -> (b, A), given containment; effective arithmetic.
KPoly psi_of(const FPoly& q, const FElem& a, int c, const FElem& b, int A, int kthresh) {
    TaylorNormalization tn = taylor_normalize_eff(q, a, c, kthresh);
    FElem delta = tn.constant - b;
    ValuationResult dv = effective_valuation(delta, kthresh);
    if (dv.lower_bound() < A || tn.shift < A)
        throw not_contained("q image of " + a.str() + " + t^" + std::to_string(c) +
                            " O_F at depth " + std::to_string(A));
    KElem kappa = effective_residue(delta.shift(-A), kthresh);
    KPoly psi = KPoly::constant(kappa);
    if (tn.shift == A) psi = psi + effective_reduce_poly(tn.normalized, kthresh);
    return psi;
}

struct PieceBuilder {
    FPoly q;
    FElem b;
    int A;
    int kprec;     // canonicalization modulus for emitted data
    int rootprec;  // root working precision (> kprec)
    std::vector<DecompPiece> out;

    void canonicalize_psi(KPoly& psi) const {
        std::vector<KElem> cs;
        for (int i = 0; i <= psi.degree(); ++i)
            cs.push_back(effective_reduce(psi.coeff(i), kprec));
        psi = KPoly(psi.spec(), std::move(cs));
    }

    void emit(const FElem& center, int c, bool exact, bool from_singular) {
        DecompPiece p;
        FElem red = center.reduce_mod_t(c);
        if (!exact) red = effective_reduce_f(red, kprec);
        p.ideal = TranslatedIdeal(red, c);
        p.psi = psi_of(q, p.ideal.center, c, b, A, kprec);
        if (!exact) canonicalize_psi(p.psi);
        p.exact = exact;
        p.from_singular = from_singular;
        out.push_back(p);
    }

    // Simple residue root omega of qbar - bbar: Hensel chain to depth A.
    void nonsingular(const KRoot& omega) {
        FPoly dq = q.derivative();
        FElem x = FElem::from_k(omega.value);
        int work = A + 2;
        for (int iter = 0; iter < 64; ++iter) {
            FElem err = (q.eval(x) - b).truncate(work);
            if (effective_valuation(err, kprec).lower_bound() >= A) {
                emit(x, A, omega.exact, false);
                return;
            }
            x = (x - err * dq.eval(x).inv(work)).truncate(work);
        }
        throw error("decompose: Hensel chain failed to converge");
    }

    // Iterated depth-1 refinement of a singular residue class.
    void singular(const KRoot& u) {
        struct Item {
            FElem center;
            int c;
            int depth;
            bool exact;
        };
        std::vector<Item> stack{{FElem::from_k(u.value), 1, 1, u.exact}};
        while (!stack.empty()) {
            Item it = stack.back();
            stack.pop_back();
            if (it.depth >= A) {
                emit(it.center, it.c, it.exact, true);
                continue;
            }
            KPoly psi = psi_of(q, it.center, it.c, b, it.depth, kprec);
            if (psi.degree() < 1) {
                // constant approximation survives whole iff the constant is 0
                if (psi.is_zero() || effectively_zero(psi.coeff(0), kprec))
                    stack.push_back({it.center, it.c, it.depth + 1, it.exact});
                continue;
            }
            RootSearchResult rr = roots_over_K(psi, rootprec);
            if (!rr.complete)
                throw root_budget_exceeded("singular refinement at depth " +
                                           std::to_string(it.depth));
            for (const KRoot& w : rr.roots) {
                // residue-ball coordinates are integral: ignore spurious
                // negative-valuation roots of approximated psi
                if (w.value.valuation().lower_bound() < 0) continue;
                FElem next = it.center + FElem::monomial(w.value, it.c);
                stack.push_back({next, it.c + 1, it.depth + 1, it.exact && w.exact});
            }
        }
    }
};

} // namespace

ResidueApprox residue_approximation(const FPoly& h, const TranslatedIdeal& src,
                                    const TranslatedIdeal& dst) {
    TaylorNormalization tn = taylor_normalize(h, src.center, src.c);
    FElem delta = tn.constant - dst.center;
    ValuationResult dv = delta.valuation();
    if (!dv.is_infinite() && !dv.is_finite() && dv.lower_bound() < dst.c)
        throw insufficient_precision("containment undecidable", dst.c);
    if (dv.lower_bound() < dst.c || tn.shift < dst.c)
        throw not_contained(src.str() + " -> " + dst.str());
    KElem kappa = delta.shift(-dst.c).residue();
    KPoly psi = KPoly::constant(kappa);
    if (tn.shift == dst.c) psi = psi + reduce(tn.normalized);
    return {psi, src, dst};
}

Decomposition decompose_preimage(const FPoly& q, const FElem& b, int A, int kprec) {
    if (A < 1) throw error("decompose_preimage needs A >= 1");
    if (q.degree() < 1) throw error("decompose_preimage needs deg q >= 1");
    for (int i = 0; i <= q.degree(); ++i)
        if (q.coeff(i).valuation().lower_bound() < 0)
            throw negative_valuation("decompose_preimage needs integral q");
    KPoly qbar = reduce(q);
    if (!qbar.provably_nonzero()) throw error("decompose_preimage needs nonzero reduction");

    Decomposition dec;
    dec.q = q;
    dec.b = b;
    dec.A = A;

    ValuationResult vb = effective_valuation(b, kprec);
    if (vb.is_finite() && vb.value() < 0) return dec;  // empty: q(O_F) lies in O_F

    PieceBuilder pb{q, b, A, kprec, kprec + 8, {}};
    KElem bbar = effective_residue(b, kprec);
    KPoly shifted = qbar - KPoly::constant(bbar);
    RootSearchResult rr = roots_over_K(shifted, pb.rootprec);
    if (!rr.complete) throw root_budget_exceeded("residue roots of qbar - bbar");
    KPoly dqbar = qbar.derivative();
    for (const KRoot& root : rr.roots) {
        if (root.value.valuation().lower_bound() < 0) continue;  // outside O_F
        bool simple_for_q =
            root.exact ? dqbar.eval(root.value).provably_nonzero()
                       : !effectively_zero(dqbar.eval(root.value),
                                           std::max(1, pb.rootprec / 2));
        if (simple_for_q)
            pb.nonsingular(root);
        else
            pb.singular(root);
    }

    std::sort(pb.out.begin(), pb.out.end(), [](const DecompPiece& x, const DecompPiece& y) {
        if (x.ideal.c != y.ideal.c) return x.ideal.c < y.ideal.c;
        return x.ideal.center.cmp(y.ideal.center) < 0;
    });
    dec.pieces = std::move(pb.out);

    // paper bound: at most (deg q)^A pieces
    double bound = 1;
    for (int i = 0; i < A; ++i) bound *= q.degree();
    if (static_cast<double>(dec.pieces.size()) > bound)
        throw error("internal: piece count exceeds (deg q)^A");
    return dec;
}

std::vector<FElem> singular_targets(const FPoly& q, int A, int kprec) {
    if (A != 1 && A != 2) throw error("singular_targets needs A in {1,2}");
    KPoly qbar = reduce(q);
    KPoly dqbar = qbar.derivative();
    if (!dqbar.provably_nonzero())
        throw purely_inseparable_error("qbar' = 0 in singular_targets");
    RootSearchResult rr = roots_over_K(dqbar, kprec + 8);
    if (!rr.complete) throw root_budget_exceeded("roots of qbar'");
    std::vector<FElem> targets;
    for (const KRoot& sigma : rr.roots) {
        if (sigma.value.valuation().lower_bound() < 0) continue;
        FElem rep = q.eval(FElem::from_k(sigma.value)).reduce_mod_t(A);
        if (!sigma.exact) rep = effective_reduce_f(rep, kprec);
        bool dup = false;
        for (const FElem& existing : targets)
            if (effective_valuation(existing - rep, kprec).lower_bound() >= A) dup = true;
        if (!dup) targets.push_back(rep);
    }
    std::sort(targets.begin(), targets.end(),
              [](const FElem& a, const FElem& b) { return a.cmp(b) < 0; });
    return targets;
}

bool membership(const FElem& x, const TranslatedIdeal& piece) {
    ValuationResult v = (x - piece.center).valuation();
    if (v.lower_bound() >= piece.c) return true;
    if (v.is_finite()) return false;
    throw insufficient_precision("membership undecidable", piece.c);
}

} // namespace lf2
