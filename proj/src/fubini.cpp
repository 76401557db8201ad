#include "lf2/fubini.hpp"

#include <algorithm>
#include <sstream>

namespace lf2 {

namespace {

Rat q_of(const FieldTowerSpec& s) { return Rat(static_cast<long>(s.q())); }

Rat qpow(const FieldTowerSpec& s, long e) { return rat_pow(q_of(s), e); }

// integral of f2 over the ball P (exact; ultrametric intersections are
// nested or disjoint, point masses are null)
Rat f2_mass_on_ball(const SBFunction& f2, const KBall& P) {
    Rat total(0);
    for (const auto& [b, v] : f2.terms()) {
        if (b.disjoint(P)) continue;
        total += v * (P.contains(b) ? b.measure() : P.measure());
    }
    return total;
}

// Solutions of psi(u) in target have valuation bounded below; a ball
// containing all of them.
KBall solution_domain(const KPoly& psi, const KBall& target, int kthresh) {
    if (psi.degree() < 1) throw error("solution_domain needs deg >= 1");
    int deg = psi.degree();
    ValuationResult vl = effective_valuation(psi.coeff(deg), kthresh);
    if (!vl.is_finite()) throw insufficient_precision("leading coefficient undecided", 1);
    int nul = vl.value();
    // strict leading-monomial dominance below U_dom
    int U_dom = 0;
    for (int k = 0; k < deg; ++k) {
        ValuationResult v = effective_valuation(psi.coeff(k), kthresh);
        if (!v.is_finite()) continue;
        int bound = (v.value() - nul) / (deg - k) - 1;
        while (v.value() + k * bound <= nul + deg * bound) --bound;  // strictness
        U_dom = std::min(U_dom, bound);
    }
    ValuationResult vt = target.center.valuation();
    int tau = std::min(vt.lower_bound(), target.m);
    int num = tau - nul;
    int kmin = num >= 0 ? num / deg : -((-num + deg - 1) / deg);
    int U = std::min(kmin, U_dom + 1) - 1;
    return KBall(KElem::zero(psi.spec()), U);
}

// integral over all of K of u -> fsec(-psi(u)) (exact)
Rat integral_sec_minus_psi(const SBFunction& fsec, const KPoly& psi, int kthresh) {
    Rat total(0);
    for (const auto& [b, val] : fsec.terms()) {
        KBall neg(-b.center, b.m);
        KBall dom = solution_domain(psi, neg, kthresh);
        total += val * kball_preimage_measure(psi, neg, dom, kthresh);
    }
    return total;
}

} // namespace

// ---------------------------------------------------------------------------
// MassLadder

bool MassLadder::divergent() const {
    if (masses.empty() || masses.back() == 0) return false;
    return ratio >= 1 || ratio <= -1;
}

bool MassLadder::convergent() const { return masses.empty() || (ratio > -1 && ratio < 1); }

Rat MassLadder::total() const {
    if (!convergent()) throw error("total of a divergent mass ladder");
    Rat sum(0);
    for (const Rat& m : masses) sum += m;
    if (!masses.empty()) sum += masses.back() * ratio / (1 - ratio);
    return sum;
}

std::string FubiniVerdict::kind_str() const {
    switch (kind) {
        case VerdictKind::holds: return "HOLDS";
        case VerdictKind::not_integrable: return "NOT_INTEGRABLE";
        case VerdictKind::counterexample: return "COUNTEREXAMPLE";
        default: return "UNKNOWN";
    }
}

// ---------------------------------------------------------------------------
// normalization and the easy integral

DepthNormalization normalize(const ConjectureData& d, int kprec) {
    TaylorNormalization tn = taylor_normalize_eff(d.h, d.a1, d.n1, kprec);
    DepthNormalization out;
    out.depth = tn.shift - d.n2;
    out.q = tn.normalized;
    return out;
}

RatFunc dydx_integral(const SBFunction2& f, int R, const FPoly& q) {
    // per section, y -> f^0(x, y - t^R q(x)) is a translate of y -> f^0(x,y);
    // translation invariance collapses the computation to the double integral
    (void)R;
    (void)q;
    return RatFunc(f.double_integral());
}

Rat eval_J(const KPoly& qbar, const SBFunction2& f, const KElem& v, int kprec) {
    KPoly shifted = qbar - KPoly::constant(v);
    RootSearchResult rr = roots_over_K(shifted, kprec + 8);
    if (!rr.complete) throw root_budget_exceeded("J evaluation");
    KPoly dq = qbar.derivative();
    Rat total(0);
    for (const KRoot& root : rr.roots) {
        if (!root.simple) continue;
        ValuationResult sv = effective_valuation(dq.eval(root.value), kprec);
        if (!sv.is_finite()) continue;  // critical point itself: excluded
        Rat sec = f.section1(root.value).haar_integral();
        total += qpow(f.spec(), sv.value()) * sec;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Nonsingular analysis: integral of J by change of variables on certified
// ball partitions plus geometric ladders at the critical points.

namespace {

struct CriticalSite {
    KElem sigma;
    KElem wstar;   // qbar(sigma)
    int stilde;    // local multiplicity: qbar(sigma+e) - wstar ~ g e^stilde
    int nug;       // nu(g_stilde)
    int ksigma;    // omega-ball cutoff
    int ell;       // v-exclusion level: nug + stilde*ksigma
    Rat f2_at;     // f2 value near sigma
};

struct NsResult {
    Rat total;
    std::vector<MassLadder> ladders;
};

struct bump_needed : error {
    bump_needed() : error("exclusion needs refinement") {}
};

struct NsAnalyzer {
    KPoly qbar;
    SBFunction f2;
    int kprec;
    std::vector<CriticalSite> sites;
    std::vector<std::pair<KBall, std::vector<size_t>>> regions;  // merged exclusions
    KBall domain;

    NsAnalyzer(const KPoly& qb, const SBFunction& f2_, int kp)
        : qbar(qb), f2(f2_), kprec(kp), domain(KElem::zero(qb.spec()), 0) {}

    int f2_flat_scale(const KElem& x) const {
        int m = 0;
        for (const auto& [b, v] : f2.terms())
            if (b.contains(x)) m = std::max(m, b.m);
        return m;
    }

    void build_sites(int extra) {
        sites.clear();
        KPoly dq = qbar.derivative();
        RootSearchResult rr = roots_over_K(dq, kprec + 8);
        if (!rr.complete) throw root_budget_exceeded("critical points of qbar");
        for (const KRoot& root : rr.roots) {
            CriticalSite s;
            s.sigma = root.value;
            std::vector<KElem> tay = qbar.taylor_at(s.sigma);
            s.wstar = tay[0];
            s.stilde = 0;
            for (size_t j = 1; j < tay.size(); ++j)
                if (!effectively_zero(tay[j], kprec)) {
                    s.stilde = static_cast<int>(j);
                    break;
                }
            if (s.stilde == 0) throw error("internal: constant qbar near a critical point");
            ValuationResult gv = effective_valuation(tay[s.stilde], kprec);
            s.nug = gv.value();
            int kstar = 1;
            for (size_t j = s.stilde + 1; j < tay.size(); ++j) {
                if (effectively_zero(tay[j], kprec)) continue;
                int nuj = effective_valuation(tay[j], kprec).value();
                int diff = s.nug - nuj;
                int gap = static_cast<int>(j) - s.stilde;
                int need = diff >= 0 ? diff / gap + 1 : 1;
                kstar = std::max(kstar, need);
            }
            std::vector<KElem> dtay = dq.taylor_at(s.sigma);
            int sd = -1;
            for (size_t j = 0; j < dtay.size(); ++j)
                if (!effectively_zero(dtay[j], kprec)) {
                    sd = static_cast<int>(j);
                    break;
                }
            if (sd >= 0) {
                int nud = effective_valuation(dtay[sd], kprec).value();
                for (size_t j = sd + 1; j < dtay.size(); ++j) {
                    if (effectively_zero(dtay[j], kprec)) continue;
                    int nuj = effective_valuation(dtay[j], kprec).value();
                    int diff = nud - nuj;
                    int gap = static_cast<int>(j) - sd;
                    int need = diff >= 0 ? diff / gap + 1 : 1;
                    kstar = std::max(kstar, need);
                }
            }
            s.ksigma = std::max({kstar, f2_flat_scale(s.sigma), 1}) + 1 + extra;
            s.ell = s.nug + s.stilde * s.ksigma;
            s.f2_at = f2.eval(s.sigma);
            sites.push_back(s);
        }
        for (size_t i = 0; i < sites.size(); ++i)
            for (size_t j = i + 1; j < sites.size(); ++j) {
                KBall bi(sites[i].sigma, sites[i].ksigma);
                KBall bj(sites[j].sigma, sites[j].ksigma);
                if (!bi.disjoint(bj)) throw bump_needed();
            }
        regions.clear();
        for (size_t i = 0; i < sites.size(); ++i) {
            KBall e(sites[i].wstar, sites[i].ell);
            bool merged = false;
            for (auto& [ball, idx] : regions) {
                if (ball.disjoint(e)) continue;
                if (!ball.contains(e)) ball = e;  // e is coarser (or equal)
                idx.push_back(i);
                merged = true;
                break;
            }
            if (!merged) regions.push_back({e, {i}});
        }
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t i = 0; i < regions.size() && !changed; ++i)
                for (size_t j = i + 1; j < regions.size() && !changed; ++j)
                    if (!regions[i].first.disjoint(regions[j].first)) {
                        KBall coarse = regions[i].first.m <= regions[j].first.m
                                           ? regions[i].first
                                           : regions[j].first;
                        auto idx = regions[i].second;
                        idx.insert(idx.end(), regions[j].second.begin(),
                                   regions[j].second.end());
                        regions.erase(regions.begin() + j);
                        regions[i] = {coarse, idx};
                        changed = true;
                    }
        }
    }

    std::vector<KBall> preimage(const KBall& V) const {
        return kball_preimage(qbar, V, domain, kprec);
    }

    Rat region_mass(const std::pair<KBall, std::vector<size_t>>& region) const {
        Rat mass(0);
        for (const KBall& P : preimage(region.first)) {
            bool inside_sigma = false;
            for (size_t i : region.second) {
                KBall sball(sites[i].sigma, sites[i].ksigma);
                if (sball.contains(P)) {
                    inside_sigma = true;
                    break;
                }
                if (P.contains(sball) && !(P == sball)) throw bump_needed();
            }
            if (!inside_sigma) mass += f2_mass_on_ball(f2, P);
        }
        return mass;
    }

    Rat window_mass(const KBall& V, int depth_guard) const {
        for (const auto& region : regions) {
            if (V == region.first) return region_mass(region);
            if (V.contains(region.first)) {
                if (depth_guard > 64) throw error("ns window split too deep");
                Rat mass(0);
                for (const KBall& child : V.split())
                    mass += window_mass(child, depth_guard + 1);
                return mass;
            }
            if (region.first.contains(V))
                throw error("internal: window descended into an exclusion");
        }
        Rat mass(0);
        for (const KBall& P : preimage(V)) mass += f2_mass_on_ball(f2, P);
        return mass;
    }

    NsResult run() {
        NsResult out;
        out.total = Rat(0);
        if (f2.terms().empty()) return out;
        domain = KBall(KElem::zero(qbar.spec()), f2.support_val_lb());
        int W = 0;
        for (int k = 1; k <= qbar.degree(); ++k) {
            if (effectively_zero(qbar.coeff(k), kprec)) continue;
            int nuk = effective_valuation(qbar.coeff(k), kprec).value();
            W = std::min(W, nuk + k * std::min(domain.m, 0));
        }
        {
            ValuationResult v0 = effective_valuation(qbar.coeff(0), kprec);
            if (v0.is_finite()) W = std::min(W, v0.value());
        }
        for (const auto& s : sites) {
            ValuationResult wv = effective_valuation(s.wstar, kprec);
            W = std::min(W, std::min(wv.lower_bound(), s.ell) - 1);
        }
        out.total = window_mass(KBall(KElem::zero(qbar.spec()), W), 0);
        for (const auto& s : sites) {
            MassLadder lad;
            lad.center = effective_reduce(s.wstar, kprec);
            lad.level0 = s.ell;
            lad.step = s.stilde;
            Rat q = q_of(qbar.spec());
            lad.masses = {s.f2_at * (1 - 1 / q) * rat_pow(1 / q, s.ksigma)};
            lad.ratio = 1 / q;
            lad.origin = "ns";
            out.total += lad.total();
            out.ladders.push_back(lad);
        }
        return out;
    }
};

NsResult analyze_ns(const KPoly& qbar, const SBFunction2& f, int kprec) {
    SBFunction f2 = f.marginal1();
    for (int attempt = 0; attempt < 6; ++attempt) {
        NsAnalyzer an(qbar, f2, kprec);
        try {
            an.build_sites(2 * attempt);
            return an.run();
        } catch (const bump_needed&) {
            continue;
        }
    }
    throw unsupported_fiber_structure("ns exclusion refinement did not stabilize");
}

} // namespace

// ---------------------------------------------------------------------------
// Singular analysis

namespace {

struct SingResult {
    bool identically_zero = false;
    bool divergent = false;
    bool unknown = false;
    std::vector<MassLadder> ladders;
    std::string diag;
};

// the exact-monomial shape c * X^d (unit c)
bool exact_monomial(const FPoly& q, int& d, FElem& c) {
    int deg = q.degree();
    if (deg < 1) return false;
    for (int i = 0; i < deg; ++i)
        if (!q.coeff(i).provably_zero()) return false;
    d = deg;
    c = q.coeff(deg);
    return c.valuation().is_finite() && c.valuation().value() == 0;
}

// outward ladder of integral{nu(psi(u)) = level} masses scaled by M
MassLadder psi_valuation_ladder(const KPoly& psi, const Rat& M, int xpow, int kthresh,
                                const std::string& origin) {
    const FieldTowerSpec& spec = psi.spec();
    int deg = psi.degree();
    int nul = effective_valuation(psi.coeff(deg), kthresh).value();
    int U_dom = 0;
    for (int k = 0; k < deg; ++k) {
        if (effectively_zero(psi.coeff(k), kthresh)) continue;
        int nuk = effective_valuation(psi.coeff(k), kthresh).value();
        int bound = (nuk - nul) / (deg - k) - 2;
        U_dom = std::min(U_dom, bound);
    }
    int kappa0 = U_dom - 1;  // strictly inside the dominance zone
    MassLadder lad;
    lad.center = KElem::zero(spec);
    lad.level0 = nul + deg * kappa0;
    lad.step = -deg;  // outward
    Rat q = q_of(spec);
    lad.masses = {M * (1 - 1 / q) * rat_pow(q, -kappa0)};
    lad.ratio = q;
    lad.xpow = xpow;
    lad.origin = origin;
    return lad;
}

SingResult analyze_sing(const SBFunction2& f, int R, const FPoly& q, const KPoly& qbar,
                        int kprec) {
    SingResult out;
    int A = -R;
    const FieldTowerSpec& spec = f.spec();
    if (R == -1) {
        // depth-1 residue approximations of the singular part are constant
        out.identically_zero = true;
        return out;
    }
    {
        // no critical points at all: the singular locus is empty
        RootSearchResult crit = roots_over_K(qbar.derivative(), kprec + 8);
        if (!crit.complete) throw root_budget_exceeded("critical points of qbar");
        if (crit.roots.empty()) {
            out.identically_zero = true;
            return out;
        }
    }
    if (R == -2) {
        std::vector<FElem> targets = singular_targets(q, 2, kprec);
        bool saw_nonzero_mass = false, saw_mixed = false, saw_unknown = false;
        bool all_zero = true;
        int sign = 0;
        for (const FElem& b : targets) {
            Decomposition dec = decompose_preimage(q, b, 2, kprec);
            for (const auto& piece : dec.pieces) {
                if (!piece.from_singular || piece.psi.degree() < 1) continue;
                KElem abar = piece.ideal.center.coeffs().count(0)
                                 ? piece.ideal.center.coeffs().at(0)
                                 : KElem::zero(spec);
                SBFunction fsec = f.section1(abar);
                if (fsec.is_zero()) continue;
                all_zero = false;
                Rat M = fsec.haar_integral();
                if (M == 0) {
                    saw_unknown = true;
                    continue;
                }
                int s = M > 0 ? 1 : -1;
                if (sign == 0) sign = s;
                if (s != sign) saw_mixed = true;
                saw_nonzero_mass = true;
                out.ladders.push_back(
                    psi_valuation_ladder(piece.psi, M, piece.ideal.c, kprec, "sing-m"));
            }
        }
        if (all_zero) {
            out.identically_zero = true;
        } else if (saw_nonzero_mass && !saw_mixed) {
            out.divergent = true;
        } else {
            out.unknown = true;
            out.diag = saw_mixed ? "mixed-sign singular masses"
                                 : "singular sections with zero mean";
            (void)saw_unknown;
        }
        return out;
    }
    // R <= -3: guaranteed class is the exact monomial c X^d
    int d = 0;
    FElem c(FElem::zero(spec));
    if (!exact_monomial(q, d, c)) {
        out.unknown = true;
        out.diag = "unsupported fiber structure beyond depth -2";
        return out;
    }
    KElem cbar = c.residue();
    // k-families: nu_t(b) = d k with d k < A; the section value at digit v is
    // (number of d-th roots of v/cbar) |d cbar w^(d-1)|^-1 M0 X^(A-(d-1)k),
    // proportional to M0 = integral of f's section at first coordinate 0
    SBFunction f0 = f.section1(KElem::zero(spec));
    Rat M0 = f0.haar_integral();
    bool any_family = false;
    bool pointwise_zero = true;
    Rat q_ = q_of(spec);
    int nucbar = effective_valuation(cbar, kprec).value();
    for (int k = 1; d * k < A; ++k) {
        any_family = true;
        if (!f0.is_zero() && M0 != 0) pointwise_zero = false;
        MassLadder lad;
        lad.center = KElem::zero(spec);
        lad.level0 = nucbar - d;
        lad.step = -d;
        lad.masses = {M0 * (1 - 1 / q_) * q_};
        lad.ratio = q_;
        lad.xpow = A - (d - 1) * k;
        lad.origin = "sing-monomial";
        out.ladders.push_back(lad);
    }
    if (A % d == 0) {
        // surviving whole-ball piece t^(A/d) O_F with psi = cbar X^d + const
        any_family = true;
        if (!f0.is_zero()) {
            pointwise_zero = false;
            KPoly psi = KPoly::monomial(cbar, d);
            if (M0 != 0)
                out.ladders.push_back(
                    psi_valuation_ladder(psi, M0, A / d, kprec, "sing-monomial"));
        }
    }
    if (!any_family || pointwise_zero) {
        out.identically_zero = true;
        return out;
    }
    if (M0 != 0) {
        out.divergent = true;
        return out;
    }
    out.unknown = true;
    out.diag = "monomial singular section with zero mean";
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// SectionFunction evaluation

RatFunc SectionFunction::eval_ns(const FElem& y) const {
    if (!has_ns) return RatFunc::zero();
    ValuationResult vy = effective_valuation(y, kprec);
    if (vy.lower_bound() < R) {
        if (vy.is_finite()) return RatFunc::zero();
        throw insufficient_precision("section support membership undecidable", R);
    }
    KElem v = effective_residue(y.shift(-R), kprec);
    return RatFunc::monomial(eval_J(qbar, f, v, kprec), -R);
}

RatFunc SectionFunction::eval_sing(const FElem& y) const {
    return section_singular(f, R, q, y, kprec);
}

RatFunc SectionFunction::eval(const FElem& y) const {
    if (R >= 0) {
        SBFunction marg = nonneg_depth_marginal(f, R, q, kprec);
        ValuationResult vy = effective_valuation(y, kprec);
        if (vy.lower_bound() < 0) {
            if (vy.is_finite()) return RatFunc::zero();
            throw insufficient_precision("section support membership undecidable", 0);
        }
        return RatFunc(marg.eval(effective_residue(y, kprec)));
    }
    return eval_ns(y) + eval_sing(y);
}

// ---------------------------------------------------------------------------
// public operations

SectionFunction section_nonsingular(const SBFunction2& f, int R, const FPoly& q,
                                    int kprec) {
    if (R >= 0) throw error("section_nonsingular needs R < 0");
    KPoly qbar = effective_reduce_poly(q, kprec);
    if (!reduce(q).derivative().provably_nonzero())
        throw purely_inseparable_error("qbar' = 0 in section_nonsingular");
    SectionFunction s;
    s.spec = f.spec();
    s.f = f;
    s.q = q;
    s.R = R;
    s.qbar = qbar;
    s.kprec = kprec;
    NsResult ns = analyze_ns(qbar, f, kprec);
    for (auto& lad : ns.ladders) lad.xpow = -R;
    s.ladders = ns.ladders;
    s.ns_total = ns.total;
    return s;
}

RatFunc section_singular(const SBFunction2& f, int R, const FPoly& q, const FElem& y,
                         int kprec) {
    if (R >= 0) throw error("section_singular needs R < 0");
    int A = -R;
    ValuationResult vy = effective_valuation(y, kprec);
    if (vy.lower_bound() < R) {
        if (vy.is_finite()) return RatFunc::zero();
        throw insufficient_precision("singular section membership undecidable", R);
    }
    FElem b = effective_reduce_f(y.shift(A), kprec);
    Decomposition dec = decompose_preimage(q, b, A, kprec);
    RatFunc total = RatFunc::zero();
    for (const auto& piece : dec.pieces) {
        if (!piece.from_singular || piece.psi.degree() < 1) continue;
        KElem abar = piece.ideal.center.coeffs().count(0)
                         ? piece.ideal.center.coeffs().at(0)
                         : KElem::zero(f.spec());
        SBFunction fsec = f.section1(abar);
        if (fsec.is_zero()) continue;
        Rat val = integral_sec_minus_psi(fsec, piece.psi, kprec);
        total = total + RatFunc::monomial(val, piece.ideal.c);
    }
    return total;
}

SectionFunction section_singular_fn(const SBFunction2& f, int R, const FPoly& q,
                                    int kprec) {
    if (R >= 0) throw error("section_singular_fn needs R < 0");
    SectionFunction s;
    s.spec = f.spec();
    s.f = f;
    s.q = q;
    s.R = R;
    s.qbar = effective_reduce_poly(q, kprec);
    s.kprec = kprec;
    s.has_ns = false;
    SingResult sing = analyze_sing(f, R, q, s.qbar, kprec);
    if (sing.unknown) throw unsupported_fiber_structure(sing.diag);
    s.ladders = sing.ladders;
    return s;
}

SBFunction nonneg_depth_marginal(const SBFunction2& f, int R, const FPoly& q,
                                 int kprec) {
    if (R < 0) throw error("nonneg_depth_marginal needs R >= 0");
    const FieldTowerSpec& spec = f.spec();
    KPoly hbar = R > 0 ? KPoly::zero(spec) : effective_reduce_poly(q, kprec);
    SBFunction out = SBFunction::zero(spec);
    for (const auto& rect : f.rects()) {
        if (hbar.is_zero() || hbar.degree() < 1) {
            KElem shift = hbar.is_zero() ? KElem::zero(spec) : hbar.coeff(0);
            out = out + SBFunction::indicator(KBall(rect.b2.center + shift, rect.b2.m),
                                              rect.value * rect.b1.measure());
            continue;
        }
        int m2 = rect.b2.m;
        int img = PREC_INF;
        for (int k = 0; k <= hbar.degree(); ++k) {
            if (effectively_zero(hbar.coeff(k), kprec)) continue;
            int nuk = effective_valuation(hbar.coeff(k), kprec).value();
            img = std::min(img, nuk + k * std::min(rect.b1.m, 0));
        }
        int lo = std::min(img, m2);
        uint64_t classes = 1;
        for (int i = lo; i < m2; ++i) {
            classes *= spec.q();
            if (classes > (1u << 20))
                throw grid_too_large("marginal class enumeration");
        }
        for (uint64_t idx = 0; idx < classes; ++idx) {
            KElem w = KElem::grid_element(spec, m2 - lo, idx).shift(lo);
            KBall vball(rect.b2.center + w, m2);
            KBall target(w, m2);
            Rat mu = kball_preimage_measure(hbar, target, rect.b1, kprec);
            if (mu != 0) out = out + SBFunction::indicator(vball, rect.value * mu);
        }
    }
    return out;
}

Rat j_integral(const KPoly& qbar, const SBFunction2& f, int kprec) {
    if (qbar.is_zero() || !qbar.derivative().provably_nonzero())
        throw purely_inseparable_error("j_integral needs qbar' != 0");
    NsResult ns = analyze_ns(qbar, f, kprec);
    return ns.total;
}

FubiniVerdict classify(const SBFunction2& f, int R, const FPoly& q, int kprec) {
    FubiniVerdict out;
    out.dydx = dydx_integral(f, R, q);
    out.section.spec = f.spec();
    out.section.f = f;
    out.section.q = q;
    out.section.R = R;
    out.section.kprec = kprec;
    std::ostringstream diag;
    diag << "depth=" << R;

    if (R >= 0) {
        SBFunction marg = nonneg_depth_marginal(f, R, q, kprec);
        Rat val = marg.haar_integral();
        if (val != f.double_integral())
            throw error("internal: nonnegative-depth marginal mass mismatch");
        out.kind = VerdictKind::holds;
        out.dxdy = RatFunc(val);
        out.value = RatFunc(val);
        out.diagnostics = diag.str();
        return out;
    }

    KPoly qbar = effective_reduce_poly(q, kprec);
    out.section.qbar = qbar;
    if (is_purely_inseparable(qbar)) {
        out.section.has_ns = false;
        diag << " purely-inseparable";
        int d = 0;
        FElem c(FElem::zero(f.spec()));
        bool zero_sing = (R == -1) || (exact_monomial(q, d, c) && -R < d);
        if (zero_sing) {
            out.dxdy = RatFunc::zero();
            if (out.dydx == RatFunc::zero()) {
                out.kind = VerdictKind::holds;
                out.value = RatFunc::zero();
            } else {
                out.kind = VerdictKind::counterexample;
            }
        } else {
            out.kind = VerdictKind::unknown;
            diag << " deep-inseparable-case";
        }
        out.diagnostics = diag.str();
        return out;
    }

    try {
        NsResult ns = analyze_ns(qbar, f, kprec);
        for (auto& lad : ns.ladders) lad.xpow = -R;
        out.section.ladders = ns.ladders;
        out.section.ns_total = ns.total;
        SingResult sing = analyze_sing(f, R, q, qbar, kprec);
        for (auto& lad : sing.ladders) out.section.ladders.push_back(lad);
        if (sing.identically_zero) {
            if (ns.total != f.double_integral())
                throw error("internal: nonsingular mass mismatch with the "
                            "double integral");
            out.kind = VerdictKind::holds;
            out.dxdy = RatFunc(ns.total);
            out.value = RatFunc(ns.total);
        } else if (sing.divergent) {
            out.kind = VerdictKind::not_integrable;
            diag << " divergent-singular-ladder";
        } else {
            out.kind = VerdictKind::unknown;
            diag << " " << sing.diag;
        }
    } catch (const root_budget_exceeded& e) {
        out.kind = VerdictKind::unknown;
        diag << " " << e.what();
    } catch (const unsupported_fiber_structure& e) {
        out.kind = VerdictKind::unknown;
        diag << " " << e.what();
    }
    out.diagnostics = diag.str();
    return out;
}

FubiniVerdict classify_data(const ConjectureData& d, int kprec) {
    // constant h short-circuits through translation invariance
    bool constant_h = true;
    for (int i = 1; i <= d.h.degree(); ++i)
        if (!d.h.coeff(i).provably_zero()) constant_h = false;
    if (constant_h) {
        FubiniVerdict out;
        Rat v = d.f.double_integral();
        out.kind = VerdictKind::holds;
        out.dydx = RatFunc::monomial(v, d.n1 + d.n2);
        out.dxdy = out.dydx;
        out.value = out.dydx;
        out.diagnostics = "constant shear: translation invariance";
        return out;
    }
    DepthNormalization norm = normalize(d, kprec);
    FubiniVerdict out = classify(d.f, norm.depth, norm.q, kprec);
    RatFunc scale = RatFunc::monomial(Rat(1), d.n1 + d.n2);
    out.dydx = out.dydx * scale;
    if (out.dxdy) out.dxdy = *out.dxdy * scale;
    if (out.value) out.value = *out.value * scale;
    out.diagnostics += " q=" + norm.q.str();
    return out;
}

RatFunc extended_null_convention(const FubiniVerdict& verdict) {
    if (verdict.kind != VerdictKind::not_integrable)
        throw pattern_not_recognized("extended evaluation needs a NOT_INTEGRABLE witness");
    bool any = false;
    for (const auto& lad : verdict.section.ladders) {
        if (!lad.divergent()) continue;
        any = true;
        if (lad.origin != "sing-m" && lad.origin != "sing-monomial")
            throw pattern_not_recognized("divergent component of unrecognized shape: " +
                                         lad.origin);
    }
    if (!any) throw pattern_not_recognized("no divergent component in the witness");
    // Each recognized family is a lift of a copy of K; under the convention
    // that such copies carry zero total mass the family's integral vanishes.
    return RatFunc::zero();
}

} // namespace lf2
