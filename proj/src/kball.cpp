#include "lf2/kball.hpp"

#include <algorithm>

#include "lf2/roots.hpp"

namespace lf2 {

KBall::KBall(const KElem& c, int radius_exp) : center(c), m(radius_exp) {
    if (c.spec().kind == MidKind::padic) {
        center = c.reduce_mod(m);
    } else {
        if (c.precision() < m)
            throw insufficient_precision("ball center not known mod pi^m", m);
        center = c.reduce_mod(m);
    }
}

Rat KBall::measure() const {
    return rat_pow(Rat(1, static_cast<long>(spec().q())), m);
}

bool KBall::contains(const KElem& x) const {
    ValuationResult v = (x - center).valuation();
    if (v.lower_bound() >= m) return true;
    if (v.is_finite()) return false;
    throw insufficient_precision("ball membership undecidable", m);
}

bool KBall::contains(const KBall& o) const {
    if (o.m < m) return false;
    return (o.center - center).valuation().lower_bound() >= m;
}

bool KBall::disjoint(const KBall& o) const {
    const KBall& coarse = m <= o.m ? *this : o;
    const KBall& fine = m <= o.m ? o : *this;
    return !coarse.contains(fine);
}

std::vector<KBall> KBall::split() const {
    std::vector<KBall> out;
    for (const Fq& d : Fq::all(spec().p, spec().f)) {
        KElem c = center + KElem::from_fq(spec(), d).shift(m);
        out.emplace_back(c, m + 1);
    }
    return out;
}

int KBall::cmp(const KBall& o) const {
    if (m != o.m) return m < o.m ? -1 : 1;
    return center.cmp(o.center);
}

std::string KBall::str() const {
    return "B(" + center.str() + ", " + std::to_string(m) + ")";
}

namespace {

struct PreimageCtx {
    FieldTowerSpec spec;
    int kthresh;
    std::size_t max_pieces;
    std::vector<KBall> out;

    Fq digit(const KElem& x) const {
        if (effectively_zero(x, kthresh)) return Fq::zero(spec.p, spec.f);
        return x.residue();
    }

    int content(const KPoly& h) const {
        int c = PREC_INF;
        for (int i = 0; i <= h.degree(); ++i) {
            if (effectively_zero(h.coeff(i), kthresh)) continue;
            ValuationResult v = h.coeff(i).valuation();
            if (!v.is_finite())
                throw insufficient_precision("preimage content undecidable",
                                             v.lower_bound() + 1);
            c = std::min(c, v.value());
        }
        return c;
    }

    static KPoly shift_arg(const KPoly& h, const KElem& d) {
        // h(d + pi Z)
        std::vector<KElem> tay = h.taylor_at(d);
        KElem pi = KElem::uniformizer(h.spec());
        KElem pw = KElem::one(h.spec());
        for (size_t k = 0; k < tay.size(); ++k) {
            tay[k] = tay[k] * pw;
            pw = pw * pi;
        }
        return KPoly(h.spec(), tay);
    }

    static KPoly shift_content(const KPoly& h, int k) {
        std::vector<KElem> cs;
        for (int i = 0; i <= h.degree(); ++i) cs.push_back(h.coeff(i).shift(k));
        return KPoly(h.spec(), cs);
    }

    void rec(const KPoly& h, int A, const KElem& prefix_center, int prefix_m) {
        int s = content(h);
        if (s == PREC_INF || s >= A) {
            out.emplace_back(prefix_center, prefix_m);
            if (out.size() > max_pieces)
                throw grid_too_large("preimage decomposition piece count");
            return;
        }
        KPoly h1 = shift_content(h, -s);
        int A1 = A - s;  // >= 1, and h1 has a unit coefficient
        for (const Fq& dd : Fq::all(spec.p, spec.f)) {
            KElem dv = KElem::from_fq(spec, dd);
            if (!digit(h1.eval(dv)).is_zero()) continue;
            KPoly hd = shift_arg(h1, dv);
            rec(hd, A1, prefix_center + dv.shift(prefix_m), prefix_m + 1);
        }
    }
};

} // namespace

std::vector<KBall> kball_preimage(const KPoly& g, const KBall& target,
                                  const KBall& domain, int kthresh,
                                  std::size_t max_pieces) {
    const FieldTowerSpec& spec = g.spec();
    PreimageCtx ctx{spec, kthresh, max_pieces, {}};
    // reparametrize: x = c0 + pi^m0 z, condition (g(x) - w) in pi^A O_K
    std::vector<KElem> tay = g.taylor_at(domain.center);
    KElem scale = KElem::uniformizer(spec).pow(domain.m);
    KElem pw = KElem::one(spec);
    for (size_t k = 0; k < tay.size(); ++k) {
        tay[k] = tay[k] * pw;
        pw = pw * scale;
    }
    if (tay.empty()) tay.push_back(KElem::zero(spec));
    tay[0] = tay[0] - target.center;
    KPoly h(spec, tay);
    ctx.rec(h, target.m, domain.center, domain.m);
    std::sort(ctx.out.begin(), ctx.out.end(),
              [](const KBall& a, const KBall& b) { return a.cmp(b) < 0; });
    return ctx.out;
}

Rat kball_preimage_measure(const KPoly& g, const KBall& target, const KBall& domain,
                           int kthresh) {
    Rat total(0);
    for (const KBall& b : kball_preimage(g, target, domain, kthresh)) total += b.measure();
    return total;
}

} // namespace lf2
