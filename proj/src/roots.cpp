#include "lf2/roots.hpp"

#include <algorithm>

namespace lf2 {

bool effectively_zero(const KElem& x, int thresh) {
    if (x.spec().kind == MidKind::padic) {
        if (x.rat() == 0) return true;
        return padic_val(x.rat(), x.spec().p) >= thresh;
    }
    for (const auto& [e, c] : x.coeffs())
        if (e < thresh) return false;
    return true;
}

ValuationResult effective_valuation(const KElem& x, int thresh) {
    if (effectively_zero(x, thresh)) return ValuationResult::at_least(thresh);
    return x.valuation();
}

ValuationResult effective_valuation(const FElem& x, int thresh) {
    for (const auto& [e, c] : x.coeffs())
        if (!effectively_zero(c, thresh)) return ValuationResult::finite(e);
    if (x.precision() == PREC_INF) return ValuationResult::infinite();
    return ValuationResult::at_least(x.precision());
}

KElem effective_reduce(const KElem& x, int thresh) {
    if (x.spec().kind == MidKind::padic) return x.reduce_mod(thresh);
    // exact Laurent data stays exact; only approximants get truncated
    if (x.precision() == PREC_INF) return x;
    return x.truncate(thresh);
}

namespace {

Int coeff_mod(const Rat& x, const Int& mod) {
    // denominator must be prime to p (valuation >= 0)
    Int den_inv;
    if (!mpz_invert(den_inv.get_mpz_t(), x.get_den().get_mpz_t(), mod.get_mpz_t()))
        throw error("coefficient with p in the denominator in root search");
    Int r = (x.get_num() * den_inv) % mod;
    if (r < 0) r += mod;
    return r;
}

// Rational reconstruction (Wang): n/d = a mod m with |n|, d <= sqrt(m/2).
bool rational_reconstruct(const Int& a, const Int& m, Rat& out) {
    Int bound;
    mpz_sqrt(bound.get_mpz_t(), Int(m / 2).get_mpz_t());
    Int r0 = m, r1 = a % m, s0 = 0, s1 = 1;
    if (r1 < 0) r1 += m;
    while (r1 > bound && r1 != 0) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1, s2 = s0 - q * s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    Int d = s1 < 0 ? Int(-s1) : s1;
    Int n = s1 < 0 ? Int(-r1) : r1;
    if (d == 0 || d > bound) return false;
    Int g;
    mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    if (g > 1) return false;
    out = Rat(n, d);
    out.canonicalize();
    return true;
}

struct Searcher {
    FieldTowerSpec spec;
    KPoly psi;
    KPoly dpsi;
    int m;
    int budget;
    RootSearchResult out;

    Searcher(const KPoly& f, int prec, int bud)
        : spec(f.spec()), psi(f), dpsi(f.derivative()), m(prec), budget(bud) {}

    bool exact_zero(const KElem& v) const {
        if (spec.kind == MidKind::padic) return v.rat() == 0;
        return v.provably_zero();
    }

    void emit(const KElem& value, bool exact) {
        KElem v = exact ? value : effective_reduce(value, m);
        for (const auto& r : out.roots)
            if (r.value == v) return;
        KRoot root;
        root.value = v;
        root.exact = exact;
        KElem dv = dpsi.eval(v);
        if (exact)
            root.simple = dv.provably_nonzero();
        else
            root.simple = !effectively_zero(dv, std::max(1, m / 2));
        out.roots.push_back(root);
    }

    // Divide g by (X - r) while the remainder is exactly zero.
    int deflate(KPoly& g, const KElem& r) const {
        int mult = 0;
        while (!g.is_zero()) {
            const auto& cs = g.coeffs();
            std::vector<KElem> q(cs.size() - 1, KElem::zero(spec));
            KElem carry = KElem::zero(spec);
            for (size_t i = cs.size(); i-- > 1;) {
                carry = cs[i] + carry * r;
                q[i - 1] = carry;
            }
            KElem rem = cs[0] + carry * r;
            if (!exact_zero(rem)) break;
            g = KPoly(spec, q);
            ++mult;
        }
        return mult;
    }

    std::vector<Fq> residue_roots(const KPoly& g) const {
        std::vector<Fq> r;
        for (const Fq& d : Fq::all(spec.p, spec.f)) {
            KElem v = g.eval(KElem::from_fq(spec, d));
            if (v.residue().is_zero()) r.push_back(d);
        }
        return r;
    }

    std::pair<KElem, bool> lift_simple(const KPoly& g, const Fq& d, int prec) {
        prec = std::max(prec, 2);
        if (spec.kind == MidKind::padic) {
            Int mod = int_pow(spec.p, static_cast<unsigned long>(prec));
            Int x(static_cast<long>(d.index()));
            long have = 1;
            KPoly dg = g.derivative();
            while (have < prec) {
                have = std::min<long>(2 * have, prec);
                Int mk = int_pow(spec.p, static_cast<unsigned long>(have));
                auto eval_mod = [&](const KPoly& h) {
                    Int acc = 0;
                    for (int i = h.degree(); i >= 0; --i)
                        acc = (acc * x + coeff_mod(h.coeff(i).rat(), mk)) % mk;
                    return acc;
                };
                Int gv = eval_mod(g);
                Int dv = eval_mod(dg);
                Int dv_inv;
                if (!mpz_invert(dv_inv.get_mpz_t(), dv.get_mpz_t(), mk.get_mpz_t()))
                    throw error("internal: lost simplicity during lift");
                x = (x - gv * dv_inv) % mk;
                if (x < 0) x += mk;
            }
            Rat guess;
            if (rational_reconstruct(x, mod, guess) &&
                padic_val(guess.get_den(), spec.p) == 0) {
                KElem cand = KElem::from_rat(spec, guess);
                if (exact_zero(g.eval(cand))) return {cand, true};
            }
            return {KElem::from_rat(spec, Rat(x)), false};
        }
        KElem x = KElem::from_fq(spec, d);
        KPoly dg = g.derivative();
        for (int iter = 0; iter < 64; ++iter) {
            KElem gv = g.eval(x).truncate(prec);
            if (gv.valuation().lower_bound() >= prec) {
                KElem full = g.eval(x);
                if (full.provably_zero()) return {x, true};
                return {x.truncate(prec), false};
            }
            x = (x - gv * dg.eval(x).inv(prec)).truncate(prec);
        }
        throw error("internal: laurent Hensel lift failed to converge");
    }

    static KPoly shift_digit(const KPoly& g, const KElem& d) {
        // g(d + pi X)
        std::vector<KElem> tay = g.taylor_at(d);
        KElem pi = KElem::uniformizer(g.spec());
        KElem pw = KElem::one(g.spec());
        for (size_t k = 0; k < tay.size(); ++k) {
            tay[k] = tay[k] * pw;
            pw = pw * pi;
        }
        return KPoly(g.spec(), tay);
    }

    static int poly_content(const KPoly& g) {
        int c = PREC_INF;
        for (int i = 0; i <= g.degree(); ++i) {
            ValuationResult v = g.coeff(i).valuation();
            if (v.is_infinite()) continue;
            if (!v.is_finite())
                throw insufficient_precision("polynomial content undecidable",
                                             v.lower_bound() + 1);
            c = std::min(c, v.value());
        }
        return c;
    }

    static KPoly shift_content(const KPoly& g, int k) {
        std::vector<KElem> cs;
        for (int i = 0; i <= g.degree(); ++i) cs.push_back(g.coeff(i).shift(k));
        return KPoly(g.spec(), cs);
    }

    // Roots in O_K of a content-free integral polynomial, to relative
    // precision prec.  unit_only restricts to nonzero residue digits.
    std::vector<std::pair<KElem, bool>> integral_roots(KPoly g, int prec, bool unit_only,
                                                       const std::string& trail) {
        std::vector<std::pair<KElem, bool>> found;
        for (const Fq& d : residue_roots(g)) {
            if (unit_only && d.is_zero()) continue;
            KElem dv = KElem::from_fq(spec, d);
            if (exact_zero(g.eval(dv)) && deflate(g, dv) > 0) found.push_back({dv, true});
        }
        if (g.is_zero() || g.degree() < 1) return found;
        for (const Fq& d : residue_roots(g)) {
            if (unit_only && d.is_zero()) continue;
            KElem dv = KElem::from_fq(spec, d);
            KElem slope = g.derivative().eval(dv);
            if (!slope.residue().is_zero()) {
                auto [root, exact] = lift_simple(g, d, prec);
                bool dup = false;
                for (auto& [r, e] : found)
                    if (effectively_zero(r - root, prec)) dup = true;
                if (!dup) found.push_back({root, exact});
                continue;
            }
            if (budget <= 0 || prec <= 1) {
                out.complete = false;
                out.unresolved.push_back(trail + "/" + d.str());
                continue;
            }
            --budget;
            KPoly h = shift_digit(g, dv);
            int content = poly_content(h);
            if (content == PREC_INF) continue;  // g vanished identically: impossible
            h = shift_content(h, -content);
            auto sub = integral_roots(h, prec - 1, false, trail + "/" + d.str());
            for (auto& [z, e] : sub) {
                KElem root = dv + KElem::uniformizer(spec) * z;
                found.push_back({root, e});
            }
        }
        return found;
    }

    void run() {
        {
            int c = poly_content(psi);
            KPoly g = shift_content(psi, -c);
            for (auto& [r, e] : integral_roots(g, m, false, "O_K")) emit(r, e);
        }

        // Negative-valuation roots: Newton polygon slopes < 0.
        struct Pt {
            int k, v;
        };
        std::vector<Pt> pts;
        for (int i = 0; i <= psi.degree(); ++i) {
            ValuationResult v = psi.coeff(i).valuation();
            if (v.is_infinite()) continue;
            if (!v.is_finite())
                throw insufficient_precision("Newton polygon undecidable",
                                             v.lower_bound() + 1);
            pts.push_back({i, v.value()});
        }
        std::vector<Pt> hull;
        for (const Pt& p : pts) {
            while (hull.size() >= 2) {
                const Pt &a = hull[hull.size() - 2], &b = hull.back();
                long lhs = static_cast<long>(b.v - a.v) * (p.k - b.k);
                long rhs = static_cast<long>(p.v - b.v) * (b.k - a.k);
                if (lhs <= rhs) break;
                hull.pop_back();
            }
            hull.push_back(p);
        }
        // An edge of slope lambda > 0 carries roots of valuation -lambda < 0.
        int max_s = 0;
        for (size_t i = 0; i + 1 < hull.size(); ++i) {
            int dk = hull[i + 1].k - hull[i].k;
            int dv = hull[i + 1].v - hull[i].v;
            if (dv > 0) max_s = std::max(max_s, (dv + dk - 1) / dk);
        }
        for (int s = 1; s <= max_s; ++s) {
            std::vector<KElem> cs;
            for (int k = 0; k <= psi.degree(); ++k) cs.push_back(psi.coeff(k).shift(-s * k));
            KPoly g(spec, cs);
            int c = poly_content(g);
            g = shift_content(g, -c);
            for (auto& [z, e] : integral_roots(g, m + s, true, "pi^-" + std::to_string(s)))
                emit(z.shift(-s), e);
        }

        std::sort(out.roots.begin(), out.roots.end(),
                  [](const KRoot& a, const KRoot& b) { return a.value.cmp(b.value) < 0; });
    }
};

} // namespace

RootSearchResult roots_over_K(const KPoly& psi, int prec_m, int budget) {
    if (psi.is_zero()) throw error("roots_over_K of the zero polynomial");
    if (psi.degree() == 0) return {};
    Searcher s(psi, std::max(prec_m, 2), budget);
    s.run();
    return std::move(s.out);
}

} // namespace lf2
