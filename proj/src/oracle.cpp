#include "lf2/oracle.hpp"

#include <random>

#include "lf2/roots.hpp"

namespace lf2 {

namespace {

Rat qrat(const FieldTowerSpec& s) { return Rat(static_cast<long>(s.q())); }

// raw digit extraction (the oracle re-derives residues itself)
KElem digit_at(const FElem& x, int e) {
    auto it = x.coeffs().find(e);
    return it == x.coeffs().end() ? KElem::zero(x.spec()) : it->second;
}

} // namespace

uint64_t GridSpec::size(const FieldTowerSpec& s) const {
    return FElem::grid_size(s, t_depth, u_depth);
}

void GridSpec::check(const FieldTowerSpec& s) const {
    uint64_t n = size(s);
    if (n > cap)
        throw grid_too_large("grid of " + std::to_string(n) + " points exceeds cap " +
                             std::to_string(cap));
}

OracleReport verify_decomposition(const FPoly& q, const FElem& b, int A,
                                  const Decomposition& dec, const GridSpec& grid,
                                  int kprec) {
    OracleReport rep;
    if (grid.t_depth < A + 1)
        throw error("verify_decomposition needs grid t_depth >= A + 1");
    grid.check(q.spec());
    const FieldTowerSpec& spec = q.spec();
    bool all_exact = true;
    for (const auto& p : dec.pieces) all_exact &= p.exact;
    int thresh = all_exact ? PREC_INF : kprec / 2;

    uint64_t n = grid.size(spec);
    for (uint64_t i = 0; i < n; ++i) {
        FElem x = FElem::grid_element(spec, grid.t_depth, grid.u_depth, i);
        FElem err = q.eval(x) - b;
        bool in_set = effective_valuation(err, thresh).lower_bound() >= A;
        int count = 0;
        for (const auto& p : dec.pieces) {
            ValuationResult v = (x - p.ideal.center).valuation();
            if (v.lower_bound() >= p.ideal.c) ++count;
        }
        if (count != (in_set ? 1 : 0)) {
            rep.pass = false;
            rep.witness = x;
            rep.detail = "membership mismatch at " + x.str() + ": in_set=" +
                         std::to_string(in_set) + " pieces=" + std::to_string(count);
            return rep;
        }
        if (!in_set) continue;
        // substitution check of the residue field approximation
        for (const auto& p : dec.pieces) {
            ValuationResult v = (x - p.ideal.center).valuation();
            if (v.lower_bound() < p.ideal.c) continue;
            KElem inner = digit_at((x - p.ideal.center).shift(-p.ideal.c), 0);
            KElem outer = digit_at(err.shift(-A), 0);
            // digits of err below t^A must be junk
            bool ok = true;
            for (const auto& [j, c] : err.coeffs())
                if (j < A && !effectively_zero(c, thresh)) ok = false;
            KElem diff = outer - p.psi.eval(inner);
            if (!ok || !effectively_zero(diff, thresh)) {
                rep.pass = false;
                rep.witness = x;
                rep.detail = "psi substitution mismatch at " + x.str() + " in piece " +
                             p.ideal.str();
                return rep;
            }
        }
    }
    rep.detail = "checked " + std::to_string(n) + " grid points";
    return rep;
}

RatFunc oracle_integral(const IntegrableFunctionF& g) {
    RatFunc total = RatFunc::zero();
    for (const auto& [coeff, term] : g.terms) {
        Rat mass(0);
        for (const auto& [ball, val] : term.f.terms())
            mass += val * rat_pow(Rat(1) / qrat(g.spec), ball.m);
        // point masses are Haar-null
        total = total + coeff * RatFunc::monomial(mass, term.n);
    }
    return total;
}

OracleReport verify_integral_laws(int samples, uint64_t seed,
                                  const FieldTowerSpec& spec) {
    OracleReport rep;
    std::mt19937_64 rng(seed);
    uint64_t qq = spec.q() * spec.q();
    auto rand_rat = [&]() {
        Rat r(static_cast<long>(rng() % 13) - 6, 1 + static_cast<long>(rng() % 4));
        r.canonicalize();
        return r;
    };
    auto rand_felem = [&](int start) {
        return FElem::grid_element(spec, 2, 2, rng() % (qq * qq), start);
    };
    for (int it = 0; it < samples; ++it) {
        SBFunction f = SBFunction::zero(spec);
        int nb = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < nb; ++i) {
            KElem c = KElem::grid_element(spec, 2, rng() % qq);
            int m = static_cast<int>(rng() % 4) - 1;
            f = f + SBFunction::indicator(KBall(c, m), rand_rat());
        }
        if (rng() % 3 == 0) f = f + SBFunction::point_mass(KElem::grid_element(spec, 1, rng() % spec.q()));
        IntegrableFunctionF g =
            IntegrableFunctionF::lift(f, rand_felem(-1), static_cast<int>(rng() % 5) - 2,
                                      RatFunc::monomial(rand_rat(), static_cast<int>(rng() % 3) - 1));
        if (rng() % 2) {
            auto extra = IntegrableFunctionF::lift(f.scale(rand_rat()), rand_felem(0),
                                                   static_cast<int>(rng() % 3),
                                                   RatFunc(rand_rat()));
            for (auto& t : extra.terms) g.terms.push_back(t);
        }

        RatFunc base = oracle_integral(g);

        // linearity over Q(X)
        {
            RatFunc c = RatFunc::monomial(rand_rat(), static_cast<int>(rng() % 3) - 1);
            IntegrableFunctionF sc{spec, {}};
            for (auto& [cf, term] : g.terms) sc.terms.push_back({cf * c, term});
            if (!(oracle_integral(sc) == c * base)) {
                rep.pass = false;
                rep.detail = "linearity failed at sample " + std::to_string(it);
                return rep;
            }
        }
        // translation invariance
        {
            FElem a = rand_felem(-2);
            if (!(oracle_integral(translate(g, a)) == base)) {
                rep.pass = false;
                rep.detail = "translation invariance failed at sample " + std::to_string(it);
                return rep;
            }
        }
        // scaling law, |alpha| recomputed here from first principles
        {
            FElem alpha = rand_felem(-1);
            if (alpha.provably_nonzero()) {
                ValuationResult v = alpha.valuation();
                KElem lead = alpha.shift(-v.value()).residue();
                Rat absk = rat_pow(Rat(1) / qrat(spec), lead.valuation().value());
                RatFunc absval = RatFunc::monomial(absk, v.value());
                if (!(oracle_integral(scale_arg(g, alpha)) * absval == base)) {
                    rep.pass = false;
                    rep.detail = "scaling law failed at sample " + std::to_string(it);
                    return rep;
                }
            }
        }
    }
    rep.detail = "verified " + std::to_string(samples) + " samples";
    return rep;
}

// ---------------------------------------------------------------------------
// repeated integrals

namespace {

// K-grid cell centers at u-depth e starting from K-valuation lo
std::vector<KElem> kcells(const FieldTowerSpec& spec, int lo, int e) {
    std::vector<KElem> out;
    uint64_t n = KElem::grid_size(spec, e - lo);
    for (uint64_t i = 0; i < n; ++i)
        out.push_back(KElem::grid_element(spec, e - lo, i).shift(lo));
    return out;
}

int support_lb2(const SBFunction2& f) {
    int lb = 0;
    for (const auto& r : f.rects()) {
        lb = std::min(lb, std::min(r.b2.center.valuation().lower_bound(), r.b2.m));
        lb = std::min(lb, std::min(r.b1.center.valuation().lower_bound(), r.b1.m));
    }
    return lb;
}

int max_scale2(const SBFunction2& f) {
    int m = 0;
    for (const auto& r : f.rects()) m = std::max({m, r.b1.m, r.b2.m});
    return m;
}

} // namespace

RepeatedReport verify_repeated(const SBFunction2& f, int R, const FPoly& q,
                               const GridSpec& grid, const RatFunc& engine_dydx,
                               const std::optional<RatFunc>& engine_dxdy) {
    RepeatedReport rep;
    const FieldTowerSpec& spec = f.spec();
    grid.check(spec);
    int e = grid.u_depth;
    int tau = grid.t_depth;
    int fscale = max_scale2(f);
    int A = std::max(0, -R);
    Rat cellK = rat_pow(Rat(1) / qrat(spec), e);

    // K-digit window: cover f's support and the digits of t^R q on the grid
    int lb = support_lb2(f);
    int tax = std::min(tau, A + 2);
    uint64_t nxi = FElem::grid_size(spec, tax, e);
    std::vector<FElem> xs;
    std::vector<FElem> shifts;
    xs.reserve(nxi);
    for (uint64_t i = 0; i < nxi; ++i) {
        FElem x = FElem::grid_element(spec, tax, e, i);
        FElem s = q.eval(x).shift(R);
        for (const auto& [j, c] : s.coeffs())
            if (j < 1) lb = std::min(lb, c.valuation().lower_bound());
        xs.push_back(x);
        shifts.push_back(s);
    }
    // specialization point: the reciprocal of the digit-space size, so that
    // cell weights q^-e x0^(T-1) reproduce lift integrals exactly
    rep.x0 = rat_pow(Rat(1) / qrat(spec), e - lb);

    // ---- dy dx: per x-cell the y-section is a translate of the lift of
    // v -> f(res x, v); its integral is an exact K-level rectangle sum.
    std::vector<KElem> vcells = kcells(spec, lb, e);
    uint64_t nx = grid.size(spec);
    Rat dydx(0);
    Rat wx = cellK * rat_pow(rep.x0, tau - 1);
    for (uint64_t i = 0; i < nx; ++i) {
        FElem x = FElem::grid_element(spec, tau, e, i);
        KElem xr = x.residue();
        Rat inner(0);
        for (const KElem& v : vcells) inner += f.eval(xr, v) * cellK;
        dydx += inner * wx;
    }
    rep.dydx_sum = dydx;

    // ---- dx dy: honest grid sum; x resolved to A + 2 t-digits (digits at
    // t^j for j >= A + 1 cannot move y - t^R q(x) across the support tests).
    Rat wxi = cellK * rat_pow(rep.x0, tax - 1);
    int ylo = std::min(R, 0);
    int ytau = 1 - ylo;
    Rat wy = cellK;  // q^-e x0^(T-1) with T = 1
    std::vector<KElem> ydigits = kcells(spec, lb, e);
    uint64_t nyd = 1;
    for (int j = 0; j < ytau; ++j) {
        if (nyd > (grid.cap / ydigits.size()) + 1)
            throw grid_too_large("y-cell enumeration");
        nyd *= ydigits.size();
    }
    Rat dxdy(0);
    for (uint64_t yi = 0; yi < nyd; ++yi) {
        uint64_t idx = yi;
        std::map<int, KElem> co;
        for (int j = 0; j < ytau; ++j) {
            KElem d = ydigits[idx % ydigits.size()];
            idx /= ydigits.size();
            if (!d.provably_zero()) co[ylo + j] = d;
        }
        FElem y = FElem::make(spec, std::move(co));
        Rat inner(0);
        for (uint64_t xi = 0; xi < nxi; ++xi) {
            FElem arg = y - shifts[xi];
            ValuationResult va = arg.valuation();
            if (va.lower_bound() < 0) continue;
            inner += f.eval(xs[xi].residue(), arg.residue());
        }
        dxdy += inner * wxi * wy;
    }
    rep.dxdy_sum = dxdy;

    // ---- truncation bound from local-constancy scales: the sums are exact
    // when the grids resolve every scale; otherwise the error is bounded by
    // the mass of unresolved cells.
    Rat fmax(0);
    for (const auto& r : f.rects()) {
        Rat a = r.value >= 0 ? r.value : -r.value;
        if (a > fmax) fmax = a;
    }
    Rat bound_shared(0);
    int deficit = std::max(fscale - e, (A + 1) - tau);
    if (deficit > 0)
        bound_shared += fmax * rat_pow(qrat(spec), deficit) *
                        rat_pow(Rat(1) / qrat(spec), std::max(e, 1));
    Rat bound_dydx = bound_shared;
    Rat bound_dxdy = bound_shared;
    if (R < 0) {
        // the dxdy inner sum can concentrate on slabs of K-width q^-e
        bound_dxdy += fmax * rat_pow(Rat(1) / qrat(spec), e - 1) *
                      rat_pow(qrat(spec), -ylo);
    }
    rep.bound = bound_dxdy > bound_dydx ? bound_dxdy : bound_dydx;

    auto within = [](const Rat& a, const Rat& b, const Rat& bd) {
        Rat d = a - b;
        if (d < 0) d = -d;
        return d <= bd;
    };
    Rat eng_dydx = engine_dydx.eval(rep.x0);
    if (!within(dydx, eng_dydx, bound_dydx)) {
        rep.pass = false;
        rep.detail = "dydx mismatch: sum=" + dydx.get_str() +
                     " engine=" + eng_dydx.get_str() + " bound=" + bound_dydx.get_str();
        return rep;
    }
    if (engine_dxdy) {
        Rat eng = engine_dxdy->eval(rep.x0);
        if (!within(dxdy, eng, bound_dxdy)) {
            rep.pass = false;
            rep.detail = "dxdy mismatch: sum=" + dxdy.get_str() +
                         " engine=" + eng.get_str() + " bound=" + bound_dxdy.get_str();
            return rep;
        }
    }
    rep.detail = "sums within bound";
    return rep;
}

} // namespace lf2
