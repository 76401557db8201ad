#include "lf2/sbfunction.hpp"

#include <algorithm>
#include <list>

namespace lf2 {

namespace {

constexpr size_t SB_TERM_CAP = 1 << 16;

// Refine a list of (ball, value) terms into a disjoint partition, adding
// values on overlap.  Ultrametric: two balls are nested or disjoint.
std::vector<std::pair<KBall, Rat>> disjointify(std::vector<std::pair<KBall, Rat>> in) {
    std::list<std::pair<KBall, Rat>> out;
    // coarse balls first so refinement only splits what is already placed
    std::sort(in.begin(), in.end(),
              [](const auto& a, const auto& b) { return a.first.cmp(b.first) < 0; });
    for (auto& term : in) {
        std::list<std::pair<KBall, Rat>> pending{term};
        while (!pending.empty()) {
            auto [b, v] = pending.front();
            pending.pop_front();
            bool placed = false;
            for (auto it = out.begin(); it != out.end(); ++it) {
                if (it->first == b) {
                    it->second += v;
                    placed = true;
                    break;
                }
                if (it->first.contains(b)) {
                    // split the existing coarser piece one level
                    auto kids = it->first.split();
                    Rat val = it->second;
                    out.erase(it);
                    for (auto& k : kids) out.emplace_back(k, val);
                    pending.push_front({b, v});
                    placed = true;
                    break;
                }
                if (b.contains(it->first)) {
                    // split the incoming ball one level
                    for (auto& k : b.split()) pending.push_back({k, v});
                    placed = true;
                    break;
                }
            }
            if (!placed) out.emplace_back(b, v);
            if (out.size() + pending.size() > SB_TERM_CAP)
                throw grid_too_large("step function refinement");
        }
    }
    return {out.begin(), out.end()};
}

// Merge complete sibling families with equal values, drop zeros, sort.
std::vector<std::pair<KBall, Rat>> merge_canonical(std::vector<std::pair<KBall, Rat>> terms) {
    bool changed = true;
    while (changed) {
        changed = false;
        terms.erase(std::remove_if(terms.begin(), terms.end(),
                                   [](const auto& t) { return t.second == 0; }),
                    terms.end());
        std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
            if (a.first.m != b.first.m) return a.first.m > b.first.m;
            return a.first.cmp(b.first) < 0;
        });
        // look for q siblings at the same scale with equal value
        for (size_t i = 0; i < terms.size() && !changed; ++i) {
            const KBall& b = terms[i].first;
            if (b.m == INT_MIN) continue;
            KBall parent(b.center, b.m - 1);
            uint64_t q = b.spec().q();
            std::vector<size_t> idx;
            for (size_t j = 0; j < terms.size(); ++j)
                if (terms[j].first.m == b.m && terms[j].second == terms[i].second &&
                    parent.contains(terms[j].first))
                    idx.push_back(j);
            if (idx.size() == q) {
                Rat v = terms[i].second;
                std::vector<std::pair<KBall, Rat>> next;
                for (size_t j = 0; j < terms.size(); ++j)
                    if (std::find(idx.begin(), idx.end(), j) == idx.end())
                        next.push_back(terms[j]);
                next.emplace_back(parent, v);
                terms = std::move(next);
                changed = true;
            }
        }
    }
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first.cmp(b.first) < 0; });
    return terms;
}

} // namespace

SBFunction::SBFunction(const FieldTowerSpec& s, std::vector<std::pair<KBall, Rat>> terms)
    : spec_(s), terms_(std::move(terms)) {
    for (auto& [b, v] : terms_) v.canonicalize();
    canonicalize();
}

void SBFunction::canonicalize() {
    terms_ = merge_canonical(disjointify(std::move(terms_)));
    // merge equal point centers, drop zero masses, sort
    std::vector<std::pair<KElem, Rat>> pts;
    for (auto& [c, v] : points_) {
        bool found = false;
        for (auto& [c2, v2] : pts)
            if (c2 == c) {
                v2 += v;
                found = true;
            }
        if (!found) pts.emplace_back(c, v);
    }
    pts.erase(std::remove_if(pts.begin(), pts.end(),
                             [](const auto& t) { return t.second == 0; }),
              pts.end());
    std::sort(pts.begin(), pts.end(),
              [](const auto& a, const auto& b) { return a.first.cmp(b.first) < 0; });
    points_ = std::move(pts);
}

SBFunction SBFunction::indicator(const KBall& b, const Rat& v) {
    return SBFunction(b.spec(), {{b, v}});
}

SBFunction SBFunction::unit_ball(const FieldTowerSpec& s) {
    return indicator(KBall(KElem::zero(s), 0));
}

SBFunction SBFunction::point_mass(const KElem& c, const Rat& v) {
    SBFunction f(c.spec());
    f.points_.emplace_back(c, v);
    f.canonicalize();
    return f;
}

SBFunction SBFunction::operator+(const SBFunction& o) const {
    SBFunction out(spec_);
    out.terms_ = terms_;
    out.terms_.insert(out.terms_.end(), o.terms_.begin(), o.terms_.end());
    out.points_ = points_;
    out.points_.insert(out.points_.end(), o.points_.begin(), o.points_.end());
    out.canonicalize();
    return out;
}

SBFunction SBFunction::operator-() const { return scale(Rat(-1)); }

SBFunction SBFunction::operator-(const SBFunction& o) const { return *this + (-o); }

SBFunction SBFunction::scale(const Rat& r) const {
    if (r == 0) return zero(spec_);
    SBFunction out = *this;
    for (auto& [b, v] : out.terms_) v *= r;
    for (auto& [c, v] : out.points_) v *= r;
    return out;
}

Rat SBFunction::haar_integral() const {
    // point masses are Haar-null
    Rat total(0);
    for (const auto& [b, v] : terms_) total += v * b.measure();
    return total;
}

Rat SBFunction::eval(const KElem& x) const {
    Rat val(0);
    for (const auto& [b, v] : terms_)
        if (b.contains(x)) {
            val = v;
            break;
        }
    for (const auto& [c, v] : points_) {
        KElem diff = x - c;
        if (diff.provably_zero()) {
            val += v;
        } else if (!diff.provably_nonzero()) {
            throw insufficient_precision("point-mass membership undecidable",
                                         diff.precision() + 1);
        }
    }
    return val;
}

SBFunction SBFunction::pullback_affine(const KElem& alpha, const KElem& beta) const {
    ValuationResult va = alpha.valuation();
    if (!va.is_finite())
        throw division_by_zero("affine pullback by a (possibly) zero scale");
    int s = va.value();
    KElem ainv = alpha.inv(PREC_INF);
    SBFunction out(spec_);
    std::vector<std::pair<KBall, Rat>> terms;
    for (const auto& [b, v] : terms_)
        terms.emplace_back(KBall((b.center - beta) * ainv, b.m - s), v);
    out.terms_ = std::move(terms);
    for (const auto& [c, v] : points_)
        out.points_.emplace_back((c - beta) * ainv, v);
    out.canonicalize();
    return out;
}

SBFunction SBFunction::translate(const KElem& b) const {
    return pullback_affine(KElem::one(spec_), b);
}

int SBFunction::max_scale() const {
    int m = 0;
    for (const auto& [b, v] : terms_) m = std::max(m, b.m);
    return m;
}

int SBFunction::min_scale() const {
    int m = 0;
    for (const auto& [b, v] : terms_) m = std::min(m, b.m);
    return m;
}

int SBFunction::support_val_lb() const {
    int lb = 0;
    for (const auto& [b, v] : terms_) {
        ValuationResult vc = b.center.valuation();
        lb = std::min(lb, std::min(vc.lower_bound(), b.m));
    }
    return lb;
}

std::string SBFunction::str() const {
    if (is_zero()) return "0";
    std::string s;
    for (const auto& [b, v] : terms_) {
        if (!s.empty()) s += " + ";
        s += v.get_str() + "*Char" + b.str();
    }
    for (const auto& [c, v] : points_) {
        if (!s.empty()) s += " + ";
        s += v.get_str() + "*Char{" + c.str() + "}";
    }
    return s;
}

// ---------------------------------------------------------------------------
// SBFunction2

namespace {

// Disjointify rectangles: refine per-axis; two rectangles overlap iff both
// axes overlap, and each axis pair is nested-or-disjoint.
std::vector<SBRect> disjointify2(std::vector<SBRect> in) {
    std::list<SBRect> out;
    for (auto& r : in) {
        std::list<SBRect> pending{r};
        while (!pending.empty()) {
            SBRect cur = pending.front();
            pending.pop_front();
            bool placed = false;
            for (auto it = out.begin(); it != out.end(); ++it) {
                if (cur.b1.disjoint(it->b1) || cur.b2.disjoint(it->b2)) continue;
                if (cur.b1 == it->b1 && cur.b2 == it->b2) {
                    it->value += cur.value;
                    placed = true;
                    break;
                }
                // split the coarser axis of whichever rectangle is coarser
                if (it->b1.contains(cur.b1) && it->b1.m < cur.b1.m) {
                    SBRect base = *it;
                    out.erase(it);
                    for (auto& k : base.b1.split()) out.push_back({k, base.b2, base.value});
                    pending.push_front(cur);
                    placed = true;
                    break;
                }
                if (it->b2.contains(cur.b2) && it->b2.m < cur.b2.m) {
                    SBRect base = *it;
                    out.erase(it);
                    for (auto& k : base.b2.split()) out.push_back({base.b1, k, base.value});
                    pending.push_front(cur);
                    placed = true;
                    break;
                }
                if (cur.b1.contains(it->b1) && cur.b1.m < it->b1.m) {
                    for (auto& k : cur.b1.split()) pending.push_back({k, cur.b2, cur.value});
                    placed = true;
                    break;
                }
                if (cur.b2.contains(it->b2) && cur.b2.m < it->b2.m) {
                    for (auto& k : cur.b2.split()) pending.push_back({cur.b1, k, cur.value});
                    placed = true;
                    break;
                }
                throw error("internal: rectangle refinement stuck");
            }
            if (!placed) out.push_back(cur);
            if (out.size() + pending.size() > SB_TERM_CAP)
                throw grid_too_large("rectangle refinement");
        }
    }
    return {out.begin(), out.end()};
}

} // namespace

SBFunction2::SBFunction2(const FieldTowerSpec& s, std::vector<SBRect> rects)
    : spec_(s), rects_(std::move(rects)) {
    for (auto& r : rects_) r.value.canonicalize();
    canonicalize();
}

void SBFunction2::canonicalize() {
    rects_ = disjointify2(std::move(rects_));
    rects_.erase(std::remove_if(rects_.begin(), rects_.end(),
                                [](const SBRect& r) { return r.value == 0; }),
                 rects_.end());
    std::sort(rects_.begin(), rects_.end(), [](const SBRect& a, const SBRect& b) {
        int c = a.b1.cmp(b.b1);
        if (c != 0) return c < 0;
        return a.b2.cmp(b.b2) < 0;
    });
}

SBFunction2 SBFunction2::indicator(const KBall& b1, const KBall& b2, const Rat& v) {
    return SBFunction2(b1.spec(), {{b1, b2, v}});
}

SBFunction2 SBFunction2::unit_square(const FieldTowerSpec& s) {
    KBall o(KElem::zero(s), 0);
    return indicator(o, o);
}

SBFunction2 SBFunction2::operator+(const SBFunction2& o) const {
    std::vector<SBRect> all = rects_;
    all.insert(all.end(), o.rects_.begin(), o.rects_.end());
    return SBFunction2(spec_, std::move(all));
}

SBFunction2 SBFunction2::scale(const Rat& r) const {
    if (r == 0) return zero(spec_);
    SBFunction2 out = *this;
    for (auto& rect : out.rects_) rect.value *= r;
    return out;
}

Rat SBFunction2::double_integral() const {
    Rat total(0);
    for (const auto& r : rects_) total += r.value * r.b1.measure() * r.b2.measure();
    return total;
}

Rat SBFunction2::eval(const KElem& x, const KElem& y) const {
    for (const auto& r : rects_)
        if (r.b1.contains(x) && r.b2.contains(y)) return r.value;
    return Rat(0);
}

SBFunction SBFunction2::section1(const KElem& omega) const {
    std::vector<std::pair<KBall, Rat>> terms;
    for (const auto& r : rects_)
        if (r.b1.contains(omega)) terms.emplace_back(r.b2, r.value);
    return SBFunction(spec_, std::move(terms));
}

SBFunction SBFunction2::section2(const KElem& w) const {
    std::vector<std::pair<KBall, Rat>> terms;
    for (const auto& r : rects_)
        if (r.b2.contains(w)) terms.emplace_back(r.b1, r.value);
    return SBFunction(spec_, std::move(terms));
}

SBFunction SBFunction2::marginal1() const {
    std::vector<std::pair<KBall, Rat>> terms;
    for (const auto& r : rects_) terms.emplace_back(r.b1, r.value * r.b2.measure());
    return SBFunction(spec_, std::move(terms));
}

SBFunction SBFunction2::marginal2() const {
    std::vector<std::pair<KBall, Rat>> terms;
    for (const auto& r : rects_) terms.emplace_back(r.b2, r.value * r.b1.measure());
    return SBFunction(spec_, std::move(terms));
}

std::string SBFunction2::str() const {
    if (rects_.empty()) return "0";
    std::string s;
    for (const auto& r : rects_) {
        if (!s.empty()) s += " + ";
        s += r.value.get_str() + "*Char[" + r.b1.str() + " x " + r.b2.str() + "]";
    }
    return s;
}

} // namespace lf2
