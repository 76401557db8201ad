#include "lf2/fq.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace lf2 {

namespace {

using Polmod = std::vector<uint32_t>;  // dense, little-endian coefficients

Polmod pm_mul(const Polmod& a, const Polmod& b, uint32_t p) {
    if (a.empty() || b.empty()) return {};
    Polmod r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + static_cast<uint64_t>(a[i]) * b[j]) % p;
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

// a mod m, m monic
Polmod pm_rem(Polmod a, const Polmod& m, uint32_t p) {
    while (a.size() >= m.size()) {
        uint32_t lead = a.back();
        size_t shift = a.size() - m.size();
        if (lead != 0) {
            for (size_t i = 0; i < m.size(); ++i) {
                uint64_t sub = static_cast<uint64_t>(lead) * m[i] % p;
                uint32_t& c = a[shift + i];
                c = static_cast<uint32_t>((c + p - sub) % p);
            }
        }
        a.pop_back();
    }
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

bool pm_is_irreducible(const Polmod& m, uint32_t p) {
    // Trial evaluation finds linear factors; for degree <= 3 that settles it.
    // Higher degrees use the x^(p^k) gcd test.
    size_t deg = m.size() - 1;
    for (uint32_t r = 0; r < p; ++r) {
        uint64_t acc = 0;
        for (size_t i = m.size(); i-- > 0;) acc = (acc * r + m[i]) % p;
        if (acc == 0) return false;
    }
    if (deg <= 3) return true;
    // x^(p^k) mod m for k = 1..deg/2; reducible iff gcd(x^(p^k) - x, m) != 1.
    auto powmod = [&](Polmod base, uint64_t e) {
        Polmod acc{1};
        while (e) {
            if (e & 1) acc = pm_rem(pm_mul(acc, base, p), m, p);
            base = pm_rem(pm_mul(base, base, p), m, p);
            e >>= 1;
        }
        return acc;
    };
    auto gcd = [&](Polmod a, Polmod b) {
        auto make_monic = [&](Polmod& x) {
            if (x.empty()) return;
            uint32_t l = x.back(), inv = 1;
            for (uint32_t i = 1; i < p; ++i)
                if (static_cast<uint64_t>(l) * i % p == 1) { inv = i; break; }
            for (auto& c : x) c = static_cast<uint32_t>(static_cast<uint64_t>(c) * inv % p);
        };
        while (!b.empty()) {
            make_monic(b);
            a = pm_rem(std::move(a), b, p);
            std::swap(a, b);
        }
        return a;
    };
    Polmod xp{0, 1};
    for (size_t k = 1; 2 * k <= deg; ++k) {
        uint64_t e = 1;
        for (size_t i = 0; i < k; ++i) e *= p;
        Polmod t = powmod(Polmod{0, 1}, e);
        // t - x
        Polmod diff = t;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = static_cast<uint32_t>((diff[1] + p - 1) % p);
        while (!diff.empty() && diff.back() == 0) diff.pop_back();
        Polmod g = gcd(m, diff);
        if (g.size() != 1) return false;
    }
    return true;
}

const Polmod& cached_modulus(uint32_t p, uint32_t f) {
    static std::map<std::pair<uint32_t, uint32_t>, Polmod> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lk(mtx);
    auto key = std::make_pair(p, f);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    // Smallest monic irreducible of degree f in lexicographic coefficient
    // order (constant term varies fastest).
    Polmod m(f + 1, 0);
    m[f] = 1;
    uint64_t total = 1;
    for (uint32_t i = 0; i < f; ++i) total *= p;
    for (uint64_t idx = 0; idx < total; ++idx) {
        uint64_t v = idx;
        for (uint32_t i = 0; i < f; ++i) { m[i] = static_cast<uint32_t>(v % p); v /= p; }
        if (pm_is_irreducible(m, p)) break;
    }
    return cache.emplace(key, m).first->second;
}

} // namespace

void Fq::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Fq Fq::zero(uint32_t p, uint32_t f) { return Fq(p, f, {}); }

Fq Fq::one(uint32_t p, uint32_t f) { return Fq(p, f, {1}); }

Fq Fq::from_int(uint32_t p, uint32_t f, long n) {
    long r = n % static_cast<long>(p);
    if (r < 0) r += p;
    return r == 0 ? zero(p, f) : Fq(p, f, {static_cast<uint32_t>(r)});
}

Fq Fq::from_coeffs(uint32_t p, uint32_t f, const std::vector<long>& cs) {
    if (cs.size() > f) throw error("Fq coefficient list longer than degree");
    Polmod c;
    for (long v : cs) {
        long r = v % static_cast<long>(p);
        if (r < 0) r += p;
        c.push_back(static_cast<uint32_t>(r));
    }
    Fq x(p, f, std::move(c));
    x.trim();
    return x;
}

Fq Fq::from_index(uint32_t p, uint32_t f, uint64_t index) {
    Polmod c;
    for (uint32_t i = 0; i < f; ++i) { c.push_back(static_cast<uint32_t>(index % p)); index /= p; }
    Fq x(p, f, std::move(c));
    x.trim();
    return x;
}

uint64_t Fq::q() const {
    uint64_t r = 1;
    for (uint32_t i = 0; i < f_; ++i) r *= p_;
    return r;
}

uint64_t Fq::index() const {
    uint64_t r = 0;
    for (size_t i = coeffs_.size(); i-- > 0;) r = r * p_ + coeffs_[i];
    return r;
}

bool Fq::is_zero() const { return coeffs_.empty(); }
bool Fq::is_one() const { return coeffs_.size() == 1 && coeffs_[0] == 1; }

Fq Fq::operator+(const Fq& o) const {
    Polmod c(std::max(coeffs_.size(), o.coeffs_.size()), 0);
    for (size_t i = 0; i < c.size(); ++i) {
        uint32_t a = i < coeffs_.size() ? coeffs_[i] : 0;
        uint32_t b = i < o.coeffs_.size() ? o.coeffs_[i] : 0;
        c[i] = (a + b) % p_;
    }
    Fq x(p_, f_, std::move(c));
    x.trim();
    return x;
}

Fq Fq::operator-() const {
    Polmod c = coeffs_;
    for (auto& v : c) v = (p_ - v) % p_;
    Fq x(p_, f_, std::move(c));
    x.trim();
    return x;
}

Fq Fq::operator-(const Fq& o) const { return *this + (-o); }

Fq Fq::operator*(const Fq& o) const {
    Polmod c = pm_rem(pm_mul(coeffs_, o.coeffs_, p_), cached_modulus(p_, f_), p_);
    return Fq(p_, f_, std::move(c));
}

Fq Fq::pow(uint64_t e) const {
    Fq acc = one(p_, f_), base = *this;
    while (e) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

Fq Fq::inv() const {
    if (is_zero()) throw division_by_zero("inverse of 0 in F_q");
    return pow(q() - 2);
}

Fq Fq::pth_root() const {
    // Frobenius x -> x^p has order f, so the inverse is x -> x^(p^(f-1)).
    uint64_t e = 1;
    for (uint32_t i = 1; i < f_; ++i) e *= p_;
    return pow(e);
}

bool Fq::operator==(const Fq& o) const {
    return p_ == o.p_ && f_ == o.f_ && coeffs_ == o.coeffs_;
}

bool Fq::operator<(const Fq& o) const { return index() < o.index(); }

std::string Fq::str() const {
    if (coeffs_.empty()) return "0";
    if (f_ == 1) return std::to_string(coeffs_[0]);
    std::string s;
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        if (!s.empty()) s += "+";
        if (i == 0) {
            s += std::to_string(coeffs_[i]);
        } else {
            if (coeffs_[i] != 1) s += std::to_string(coeffs_[i]) + "*";
            s += i == 1 ? "g" : "g^" + std::to_string(i);
        }
    }
    return s;
}

std::vector<Fq> Fq::all(uint32_t p, uint32_t f) {
    uint64_t n = 1;
    for (uint32_t i = 0; i < f; ++i) n *= p;
    std::vector<Fq> r;
    r.reserve(n);
    for (uint64_t i = 0; i < n; ++i) r.push_back(from_index(p, f, i));
    return r;
}

std::vector<uint32_t> Fq::modulus(uint32_t p, uint32_t f) { return cached_modulus(p, f); }

} // namespace lf2
