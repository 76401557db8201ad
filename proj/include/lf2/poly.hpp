// Dense univariate polynomials over KElem or FElem.
//
// Trailing provably-zero coefficients are trimmed; an ambiguous leading
// coefficient (possible at finite precision) is kept, and operations that
// need an exact degree raise insufficient_precision.

#pragma once

#include <string>
#include <vector>

#include "lf2/tower.hpp"

namespace lf2 {

template <class T>
class Poly {
public:
    Poly() = default;
    explicit Poly(const FieldTowerSpec& s) : spec_(s) {}
    Poly(const FieldTowerSpec& s, std::vector<T> coeffs)
        : spec_(s), c_(std::move(coeffs)) {
        trim();
    }

    static Poly zero(const FieldTowerSpec& s) { return Poly(s); }
    static Poly constant(const T& v) {
        Poly r(v.spec());
        r.c_.push_back(v);
        r.trim();
        return r;
    }
    static Poly variable(const FieldTowerSpec& s) {
        Poly r(s);
        r.c_ = {T::zero(s), T::one(s)};
        return r;
    }
    static Poly monomial(const T& v, int deg) {
        Poly r(v.spec());
        r.c_.assign(deg + 1, T::zero(v.spec()));
        r.c_[deg] = v;
        r.trim();
        return r;
    }

    const FieldTowerSpec& spec() const { return spec_; }
    bool is_zero() const { return c_.empty(); }
    bool provably_nonzero() const {
        for (const auto& c : c_)
            if (c.provably_nonzero()) return true;
        return false;
    }
    // Number of stored coefficients minus one; equals the degree when the
    // leading coefficient is provably nonzero.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool leading_decided() const {
        return c_.empty() || c_.back().provably_nonzero();
    }

    T coeff(int i) const {
        if (i < 0 || i >= static_cast<int>(c_.size())) return T::zero(spec_);
        return c_[i];
    }
    const std::vector<T>& coeffs() const { return c_; }

    Poly operator+(const Poly& o) const {
        Poly r(spec_);
        r.c_.resize(std::max(c_.size(), o.c_.size()), T::zero(spec_));
        for (size_t i = 0; i < r.c_.size(); ++i)
            r.c_[i] = coeff(static_cast<int>(i)) + o.coeff(static_cast<int>(i));
        r.trim();
        return r;
    }
    Poly operator-() const {
        Poly r = *this;
        for (auto& c : r.c_) c = -c;
        return r;
    }
    Poly operator-(const Poly& o) const { return *this + (-o); }
    Poly operator*(const Poly& o) const {
        if (c_.empty() || o.c_.empty()) return Poly(spec_);
        Poly r(spec_);
        r.c_.assign(c_.size() + o.c_.size() - 1, T::zero(spec_));
        for (size_t i = 0; i < c_.size(); ++i)
            for (size_t j = 0; j < o.c_.size(); ++j)
                r.c_[i + j] = r.c_[i + j] + c_[i] * o.c_[j];
        r.trim();
        return r;
    }
    Poly operator*(const T& v) const {
        Poly r = *this;
        for (auto& c : r.c_) c = c * v;
        r.trim();
        return r;
    }
    Poly pow(long e) const {
        if (e < 0) throw error("negative power of a polynomial");
        Poly acc = constant(T::one(spec_)), base = *this;
        unsigned long k = static_cast<unsigned long>(e);
        while (k) {
            if (k & 1) acc = acc * base;
            if (k >>= 1) base = base * base;
        }
        return acc;
    }

    T eval(const T& x) const {
        T acc = T::zero(spec_);
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    Poly derivative() const {
        Poly r(spec_);
        for (size_t i = 1; i < c_.size(); ++i) {
            T c = c_[i];
            for (size_t k = 1; k < i; ++k) c = c + c_[i];  // i * c_[i], char-free
            r.c_.push_back(c);
        }
        r.trim();
        return r;
    }

    // Taylor coefficients at a: h(X) = sum_k out[k] (X - a)^k, by repeated
    // synthetic division (valid in any characteristic).
    std::vector<T> taylor_at(const T& a) const {
        std::vector<T> b = c_;
        if (b.empty()) return b;
        size_t n = b.size();
        for (size_t i = 0; i + 1 < n; ++i)
            for (size_t j = n - 1; j-- > i;) b[j] = b[j] + a * b[j + 1];
        return b;
    }

    bool operator==(const Poly& o) const {
        if (c_.size() != o.c_.size()) return false;
        for (size_t i = 0; i < c_.size(); ++i)
            if (!(c_[i] == o.c_[i])) return false;
        return true;
    }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    std::string str(const std::string& var = "X") const {
        if (c_.empty()) return "0";
        std::string s;
        for (size_t i = c_.size(); i-- > 0;) {
            if (c_[i].provably_zero()) continue;
            std::string cs = c_[i].str();
            bool neg = !cs.empty() && cs[0] == '-';
            if (s.empty()) {
                if (neg) {
                    s += "-";
                    cs = cs.substr(1);
                }
            } else {
                s += neg ? " - " : " + ";
                if (neg) cs = cs.substr(1);
            }
            bool composite = cs.find_first_of("+-*O^ ") != std::string::npos ||
                             cs.find('u') != std::string::npos ||
                             cs.find('t') != std::string::npos;
            if (i == 0) {
                s += composite ? "(" + cs + ")" : cs;
                continue;
            }
            if (cs != "1") s += (composite ? "(" + cs + ")" : cs) + "*";
            s += var;
            if (i != 1) s += "^" + std::to_string(i);
        }
        return s.empty() ? "0" : s;
    }

private:
    FieldTowerSpec spec_;
    std::vector<T> c_;
    void trim() {
        while (!c_.empty() && c_.back().provably_zero()) c_.pop_back();
    }
};

using FPoly = Poly<FElem>;
using KPoly = Poly<KElem>;

// Coefficient-wise residue; throws negative_valuation on a non-integral
// coefficient.
KPoly reduce(const FPoly& q);

// Lift a K-polynomial to F (coefficients become t-degree-0 constants).
FPoly lift_poly(const KPoly& q);

// True when char K = p > 0 and every monomial degree is divisible by p
// (equivalently psi' = 0); constants count as purely inseparable.
bool is_purely_inseparable(const KPoly& psi);

} // namespace lf2
