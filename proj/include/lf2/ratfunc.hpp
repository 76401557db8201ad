// Exact rational functions in X over Q, in canonical form (monic
// denominator, coprime numerator/denominator).  These are the values of the
// lifted integral; the X-monomials X^n (n in Z) are the common case.

#pragma once

#include <string>
#include <vector>

#include "lf2/errors.hpp"
#include "lf2/rat.hpp"

namespace lf2 {

class QPoly {
public:
    QPoly() = default;
    QPoly(std::initializer_list<Rat> cs) : c_(cs) { trim(); }
    explicit QPoly(std::vector<Rat> cs) : c_(std::move(cs)) { trim(); }
    static QPoly constant(const Rat& r) { return QPoly(std::vector<Rat>{r}); }
    static QPoly xpow(int n);  // n >= 0

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    Rat coeff(int i) const {
        return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : Rat(0);
    }
    const std::vector<Rat>& coeffs() const { return c_; }

    QPoly operator+(const QPoly& o) const;
    QPoly operator-(const QPoly& o) const;
    QPoly operator-() const;
    QPoly operator*(const QPoly& o) const;
    QPoly operator*(const Rat& r) const;
    // division with remainder (o nonzero)
    std::pair<QPoly, QPoly> divrem(const QPoly& o) const;
    static QPoly gcd(QPoly a, QPoly b);  // monic gcd
    QPoly monic() const;
    Rat eval(const Rat& x) const;
    bool operator==(const QPoly& o) const { return c_ == o.c_; }
    std::string str(const std::string& var = "X") const;

private:
    std::vector<Rat> c_;
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
};

class RatFunc {
public:
    RatFunc() : num_(), den_{Rat(1)} {}
    RatFunc(QPoly num, QPoly den);
    RatFunc(const Rat& r) : num_(QPoly::constant(r)), den_{Rat(1)} {}  // NOLINT

    static RatFunc zero() { return RatFunc(); }
    static RatFunc one() { return RatFunc(Rat(1)); }
    // r * X^n with n possibly negative
    static RatFunc monomial(const Rat& r, int n);

    const QPoly& num() const { return num_; }
    const QPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }
    Rat constant_value() const;  // requires is_constant

    RatFunc operator+(const RatFunc& o) const;
    RatFunc operator-(const RatFunc& o) const;
    RatFunc operator-() const;
    RatFunc operator*(const RatFunc& o) const;
    RatFunc inv() const;
    RatFunc operator/(const RatFunc& o) const { return *this * o.inv(); }

    bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RatFunc& o) const { return !(*this == o); }

    Rat eval(const Rat& x) const;  // throws division_by_zero on a pole
    std::string str() const;

private:
    QPoly num_, den_;
    void canonicalize();
};

} // namespace lf2
