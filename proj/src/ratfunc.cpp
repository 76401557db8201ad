#include "lf2/ratfunc.hpp"

namespace lf2 {

QPoly QPoly::xpow(int n) {
    if (n < 0) throw error("QPoly::xpow needs n >= 0");
    std::vector<Rat> c(n + 1, Rat(0));
    c[n] = 1;
    return QPoly(std::move(c));
}

QPoly QPoly::operator+(const QPoly& o) const {
    std::vector<Rat> c(std::max(c_.size(), o.c_.size()), Rat(0));
    for (size_t i = 0; i < c.size(); ++i)
        c[i] = coeff(static_cast<int>(i)) + o.coeff(static_cast<int>(i));
    return QPoly(std::move(c));
}

QPoly QPoly::operator-() const {
    QPoly r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
}

QPoly QPoly::operator-(const QPoly& o) const { return *this + (-o); }

QPoly QPoly::operator*(const QPoly& o) const {
    if (c_.empty() || o.c_.empty()) return {};
    std::vector<Rat> c(c_.size() + o.c_.size() - 1, Rat(0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
    return QPoly(std::move(c));
}

QPoly QPoly::operator*(const Rat& r) const {
    QPoly out = *this;
    for (auto& v : out.c_) v *= r;
    out.trim();
    return out;
}

std::pair<QPoly, QPoly> QPoly::divrem(const QPoly& o) const {
    if (o.is_zero()) throw division_by_zero("polynomial division by zero");
    QPoly rem = *this;
    std::vector<Rat> q(std::max<int>(degree() - o.degree() + 1, 0), Rat(0));
    while (!rem.is_zero() && rem.degree() >= o.degree()) {
        Rat f = rem.c_.back() / o.c_.back();
        int shift = rem.degree() - o.degree();
        q[shift] = f;
        for (int i = 0; i <= o.degree(); ++i) rem.c_[i + shift] -= f * o.c_[i];
        rem.trim();
    }
    return {QPoly(std::move(q)), rem};
}

QPoly QPoly::gcd(QPoly a, QPoly b) {
    while (!b.is_zero()) {
        QPoly r = a.divrem(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

QPoly QPoly::monic() const {
    if (is_zero()) return {};
    return *this * (Rat(1) / c_.back());
}

Rat QPoly::eval(const Rat& x) const {
    Rat acc(0);
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
}

std::string QPoly::str(const std::string& var) const {
    if (c_.empty()) return "0";
    std::string s;
    for (size_t i = c_.size(); i-- > 0;) {
        if (c_[i] == 0) continue;
        Rat v = c_[i];
        if (s.empty()) {
            if (v < 0) {
                s += "-";
                v = -v;
            }
        } else {
            s += v < 0 ? " - " : " + ";
            if (v < 0) v = -v;
        }
        if (i == 0) {
            s += v.get_str();
            continue;
        }
        if (v != 1) s += v.get_str() + "*";
        s += var;
        if (i != 1) s += "^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

RatFunc::RatFunc(QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw division_by_zero("rational function with zero denominator");
    canonicalize();
}

void RatFunc::canonicalize() {
    if (num_.is_zero()) {
        den_ = QPoly::constant(Rat(1));
        return;
    }
    QPoly g = QPoly::gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = num_.divrem(g).first;
        den_ = den_.divrem(g).first;
    }
    Rat lead = den_.coeff(den_.degree());
    if (lead != 1) {
        num_ = num_ * (Rat(1) / lead);
        den_ = den_ * (Rat(1) / lead);
    }
}

RatFunc RatFunc::monomial(const Rat& r, int n) {
    if (r == 0) return zero();
    if (n >= 0) return RatFunc(QPoly::xpow(n) * r, QPoly::constant(Rat(1)));
    return RatFunc(QPoly::constant(r), QPoly::xpow(-n));
}

Rat RatFunc::constant_value() const {
    if (!is_constant()) throw error("RatFunc is not constant: " + str());
    return num_.coeff(0);
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
    return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-() const { return RatFunc(-num_, den_); }

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::operator*(const RatFunc& o) const {
    return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::inv() const {
    if (num_.is_zero()) throw division_by_zero("inverse of the zero rational function");
    return RatFunc(den_, num_);
}

Rat RatFunc::eval(const Rat& x) const {
    Rat d = den_.eval(x);
    if (d == 0) throw division_by_zero("pole at X = " + x.get_str());
    return num_.eval(x) / d;
}

std::string RatFunc::str() const {
    if (den_.degree() == 0) return num_.str();
    std::string n = num_.str();
    if (num_.degree() > 0) n = "(" + n + ")";
    std::string d = den_.str();
    if (den_.degree() > 0) d = "(" + d + ")";
    return n + "/" + d;
}

} // namespace lf2
