// Arithmetic in the finite residue field F_q, q = p^f.
//
// Elements are polynomials of degree < f over F_p modulo a fixed modulus:
// the lexicographically smallest monic irreducible of degree f.  For f = 1
// this degenerates to integers mod p.  Elements print as integers (f = 1)
// or as polynomials in the generator `g` (f > 1).

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lf2/errors.hpp"

namespace lf2 {

class Fq {
public:
    Fq() : p_(0), f_(0) {}  // unusable sentinel; real elements come from make()
    static Fq zero(uint32_t p, uint32_t f);
    static Fq one(uint32_t p, uint32_t f);
    // From an integer: reduces n mod p and embeds F_p (any f).
    static Fq from_int(uint32_t p, uint32_t f, long n);
    // From base-p expansion coefficients c0 + c1 g + ... (values reduced mod p).
    static Fq from_coeffs(uint32_t p, uint32_t f, const std::vector<long>& cs);
    // Decode index in [0, q) as an element (base-p digits = coefficients).
    static Fq from_index(uint32_t p, uint32_t f, uint64_t index);

    uint32_t p() const { return p_; }
    uint32_t f() const { return f_; }
    uint64_t q() const;
    uint64_t index() const;  // inverse of from_index

    bool is_zero() const;
    bool is_one() const;

    Fq operator+(const Fq& o) const;
    Fq operator-(const Fq& o) const;
    Fq operator-() const;
    Fq operator*(const Fq& o) const;
    Fq inv() const;  // throws division_by_zero on 0
    Fq pow(uint64_t e) const;
    Fq pth_root() const;  // Frobenius inverse; always exists (F_q perfect)

    bool operator==(const Fq& o) const;
    bool operator!=(const Fq& o) const { return !(*this == o); }
    bool operator<(const Fq& o) const;  // by index; for canonical ordering

    std::string str() const;

    // All q elements in index order.
    static std::vector<Fq> all(uint32_t p, uint32_t f);

    // The fixed modulus polynomial (monic, degree f), exposed for tests.
    static std::vector<uint32_t> modulus(uint32_t p, uint32_t f);

private:
    Fq(uint32_t p, uint32_t f, std::vector<uint32_t> c)
        : p_(p), f_(f), coeffs_(std::move(c)) {}
    void trim();
    uint32_t p_, f_;
    std::vector<uint32_t> coeffs_;  // degree < f, values in [0, p)
};

} // namespace lf2
