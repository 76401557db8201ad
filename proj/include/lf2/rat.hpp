// Exact rational helpers on top of GMP.

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lf2/errors.hpp"

namespace lf2 {

using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat_pow(const Rat& x, long n) {
    if (n == 0) return Rat(1);
    Rat base = n > 0 ? x : Rat(1) / x;
    unsigned long e = n > 0 ? static_cast<unsigned long>(n)
                            : static_cast<unsigned long>(-n);
    Rat acc(1);
    while (e) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

inline Int int_pow(unsigned long b, unsigned long e) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), b, e);
    return r;
}

// p-adic valuation of a nonzero integer.
inline long padic_val(const Int& n, unsigned long p) {
    Int m = n;
    long v = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        ++v;
    }
    return v;
}

// p-adic valuation of a nonzero rational.
inline long padic_val(const Rat& x, unsigned long p) {
    return padic_val(x.get_num(), p) - padic_val(x.get_den(), p);
}

// The canonical representative of x modulo p^k: the integer combination
// sum d_j p^j over val(x) <= j < k with digits in [0, p).  Requires the
// denominator of x to be prime to p.
inline Rat padic_reduce(const Rat& x, unsigned long p, long k) {
    if (x == 0) return Rat(0);
    long v = padic_val(x, p);
    if (v >= k) return Rat(0);
    // y = x / p^v is a p-unit; reduce y mod p^(k - v), then rescale.
    Rat y = x / rat_pow(Rat(static_cast<long>(p)), v);
    Int mod = int_pow(p, static_cast<unsigned long>(k - v));
    Int den_inv;
    if (!mpz_invert(den_inv.get_mpz_t(), y.get_den().get_mpz_t(), mod.get_mpz_t()))
        throw division_by_zero("denominator not invertible mod p^k");
    Int r = (y.get_num() * den_inv) % mod;
    if (r < 0) r += mod;
    return Rat(r) * rat_pow(Rat(static_cast<long>(p)), v);
}

// Digit of x at p-adic position j (0 <= digit < p); denominator prime to p.
inline unsigned long padic_digit(const Rat& x, unsigned long p, long j) {
    Rat r = padic_reduce(x, p, j + 1) - padic_reduce(x, p, j);
    // r = d * p^j
    Rat d = r / rat_pow(Rat(static_cast<long>(p)), j);
    return static_cast<unsigned long>(d.get_num().get_ui());
}

inline std::string rat_str(const Rat& x) { return x.get_str(); }

} // namespace lf2
