// The field tower F_q -> K -> F = K((t)).
//
// K is either Q_p (kind padic) or F_q((u)) (kind laurent).  Elements of K
// are KElem: exact rationals for Q_p, finite Laurent polynomials in u with
// an explicit precision for F_q((u)).  Elements of F are FElem: finite maps
// from t-exponents to KElem coefficients plus a t-precision.
//
// Precision discipline: an element "known mod u^N" (resp. t^N) stores only
// digits below N, and arithmetic never reports more precision than is
// derivable from its operands.  Exact elements have precision infinity.

#pragma once

#include <climits>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lf2/errors.hpp"
#include "lf2/fq.hpp"
#include "lf2/rat.hpp"

namespace lf2 {

constexpr int PREC_INF = INT_MAX;

enum class MidKind { padic, laurent };

struct FieldTowerSpec {
    MidKind kind = MidKind::padic;
    uint32_t p = 2;  // residue characteristic, prime
    uint32_t f = 1;  // q = p^f; padic requires f = 1

    static FieldTowerSpec make_padic(uint32_t p);
    static FieldTowerSpec make_laurent(uint32_t p, uint32_t f = 1);

    uint64_t q() const;
    bool operator==(const FieldTowerSpec& o) const {
        return kind == o.kind && p == o.p && f == o.f;
    }
    std::string str() const;                     // "Qp(5)((t))" / "Fq(5,1)((u))((t))"
    static FieldTowerSpec parse(const std::string& s);
};

struct ValuationResult {
    enum class Kind { finite, at_least, infinite };
    Kind kind = Kind::infinite;
    int n = 0;  // finite value, or lower bound for at_least

    static ValuationResult finite(int n) { return {Kind::finite, n}; }
    static ValuationResult at_least(int n) { return {Kind::at_least, n}; }
    static ValuationResult infinite() { return {Kind::infinite, 0}; }

    bool is_finite() const { return kind == Kind::finite; }
    bool is_infinite() const { return kind == Kind::infinite; }
    int value() const {
        if (!is_finite()) throw insufficient_precision("valuation not finite");
        return n;
    }
    // Sound lower bound in all cases (INT_MAX for provably zero).
    int lower_bound() const { return kind == Kind::infinite ? INT_MAX : n; }
    bool operator==(const ValuationResult& o) const { return kind == o.kind && (kind == Kind::infinite || n == o.n); }
    std::string str() const;
};

// ---------------------------------------------------------------------------
// KElem: element of the middle field K.

class KElem {
public:
    KElem() = default;

    static KElem zero(const FieldTowerSpec& s);
    static KElem one(const FieldTowerSpec& s);
    static KElem from_int(const FieldTowerSpec& s, long n);
    static KElem from_rat(const FieldTowerSpec& s, const Rat& r);  // padic only
    static KElem from_fq(const FieldTowerSpec& s, const Fq& c);    // constant
    // Laurent element sum c_e u^e known mod u^prec.
    static KElem laurent(const FieldTowerSpec& s, std::map<int, Fq> coeffs,
                         int prec = PREC_INF);
    static KElem uniformizer(const FieldTowerSpec& s);  // p or u

    const FieldTowerSpec& spec() const { return spec_; }

    ValuationResult valuation() const;
    bool provably_zero() const;
    bool provably_nonzero() const;
    int precision() const;  // PREC_INF for exact

    // Residue in F_q; requires valuation >= 0 provable.
    Fq residue() const;

    KElem operator+(const KElem& o) const;
    KElem operator-(const KElem& o) const;
    KElem operator-() const;
    KElem operator*(const KElem& o) const;
    // Inverse known to precision >= prec (exact when the series terminates);
    // throws insufficient_precision / division_by_zero.
    KElem inv(int prec) const;
    KElem pow(long e, int prec = PREC_INF) const;

    // Multiply by uniformizer^k.
    KElem shift(int k) const;
    // Forget digits at exponents >= n.
    KElem truncate(int n) const;
    // Canonical representative modulo pi^n (exact output).
    KElem reduce_mod(int n) const;

    bool operator==(const KElem& o) const;
    bool operator!=(const KElem& o) const { return !(*this == o); }
    // Canonical structural order (used for deterministic output).
    int cmp(const KElem& o) const;

    std::string str() const;

    // Exact rational payload (padic only).
    const Rat& rat() const;
    // Laurent payload (laurent only).
    const std::map<int, Fq>& coeffs() const { return co_; }

    // All q^depth canonical digit-grid elements with digits at exponents
    // [0, depth); exact.
    static std::vector<KElem> grid(const FieldTowerSpec& s, int depth,
                                   uint64_t cap);
    static uint64_t grid_size(const FieldTowerSpec& s, int depth);
    static KElem grid_element(const FieldTowerSpec& s, int depth, uint64_t index);

private:
    FieldTowerSpec spec_;
    Rat rv_;                 // padic payload
    std::map<int, Fq> co_;   // laurent payload (no provably-zero entries)
    int uprec_ = PREC_INF;
    void normalize();
};

// ---------------------------------------------------------------------------
// FElem: element of F = K((t)).

class FElem {
public:
    FElem() = default;

    static FElem zero(const FieldTowerSpec& s);
    static FElem one(const FieldTowerSpec& s);
    static FElem from_int(const FieldTowerSpec& s, long n);
    static FElem from_k(const KElem& c);            // constant coefficient
    static FElem monomial(const KElem& c, int e);   // c * t^e
    static FElem t(const FieldTowerSpec& s);        // the prime t
    static FElem make(const FieldTowerSpec& s, std::map<int, KElem> coeffs,
                      int tprec = PREC_INF);

    const FieldTowerSpec& spec() const { return spec_; }
    const std::map<int, KElem>& coeffs() const { return co_; }
    int precision() const { return tprec_; }

    ValuationResult valuation() const;
    bool provably_zero() const;
    bool provably_nonzero() const;
    bool integral() const;  // valuation >= 0 provable
    KElem residue() const;  // t^0 digit; requires valuation >= 0 provable

    // Digit at t-exponent e (throws insufficient_precision if e >= tprec).
    KElem digit(int e) const;

    FElem operator+(const FElem& o) const;
    FElem operator-(const FElem& o) const;
    FElem operator-() const;
    FElem operator*(const FElem& o) const;
    FElem operator*(const KElem& c) const;
    FElem inv(int tprec) const;  // known mod t^tprec (or exact if terminating)
    FElem pow(long e) const;

    FElem shift(int k) const;      // * t^k
    FElem truncate(int n) const;   // forget digits >= n; precision <= n
    FElem reduce_mod_t(int c) const;  // canonical: digits >= c dropped, exact

    bool operator==(const FElem& o) const;
    bool operator!=(const FElem& o) const { return !(*this == o); }
    int cmp(const FElem& o) const;

    std::string str() const;

    static uint64_t grid_size(const FieldTowerSpec& s, int t_depth, int u_depth);
    // Grid elements: sum over 0 <= j < t_depth of d_j t^(j + t_start) with
    // d_j running over the K-grid of the given u-depth.  Exact elements.
    static FElem grid_element(const FieldTowerSpec& s, int t_depth, int u_depth,
                              uint64_t index, int t_start = 0);
    static std::vector<FElem> grid(const FieldTowerSpec& s, int t_depth,
                                   int u_depth, uint64_t cap, int t_start = 0);

private:
    FieldTowerSpec spec_;
    std::map<int, KElem> co_;  // no provably-zero entries; keys < tprec_
    int tprec_ = PREC_INF;
    void normalize();
};

// digit_grid per spec: enumeration cap guards against blowup.
std::vector<FElem> digit_grid(const FieldTowerSpec& s, int t_depth, int u_depth,
                              uint64_t cap = 2000000);

} // namespace lf2
