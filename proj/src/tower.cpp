#include "lf2/tower.hpp"

#include <algorithm>
#include <sstream>

namespace lf2 {

namespace {

// Working precision used when an exact Laurent inverse has to be truncated
// (the series does not terminate).  Results still carry honest finite
// precision; callers needing more pass an explicit precision.
constexpr int K_WORK_PREC = 64;

bool is_prime(uint32_t n) {
    if (n < 2) return false;
    for (uint32_t d = 2; static_cast<uint64_t>(d) * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

int sat_add(int a, int b) {
    if (a == PREC_INF || b == PREC_INF) return PREC_INF;
    long s = static_cast<long>(a) + b;
    if (s >= PREC_INF) return PREC_INF;
    if (s <= INT_MIN) return INT_MIN;
    return static_cast<int>(s);
}

} // namespace

// ---------------------------------------------------------------------------
// FieldTowerSpec

FieldTowerSpec FieldTowerSpec::make_padic(uint32_t p) {
    if (!is_prime(p)) throw error("residue characteristic must be prime: " + std::to_string(p));
    return {MidKind::padic, p, 1};
}

FieldTowerSpec FieldTowerSpec::make_laurent(uint32_t p, uint32_t f) {
    if (!is_prime(p)) throw error("residue characteristic must be prime: " + std::to_string(p));
    if (f < 1 || f > 16) throw error("residue degree out of range");
    return {MidKind::laurent, p, f};
}

uint64_t FieldTowerSpec::q() const {
    uint64_t r = 1;
    for (uint32_t i = 0; i < f; ++i) r *= p;
    return r;
}

std::string FieldTowerSpec::str() const {
    if (kind == MidKind::padic) return "Qp(" + std::to_string(p) + ")((t))";
    return "Fq(" + std::to_string(p) + "," + std::to_string(f) + ")((u))((t))";
}

FieldTowerSpec FieldTowerSpec::parse(const std::string& s) {
    auto fail = [&](const std::string& m) { throw lf2::parse_error(m + ": " + s, 0); };
    if (s.rfind("Qp(", 0) == 0) {
        auto close = s.find(')');
        if (close == std::string::npos) fail("missing ')'");
        uint32_t p = static_cast<uint32_t>(std::stoul(s.substr(3, close - 3)));
        if (s.substr(close + 1) != "((t))") fail("expected ((t)) suffix");
        return make_padic(p);
    }
    if (s.rfind("Fq(", 0) == 0) {
        auto comma = s.find(',');
        auto close = s.find(')');
        if (comma == std::string::npos || close == std::string::npos || comma > close)
            fail("expected Fq(p,f)");
        uint32_t p = static_cast<uint32_t>(std::stoul(s.substr(3, comma - 3)));
        uint32_t f = static_cast<uint32_t>(std::stoul(s.substr(comma + 1, close - comma - 1)));
        if (s.substr(close + 1) != "((u))((t))") fail("expected ((u))((t)) suffix");
        return make_laurent(p, f);
    }
    fail("expected Qp(p)((t)) or Fq(p,f)((u))((t))");
    return {};
}

std::string ValuationResult::str() const {
    switch (kind) {
        case Kind::finite: return std::to_string(n);
        case Kind::at_least: return ">=" + std::to_string(n);
        default: return "+inf";
    }
}

// ---------------------------------------------------------------------------
// KElem

void KElem::normalize() {
    if (spec_.kind == MidKind::laurent) {
        for (auto it = co_.begin(); it != co_.end();) {
            if (it->second.is_zero() || it->first >= uprec_)
                it = co_.erase(it);
            else
                ++it;
        }
    } else {
        uprec_ = PREC_INF;
    }
}

KElem KElem::zero(const FieldTowerSpec& s) {
    KElem x;
    x.spec_ = s;
    return x;
}

KElem KElem::one(const FieldTowerSpec& s) { return from_int(s, 1); }

KElem KElem::from_int(const FieldTowerSpec& s, long n) {
    KElem x;
    x.spec_ = s;
    if (s.kind == MidKind::padic) {
        x.rv_ = Rat(n);
    } else {
        Fq c = Fq::from_int(s.p, s.f, n);
        if (!c.is_zero()) x.co_[0] = c;
    }
    return x;
}

KElem KElem::from_rat(const FieldTowerSpec& s, const Rat& r) {
    if (s.kind != MidKind::padic) throw error("from_rat requires K = Q_p");
    KElem x;
    x.spec_ = s;
    x.rv_ = r;
    x.rv_.canonicalize();
    return x;
}

KElem KElem::from_fq(const FieldTowerSpec& s, const Fq& c) {
    KElem x;
    x.spec_ = s;
    if (s.kind == MidKind::padic) {
        x.rv_ = Rat(static_cast<long>(c.index()));
    } else if (!c.is_zero()) {
        x.co_[0] = c;
    }
    return x;
}

KElem KElem::laurent(const FieldTowerSpec& s, std::map<int, Fq> coeffs, int prec) {
    if (s.kind != MidKind::laurent) throw error("laurent payload requires K = F_q((u))");
    KElem x;
    x.spec_ = s;
    x.co_ = std::move(coeffs);
    x.uprec_ = prec;
    x.normalize();
    return x;
}

KElem KElem::uniformizer(const FieldTowerSpec& s) {
    if (s.kind == MidKind::padic) return from_int(s, static_cast<long>(s.p));
    KElem x;
    x.spec_ = s;
    x.co_[1] = Fq::one(s.p, s.f);
    return x;
}

ValuationResult KElem::valuation() const {
    if (spec_.kind == MidKind::padic) {
        if (rv_ == 0) return ValuationResult::infinite();
        return ValuationResult::finite(static_cast<int>(padic_val(rv_, spec_.p)));
    }
    if (!co_.empty()) return ValuationResult::finite(co_.begin()->first);
    if (uprec_ == PREC_INF) return ValuationResult::infinite();
    return ValuationResult::at_least(uprec_);
}

bool KElem::provably_zero() const {
    if (spec_.kind == MidKind::padic) return rv_ == 0;
    return co_.empty() && uprec_ == PREC_INF;
}

bool KElem::provably_nonzero() const {
    if (spec_.kind == MidKind::padic) return rv_ != 0;
    return !co_.empty();
}

int KElem::precision() const {
    return spec_.kind == MidKind::padic ? PREC_INF : uprec_;
}

Fq KElem::residue() const {
    if (spec_.kind == MidKind::padic) {
        if (rv_ == 0) return Fq::zero(spec_.p, spec_.f);
        if (padic_val(rv_, spec_.p) < 0)
            throw negative_valuation("residue of " + str());
        return Fq::from_int(spec_.p, spec_.f,
                            static_cast<long>(padic_digit(rv_, spec_.p, 0)));
    }
    if (!co_.empty() && co_.begin()->first < 0)
        throw negative_valuation("residue of " + str());
    if (uprec_ <= 0)
        throw insufficient_precision("residue digit not visible", 1);
    auto it = co_.find(0);
    return it == co_.end() ? Fq::zero(spec_.p, spec_.f) : it->second;
}

KElem KElem::operator+(const KElem& o) const {
    KElem r;
    r.spec_ = spec_;
    if (spec_.kind == MidKind::padic) {
        r.rv_ = rv_ + o.rv_;
        return r;
    }
    r.uprec_ = std::min(uprec_, o.uprec_);
    r.co_ = co_;
    for (const auto& [e, c] : o.co_) {
        auto it = r.co_.find(e);
        if (it == r.co_.end())
            r.co_[e] = c;
        else
            it->second = it->second + c;
    }
    r.normalize();
    return r;
}

KElem KElem::operator-() const {
    KElem r = *this;
    if (spec_.kind == MidKind::padic) {
        r.rv_ = -rv_;
    } else {
        for (auto& [e, c] : r.co_) c = -c;
    }
    return r;
}

KElem KElem::operator-(const KElem& o) const { return *this + (-o); }

KElem KElem::operator*(const KElem& o) const {
    KElem r;
    r.spec_ = spec_;
    if (spec_.kind == MidKind::padic) {
        r.rv_ = rv_ * o.rv_;
        return r;
    }
    int va = valuation().lower_bound();
    int vb = o.valuation().lower_bound();
    r.uprec_ = std::min(sat_add(uprec_, vb), sat_add(o.uprec_, va));
    for (const auto& [ea, ca] : co_)
        for (const auto& [eb, cb] : o.co_) {
            if (r.uprec_ != PREC_INF && ea + eb >= r.uprec_) continue;
            Fq prod = ca * cb;
            if (prod.is_zero()) continue;
            auto it = r.co_.find(ea + eb);
            if (it == r.co_.end())
                r.co_[ea + eb] = prod;
            else
                it->second = it->second + prod;
        }
    r.normalize();
    return r;
}

KElem KElem::inv(int prec) const {
    if (spec_.kind == MidKind::padic) {
        if (rv_ == 0) throw division_by_zero("inverse of 0 in K");
        KElem r;
        r.spec_ = spec_;
        r.rv_ = 1 / rv_;
        return r;
    }
    ValuationResult v = valuation();
    if (v.is_infinite()) throw division_by_zero("inverse of 0 in K");
    if (!v.is_finite())
        throw insufficient_precision("inverse of element with undecided valuation",
                                     sat_add(uprec_, 1));
    int s = v.value();
    // x = u^s (c + y), c the leading digit; x^-1 = u^-s c^-1 (1 + c^-1 y)^-1.
    int derivable = uprec_ == PREC_INF ? PREC_INF : sat_add(uprec_, -2 * s);
    bool monomial = co_.size() == 1;
    if (prec == PREC_INF)
        prec = monomial ? PREC_INF : std::min(derivable, sat_add(-s, K_WORK_PREC));
    if (derivable != PREC_INF && derivable < prec)
        throw insufficient_precision("inverse precision not derivable",
                                     sat_add(prec, 2 * s));
    Fq cinv = co_.begin()->second.inv();
    if (monomial) {
        KElem r;
        r.spec_ = spec_;
        r.co_[-s] = cinv;
        r.uprec_ = derivable == PREC_INF ? PREC_INF : std::min(derivable, prec);
        r.normalize();
        return r;
    }
    // rel = -c^-1 y u^-s has valuation >= 1; sum the geometric series.
    KElem rel;
    rel.spec_ = spec_;
    int rel_prec = prec == PREC_INF ? PREC_INF : prec + s;  // relative budget
    for (auto it = std::next(co_.begin()); it != co_.end(); ++it)
        rel.co_[it->first - s] = -(cinv * it->second);
    rel.uprec_ = uprec_ == PREC_INF ? PREC_INF : uprec_ - s;
    rel = rel.truncate(rel_prec);
    KElem acc = one(spec_), term = one(spec_);
    int relval = rel.valuation().lower_bound();
    if (relval < 1) throw error("internal: inverse series not contracting");
    for (int k = 1; k * relval < rel_prec; ++k) {
        term = (term * rel).truncate(rel_prec);
        if (term.provably_zero()) break;
        acc = acc + term;
    }
    KElem r;
    r.spec_ = spec_;
    for (const auto& [e, c] : acc.co_) {
        Fq cc = cinv * c;
        if (!cc.is_zero()) r.co_[e - s] = cc;
    }
    r.uprec_ = prec;
    r.normalize();
    return r;
}

KElem KElem::pow(long e, int prec) const {
    if (e < 0) return inv(prec).pow(-e, prec);
    KElem acc = one(spec_), base = *this;
    unsigned long k = static_cast<unsigned long>(e);
    while (k) {
        if (k & 1) acc = acc * base;
        if (k >>= 1) base = base * base;
    }
    return acc;
}

KElem KElem::shift(int k) const {
    if (spec_.kind == MidKind::padic)
        return from_rat(spec_, rv_ * rat_pow(Rat(static_cast<long>(spec_.p)), k));
    KElem r;
    r.spec_ = spec_;
    for (const auto& [e, c] : co_) r.co_[e + k] = c;
    r.uprec_ = sat_add(uprec_, k);
    return r;
}

KElem KElem::truncate(int n) const {
    if (spec_.kind == MidKind::padic) {
        // Exact rationals stay exact; truncation is a no-op for padic.
        return *this;
    }
    KElem r = *this;
    r.uprec_ = std::min(uprec_, n);
    r.normalize();
    return r;
}

KElem KElem::reduce_mod(int n) const {
    KElem r;
    r.spec_ = spec_;
    if (spec_.kind == MidKind::padic) {
        r.rv_ = padic_reduce(rv_, spec_.p, n);
        return r;
    }
    if (uprec_ < n)
        throw insufficient_precision("reduce_mod beyond known digits", n);
    for (const auto& [e, c] : co_)
        if (e < n) r.co_[e] = c;
    return r;  // exact
}

bool KElem::operator==(const KElem& o) const {
    if (!(spec_ == o.spec_)) return false;
    if (spec_.kind == MidKind::padic) return rv_ == o.rv_;
    return co_ == o.co_ && uprec_ == o.uprec_;
}

int KElem::cmp(const KElem& o) const {
    if (spec_.kind == MidKind::padic) return ::cmp(rv_, o.rv_);
    auto a = co_.begin(), b = o.co_.begin();
    while (a != co_.end() && b != o.co_.end()) {
        if (a->first != b->first) return a->first < b->first ? -1 : 1;
        if (!(a->second == b->second)) return a->second < b->second ? -1 : 1;
        ++a;
        ++b;
    }
    if (a != co_.end()) return 1;
    if (b != o.co_.end()) return -1;
    return uprec_ < o.uprec_ ? -1 : uprec_ > o.uprec_ ? 1 : 0;
}

const Rat& KElem::rat() const {
    if (spec_.kind != MidKind::padic) throw error("rat() requires K = Q_p");
    return rv_;
}

std::string KElem::str() const {
    if (spec_.kind == MidKind::padic) return rv_.get_str();
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : co_) {
        std::string cs = c.str();
        bool composite = cs.find('+') != std::string::npos;
        if (!first) os << " + ";
        first = false;
        if (e == 0) {
            os << (composite ? "(" + cs + ")" : cs);
            continue;
        }
        if (c.is_one())
            ;  // bare power of u
        else
            os << (composite ? "(" + cs + ")" : cs) << "*";
        os << "u";
        if (e != 1) os << "^" << e;
    }
    if (uprec_ != PREC_INF) {
        if (!first) os << " + ";
        os << "O(u^" << uprec_ << ")";
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

uint64_t KElem::grid_size(const FieldTowerSpec& s, int depth) {
    uint64_t n = 1;
    uint64_t base = s.kind == MidKind::padic ? s.p : s.q();
    for (int i = 0; i < depth; ++i) n *= base;
    return n;
}

KElem KElem::grid_element(const FieldTowerSpec& s, int depth, uint64_t index) {
    if (s.kind == MidKind::padic) {
        // index itself, written in base p, is the canonical digit expansion.
        return from_rat(s, Rat(static_cast<unsigned long>(index)));
    }
    std::map<int, Fq> co;
    uint64_t q = s.q();
    for (int j = 0; j < depth; ++j) {
        Fq d = Fq::from_index(s.p, s.f, index % q);
        index /= q;
        if (!d.is_zero()) co[j] = d;
    }
    return laurent(s, std::move(co));
}

std::vector<KElem> KElem::grid(const FieldTowerSpec& s, int depth, uint64_t cap) {
    uint64_t n = grid_size(s, depth);
    if (n > cap) throw grid_too_large("K grid of size " + std::to_string(n));
    std::vector<KElem> r;
    r.reserve(n);
    for (uint64_t i = 0; i < n; ++i) r.push_back(grid_element(s, depth, i));
    return r;
}

// ---------------------------------------------------------------------------
// FElem

void FElem::normalize() {
    for (auto it = co_.begin(); it != co_.end();) {
        if (it->second.provably_zero() || it->first >= tprec_)
            it = co_.erase(it);
        else
            ++it;
    }
}

FElem FElem::zero(const FieldTowerSpec& s) {
    FElem x;
    x.spec_ = s;
    return x;
}

FElem FElem::one(const FieldTowerSpec& s) { return from_int(s, 1); }

FElem FElem::from_int(const FieldTowerSpec& s, long n) {
    return from_k(KElem::from_int(s, n));
}

FElem FElem::from_k(const KElem& c) {
    FElem x;
    x.spec_ = c.spec();
    if (!c.provably_zero()) x.co_[0] = c;
    return x;
}

FElem FElem::monomial(const KElem& c, int e) {
    FElem x;
    x.spec_ = c.spec();
    if (!c.provably_zero()) x.co_[e] = c;
    return x;
}

FElem FElem::t(const FieldTowerSpec& s) { return monomial(KElem::one(s), 1); }

FElem FElem::make(const FieldTowerSpec& s, std::map<int, KElem> coeffs, int tprec) {
    FElem x;
    x.spec_ = s;
    x.co_ = std::move(coeffs);
    x.tprec_ = tprec;
    x.normalize();
    return x;
}

ValuationResult FElem::valuation() const {
    for (const auto& [e, c] : co_) {
        if (c.provably_nonzero()) return ValuationResult::finite(e);
        // Ambiguous digit: valuation is at least e, no more is known.
        return ValuationResult::at_least(e);
    }
    if (tprec_ == PREC_INF) return ValuationResult::infinite();
    return ValuationResult::at_least(tprec_);
}

bool FElem::provably_zero() const { return co_.empty() && tprec_ == PREC_INF; }

bool FElem::provably_nonzero() const {
    for (const auto& [e, c] : co_)
        if (c.provably_nonzero()) return true;
    return false;
}

bool FElem::integral() const {
    for (const auto& [e, c] : co_) {
        if (e >= 0) return true;
        if (c.provably_nonzero()) return false;
        return false;  // ambiguous negative digit: not provably integral
    }
    return true;
}

KElem FElem::residue() const {
    for (const auto& [e, c] : co_) {
        if (e >= 0) break;
        if (c.provably_nonzero())
            throw negative_valuation("residue of " + str());
        throw insufficient_precision("undecided digit below t^0", 1);
    }
    if (tprec_ <= 0) throw insufficient_precision("residue digit not visible", 1);
    auto it = co_.find(0);
    return it == co_.end() ? KElem::zero(spec_) : it->second;
}

KElem FElem::digit(int e) const {
    if (e >= tprec_)
        throw insufficient_precision("digit at t^" + std::to_string(e), e + 1);
    auto it = co_.find(e);
    return it == co_.end() ? KElem::zero(spec_) : it->second;
}

FElem FElem::operator+(const FElem& o) const {
    FElem r;
    r.spec_ = spec_;
    r.tprec_ = std::min(tprec_, o.tprec_);
    r.co_ = co_;
    for (const auto& [e, c] : o.co_) {
        auto it = r.co_.find(e);
        if (it == r.co_.end())
            r.co_[e] = c;
        else
            it->second = it->second + c;
    }
    r.normalize();
    return r;
}

FElem FElem::operator-() const {
    FElem r = *this;
    for (auto& [e, c] : r.co_) c = -c;
    return r;
}

FElem FElem::operator-(const FElem& o) const { return *this + (-o); }

FElem FElem::operator*(const FElem& o) const {
    FElem r;
    r.spec_ = spec_;
    int va = valuation().lower_bound();
    int vb = o.valuation().lower_bound();
    if ((co_.empty() && tprec_ == PREC_INF) || (o.co_.empty() && o.tprec_ == PREC_INF)) {
        // exact zero operand
        return zero(spec_);
    }
    r.tprec_ = std::min(sat_add(tprec_, vb), sat_add(o.tprec_, va));
    for (const auto& [ea, ca] : co_)
        for (const auto& [eb, cb] : o.co_) {
            if (r.tprec_ != PREC_INF && ea + eb >= r.tprec_) continue;
            KElem prod = ca * cb;
            if (prod.provably_zero()) continue;
            auto it = r.co_.find(ea + eb);
            if (it == r.co_.end())
                r.co_[ea + eb] = prod;
            else
                it->second = it->second + prod;
        }
    r.normalize();
    return r;
}

FElem FElem::operator*(const KElem& c) const {
    FElem r;
    r.spec_ = spec_;
    r.tprec_ = tprec_;
    if (c.provably_zero()) return zero(spec_);
    for (const auto& [e, cc] : co_) {
        KElem prod = cc * c;
        if (!prod.provably_zero()) r.co_[e] = prod;
    }
    // A coefficient of positive K-valuation cannot change t-precision.
    r.normalize();
    return r;
}

FElem FElem::inv(int tprec) const {
    ValuationResult v = valuation();
    if (v.is_infinite()) throw division_by_zero("inverse of 0 in F");
    if (!v.is_finite())
        throw insufficient_precision("inverse of element with undecided valuation",
                                     sat_add(v.lower_bound(), 1));
    int s = v.value();
    int derivable = tprec_ == PREC_INF ? PREC_INF : sat_add(tprec_, -2 * s);
    bool monomial_x = co_.size() == 1;
    if (tprec == PREC_INF)
        tprec = monomial_x ? PREC_INF : std::min(derivable, sat_add(-s, K_WORK_PREC));
    if (derivable != PREC_INF && derivable < tprec)
        throw insufficient_precision("inverse t-precision not derivable",
                                     sat_add(tprec, 2 * s));
    KElem c = co_.begin()->second;
    KElem cinv = c.inv(PREC_INF);
    if (monomial_x) {
        FElem r = monomial(cinv, -s);
        if (derivable != PREC_INF || cinv.precision() != PREC_INF)
            r.tprec_ = std::min(derivable, tprec);
        r.normalize();
        return r;
    }
    int rel_prec = tprec == PREC_INF ? PREC_INF : tprec + s;
    FElem rel;
    rel.spec_ = spec_;
    for (auto it = std::next(co_.begin()); it != co_.end(); ++it) {
        KElem cc = -(cinv * it->second);
        if (!cc.provably_zero()) rel.co_[it->first - s] = cc;
    }
    rel.tprec_ = tprec_ == PREC_INF ? PREC_INF : tprec_ - s;
    rel = rel.truncate(rel_prec);
    FElem acc = one(spec_), term = one(spec_);
    int relval = rel.valuation().lower_bound();
    if (relval < 1) throw error("internal: F inverse series not contracting");
    for (long k = 1; k * relval < rel_prec; ++k) {
        term = (term * rel).truncate(rel_prec);
        if (term.provably_zero()) break;
        acc = acc + term;
    }
    FElem r;
    r.spec_ = spec_;
    for (const auto& [e, cc] : acc.co_) {
        KElem prod = cinv * cc;
        if (!prod.provably_zero()) r.co_[e - s] = prod;
    }
    r.tprec_ = tprec;
    r.normalize();
    return r;
}

FElem FElem::pow(long e) const {
    if (e < 0) return inv(PREC_INF).pow(-e);
    FElem acc = one(spec_), base = *this;
    unsigned long k = static_cast<unsigned long>(e);
    while (k) {
        if (k & 1) acc = acc * base;
        if (k >>= 1) base = base * base;
    }
    return acc;
}

FElem FElem::shift(int k) const {
    FElem r;
    r.spec_ = spec_;
    for (const auto& [e, c] : co_) r.co_[e + k] = c;
    r.tprec_ = sat_add(tprec_, k);
    return r;
}

FElem FElem::truncate(int n) const {
    FElem r = *this;
    r.tprec_ = std::min(tprec_, n);
    r.normalize();
    return r;
}

FElem FElem::reduce_mod_t(int c) const {
    if (tprec_ < c)
        throw insufficient_precision("reduce_mod_t beyond known digits", c);
    FElem r;
    r.spec_ = spec_;
    for (const auto& [e, cc] : co_)
        if (e < c) r.co_[e] = cc;
    return r;  // exact
}

bool FElem::operator==(const FElem& o) const {
    return spec_ == o.spec_ && co_ == o.co_ && tprec_ == o.tprec_;
}

int FElem::cmp(const FElem& o) const {
    auto a = co_.begin(), b = o.co_.begin();
    while (a != co_.end() && b != o.co_.end()) {
        if (a->first != b->first) return a->first < b->first ? -1 : 1;
        int c = a->second.cmp(b->second);
        if (c != 0) return c;
        ++a;
        ++b;
    }
    if (a != co_.end()) return 1;
    if (b != o.co_.end()) return -1;
    return tprec_ < o.tprec_ ? -1 : tprec_ > o.tprec_ ? 1 : 0;
}

std::string FElem::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : co_) {
        std::string cs = c.str();
        if (!first) {
            if (!cs.empty() && cs[0] == '-') {
                os << " - ";
                cs = cs.substr(1);
            } else {
                os << " + ";
            }
        }
        bool composite = cs.find_first_of("+*O") != std::string::npos ||
                         (spec_.kind == MidKind::laurent && cs.find('u') != std::string::npos);
        first = false;
        if (e == 0) {
            os << (composite ? "(" + cs + ")" : cs);
            continue;
        }
        bool is_one = cs == "1";
        if (!is_one) os << (composite ? "(" + cs + ")" : cs) << "*";
        os << "t";
        if (e != 1) os << "^" << e;
    }
    if (tprec_ != PREC_INF) {
        if (!first) os << " + ";
        os << "O(t^" << tprec_ << ")";
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

uint64_t FElem::grid_size(const FieldTowerSpec& s, int t_depth, int u_depth) {
    uint64_t per = KElem::grid_size(s, u_depth);
    uint64_t n = 1;
    for (int i = 0; i < t_depth; ++i) {
        if (per != 0 && n > UINT64_MAX / per) return UINT64_MAX;
        n *= per;
    }
    return n;
}

FElem FElem::grid_element(const FieldTowerSpec& s, int t_depth, int u_depth,
                          uint64_t index, int t_start) {
    uint64_t per = KElem::grid_size(s, u_depth);
    std::map<int, KElem> co;
    for (int j = 0; j < t_depth; ++j) {
        KElem d = KElem::grid_element(s, u_depth, index % per);
        index /= per;
        if (!d.provably_zero()) co[j + t_start] = d;
    }
    return make(s, std::move(co));
}

std::vector<FElem> FElem::grid(const FieldTowerSpec& s, int t_depth, int u_depth,
                               uint64_t cap, int t_start) {
    uint64_t n = grid_size(s, t_depth, u_depth);
    if (n > cap)
        throw grid_too_large("F grid of size " + std::to_string(n) +
                             " exceeds cap " + std::to_string(cap));
    std::vector<FElem> r;
    r.reserve(n);
    for (uint64_t i = 0; i < n; ++i)
        r.push_back(grid_element(s, t_depth, u_depth, i, t_start));
    return r;
}

std::vector<FElem> digit_grid(const FieldTowerSpec& s, int t_depth, int u_depth,
                              uint64_t cap) {
    if (t_depth < 1 || u_depth < 1) throw error("grid depths must be >= 1");
    return FElem::grid(s, t_depth, u_depth, cap);
}

} // namespace lf2
