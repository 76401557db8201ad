#include "lf2/parse.hpp"

#include <cctype>

namespace lf2 {

namespace {

struct Parser {
    const FieldTowerSpec& spec;
    const std::string& s;
    size_t pos = 0;

    Parser(const FieldTowerSpec& sp, const std::string& text) : spec(sp), s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }
    bool accept(char c) {
        if (peek(c)) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c))
            throw parse_error(std::string("expected '") + c + "'", pos);
    }

    long integer() {
        skip_ws();
        size_t start = pos;
        bool neg = false;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
            neg = s[pos] == '-';
            ++pos;
        }
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
            throw parse_error("expected integer", start);
        long v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            v = v * 10 + (s[pos] - '0');
            ++pos;
        }
        return neg ? -v : v;
    }

    FPoly expr() {
        skip_ws();
        bool neg = false;
        if (accept('-'))
            neg = true;
        else
            accept('+');
        FPoly acc = term();
        if (neg) acc = -acc;
        for (;;) {
            skip_ws();
            if (accept('+')) {
                acc = acc + term();
            } else if (accept('-')) {
                acc = acc - term();
            } else {
                return acc;
            }
        }
    }

    FPoly term() {
        FPoly acc = factor();
        for (;;) {
            skip_ws();
            if (accept('*')) {
                acc = acc * factor();
            } else if (accept('/')) {
                FPoly d = factor();
                acc = acc * invert_scalar(d);
            } else {
                return acc;
            }
        }
    }

    FPoly invert_scalar(const FPoly& d) {
        if (d.degree() > 0) throw parse_error("division by a polynomial", pos);
        FElem v = d.coeff(0);
        return FPoly::constant(v.inv(PREC_INF));
    }

    FPoly factor() {
        FPoly base = atom();
        skip_ws();
        if (accept('^')) {
            long e = integer();
            if (e >= 0) return base.pow(e);
            if (base.degree() > 0)
                throw parse_error("negative power of a polynomial", pos);
            return FPoly::constant(base.coeff(0).inv(PREC_INF).pow(-e));
        }
        return base;
    }

    FPoly atom() {
        skip_ws();
        if (pos >= s.size()) throw parse_error("unexpected end of input", pos);
        char c = s[pos];
        if (c == '(') {
            ++pos;
            FPoly inner = expr();
            expect(')');
            return inner;
        }
        if (c == 'O') {
            ++pos;
            expect('(');
            skip_ws();
            if (pos >= s.size()) throw parse_error("expected t or u", pos);
            char var = s[pos];
            if (var != 't' && var != 'u')
                throw parse_error("expected O(t^n) or O(u^n)", pos);
            ++pos;
            long n = 0;
            if (accept('^'))
                n = integer();
            else
                n = 1;
            expect(')');
            if (var == 't')
                return FPoly::constant(FElem::zero(spec).truncate(static_cast<int>(n)));
            if (spec.kind != MidKind::laurent)
                throw parse_error("O(u^n) needs K = F_q((u))", pos);
            KElem z = KElem::laurent(spec, {}, static_cast<int>(n));
            return FPoly::constant(FElem::from_k(z));
        }
        if (c == 't') {
            ++pos;
            return FPoly::constant(FElem::t(spec));
        }
        if (c == 'u') {
            if (spec.kind != MidKind::laurent)
                throw parse_error("u needs K = F_q((u))", pos);
            ++pos;
            return FPoly::constant(FElem::from_k(KElem::uniformizer(spec)));
        }
        if (c == 'g') {
            if (spec.kind != MidKind::laurent || spec.f < 2)
                throw parse_error("g needs a non-prime residue field", pos);
            ++pos;
            return FPoly::constant(
                FElem::from_k(KElem::from_fq(spec, Fq::from_coeffs(spec.p, spec.f, {0, 1}))));
        }
        if (c == 'X') {
            ++pos;
            return FPoly::variable(spec);
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+') {
            long n = integer();
            return FPoly::constant(FElem::from_int(spec, n));
        }
        throw parse_error(std::string("unexpected character '") + c + "'", pos);
    }

    FPoly run() {
        FPoly r = expr();
        skip_ws();
        if (pos != s.size()) throw parse_error("trailing input", pos);
        return r;
    }
};

} // namespace

FPoly parse_fpoly(const FieldTowerSpec& s, const std::string& text) {
    return Parser(s, text).run();
}

FElem parse_felem(const FieldTowerSpec& s, const std::string& text) {
    FPoly p = parse_fpoly(s, text);
    if (p.degree() > 0) throw parse_error("expected an element, got a polynomial", 0);
    return p.coeff(0);
}

KElem parse_kelem(const FieldTowerSpec& s, const std::string& text) {
    FElem x = parse_felem(s, text);
    if (x.precision() != PREC_INF)
        throw parse_error("t-precision marker in a K-level element", 0);
    for (const auto& [e, c] : x.coeffs())
        if (e != 0) throw parse_error("t appears in a K-level element", 0);
    return x.coeffs().empty() ? KElem::zero(s) : x.coeffs().begin()->second;
}

KPoly parse_kpoly(const FieldTowerSpec& s, const std::string& text) {
    FPoly p = parse_fpoly(s, text);
    std::vector<KElem> cs;
    for (int i = 0; i <= p.degree(); ++i) {
        FElem c = p.coeff(i);
        if (c.precision() != PREC_INF)
            throw parse_error("t-precision marker in a K-level polynomial", 0);
        for (const auto& [e, cc] : c.coeffs())
            if (e != 0) throw parse_error("t appears in a K-level polynomial", 0);
        cs.push_back(c.coeffs().empty() ? KElem::zero(s) : c.coeffs().begin()->second);
    }
    return KPoly(s, std::move(cs));
}

KPoly reduce(const FPoly& q) {
    std::vector<KElem> cs;
    for (int i = 0; i <= q.degree(); ++i) cs.push_back(q.coeff(i).residue());
    return KPoly(q.spec(), std::move(cs));
}

FPoly lift_poly(const KPoly& q) {
    std::vector<FElem> cs;
    for (int i = 0; i <= q.degree(); ++i) cs.push_back(FElem::from_k(q.coeff(i)));
    return FPoly(q.spec(), std::move(cs));
}

bool is_purely_inseparable(const KPoly& psi) {
    if (psi.is_zero()) throw error("is_purely_inseparable of the zero polynomial");
    const FieldTowerSpec& s = psi.spec();
    if (s.kind == MidKind::padic) return false;  // char K = 0
    for (int i = 0; i <= psi.degree(); ++i)
        if (!psi.coeff(i).provably_zero() && i % static_cast<int>(s.p) != 0) return false;
    return true;
}

} // namespace lf2
