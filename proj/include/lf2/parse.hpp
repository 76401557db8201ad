// Expression front end for tower elements and polynomials.
//
// Grammar: sums/differences of products of powers of atoms, where an atom
// is a rational literal, `t`, `u`, the F_q generator `g`, the polynomial
// variable `X`, a precision marker `O(t^n)` / `O(u^n)`, or a parenthesized
// expression.  Examples:
//   (3 + 2*u^2 + O(u^5))*t^-1 + 1 + O(t^3)
//   X^3 + X^2 + t^2
// parse(print(x)) = x for canonical printing.

#pragma once

#include <string>

#include "lf2/poly.hpp"
#include "lf2/tower.hpp"

namespace lf2 {

FPoly parse_fpoly(const FieldTowerSpec& s, const std::string& text);
FElem parse_felem(const FieldTowerSpec& s, const std::string& text);
KElem parse_kelem(const FieldTowerSpec& s, const std::string& text);
KPoly parse_kpoly(const FieldTowerSpec& s, const std::string& text);

} // namespace lf2
