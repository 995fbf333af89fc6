#pragma once
// Dense univariate polynomials over K = Q(sqrt(D)) and exact extraction of
// their K-rational roots. Root finding works through O_K: clear
// denominators, then every root u*b/g has numerator part b dividing the
// constant term and denominator part g dividing the leading coefficient
// (u a unit). A Fujiwara-style norm bound prunes the divisor enumeration.

#include <vector>

#include "torsionlab/numfield.hpp"

namespace torsionlab {

// Coefficient c[i] multiplies x^i; trailing zeros are trimmed on
// construction, so c.empty() means the zero polynomial.
struct KPoly {
  Field f;
  std::vector<KElem> c;

  explicit KPoly(Field field) : f(field) {}
  KPoly(Field field, std::vector<KElem> coeffs);

  int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c.empty(); }
  const KElem& lead() const;  // throws zero_input_error on the zero polynomial
  KElem coeff(int i) const;   // zero beyond the stored range
  KElem eval(const KElem& x) const;

  KPoly operator-() const;
  friend KPoly operator+(const KPoly& p, const KPoly& q);
  friend KPoly operator-(const KPoly& p, const KPoly& q);
  friend KPoly operator*(const KPoly& p, const KPoly& q);
  friend KPoly operator*(const KElem& s, const KPoly& p);
  friend bool operator==(const KPoly& p, const KPoly& q);
  friend bool operator!=(const KPoly& p, const KPoly& q) { return !(p == q); }
};

KPoly kpoly_x(Field f);
KPoly kpoly_const(Field f, const KElem& v);
// p(x + t)
KPoly shifted(const KPoly& p, const KElem& t);

// All distinct K-rational roots of p, sorted by cmp(); p must be nonzero.
// num_hint, when given, is a factorization of some nonzero multiple of the
// constant term (after powers of x are stripped); it spares the search a
// factor_ok() call on a value the caller already knows the shape of.
// Superfluous hint divisors only cost discarded candidates, never roots.
std::vector<KElem> k_roots(const KPoly& p, const Factorization* num_hint = nullptr);

}  // namespace torsionlab
