#pragma once
// Exact arithmetic over the five norm-Euclidean imaginary quadratic fields
// K = Q(sqrt(D)), D in {-1,-2,-3,-7,-11}: field and ring elements, units,
// gcd and prime factorization in O_K, square classes K*/(K*)^2, and square
// roots both in K and in quadratic extensions L = K(sqrt(d)).
//
// Everything is exact (GMP integers/rationals); no floating point anywhere.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "torsionlab/errors.hpp"

namespace torsionlab {

using Int = mpz_class;
using Rational = mpq_class;

// ---------------------------------------------------------------------------
// plain integer / rational helpers

bool int_is_square(const Int& n);
Int int_sqrt_floor(const Int& n);  // n >= 0
// Exact nonnegative square root of q, or nullopt if q is not a rational square.
std::optional<Rational> rational_sqrt(const Rational& q);
Int round_nearest(const Rational& q);  // floor(q + 1/2)
// mpq_class(a, b) does not reduce; this does.
Rational make_rational(const Int& num, const Int& den);

bool is_prime_int(const Int& n);
// n >= 1; pairs (p, e) sorted by p. Deterministic (fixed MR bases below
// 3.3e24, Brent-Pollard rho with a fixed parameter schedule above).
std::vector<std::pair<Int, int>> factor_int(const Int& n);

std::string to_string(const Rational& q);
Rational parse_rational(std::string_view text);

// ---------------------------------------------------------------------------
// the field

struct OKElem;
struct KElem;

class Field {
 public:
  Field() : d_(-1) {}
  explicit Field(int d);

  int D() const { return d_; }
  // -3, -7, -11 have D = 1 mod 4 and ring generator w = (1+sqrt(D))/2;
  // -1, -2 have w = sqrt(D).
  bool one_mod_four() const { return (d_ % 4 + 4) % 4 == 1; }
  Int discriminant() const { return one_mod_four() ? Int(d_) : Int(4 * d_); }
  // For D = 1 mod 4, w^2 = w - m with m = (1-D)/4.
  Int omega_m() const { return Int((1 - d_) / 4); }

  std::size_t unit_count() const;          // 4 (D=-1), 6 (D=-3), else 2
  const std::vector<OKElem>& units() const;
  // A unit representing the nonidentity unit square class: i for D=-1,
  // -1 for the rest.
  OKElem nonsquare_unit() const;

  KElem omega() const;   // ring generator as a field element
  KElem sqrt_d() const;  // sqrt(D) itself

  friend bool operator==(Field a, Field b) { return a.d_ == b.d_; }
  friend bool operator!=(Field a, Field b) { return a.d_ != b.d_; }

 private:
  int d_;
};

void require_same_field(Field a, Field b, const char* what);

// ---------------------------------------------------------------------------
// field elements: a + b*sqrt(D) with a, b rational

struct KElem {
  Field f;
  Rational a, b;

  KElem() : f(), a(0), b(0) {}
  KElem(Field field, Rational re, Rational rt);
  static KElem integer(Field field, long v) { return KElem(field, Rational(v), Rational(0)); }

  bool is_zero() const { return sgn(a) == 0 && sgn(b) == 0; }
  bool is_rational() const { return sgn(b) == 0; }
  KElem conj() const { return KElem(f, a, -b); }
  Rational norm() const;   // a^2 - D b^2, = |.|^2, >= 0
  Rational trace() const { return 2 * a; }
  KElem inverse() const;   // throws division_by_zero_error on 0

  KElem operator-() const { return KElem(f, -a, -b); }
  friend KElem operator+(const KElem& x, const KElem& y);
  friend KElem operator-(const KElem& x, const KElem& y);
  friend KElem operator*(const KElem& x, const KElem& y);
  friend KElem operator/(const KElem& x, const KElem& y);
  friend KElem operator*(const Rational& c, const KElem& x);
  friend bool operator==(const KElem& x, const KElem& y);
  friend bool operator!=(const KElem& x, const KElem& y) { return !(x == y); }
};

// Deterministic total order (by a, then b); no arithmetic meaning.
int cmp(const KElem& x, const KElem& y);
bool kelem_less(const KElem& x, const KElem& y);
// "Positive" in the normalization sense: b > 0, or b = 0 and a > 0.
bool kelem_pos(const KElem& x);

// ---------------------------------------------------------------------------
// ring integers: x + y*w in the integral basis {1, w}

struct OKElem {
  Field f;
  Int x, y;

  OKElem() : f(), x(0), y(0) {}
  OKElem(Field field, Int xx, Int yy) : f(field), x(std::move(xx)), y(std::move(yy)) {}
  static OKElem integer(Field field, long v) { return OKElem(field, Int(v), Int(0)); }

  bool is_zero() const { return sgn(x) == 0 && sgn(y) == 0; }
  bool is_unit() const { return norm() == 1; }
  Int norm() const;
  OKElem conj() const;
  KElem embed() const;

  OKElem operator-() const { return OKElem(f, -x, -y); }
  friend OKElem operator+(const OKElem& u, const OKElem& v);
  friend OKElem operator-(const OKElem& u, const OKElem& v);
  friend OKElem operator*(const OKElem& u, const OKElem& v);
  friend bool operator==(const OKElem& u, const OKElem& v);
  friend bool operator!=(const OKElem& u, const OKElem& v) { return !(u == v); }
};

int cmp(const OKElem& u, const OKElem& v);  // by (x, y); for deterministic sorts
bool okelem_less(const OKElem& u, const OKElem& v);

// Round a K-element to a nearest ring integer; the difference always has
// norm < 1 (this is what makes the five fields norm-Euclidean).
OKElem nearest_ok(const KElem& z);
std::optional<OKElem> to_ok(const KElem& z);  // exact membership test

// The associate u*z (u a unit) minimizing (y<0, x<0, |y|, |x|) lexicographically.
// Every nonzero z has exactly one; canonical_associate(0) = 0.
OKElem canonical_associate(const OKElem& z);
// Remainder of Euclidean division, |N(a - q b)| < N(b).
OKElem mod_ok(const OKElem& a, const OKElem& b);
// gcd up to the canonical associate; not both zero.
OKElem gcd_ok(const OKElem& a, const OKElem& b);
std::optional<OKElem> exact_div(const OKElem& a, const OKElem& b);

// ---------------------------------------------------------------------------
// factorization in O_K (all five fields have class number 1)

struct PrimePower {
  OKElem p;  // canonical associate
  int e;
};

struct Factorization {
  OKElem unit;                    // so that value = unit * prod p^e
  std::vector<PrimePower> parts;  // sorted by (norm, x, y)
  OKElem value() const;
};

Factorization factor_ok(const OKElem& z);  // z != 0

// ---------------------------------------------------------------------------
// square classes K*/(K*)^2

// Exact square root in K, normalized so kelem_pos(root) holds.
std::optional<KElem> k_sqrt(const KElem& z);
bool is_square_k(const KElem& z);

struct SquareClass {
  Field f;
  OKElem rep;  // squarefree canonical representative; unit part normalized

  KElem elem() const { return rep.embed(); }
  bool is_identity() const;
  friend bool operator==(const SquareClass& s, const SquareClass& t);
  friend bool operator!=(const SquareClass& s, const SquareClass& t) { return !(s == t); }
};

int cmp(const SquareClass& s, const SquareClass& t);  // by (norm, x, y) of rep
bool square_class_less(const SquareClass& s, const SquareClass& t);

SquareClass squarefree_class(const OKElem& z);  // z != 0
SquareClass squarefree_class(const KElem& z);   // z != 0
SquareClass identity_class(Field f);
bool same_class(const KElem& x, const KElem& y);  // both nonzero
SquareClass class_mul(const SquareClass& s, const SquareClass& t);

// ---------------------------------------------------------------------------
// quadratic extensions L = K(sqrt(d)), d a nonsquare class

struct ExtId {
  explicit ExtId(SquareClass cls);  // throws precondition_error on the identity
  const SquareClass& cls() const { return d_; }
  KElem d() const { return d_.elem(); }
  Field base_field() const { return d_.f; }
  friend bool operator==(const ExtId& a, const ExtId& b) { return a.d_ == b.d_; }
  friend bool operator!=(const ExtId& a, const ExtId& b) { return !(a == b); }

 private:
  SquareClass d_;
};

// u + v*sqrt(d) with u, v in K
struct LElem {
  ExtId ext;
  KElem u, v;

  LElem(ExtId e, KElem uu, KElem vv);
  static LElem from_k(const ExtId& e, const KElem& z) { return LElem(e, z, KElem(z.f, 0, 0)); }

  bool is_zero() const { return u.is_zero() && v.is_zero(); }
  bool in_k() const { return v.is_zero(); }
  LElem conj_l() const { return LElem(ext, u, -v); }  // the L/K conjugate
  KElem norm_l() const;                               // u^2 - d v^2, in K
  LElem inverse() const;

  LElem operator-() const { return LElem(ext, -u, -v); }
  friend LElem operator+(const LElem& x, const LElem& y);
  friend LElem operator-(const LElem& x, const LElem& y);
  friend LElem operator*(const LElem& x, const LElem& y);
  friend LElem operator/(const LElem& x, const LElem& y);
  friend bool operator==(const LElem& x, const LElem& y);
  friend bool operator!=(const LElem& x, const LElem& y) { return !(x == y); }
};

int cmp(const LElem& x, const LElem& y);  // by (u, v); deterministic sorts only

// Square root in L, normalized (kelem_pos on v, or on u when v = 0).
std::optional<LElem> l_sqrt(const LElem& z);
bool is_square_l(const LElem& z);
// Does z in K* become a square in L = K(sqrt(d))?  (z square, or z*d square)
bool is_square_in_ext(const KElem& z, const ExtId& ext);

// ---------------------------------------------------------------------------
// heights and enumeration

// Exact coordinates of z over the integral basis {1, w}.
std::pair<Rational, Rational> basis_coords(const KElem& z);

// max of |x|, |y| over the integral-basis coordinates.
Int height(const OKElem& z);
// max over both basis coordinates of max(|num|, den) in lowest terms.
Int height(const KElem& z);

// All ring integers of height <= H, ordered by (height, x, y).
std::vector<OKElem> enumerate_ok(Field f, const Int& H);
// All rationals with max(|num|, den) <= H, reduced, ordered by (height, den, num).
std::vector<Rational> enumerate_q(const Int& H);
// All field elements with height <= H (coordinate-wise), deterministic order.
std::vector<KElem> enumerate_k(Field f, const Int& H);

// ---------------------------------------------------------------------------
// text io
//
// Grammar: [term][(+|-)term]... where a term is a rational, a rational
// followed by "*w", bare "w", or (D=-3 only) "lambda"/"L" for -1/2+1/2*w.
// Examples: "81", "-1/2+1/2*w", "3*w", "w", "-w", "2-3*w".

std::string to_string(const KElem& z);
std::string to_string(const OKElem& z);
KElem parse_kelem(Field f, std::string_view text);

}  // namespace torsionlab
