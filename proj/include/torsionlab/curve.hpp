#pragma once
// The curve family E(M,N): y^2 = x (x + M) (x + N), M, N distinct and
// nonzero, which always carries full 2-torsion {O, (0,0), (-M,0), (-N,0)}.
// This header has the group law (generic over the coefficient type, so the
// same code runs over K and over quadratic extensions L), torsion shape
// bookkeeping, quadratic twists, and the classical existence criteria for
// points of order 4, 8 and 3 with explicit witnesses.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "torsionlab/numfield.hpp"
#include "torsionlab/poly.hpp"

namespace torsionlab {

struct Curve {
  Field f;
  KElem M, N;
};

// Throws singular_curve_error when M N (M - N) = 0.
Curve new_curve(Field f, const KElem& M, const KElem& N);
// The quadratic twist by d: E(dM, dN). d = 0 is rejected.
Curve twist_curve(const Curve& e, const KElem& d);
bool operator==(const Curve& a, const Curve& b);
inline bool operator!=(const Curve& a, const Curve& b) { return !(a == b); }

std::string to_string(const Curve& e);  // "E(M,N)@D"
Curve parse_curve(std::string_view text);

KPoly rhs_poly(const Curve& e);   // x (x + M) (x + N)
KPoly psi3_poly(const Curve& e);  // 3x^4 + 4(M+N)x^3 + 6MN x^2 - (MN)^2
// E(M,N) = E(t^2 M, t^2 N) over K via (x,y) -> (t^2 x, t^3 y); returns the
// integral model and t (the smallest positive integer clearing M and N).
std::pair<Curve, Int> scale_to_integral(const Curve& e);

// ---------------------------------------------------------------------------
// torsion shapes C_m x C_n, m | n

struct TorsionShape {
  long m, n;

  TorsionShape(long mm, long nn);  // requires 1 <= m and m | n
  long order() const { return m * n; }
  friend bool operator==(TorsionShape a, TorsionShape b) { return a.m == b.m && a.n == b.n; }
  friend bool operator!=(TorsionShape a, TorsionShape b) { return !(a == b); }
};

bool shape_less(TorsionShape a, TorsionShape b);
std::string to_string(TorsionShape s);        // "2x8"
TorsionShape parse_shape(std::string_view t);  // "2x8" -> {2,8}

// ---------------------------------------------------------------------------
// points and the group law, generic over the coefficient ring

template <typename E>
struct Pt {
  bool inf;
  E x, y;

  friend bool operator==(const Pt& p, const Pt& q) {
    if (p.inf || q.inf) return p.inf == q.inf;
    return p.x == q.x && p.y == q.y;
  }
  friend bool operator!=(const Pt& p, const Pt& q) { return !(p == q); }
};

template <typename E>
class CurveEq {
 public:
  CurveEq(E m, E n, E one)
      : m_(m), n_(n), zero_(one - one), one_(one), two_(one + one), a2_(m + n), a4_(m * n) {}

  const E& M() const { return m_; }
  const E& N() const { return n_; }

  Pt<E> infinity() const { return Pt<E>{true, zero_, zero_}; }
  Pt<E> at(const E& x, const E& y) const { return Pt<E>{false, x, y}; }

  bool on_curve(const Pt<E>& p) const {
    if (p.inf) return true;
    return p.y * p.y == p.x * (p.x + m_) * (p.x + n_);
  }

  Pt<E> neg(const Pt<E>& p) const {
    if (p.inf) return p;
    return Pt<E>{false, p.x, zero_ - p.y};
  }

  Pt<E> add(const Pt<E>& p, const Pt<E>& q) const {
    if (p.inf) return q;
    if (q.inf) return p;
    E lambda = zero_;
    if (p.x == q.x) {
      if ((p.y + q.y) == zero_) return infinity();
      // tangent slope: (3x^2 + 2 a2 x + a4) / 2y
      E num = (two_ + one_) * p.x * p.x + two_ * a2_ * p.x + a4_;
      lambda = num / (two_ * p.y);
    } else {
      lambda = (q.y - p.y) / (q.x - p.x);
    }
    E x3 = lambda * lambda - a2_ - p.x - q.x;
    E y3 = lambda * (p.x - x3) - p.y;
    return Pt<E>{false, x3, y3};
  }

  Pt<E> dbl(const Pt<E>& p) const { return add(p, p); }

  Pt<E> mul(long k, const Pt<E>& p) const {
    if (k < 0) return mul(-k, neg(p));
    Pt<E> acc = infinity();
    Pt<E> base = p;
    while (k > 0) {
      if (k & 1) acc = add(acc, base);
      k >>= 1;
      if (k > 0) base = dbl(base);
    }
    return acc;
  }

 private:
  E m_, n_, zero_, one_, two_, a2_, a4_;
};

CurveEq<KElem> over_k(const Curve& e);
CurveEq<LElem> over_l(const Curve& e, const ExtId& ext);

// ---------------------------------------------------------------------------
// existence criteria with witnesses
//
// The three 2-torsion translates of the model are indexed as branches:
//   0: pair (M, N)          halving (0,0)
//   1: pair (-M, N-M)       halving (-M,0)
//   2: pair (-N, M-N)       halving (-N,0)

std::pair<KElem, KElem> branch_pair(const Curve& e, int branch);

// Order 4 over K iff some branch pair consists of two squares; s^2 and t^2
// are the pair entries.
struct Order4Witness {
  int branch;
  KElem s, t;
};
std::optional<Order4Witness> ono_order4(const Curve& e);

// Order 8 over K iff some branch pair has the form (d^2 u^4, d^2 v^4) with
// u, v, w in O_K satisfying u^2 + v^2 = w^2.
struct Order8Witness {
  int branch;
  KElem d;
  OKElem u, v, w;
};
std::optional<Order8Witness> ono_order8(const Curve& e);

// Order 3 over K iff (M, N) = (a^3 (a+2b) c^2, b^3 (b+2a) c^2) for some
// a, b in O_K coprime and c in K*, with a/b not in {-2, -1, -1/2, 0, 1}.
struct Order3Param {
  OKElem a, b;
  KElem c;
};
std::optional<Order3Param> order3_param(const Curve& e);

// Coprime triples u^2 + v^2 = w^2 in O_K with u v w != 0, deterministic
// order, for building curves with large 2-power torsion.
struct PythTriple {
  OKElem u, v, w;
};
std::vector<PythTriple> gen_pyth(Field f, int count);

// Circle parametrization of a single triple: (1 - m^2, 2m, 1 + m^2) scaled
// into O_K by the denominator of m. Degenerate m with 1 + m^2 = 0 (m = +-i
// over Q(i)) is rejected with precondition_error.
PythTriple gen_pyth(const KElem& m);

// Curves over f whose torsion over K is exactly `shape` (each candidate is
// verified with the torsion module), built from strategy parameters of
// height <= h, deduplicated, in deterministic order. Stops early after
// max_count curves when max_count >= 0. Throws empty_generation_error when
// the search comes up empty and precondition_error for shapes outside the
// five constructible ones: 2x2, 2x4, 2x6, 2x8, 4x4.
std::vector<Curve> gen_curves(TorsionShape shape, Field f, long h, long max_count = -1);

}  // namespace torsionlab
