#pragma once
// Torsion subgroups of E(M,N) over K and over quadratic extensions L = K(√d).
// The 2-part comes from a halving chain: a point P halves in F exactly when
// x0, x0+M, x0+N are all squares in F, and then its four halves are written
// down explicitly. The odd part comes from K-rational roots of the 3- and
// 5-division polynomials (no larger odd prime occurs for curves with full
// 2-torsion over a quadratic field).

#include <optional>
#include <vector>

#include "torsionlab/curve.hpp"
#include "torsionlab/numfield.hpp"
#include "torsionlab/poly.hpp"

namespace torsionlab {

// Order cap for the halving chain. Default 32; the environment variable
// TORSIONLAB_MAX_CHAIN overrides it (useful when experimenting with fields
// outside D = -1, -3 where no a-priori bound is proven here).
long chain_cap();

// n-th division polynomial as a polynomial in x alone, for 1 <= n <= 10
// (precondition_error outside that range). For odd n this is the classical
// psi_n of degree (n^2-1)/2. For even n, psi_n(x,y) carries a factor y, so
// we return x(x+M)(x+N) * (psi_n / 2y); with that convention the roots of
// the returned polynomial are exactly the x-coordinates of affine points P
// with nP = O, for every n. In particular psi_n(E, 2) = x(x+M)(x+N).
KPoly psi_n(const Curve& e, int n);
inline KPoly psi3(const Curve& e) { return psi_n(e, 3); }

// ---------------------------------------------------------------------------
// the lifting criterion and explicit halving

// The quantities whose squareness decides whether P halves: x0, x0+M, x0+N.
// For a 2-torsion point one of them vanishes; the zero entry is dropped, so
// (0,0) yields (M, N), (-M,0) yields (-M, N-M), (-N,0) yields (-N, M-N).
// P = infinity is rejected (precondition_error).
std::vector<KElem> lift_quantities(const Curve& e, const Pt<KElem>& p);
std::vector<LElem> lift_quantities(const Curve& e, const ExtId& ext, const Pt<LElem>& p);

// True iff every lift quantity is a square in the target field, i.e. iff
// there is a Q over that field with 2Q = P.
bool lifts_in(const Curve& e, const Pt<KElem>& p);
bool lifts_in(const Curve& e, const ExtId& ext, const Pt<LElem>& p);

// All four points Q with 2Q = P over the target field, each verified by
// doubling before it is returned, sorted by coordinates. Throws
// no_lift_error when lifts_in is false (the count is always 0 or 4: full
// 2-torsion is rational in every field we work over).
std::vector<Pt<KElem>> halve(const Curve& e, const Pt<KElem>& p);
std::vector<Pt<LElem>> halve(const Curve& e, const ExtId& ext, const Pt<LElem>& p);

// ---------------------------------------------------------------------------
// the 2-power part via breadth-first halving

// levels[k] holds the points of exact order 2^k (levels[0] = {O}, levels[1]
// = the three 2-torsion points), so the 2-part is C_{2^a} x C_{2^b} where
// the cumulative counts N_k = 1 + sum |levels[<=k]| satisfy N_k/N_{k-1} = 4
// exactly a times and >= 2 exactly b times.
struct TwoChainK {
  long a = 1, b = 1;
  std::vector<std::vector<Pt<KElem>>> levels;
};
struct TwoChainL {
  long a = 1, b = 1;
  std::vector<std::vector<Pt<LElem>>> levels;
};

// Throws cap_exceeded_error if the cumulative order passes chain_cap().
TwoChainK two_power_subgroup(const Curve& e);
TwoChainL two_power_subgroup(const Curve& e, const ExtId& ext);

// ---------------------------------------------------------------------------
// the odd part via division polynomials

// A K-rational root x of psi_3 or psi_5 together with q = x(x+M)(x+N); the
// two points over x are K-rational iff q is a square, and y holds one of
// them when so.
struct OddPoint {
  KElem x, q;
  std::optional<KElem> y;
};

struct OddPart {
  int three = 0;  // exponent of C_3 in E(K)_tor: 0, 1 or 2 (2 needs zeta_3, so D = -3)
  int five = 0;   // exponent of C_5: 0 or 1 (zeta_5 never lies in a quadratic field)
  std::vector<OddPoint> pts3, pts5;
};

OddPart odd_points(const Curve& e);

// ---------------------------------------------------------------------------
// assembled torsion subgroups

struct KTorsion {
  TorsionShape shape;
  TwoChainK two;
  OddPart odd;
};

// For D in {-1, -3} the result is checked against the proven catalog of
// shapes; a miss throws catalog_violation_error and means a bug.
KTorsion torsion_over_k_full(const Curve& e);
TorsionShape torsion_over_k(const Curve& e);

struct LTorsion {
  TorsionShape shape;
  TwoChainL two;
  int three = 0, five = 0;  // odd exponents over L
};

// Torsion over L = K(sqrt(d)). The 2-part is computed directly over L; the
// odd part uses E(L)[odd] = E(K)[odd] + E^d(K)[odd] with the twist by d.
LTorsion torsion_over_ext_full(const Curve& e, const ExtId& ext);
TorsionShape torsion_over_ext(const Curve& e, const ExtId& ext);
inline TorsionShape torsion_over_ext(const Curve& e, const SquareClass& d) {
  return torsion_over_ext(e, ExtId(d));
}

}  // namespace torsionlab
