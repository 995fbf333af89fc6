// Halving chains for the 2-part, division polynomials for the odd part, and
// the assembly of torsion shapes over K and over quadratic extensions.

#include "torsionlab/torsion.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

namespace torsionlab {

long chain_cap() {
  const char* s = std::getenv("TORSIONLAB_MAX_CHAIN");
  if (s == nullptr || *s == '\0') return 32;
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (end == s || *end != '\0' || v < 4)
    throw parse_error(std::string("TORSIONLAB_MAX_CHAIN must be an integer >= 4, got \"") + s +
                      "\"");
  return v;
}

KPoly psi_n(const Curve& e, int n) {
  if (n < 1 || n > 10)
    throw precondition_error("psi_n: n must lie in 1..10, got " + std::to_string(n));
  Field f = e.f;
  if (n == 1) return kpoly_const(f, KElem::integer(f, 1));
  if (n == 2) return rhs_poly(e);

  // Work on the depressed model: X = x + (M+N)/3 turns the curve into
  // y^2 = X^3 + pX + q, where the classical recurrences are shortest.
  KElem a2 = e.M + e.N;
  KElem a4 = e.M * e.N;
  auto ki = [&f](long v) { return KElem::integer(f, v); };
  KElem p = a4 - a2 * a2 / ki(3);
  KElem q = a2 * (ki(2) * a2 * a2 - ki(9) * a4) / ki(27);

  // arr[k] is psi_k for odd k and psi_k / 2y for even k, both in X.
  std::vector<KPoly> arr;
  arr.reserve(n + 1);
  arr.push_back(KPoly(f));
  arr.push_back(kpoly_const(f, ki(1)));
  arr.push_back(kpoly_const(f, ki(1)));
  arr.push_back(KPoly(f, {-(p * p), ki(12) * q, ki(6) * p, ki(0), ki(3)}));
  arr.push_back(KPoly(f, {ki(-16) * q * q - ki(2) * p * p * p, ki(-8) * p * q, ki(-10) * p * p,
                          ki(40) * q, ki(10) * p, ki(0), ki(2)}));
  KPoly B2(f, {ki(4) * q, ki(4) * p, ki(0), ki(4)});  // (2y)^2
  B2 = B2 * B2;
  for (int k = 5; k <= n; ++k) {
    int m = k / 2;
    if (k % 2 == 0) {
      arr.push_back(arr[m] *
                    (arr[m + 2] * arr[m - 1] * arr[m - 1] - arr[m - 2] * arr[m + 1] * arr[m + 1]));
    } else if (m % 2 == 0) {
      arr.push_back(B2 * arr[m + 2] * arr[m] * arr[m] * arr[m] -
                    arr[m - 1] * arr[m + 1] * arr[m + 1] * arr[m + 1]);
    } else {
      arr.push_back(arr[m + 2] * arr[m] * arr[m] * arr[m] -
                    B2 * arr[m - 1] * arr[m + 1] * arr[m + 1] * arr[m + 1]);
    }
  }

  KPoly g = shifted(arr[n], a2 / ki(3));
  return (n % 2 == 0) ? rhs_poly(e) * g : g;
}

namespace {

// Deterministic affine point order: by x, then y.
inline constexpr auto pt_less = [](const auto& a, const auto& b) {
  if (int c = cmp(a.x, b.x); c != 0) return c < 0;
  return cmp(a.y, b.y) < 0;
};

// Square roots of x0, x0+M, x0+N, or nullopt when one is a nonsquare. A
// zero quantity (P is 2-torsion) contributes the root 0.
template <typename E, typename SqrtFn>
std::optional<std::array<E, 3>> half_roots(const CurveEq<E>& eq, const Pt<E>& p, SqrtFn sqrt_of) {
  std::array<E, 3> r = {p.x, p.x + eq.M(), p.x + eq.N()};
  for (E& v : r) {
    if (v.is_zero()) continue;
    auto s = sqrt_of(v);
    if (!s) return std::nullopt;
    v = *s;
  }
  return r;
}

// The candidate halves are x0 + s1 s2 + s1 s3 + s2 s3 over the sign choices
// s_i = +-r_i; fixing the first sign covers all four cosets. Every returned
// point is verified by doubling.
template <typename E, typename SqrtFn>
std::vector<Pt<E>> halves_from_roots(const CurveEq<E>& eq, const Pt<E>& p,
                                     const std::array<E, 3>& r, SqrtFn sqrt_of) {
  std::vector<Pt<E>> out;
  for (int s2 : {1, -1}) {
    for (int s3 : {1, -1}) {
      E u = s2 > 0 ? r[1] : -r[1];
      E v = s3 > 0 ? r[2] : -r[2];
      E x = p.x + r[0] * u + r[0] * v + u * v;
      auto y = sqrt_of(x * (x + eq.M()) * (x + eq.N()));
      if (!y) continue;
      for (const E& yy : {*y, -*y}) {
        Pt<E> cand = eq.at(x, yy);
        if (eq.dbl(cand) == p) out.push_back(cand);
      }
    }
  }
  std::sort(out.begin(), out.end(), pt_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Breadth-first halving from the 2-torsion level until nothing lifts.
template <typename E, typename SqrtFn, typename Levels>
void build_chain(const CurveEq<E>& eq, SqrtFn sqrt_of, int D, long& a_out, long& b_out,
                 Levels& levels) {
  long cap = chain_cap();
  levels.clear();
  levels.push_back({eq.infinity()});
  E zero = eq.M() - eq.M();
  std::vector<Pt<E>> two = {eq.at(zero, zero), eq.at(-eq.M(), zero), eq.at(-eq.N(), zero)};
  std::sort(two.begin(), two.end(), pt_less);
  levels.push_back(std::move(two));
  long total = 4, a = 1, b = 1;  // N_1 / N_0 = 4

  while (true) {
    std::vector<Pt<E>> next;
    for (const Pt<E>& p : levels.back()) {
      auto r = half_roots(eq, p, sqrt_of);
      if (!r) continue;
      auto hs = halves_from_roots(eq, p, *r, sqrt_of);
      if (hs.size() != 4)
        throw error("halving fiber of size " + std::to_string(hs.size()) +
                    " (expected 4): internal bug");
      next.insert(next.end(), hs.begin(), hs.end());
    }
    if (next.empty()) break;
    // a rank <= 2 group forces N_k / N_{k-1} in {2, 4}
    if (next.size() != static_cast<size_t>(total) && next.size() != static_cast<size_t>(3 * total))
      throw error("halving level of size " + std::to_string(next.size()) + " above order " +
                  std::to_string(total) + ": internal bug");
    bool quadrupled = next.size() == static_cast<size_t>(3 * total);
    total += static_cast<long>(next.size());
    if (total > cap) {
      std::string msg = "halving chain passed the order cap " + std::to_string(cap) +
                        " at D = " + std::to_string(D);
      if (D == -1 || D == -3) throw cap_exceeded_error(msg + ": internal bug");
      throw cap_exceeded_error(msg + "; raise TORSIONLAB_MAX_CHAIN to explore further");
    }
    b += 1;
    if (quadrupled) a += 1;
    std::sort(next.begin(), next.end(), pt_less);
    levels.push_back(std::move(next));
  }
  a_out = a;
  b_out = b;
}

const auto k_sqrt_fn = [](const KElem& z) { return k_sqrt(z); };
const auto l_sqrt_fn = [](const LElem& z) { return l_sqrt(z); };

template <typename E>
std::vector<E> quantities(const E& x, const E& m, const E& n) {
  std::vector<E> out;
  for (const E& q : {x, x + m, x + n})
    if (!q.is_zero()) out.push_back(q);
  return out;
}

void require_affine_on_curve(bool inf, bool on, const char* who) {
  if (inf) throw precondition_error(std::string(who) + ": P = infinity");
  if (!on) throw precondition_error(std::string(who) + ": P is not on the curve");
}

}  // namespace

std::vector<KElem> lift_quantities(const Curve& e, const Pt<KElem>& p) {
  require_affine_on_curve(p.inf, over_k(e).on_curve(p), "lift_quantities");
  return quantities(p.x, e.M, e.N);
}

std::vector<LElem> lift_quantities(const Curve& e, const ExtId& ext, const Pt<LElem>& p) {
  auto eq = over_l(e, ext);
  require_affine_on_curve(p.inf, eq.on_curve(p), "lift_quantities");
  return quantities(p.x, eq.M(), eq.N());
}

bool lifts_in(const Curve& e, const Pt<KElem>& p) {
  for (const KElem& q : lift_quantities(e, p))
    if (!is_square_k(q)) return false;
  return true;
}

bool lifts_in(const Curve& e, const ExtId& ext, const Pt<LElem>& p) {
  for (const LElem& q : lift_quantities(e, ext, p))
    if (!is_square_l(q)) return false;
  return true;
}

std::vector<Pt<KElem>> halve(const Curve& e, const Pt<KElem>& p) {
  auto eq = over_k(e);
  require_affine_on_curve(p.inf, eq.on_curve(p), "halve");
  auto r = half_roots(eq, p, k_sqrt_fn);
  if (!r) throw no_lift_error("halve: a lift quantity is a nonsquare over K");
  auto out = halves_from_roots(eq, p, *r, k_sqrt_fn);
  if (out.size() != 4)
    throw error("halve: fiber of size " + std::to_string(out.size()) + ": internal bug");
  return out;
}

std::vector<Pt<LElem>> halve(const Curve& e, const ExtId& ext, const Pt<LElem>& p) {
  auto eq = over_l(e, ext);
  require_affine_on_curve(p.inf, eq.on_curve(p), "halve");
  auto r = half_roots(eq, p, l_sqrt_fn);
  if (!r) throw no_lift_error("halve: a lift quantity is a nonsquare over L");
  auto out = halves_from_roots(eq, p, *r, l_sqrt_fn);
  if (out.size() != 4)
    throw error("halve: fiber of size " + std::to_string(out.size()) + ": internal bug");
  return out;
}

TwoChainK two_power_subgroup(const Curve& e) {
  TwoChainK out;
  build_chain(over_k(e), k_sqrt_fn, e.f.D(), out.a, out.b, out.levels);
  return out;
}

TwoChainL two_power_subgroup(const Curve& e, const ExtId& ext) {
  TwoChainL out;
  build_chain(over_l(e, ext), l_sqrt_fn, e.f.D(), out.a, out.b, out.levels);
  return out;
}

namespace {

// Exponents of M'N' times 6: the factorization of (M'N')^6, which is a
// multiple of both constant terms we hand to k_roots (psi_3 has -(M'N')^2,
// psi_5 has (M'N')^6 on the integral model). Saves factoring a number the
// size of (M'N')^6.
Factorization odd_constant_hint(const Curve& ei) {
  auto m = to_ok(ei.M), n = to_ok(ei.N);
  if (!m || !n) throw error("odd_points: rescaled model is not integral: internal bug");
  Factorization fm = factor_ok(*m), fn = factor_ok(*n);
  Factorization out;
  out.unit = OKElem::integer(ei.f, 1);  // unit part is irrelevant to divisor walks
  size_t i = 0, j = 0;
  while (i < fm.parts.size() || j < fn.parts.size()) {
    int which = i == fm.parts.size()   ? 1
                : j == fn.parts.size() ? -1
                                       : cmp(fm.parts[i].p, fn.parts[j].p);
    OKElem p = which <= 0 ? fm.parts[i].p : fn.parts[j].p;
    int e = 0;
    if (which <= 0) e += fm.parts[i++].e;
    if (which >= 0) e += fn.parts[j++].e;
    out.parts.push_back({p, 6 * e});
  }
  return out;
}

}  // namespace

OddPart odd_points(const Curve& e) {
  auto [ei, t] = scale_to_integral(e);
  Factorization hint = odd_constant_hint(ei);
  KElem t2 = KElem(e.f, Rational(t) * Rational(t), Rational(0));

  OddPart out;
  for (int n : {3, 5}) {
    KPoly psi = psi_n(ei, n);
    std::vector<OddPoint>& pts = n == 3 ? out.pts3 : out.pts5;
    for (const KElem& xr : k_roots(psi, &hint)) {
      KElem x = xr / t2;  // back from the integral model
      KElem q = x * (x + e.M) * (x + e.N);
      pts.push_back(OddPoint{x, q, k_sqrt(q)});
    }
    int rational = static_cast<int>(
        std::count_if(pts.begin(), pts.end(), [](const OddPoint& p) { return p.y.has_value(); }));
    if (n == 3) {
      // 0, 2 or 8 rational points of order 3, two per x-coordinate
      if (rational != 0 && rational != 1 && rational != 4)
        throw error("odd_points: " + std::to_string(rational) +
                    " rational 3-division roots: internal bug");
      out.three = rational == 4 ? 2 : rational;
      if (out.three == 2 && e.f.D() != -3)
        throw error("odd_points: full 3-torsion without zeta_3 in K: internal bug");
    } else {
      if (rational != 0 && rational != 2)
        throw error("odd_points: " + std::to_string(rational) +
                    " rational 5-division roots: internal bug");
      out.five = rational / 2;
    }
  }
  return out;
}

namespace {

constexpr std::pair<long, long> kCatalogGaussian[] = {{2, 2}, {2, 4}, {2, 6}, {2, 8}, {4, 4}};
constexpr std::pair<long, long> kCatalogEisenstein[] = {{2, 2}, {2, 4}, {2, 6}, {2, 8}};

TorsionShape assemble_shape(long a, long b, int three, int five) {
  long m = (1L << a) * (three == 2 ? 3 : 1);
  long n = (1L << b) * (three >= 1 ? 3 : 1) * (five >= 1 ? 5 : 1);
  return TorsionShape(m, n);
}

void check_catalog(Field f, TorsionShape s) {
  if (f.D() != -1 && f.D() != -3) return;
  auto hit = [&s](const auto& table) {
    for (auto [m, n] : table)
      if (s.m == m && s.n == n) return true;
    return false;
  };
  if (f.D() == -1 ? hit(kCatalogGaussian) : hit(kCatalogEisenstein)) return;
  throw catalog_violation_error("torsion " + to_string(s) + " over K with D = " +
                                std::to_string(f.D()) + " is outside the proven catalog");
}

}  // namespace

KTorsion torsion_over_k_full(const Curve& e) {
  TwoChainK two = two_power_subgroup(e);
  OddPart odd = odd_points(e);
  TorsionShape s = assemble_shape(two.a, two.b, odd.three, odd.five);
  check_catalog(e.f, s);
  return KTorsion{s, std::move(two), std::move(odd)};
}

TorsionShape torsion_over_k(const Curve& e) { return torsion_over_k_full(e).shape; }

LTorsion torsion_over_ext_full(const Curve& e, const ExtId& ext) {
  if (e.f.D() != ext.base_field().D())
    throw field_mismatch_error("torsion_over_ext: curve and extension base fields differ");
  TwoChainL two = two_power_subgroup(e, ext);
  OddPart base = odd_points(e);
  OddPart twisted = odd_points(twist_curve(e, ext.d()));
  int three = base.three + twisted.three;
  int five = base.five + twisted.five;
  if (three > 2 || five > 1)
    throw error("torsion_over_ext: odd part of rank > 2: internal bug");
  // full 3-torsion over L needs zeta_3 there, i.e. sqrt(-3) in K or d ~ -3
  if (three == 2 && e.f.D() != -3 && !same_class(ext.d(), KElem::integer(e.f, -3)))
    throw error("torsion_over_ext: full 3-torsion without zeta_3 in L: internal bug");
  TorsionShape s = assemble_shape(two.a, two.b, three, five);
  return LTorsion{s, std::move(two), three, five};
}

TorsionShape torsion_over_ext(const Curve& e, const ExtId& ext) {
  return torsion_over_ext_full(e, ext).shape;
}

}  // namespace torsionlab
