// Curve generators: produce curves with a requested torsion shape over K by
// running the shape's parametrization over a height-bounded box and keeping
// the candidates whose torsion, computed honestly, matches.

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "torsionlab/curve.hpp"
#include "torsionlab/errors.hpp"
#include "torsionlab/torsion.hpp"

namespace torsionlab {

namespace {

struct MNLess {
  bool operator()(const std::pair<KElem, KElem>& a, const std::pair<KElem, KElem>& b) const {
    if (int c = cmp(a.first, b.first); c != 0) return c < 0;
    return cmp(a.second, b.second) < 0;
  }
};

// Shared tail of every strategy: deduplicate, drop singular parameters,
// verify the torsion shape and append.
struct Collector {
  TorsionShape want;
  long max_count;
  std::vector<Curve> out;
  std::set<std::pair<KElem, KElem>, MNLess> seen;

  bool full() const { return max_count >= 0 && static_cast<long>(out.size()) >= max_count; }

  void offer(Field f, const KElem& M, const KElem& N) {
    if (full()) return;
    if (!seen.emplace(M, N).second) return;
    try {
      Curve e = new_curve(f, M, N);
      if (torsion_over_k(e) == want) out.push_back(e);
    } catch (const singular_curve_error&) {
    }
  }
};

}  // namespace

std::vector<Curve> gen_curves(TorsionShape shape, Field f, long h, long max_count) {
  if (h < 1) throw precondition_error("gen_curves: height bound must be >= 1");
  Collector c{shape, max_count, {}, {}};
  Int H(h);

  if (shape == TorsionShape(2, 2)) {
    // rejection sampling over the raw parameter box
    auto box = enumerate_k(f, H);
    for (const auto& m : box)
      for (const auto& n : box) {
        if (c.full()) break;
        c.offer(f, m, n);
      }
  } else if (shape == TorsionShape(2, 4)) {
    // (0, 0) halves on E(s^2, t^2)
    auto box = enumerate_k(f, H);
    for (const auto& s : box)
      for (const auto& t : box) {
        if (c.full()) break;
        c.offer(f, s * s, t * t);
      }
  } else if (shape == TorsionShape(4, 4)) {
    // all three 2-torsion points halve on E(u^2, v^2) once u^2 - v^2 is a
    // square; that needs -1 square as well, so only Q(i) yields anything
    auto box = enumerate_k(f, H);
    for (const auto& u : box)
      for (const auto& v : box) {
        if (c.full()) break;
        KElem m = u * u, n = v * v;
        if (!is_square_k(m - n)) continue;
        c.offer(f, m, n);
      }
  } else if (shape == TorsionShape(2, 6)) {
    // the order-3 parametrization E(a^3 (a + 2b), b^3 (b + 2a)), coprime a, b
    auto box = enumerate_ok(f, H);
    for (const auto& a : box)
      for (const auto& b : box) {
        if (c.full()) break;
        if (a.is_zero() || b.is_zero() || !gcd_ok(a, b).is_unit()) continue;
        OKElem a2b = a + b + b, b2a = b + a + a;
        c.offer(f, (a * a * a * a2b).embed(), (b * b * b * b2a).embed());
      }
  } else if (shape == TorsionShape(2, 8)) {
    // (0, 0) acquires order 8 on E(u^4, v^4) for pythagorean (u, v, w)
    auto box = enumerate_ok(f, H);
    for (const auto& s : box)
      for (const auto& t : box) {
        if (c.full()) break;
        OKElem u = s * s - t * t;
        OKElem v = (s * t) + (s * t);
        if (u.is_zero() || v.is_zero() || (s * s + t * t).is_zero()) continue;
        OKElem g = gcd_ok(u, v);
        if (!g.is_unit()) {
          u = *exact_div(u, g);
          v = *exact_div(v, g);
        }
        OKElem u2 = u * u, v2 = v * v;
        c.offer(f, (u2 * u2).embed(), (v2 * v2).embed());
      }
  } else {
    throw precondition_error("gen_curves: no strategy for shape " + to_string(shape));
  }

  if (c.out.empty())
    throw empty_generation_error("gen_curves: no " + to_string(shape) +
                                 " curve from parameters of height <= " + std::to_string(h));
  return c.out;
}

}  // namespace torsionlab
