// Bounded-height searches for the Diophantine systems behind the
// classification, and exact point enumeration on the auxiliary curves. Every
// reduction here is lossless: scale factors are dropped because each defining
// condition only depends on square classes, and the order-3=order-3 scan is
// bucketed by the exact ratio M/N because equal cross products force equal
// ratios.

#include <algorithm>
#include <chrono>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "torsionlab/dioph.hpp"
#include "torsionlab/errors.hpp"

namespace torsionlab {

namespace {

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Nonzero ring integers of height <= h, the common search box.
std::vector<OKElem> nonzero_box(Field f, long h) {
  if (h < 1) throw precondition_error("search height bound must be >= 1");
  std::vector<OKElem> out;
  for (const OKElem& z : enumerate_ok(f, Int(h)))
    if (!z.is_zero()) out.push_back(z);
  return out;
}

// One admissible parameter pair for the order-2/order-3 systems: a, b nonzero
// with a/b outside {-2, -1, -1/2, 1} (those ratios make M or N vanish or
// coincide for trivial reasons), together with M = a^3(a+2b), N = b^3(b+2a).
struct ParamPair {
  OKElem a, b, m, n;
};

std::vector<ParamPair> admissible_pairs(Field f, long h) {
  const std::vector<OKElem> box = nonzero_box(f, h);
  std::vector<ParamPair> out;
  for (const OKElem& a : box) {
    const OKElem a2 = a + a;
    for (const OKElem& b : box) {
      if (a == b || a == -b || a == -(b + b) || b == -a2) continue;
      out.push_back({a, b, a * a * a * (a + b + b), b * b * b * (b + a2)});
    }
  }
  return out;
}

bool kelem_pair_less(const std::vector<KElem>& p, const std::vector<KElem>& q) {
  if (int c = cmp(p[0], q[0]); c != 0) return c < 0;
  return cmp(p[1], q[1]) < 0;
}

// The auxiliary curves, in long Weierstrass form y^2 + a1 x y + a3 y =
// x^3 + a2 x^2 + a4 x (all have a6 = 0, which is why x = 0 is always on
// them). Ids are the exact strings the reference tables use.
struct AuxCurve {
  const char* id;
  int a1, a3, a2, a4;
};

constexpr AuxCurve kAuxCurves[] = {
    {"y2=x3-x", 0, 0, 0, -1},
    {"y2=x3+x", 0, 0, 0, 1},
    {"y2=x3+4x", 0, 0, 0, 4},
    {"y2=x3-4x", 0, 0, 0, -4},
    {"y2=x3+5x2+4x", 0, 0, 5, 4},
    {"y2=x3-5x2+4x", 0, 0, -5, 4},
    {"y2+2xy+2y=x3-x2-2x", 2, 2, -1, -2},
};

}  // namespace

SearchResult search_fermat(Field f, long h) {
  const auto t0 = std::chrono::steady_clock::now();
  SearchResult r{"fermat", f, h, {}, 0, 0.0};
  const std::vector<OKElem> box = nonzero_box(f, h);
  std::vector<OKElem> fourth;
  fourth.reserve(box.size());
  for (const OKElem& z : box) {
    const OKElem z2 = z * z;
    fourth.push_back(z2 * z2);
  }
  for (std::size_t i = 0; i < box.size(); ++i) {
    for (std::size_t j = 0; j < box.size(); ++j) {
      ++r.scanned;
      if (fourth[i] == fourth[j]) continue;  // w would be 0
      if (auto w = k_sqrt((fourth[i] - fourth[j]).embed()))
        r.solutions.push_back({box[i].embed(), box[j].embed(), *w});
    }
  }
  r.seconds = elapsed_since(t0);
  return r;
}

SearchResult search_s23(Field f, long h, bool modified) {
  const auto t0 = std::chrono::steady_clock::now();
  SearchResult r{modified ? "s23m" : "s23", f, h, {}, 0, 0.0};
  const KElem one = KElem::integer(f, 1);
  for (const ParamPair& p : admissible_pairs(f, h)) {
    ++r.scanned;
    const KElem m = p.m.embed(), n = p.n.embed();
    if (modified) {
      // -s^2 = M c^2, t^2 = N c^2 with s^2 != t^2: -M and N both squares,
      // -M != N. Witnesses with c = 1.
      if (-p.m == p.n) continue;
      const auto s = k_sqrt(-m);
      if (!s) continue;
      const auto t = k_sqrt(n);
      if (!t) continue;
      r.solutions.push_back({p.a.embed(), p.b.embed(), one, *s, *t});
    } else {
      // d s^2 = M c^2, d t^2 = N c^2 with s^2 != t^2: M and N in the same
      // square class but distinct. Witnesses: c = s = 1, d = M, t^2 = N/M.
      if (p.m == p.n) continue;
      const auto t = k_sqrt(n / m);
      if (!t) continue;
      r.solutions.push_back({p.a.embed(), p.b.embed(), one, m, one, *t});
    }
  }
  r.seconds = elapsed_since(t0);
  return r;
}

SearchResult search_s33(Field f, long h) {
  const auto t0 = std::chrono::steady_clock::now();
  SearchResult r{"s33", f, h, {}, 0, 0.0};
  const std::vector<ParamPair> pairs = admissible_pairs(f, h);
  // d M c^2 = M0 c0^2 and d N c^2 = N0 c0^2 force M/N = M0/N0 (all four are
  // nonzero), so only pairs with equal ratio can match; bucket on it. The
  // certificate still covers every ordered pair of pairs.
  r.scanned = static_cast<long long>(pairs.size()) * static_cast<long long>(pairs.size());
  std::map<KElem, std::vector<std::size_t>, decltype(&kelem_less)> buckets(&kelem_less);
  for (std::size_t i = 0; i < pairs.size(); ++i)
    buckets[pairs[i].m.embed() / pairs[i].n.embed()].push_back(i);
  const KElem one = KElem::integer(f, 1);
  for (const auto& [ratio, idx] : buckets) {
    (void)ratio;
    for (std::size_t i : idx) {
      for (std::size_t j : idx) {
        // (a,b) from pairs[i], (a0,b0) from pairs[j]. With c = 1 and
        // c0 = M the equations pin d = M0 M, so the only condition left is
        // that d is a nonsquare. i = j gives d = M^2 and drops out here.
        if (is_square_k((pairs[j].m * pairs[i].m).embed())) continue;
        r.solutions.push_back({pairs[i].a.embed(), pairs[i].b.embed(), one,
                               pairs[j].a.embed(), pairs[j].b.embed(),
                               pairs[i].m.embed(), (pairs[j].m * pairs[i].m).embed()});
      }
    }
  }
  r.seconds = elapsed_since(t0);
  return r;
}

const std::vector<std::string>& aux_curve_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const AuxCurve& c : kAuxCurves) v.emplace_back(c.id);
    return v;
  }();
  return ids;
}

SearchResult enumerate_aux_points(const std::string& curve_id, Field f, long h) {
  const AuxCurve* curve = nullptr;
  for (const AuxCurve& c : kAuxCurves)
    if (curve_id == c.id) curve = &c;
  if (!curve) {
    std::string known;
    for (const AuxCurve& c : kAuxCurves) known += std::string(known.empty() ? "" : ", ") + c.id;
    throw precondition_error("unknown auxiliary curve '" + curve_id + "' (known: " + known + ")");
  }
  if (h < 1) throw precondition_error("search height bound must be >= 1");

  const auto t0 = std::chrono::steady_clock::now();
  SearchResult r{std::string("aux:") + curve->id, f, h, {}, 0, 0.0};
  const KElem a1 = KElem::integer(f, curve->a1), a3 = KElem::integer(f, curve->a3);
  const KElem a2 = KElem::integer(f, curve->a2), a4 = KElem::integer(f, curve->a4);
  const Rational half(1, 2);
  for (const KElem& x : enumerate_k(f, Int(h))) {
    ++r.scanned;
    // Solve the quadratic in y: y^2 + (a1 x + a3) y - (x^3 + a2 x^2 + a4 x).
    const KElem lin = a1 * x + a3;
    const KElem rhs = ((x + a2) * x + a4) * x;
    const auto root = k_sqrt(lin * lin + Rational(4) * rhs);
    if (!root) continue;
    r.solutions.push_back({x, half * (*root - lin)});
    if (!root->is_zero()) r.solutions.push_back({x, half * (-*root - lin)});
  }
  std::sort(r.solutions.begin(), r.solutions.end(), kelem_pair_less);
  r.seconds = elapsed_since(t0);
  return r;
}

std::string result_to_json(const SearchResult& r, bool include_timing) {
  nlohmann::json j;
  j["system"] = r.system;
  j["field"] = r.field.D();
  j["bound"] = r.bound;
  j["scanned"] = r.scanned;
  auto sols = nlohmann::json::array();
  for (const auto& sol : r.solutions) {
    auto row = nlohmann::json::array();
    for (const KElem& z : sol) row.push_back(to_string(z));
    sols.push_back(row);
  }
  j["solutions"] = sols;
  j["wall_time"] = include_timing ? nlohmann::json(r.seconds) : nlohmann::json(nullptr);
  return j.dump(2);
}

}  // namespace torsionlab
