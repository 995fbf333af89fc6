#include "torsionlab/poly.hpp"

#include <algorithm>
#include <functional>
#include <utility>

namespace torsionlab {

namespace {

void trim(std::vector<KElem>& c) {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

}  // namespace

KPoly::KPoly(Field field, std::vector<KElem> coeffs) : f(field), c(std::move(coeffs)) {
  for (const auto& z : c) require_same_field(f, z.f, "polynomial coefficient");
  trim(c);
}

const KElem& KPoly::lead() const {
  if (c.empty()) throw zero_input_error("leading coefficient of the zero polynomial");
  return c.back();
}

KElem KPoly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c.size())) return KElem::integer(f, 0);
  return c[i];
}

KElem KPoly::eval(const KElem& x) const {
  require_same_field(f, x.f, "polynomial evaluation");
  KElem acc = KElem::integer(f, 0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

KPoly KPoly::operator-() const {
  KPoly r(f);
  r.c.reserve(c.size());
  for (const auto& z : c) r.c.push_back(-z);
  return r;
}

KPoly operator+(const KPoly& p, const KPoly& q) {
  require_same_field(p.f, q.f, "polynomial sum");
  KPoly r(p.f);
  r.c.resize(std::max(p.c.size(), q.c.size()), KElem::integer(p.f, 0));
  for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = p.coeff(int(i)) + q.coeff(int(i));
  trim(r.c);
  return r;
}

KPoly operator-(const KPoly& p, const KPoly& q) { return p + (-q); }

KPoly operator*(const KPoly& p, const KPoly& q) {
  require_same_field(p.f, q.f, "polynomial product");
  if (p.is_zero() || q.is_zero()) return KPoly(p.f);
  KPoly r(p.f);
  r.c.assign(p.c.size() + q.c.size() - 1, KElem::integer(p.f, 0));
  for (std::size_t i = 0; i < p.c.size(); ++i)
    for (std::size_t j = 0; j < q.c.size(); ++j) r.c[i + j] = r.c[i + j] + p.c[i] * q.c[j];
  trim(r.c);
  return r;
}

KPoly operator*(const KElem& s, const KPoly& p) {
  KPoly r(p.f);
  r.c.reserve(p.c.size());
  for (const auto& z : p.c) r.c.push_back(s * z);
  trim(r.c);
  return r;
}

bool operator==(const KPoly& p, const KPoly& q) { return p.f == q.f && p.c == q.c; }

KPoly kpoly_x(Field f) {
  return KPoly(f, {KElem::integer(f, 0), KElem::integer(f, 1)});
}

KPoly kpoly_const(Field f, const KElem& v) { return KPoly(f, {v}); }

KPoly shifted(const KPoly& p, const KElem& t) {
  require_same_field(p.f, t.f, "polynomial shift");
  KPoly lin(p.f, {t, KElem::integer(p.f, 1)});
  KPoly acc(p.f);
  for (int i = p.degree(); i >= 0; --i) acc = acc * lin + kpoly_const(p.f, p.c[i]);
  return acc;
}

// ===========================================================================
// root extraction

namespace {

// One associate of every divisor of the factored value with norm <= cap.
// Largest prime norms first so the cap cuts whole subtrees.
std::vector<OKElem> bounded_divisors(Field f, const Factorization& fac, const Int& cap) {
  std::vector<PrimePower> pps(fac.parts);
  std::sort(pps.begin(), pps.end(), [](const PrimePower& a, const PrimePower& b) {
    return a.p.norm() > b.p.norm();
  });
  std::vector<OKElem> out;
  std::function<void(std::size_t, const OKElem&)> walk = [&](std::size_t i, const OKElem& acc) {
    if (i == pps.size()) {
      out.push_back(acc);
      return;
    }
    OKElem cur = acc;
    walk(i + 1, cur);
    for (int e = 1; e <= pps[i].e; ++e) {
      cur = cur * pps[i].p;
      if (cur.norm() > cap) break;
      walk(i + 1, cur);
    }
  };
  walk(0, OKElem::integer(f, 1));
  return out;
}

// Candidate roots are screened by evaluating mod a fixed 31-bit prime, with
// O_K reduced to machine words x + y w over Z_q. A root evaluates to 0 mod q,
// so rejection is exact; the rare false accept falls through to the full
// check. This keeps the hot loop free of allocation.
constexpr unsigned long kModQ = 2147483629UL;

struct ModK {
  unsigned long x = 0, y = 0;
};

struct ModRing {
  unsigned long wl, wc;  // w^2 = wl w + wc

  explicit ModRing(Field f) {
    if (f.one_mod_four()) {
      wl = 1;
      wc = (kModQ - red_int(f.omega_m())) % kModQ;
    } else {
      wl = 0;
      wc = kModQ - static_cast<unsigned long>(-f.D());
    }
  }

  static unsigned long red_int(const Int& v) { return mpz_fdiv_ui(v.get_mpz_t(), kModQ); }
  static ModK red(const OKElem& z) { return {red_int(z.x), red_int(z.y)}; }

  ModK mul(ModK a, ModK b) const {
    using U = unsigned __int128;
    auto yy = static_cast<unsigned long>((U(a.y) * b.y) % kModQ);
    auto xx = static_cast<unsigned long>((U(a.x) * b.x) % kModQ);
    auto cross = static_cast<unsigned long>((U(a.x) * b.y + U(a.y) * b.x) % kModQ);
    return {static_cast<unsigned long>((xx + U(wc) * yy) % kModQ),
            static_cast<unsigned long>((cross + U(wl) * yy) % kModQ)};
  }

  static ModK add(ModK a, ModK b) {
    ModK r{a.x + b.x, a.y + b.y};
    if (r.x >= kModQ) r.x -= kModQ;
    if (r.y >= kModQ) r.y -= kModQ;
    return r;
  }
};

}  // namespace

std::vector<KElem> k_roots(const KPoly& p, const Factorization* num_hint) {
  if (p.is_zero()) throw zero_input_error("k_roots of the zero polynomial");
  Field f = p.f;
  std::vector<KElem> roots;

  std::size_t low = 0;
  while (low < p.c.size() && p.c[low].is_zero()) ++low;
  if (low > 0) roots.push_back(KElem::integer(f, 0));
  std::vector<KElem> body(p.c.begin() + low, p.c.end());
  if (body.size() <= 1) return roots;

  // t*p has the same roots and coefficients in O_K
  Int t(1);
  for (const auto& z : body) {
    auto [X, Y] = basis_coords(z);
    t = lcm(t, lcm(X.get_den(), Y.get_den()));
  }
  std::vector<OKElem> C;
  C.reserve(body.size());
  for (const auto& z : body) {
    auto w = to_ok(Rational(t) * z);
    if (!w) throw error("internal: denominator clearing failed in k_roots");
    C.push_back(*w);
  }
  const std::size_t n = C.size() - 1;

  // no hint: lighten the coefficients by stripping the O_K content
  if (num_hint == nullptr) {
    OKElem g = C[0];
    for (std::size_t i = 1; i <= n && !g.is_unit(); ++i)
      if (!C[i].is_zero()) g = gcd_ok(C[i], g);
    if (!g.is_unit())
      for (auto& ci : C) ci = ci.is_zero() ? ci : *exact_div(ci, g);
  }

  // Fujiwara: |z| <= 2 max_k |C[n-k]/C[n]|^{1/k}, hence
  // N(z) <= max_k (4^k N(C[n-k]) / N(C[n]))^{1/k}; floor root plus one as slack.
  const Int nlead = C[n].norm();
  Int cap(1);
  Int fourk(1);
  for (std::size_t k = 1; k <= n; ++k) {
    fourk *= 4;
    if (C[n - k].is_zero()) continue;
    Int v = fourk * C[n - k].norm();
    mpz_cdiv_q(v.get_mpz_t(), v.get_mpz_t(), nlead.get_mpz_t());
    Int r;
    mpz_root(r.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(k));
    r += 1;
    if (r > cap) cap = r;
  }

  Factorization fac0 = num_hint != nullptr ? *num_hint : factor_ok(C[0]);
  // Newton polygon cap: a root z = b/g has v_p(b) <= v_p(g) + max_i
  // ceil((v_p(C[0]) - v_p(C[i])) / i), the steepest polygon slope. Hint
  // exponents (sized for the constant term) are usually far larger.
  for (auto& pp : fac0.parts) {
    std::vector<int> v(n + 1, -1);
    for (std::size_t i = 0; i <= n; ++i) {
      if (C[i].is_zero()) continue;
      int e = 0;
      OKElem cur = C[i];
      while (true) {
        auto q = exact_div(cur, pp.p);
        if (!q) break;
        cur = *q;
        ++e;
      }
      v[i] = e;
    }
    int slope = 0;
    for (std::size_t i = 1; i <= n; ++i) {
      if (v[i] < 0 || v[i] >= v[0]) continue;
      int s = (v[0] - v[i] + static_cast<int>(i) - 1) / static_cast<int>(i);
      if (s > slope) slope = s;
    }
    pp.e = std::min(pp.e, slope + (v[n] > 0 ? v[n] : 0));
  }
  fac0.parts.erase(std::remove_if(fac0.parts.begin(), fac0.parts.end(),
                                  [](const PrimePower& pp) { return pp.e == 0; }),
                   fac0.parts.end());

  const std::vector<OKElem> denoms = bounded_divisors(f, factor_ok(C[n]), nlead);
  // numerator candidates ascending by norm, so each g scans a prefix
  std::vector<std::pair<Int, OKElem>> numers;
  for (const OKElem& b : bounded_divisors(f, fac0, cap * nlead))
    numers.emplace_back(b.norm(), b);
  std::stable_sort(numers.begin(), numers.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  // For z = b/g in lowest terms, g^n p(z) = g^n p(m) mod (b - m g), and
  // b - m g is coprime to g; so a root must have (b - m g) | p(m). Testing
  // m = 1 and m = -1 discards nearly every candidate without a full Horner.
  OKElem p_at_1 = OKElem::integer(f, 0), p_at_m1 = OKElem::integer(f, 0);
  for (std::size_t i = 0; i < C.size(); ++i) {
    p_at_1 = p_at_1 + C[i];
    p_at_m1 = (i % 2 == 0) ? p_at_m1 + C[i] : p_at_m1 - C[i];
  }
  const OKElem one = OKElem::integer(f, 1);

  const ModRing mod(f);
  std::vector<ModK> Cm;
  Cm.reserve(C.size());
  for (const auto& ci : C) Cm.push_back(ModRing::red(ci));
  const auto& units = f.units();
  std::vector<ModK> um;
  um.reserve(units.size());
  for (const auto& u : units) um.push_back(ModRing::red(u));

  for (const OKElem& g : denoms) {
    const bool g_unit = g.is_unit();  // only the divisor 1 in this enumeration
    const Int nbcap = cap * g.norm();
    std::vector<OKElem> gpow(n + 1, one);
    for (std::size_t i = 1; i <= n; ++i) gpow[i] = gpow[i - 1] * g;
    std::vector<ModK> gm(n + 1);
    for (std::size_t i = 0; i <= n; ++i) gm[i] = ModRing::red(gpow[i]);
    for (const auto& [bnorm, b] : numers) {
      if (bnorm > nbcap) break;
      const ModK bm = ModRing::red(b);
      for (std::size_t ui = 0; ui < units.size(); ++ui) {
        const ModK zm = mod.mul(um[ui], bm);
        ModK am = Cm[n];
        for (int i = static_cast<int>(n) - 1; i >= 0; --i)
          am = ModRing::add(mod.mul(am, zm), mod.mul(Cm[i], gm[n - i]));
        if (am.x != 0 || am.y != 0) continue;
        // non-lowest-terms survivors re-derive a root already found at a
        // smaller denominator; the final dedup removes them
        if (!g_unit && !gcd_ok(b, g).is_unit()) break;
        OKElem ub = units[ui] * b;
        OKElem s = ub - g;
        if (!p_at_1.is_zero() && !s.is_zero() && !exact_div(p_at_1, s).has_value()) continue;
        OKElem s2 = ub + g;
        if (!p_at_m1.is_zero() && !s2.is_zero() && !exact_div(p_at_m1, s2).has_value()) continue;
        OKElem acc = C[n];
        for (int i = static_cast<int>(n) - 1; i >= 0; --i)
          acc = acc * ub + C[i] * gpow[n - i];
        if (acc.is_zero()) roots.push_back(ub.embed() / g.embed());
      }
    }
  }

  std::sort(roots.begin(), roots.end(), kelem_less);
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

}  // namespace torsionlab
