#include "torsionlab/numfield.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <tuple>

namespace torsionlab {

// ===========================================================================
// integer / rational helpers

bool int_is_square(const Int& n) {
  if (sgn(n) < 0) return false;
  return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

Int int_sqrt_floor(const Int& n) {
  if (sgn(n) < 0) throw zero_input_error("int_sqrt_floor of a negative number");
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  if (!int_is_square(q.get_num()) || !int_is_square(q.get_den())) return std::nullopt;
  // num/den is already in lowest terms, so the root is too.
  return make_rational(int_sqrt_floor(q.get_num()), int_sqrt_floor(q.get_den()));
}

Int round_nearest(const Rational& q) {
  Rational t = q + Rational(1, 2);
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), t.get_num().get_mpz_t(), t.get_den().get_mpz_t());
  return r;
}

Rational make_rational(const Int& num, const Int& den) {
  if (sgn(den) == 0) throw division_by_zero_error("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// ===========================================================================
// rational primes: deterministic Miller-Rabin + Brent-Pollard rho

namespace {

bool mr_composite_witness(const Int& n, const Int& a, const Int& d, unsigned long r) {
  Int x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n - 1) return false;
  for (unsigned long i = 1; i < r; ++i) {
    x = (x * x) % n;
    if (x == n - 1) return false;
  }
  return true;
}

constexpr long kMrBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

bool is_prime_int(const Int& n) {
  if (n < 2) return false;
  for (long p : kMrBases) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  // The 12 fixed bases are a proven deterministic test below 3.3e24
  // (Sorenson-Webster); norms in this library stay far below that.
  static const Int kDeterministicLimit("3317044064679887385961980");
  if (n < kDeterministicLimit) {
    Int d = n - 1;
    unsigned long r = mpz_scan1(d.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), r);
    for (long p : kMrBases)
      if (mr_composite_witness(n, Int(p), d, r)) return false;
    return true;
  }
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

namespace {

// Brent cycle finding with a fixed parameter schedule, so factorizations are
// reproducible run to run.
Int rho_find_factor(const Int& n) {
  for (long c = 1;; ++c) {
    Int y(2), d(1), q(1), x, ys;
    long r = 1;
    const long batch = 128;
    while (d == 1) {
      x = y;
      for (long i = 0; i < r; ++i) y = (y * y + c) % n;
      long k = 0;
      while (k < r && d == 1) {
        ys = y;
        long lim = std::min(batch, r - k);
        for (long i = 0; i < lim; ++i) {
          y = (y * y + c) % n;
          Int diff = x - y;
          mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
          q = q * diff % n;
        }
        mpz_gcd(d.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += lim;
      }
      r *= 2;
    }
    if (d == n) {
      // backtrack one step at a time
      do {
        ys = (ys * ys + c) % n;
        Int diff = x - ys;
        mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
        mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (d == 1);
    }
    if (d != n) return d;
    // cycle degenerated, retry with the next polynomial x^2 + c
  }
}

void factor_rec(Int n, std::map<Int, int>& acc) {
  while (n > 1) {
    if (is_prime_int(n)) {
      acc[n] += 1;
      return;
    }
    Int d = rho_find_factor(n);
    factor_rec(d, acc);
    n /= d;
  }
}

}  // namespace

std::vector<std::pair<Int, int>> factor_int(const Int& n_in) {
  if (n_in < 1) throw zero_input_error("factor_int needs n >= 1");
  Int n = n_in;
  std::map<Int, int> acc;
  for (long p : {2L, 3L, 5L}) {
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      n /= static_cast<unsigned long>(p);
      acc[Int(p)] += 1;
    }
  }
  for (long p = 7; p < 1000000; p += (p % 6 == 1 ? 4 : 2)) {
    if (Int(p) * p > n) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      n /= static_cast<unsigned long>(p);
      acc[Int(p)] += 1;
    }
  }
  if (n > 1) factor_rec(n, acc);
  return {acc.begin(), acc.end()};
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  auto bad = [&] { throw parse_error("bad rational: '" + std::string(text) + "'"); };
  if (s.empty()) bad();
  std::size_t slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    return make_rational(num, den);
  } catch (const std::invalid_argument&) {
    bad();
  } catch (const division_by_zero_error&) {
    bad();
  }
  return Rational(0);  // unreachable
}

// ===========================================================================
// Field

Field::Field(int d) : d_(d) {
  switch (d) {
    case -1:
    case -2:
    case -3:
    case -7:
    case -11:
      break;
    default:
      throw precondition_error("unsupported field Q(sqrt(D)) with D=" + std::to_string(d) +
                               "; D must be one of -1, -2, -3, -7, -11");
  }
}

std::size_t Field::unit_count() const { return d_ == -1 ? 4 : (d_ == -3 ? 6 : 2); }

const std::vector<OKElem>& Field::units() const {
  static const std::map<int, std::vector<OKElem>> table = [] {
    std::map<int, std::vector<OKElem>> t;
    for (int d : {-1, -2, -3, -7, -11}) {
      Field f(d);
      std::vector<OKElem> u;
      u.emplace_back(f, 1, 0);
      if (d == -1) {
        u.emplace_back(f, 0, 1);   // i
        u.emplace_back(f, -1, 0);  // -1
        u.emplace_back(f, 0, -1);  // -i
      } else if (d == -3) {
        // w = (1+sqrt(-3))/2 is a primitive 6th root of unity
        u.emplace_back(f, 0, 1);    // w
        u.emplace_back(f, -1, 1);   // w^2
        u.emplace_back(f, -1, 0);   // -1
        u.emplace_back(f, 0, -1);   // -w
        u.emplace_back(f, 1, -1);   // -w^2
      } else {
        u.emplace_back(f, -1, 0);
      }
      t.emplace(d, std::move(u));
    }
    return t;
  }();
  return table.at(d_);
}

OKElem Field::nonsquare_unit() const {
  // The unit group is cyclic of order 2, 4 or 6; its squares have index 2.
  return d_ == -1 ? OKElem(*this, 0, 1) : OKElem(*this, -1, 0);
}

KElem Field::omega() const {
  if (one_mod_four()) return KElem(*this, Rational(1, 2), Rational(1, 2));
  return KElem(*this, Rational(0), Rational(1));
}

KElem Field::sqrt_d() const { return KElem(*this, Rational(0), Rational(1)); }

void require_same_field(Field a, Field b, const char* what) {
  if (a != b)
    throw field_mismatch_error(std::string(what) + ": mixing D=" + std::to_string(a.D()) +
                               " with D=" + std::to_string(b.D()));
}

// ===========================================================================
// KElem

KElem::KElem(Field field, Rational re, Rational rt)
    : f(field), a(std::move(re)), b(std::move(rt)) {}

Rational KElem::norm() const { return a * a - f.D() * b * b; }

KElem KElem::inverse() const {
  Rational n = norm();
  if (sgn(n) == 0) throw division_by_zero_error("inverse of 0 in K");
  return KElem(f, a / n, -b / n);
}

KElem operator+(const KElem& x, const KElem& y) {
  require_same_field(x.f, y.f, "K addition");
  return KElem(x.f, x.a + y.a, x.b + y.b);
}

KElem operator-(const KElem& x, const KElem& y) {
  require_same_field(x.f, y.f, "K subtraction");
  return KElem(x.f, x.a - y.a, x.b - y.b);
}

KElem operator*(const KElem& x, const KElem& y) {
  require_same_field(x.f, y.f, "K multiplication");
  return KElem(x.f, x.a * y.a + x.f.D() * x.b * y.b, x.a * y.b + x.b * y.a);
}

KElem operator/(const KElem& x, const KElem& y) { return x * y.inverse(); }

KElem operator*(const Rational& c, const KElem& x) { return KElem(x.f, c * x.a, c * x.b); }

bool operator==(const KElem& x, const KElem& y) {
  require_same_field(x.f, y.f, "K comparison");
  return x.a == y.a && x.b == y.b;
}

int cmp(const KElem& x, const KElem& y) {
  require_same_field(x.f, y.f, "K ordering");
  int c = ::cmp(x.a, y.a);
  if (c != 0) return c;
  return ::cmp(x.b, y.b);
}

bool kelem_less(const KElem& x, const KElem& y) { return cmp(x, y) < 0; }

bool kelem_pos(const KElem& x) {
  int sb = sgn(x.b);
  return sb > 0 || (sb == 0 && sgn(x.a) > 0);
}

// ===========================================================================
// OKElem

Int OKElem::norm() const {
  if (f.one_mod_four()) return x * x + x * y + f.omega_m() * y * y;
  return x * x - f.D() * y * y;
}

OKElem OKElem::conj() const {
  // conj(w) = -w for w = sqrt(D); conj(w) = 1 - w for w = (1+sqrt(D))/2
  if (f.one_mod_four()) return OKElem(f, x + y, -y);
  return OKElem(f, x, -y);
}

KElem OKElem::embed() const {
  if (f.one_mod_four())
    return KElem(f, Rational(x) + make_rational(y, 2), make_rational(y, 2));
  return KElem(f, Rational(x), Rational(y));
}

OKElem operator+(const OKElem& u, const OKElem& v) {
  require_same_field(u.f, v.f, "O_K addition");
  return OKElem(u.f, u.x + v.x, u.y + v.y);
}

OKElem operator-(const OKElem& u, const OKElem& v) {
  require_same_field(u.f, v.f, "O_K subtraction");
  return OKElem(u.f, u.x - v.x, u.y - v.y);
}

OKElem operator*(const OKElem& u, const OKElem& v) {
  require_same_field(u.f, v.f, "O_K multiplication");
  if (u.f.one_mod_four()) {
    // (x1 + y1 w)(x2 + y2 w) with w^2 = w - m
    Int yy = u.y * v.y;
    return OKElem(u.f, u.x * v.x - u.f.omega_m() * yy, u.x * v.y + u.y * v.x + yy);
  }
  return OKElem(u.f, u.x * v.x + u.f.D() * u.y * v.y, u.x * v.y + u.y * v.x);
}

bool operator==(const OKElem& u, const OKElem& v) {
  require_same_field(u.f, v.f, "O_K comparison");
  return u.x == v.x && u.y == v.y;
}

int cmp(const OKElem& u, const OKElem& v) {
  require_same_field(u.f, v.f, "O_K ordering");
  int c = ::cmp(u.x, v.x);
  if (c != 0) return c;
  return ::cmp(u.y, v.y);
}

bool okelem_less(const OKElem& u, const OKElem& v) { return cmp(u, v) < 0; }

OKElem nearest_ok(const KElem& z) {
  if (z.f.one_mod_four()) {
    Int y = round_nearest(2 * z.b);
    Int x = round_nearest(z.a - make_rational(y, 2));
    return OKElem(z.f, x, y);
  }
  return OKElem(z.f, round_nearest(z.a), round_nearest(z.b));
}

std::optional<OKElem> to_ok(const KElem& z) {
  if (z.f.one_mod_four()) {
    Rational y2 = 2 * z.b;
    Rational x2 = z.a - z.b;
    if (y2.get_den() != 1 || x2.get_den() != 1) return std::nullopt;
    return OKElem(z.f, x2.get_num(), y2.get_num());
  }
  if (z.a.get_den() != 1 || z.b.get_den() != 1) return std::nullopt;
  return OKElem(z.f, z.a.get_num(), z.b.get_num());
}

OKElem canonical_associate(const OKElem& z) {
  if (z.is_zero()) return z;
  using Key = std::tuple<int, int, Int, Int>;
  std::optional<OKElem> best;
  Key best_key;
  for (const OKElem& u : z.f.units()) {
    OKElem w = u * z;
    Key k(sgn(w.y) < 0 ? 1 : 0, sgn(w.x) < 0 ? 1 : 0, abs(w.y), abs(w.x));
    if (!best || k < best_key) {
      best = w;
      best_key = k;
    }
  }
  return *best;
}

OKElem mod_ok(const OKElem& a, const OKElem& b) {
  if (b.is_zero()) throw division_by_zero_error("O_K division by 0");
  OKElem q = nearest_ok(a.embed() / b.embed());
  return a - q * b;
}

OKElem gcd_ok(const OKElem& a_in, const OKElem& b_in) {
  require_same_field(a_in.f, b_in.f, "gcd");
  if (a_in.is_zero() && b_in.is_zero()) throw zero_input_error("gcd(0, 0)");
  OKElem a = a_in, b = b_in;
  while (!b.is_zero()) {
    OKElem r = mod_ok(a, b);
    a = b;
    b = r;
  }
  return canonical_associate(a);
}

std::optional<OKElem> exact_div(const OKElem& a, const OKElem& b) {
  if (b.is_zero()) throw division_by_zero_error("O_K exact division by 0");
  return to_ok(a.embed() / b.embed());
}

// ===========================================================================
// factorization in O_K

namespace {

OKElem pow_ok(OKElem base, int e) {
  OKElem acc = OKElem::integer(base.f, 1);
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

// Tonelli-Shanks: square root of a mod odd prime p; a must be a QR.
Int sqrt_mod_p(const Int& a_in, const Int& p) {
  Int a = a_in % p;
  if (sgn(a) < 0) a += p;
  if (sgn(a) == 0) return Int(0);
  if (mpz_tstbit(p.get_mpz_t(), 0) && p % 4 == 3) {
    Int r;
    Int e = (p + 1) / 4;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    return r;
  }
  Int q = p - 1;
  unsigned long s = mpz_scan1(q.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(q.get_mpz_t(), q.get_mpz_t(), s);
  Int z(2);
  while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) z += 1;
  Int m(static_cast<unsigned long>(s)), c, t, r;
  mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
  mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
  Int e = (q + 1) / 2;
  mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
  while (t != 1) {
    Int t2 = t;
    long i = 0;
    while (t2 != 1) {
      t2 = t2 * t2 % p;
      ++i;
    }
    Int b = c;
    for (Int j = m - i - 1; j > 0; j -= 1) b = b * b % p;
    m = i;
    c = b * b % p;
    t = t * c % p;
    r = r * b % p;
  }
  return r;
}

enum class SplitKind { Inert, Split, Ramified };

struct PrimeSplit {
  SplitKind kind;
  OKElem pi;  // canonical; equals p itself when inert
};

PrimeSplit decompose_prime(Field f, const Int& p) {
  Int D(f.D());
  if (p == 2) {
    if (!f.one_mod_four()) {
      // D = -1, -2: 2 ramifies. x^2 - D = (x - r)^2 mod 2 with r = D mod 2,
      // so the prime above 2 is (2, w - r). Using w itself would be wrong for
      // D = -1 where w = i is a unit.
      Int r = ((D % 2) + 2) % 2;
      return {SplitKind::Ramified, canonical_associate(gcd_ok(
                  OKElem::integer(f, 2), OKElem(f, -r, 1)))};
    }
    Int m = ((D % 8) + 8) % 8;
    if (m == 1)  // D = 1 mod 8 (only -7 here): 2 splits as (2, w)(2, conj w)
      return {SplitKind::Split,
              canonical_associate(gcd_ok(OKElem::integer(f, 2), OKElem(f, 0, 1)))};
    return {SplitKind::Inert, OKElem::integer(f, 2)};
  }
  if (mpz_divisible_p(D.get_mpz_t(), p.get_mpz_t())) {
    // p | D: ramified, prime above p is (p, sqrt(D))
    OKElem sqrt_d = f.one_mod_four() ? OKElem(f, -1, 2) : OKElem(f, 0, 1);
    return {SplitKind::Ramified,
            canonical_associate(gcd_ok(OKElem(f, p, 0), sqrt_d))};
  }
  int k = mpz_kronecker(D.get_mpz_t(), p.get_mpz_t());
  if (k == -1) return {SplitKind::Inert, OKElem(f, p, 0)};
  // split: find a root of w's minimal polynomial mod p
  Int r = sqrt_mod_p(D, p);
  if (f.one_mod_four()) {
    // w = (1 + sqrt(D))/2, so w = (1 + r) / 2 mod p
    Int inv2;
    Int two(2);
    mpz_invert(inv2.get_mpz_t(), two.get_mpz_t(), p.get_mpz_t());
    r = (1 + r) * inv2 % p;
  }
  OKElem pi = gcd_ok(OKElem(f, p, 0), OKElem(f, -r, 1));
  return {SplitKind::Split, canonical_associate(pi)};
}

thread_local std::map<std::tuple<int, Int, Int>, Factorization> g_factor_cache;

}  // namespace

OKElem Factorization::value() const {
  OKElem acc = unit;
  for (const auto& pp : parts) acc = acc * pow_ok(pp.p, pp.e);
  return acc;
}

Factorization factor_ok(const OKElem& z0) {
  if (z0.is_zero()) throw zero_input_error("factor_ok(0)");
  std::tuple<int, Int, Int> key(z0.f.D(), z0.x, z0.y);
  if (auto it = g_factor_cache.find(key); it != g_factor_cache.end()) return it->second;

  Field f = z0.f;
  OKElem z = z0;
  std::vector<PrimePower> parts;
  for (const auto& [p, e_total] : factor_int(z.norm())) {
    PrimeSplit ps = decompose_prime(f, p);
    switch (ps.kind) {
      case SplitKind::Inert: {
        // norm(p) = p^2, so the exponent in z is e_total / 2
        int e = e_total / 2;
        if (e * 2 != e_total)
          throw error("internal: odd valuation at an inert prime");
        if (e > 0) {
          auto d = exact_div(z, pow_ok(ps.pi, e));
          if (!d) throw error("internal: inert prime did not divide");
          z = *d;
          parts.push_back({ps.pi, e});
        }
        break;
      }
      case SplitKind::Ramified: {
        int e = e_total;
        auto d = exact_div(z, pow_ok(ps.pi, e));
        if (!d) throw error("internal: ramified prime valuation mismatch");
        z = *d;
        parts.push_back({ps.pi, e});
        break;
      }
      case SplitKind::Split: {
        OKElem pibar = canonical_associate(ps.pi.conj());
        int e1 = 0;
        while (auto d = exact_div(z, ps.pi)) {
          z = *d;
          ++e1;
        }
        int e2 = e_total - e1;
        if (e2 < 0) throw error("internal: split valuation overflow");
        if (e2 > 0) {
          auto d = exact_div(z, pow_ok(pibar, e2));
          if (!d) throw error("internal: conjugate prime valuation mismatch");
          z = *d;
        }
        if (e1 > 0) parts.push_back({ps.pi, e1});
        if (e2 > 0) parts.push_back({pibar, e2});
        break;
      }
    }
  }
  if (!z.is_unit()) throw error("internal: factorization leftover is not a unit");
  std::sort(parts.begin(), parts.end(), [](const PrimePower& a, const PrimePower& b) {
    Int na = a.p.norm(), nb = b.p.norm();
    if (na != nb) return na < nb;
    return okelem_less(a.p, b.p);
  });
  Factorization out{z, std::move(parts)};
  if (g_factor_cache.size() > 200000) g_factor_cache.clear();
  g_factor_cache.emplace(key, out);
  return out;
}

// ===========================================================================
// square roots in K

std::optional<KElem> k_sqrt(const KElem& z) {
  Field f = z.f;
  if (z.is_zero()) return KElem(f, Rational(0), Rational(0));
  if (z.is_rational()) {
    if (auto s = rational_sqrt(z.a)) return KElem(f, *s, Rational(0));
    // a = D t^2 means sqrt(a) = t sqrt(D)
    if (auto t = rational_sqrt(z.a / f.D())) return KElem(f, Rational(0), *t);
    return std::nullopt;
  }
  // (p + q sqrt(D))^2 = z forces p^2 to solve T^2 - a T + D (b/2)^2 = 0.
  // The two roots multiply to D(b/2)^2 < 0, so exactly one is positive.
  auto n = rational_sqrt(z.norm());
  if (!n) return std::nullopt;
  Rational zeta = (z.a + *n) / 2;
  if (sgn(zeta) <= 0) return std::nullopt;
  auto p = rational_sqrt(zeta);
  if (!p) return std::nullopt;
  Rational q = z.b / (2 * *p);
  KElem root(f, *p, q);
  if (!(root * root == z)) return std::nullopt;
  if (!kelem_pos(root)) root = -root;
  return root;
}

bool is_square_k(const KElem& z) { return k_sqrt(z).has_value(); }

// ===========================================================================
// square classes

bool SquareClass::is_identity() const { return rep == OKElem::integer(f, 1); }

bool operator==(const SquareClass& s, const SquareClass& t) {
  require_same_field(s.f, t.f, "square class comparison");
  return s.rep == t.rep;
}

int cmp(const SquareClass& s, const SquareClass& t) {
  require_same_field(s.f, t.f, "square class ordering");
  Int ns = s.rep.norm(), nt = t.rep.norm();
  int c = ::cmp(ns, nt);
  if (c != 0) return c;
  return cmp(s.rep, t.rep);
}

bool square_class_less(const SquareClass& s, const SquareClass& t) { return cmp(s, t) < 0; }

SquareClass squarefree_class(const OKElem& z) {
  if (z.is_zero()) throw zero_input_error("square class of 0");
  Factorization fac = factor_ok(z);
  OKElem rep = OKElem::integer(z.f, 1);
  for (const auto& pp : fac.parts)
    if (pp.e % 2 == 1) rep = rep * pp.p;
  if (!is_square_k(fac.unit.embed())) rep = z.f.nonsquare_unit() * rep;
  return SquareClass{z.f, rep};
}

SquareClass squarefree_class(const KElem& z) {
  if (z.is_zero()) throw zero_input_error("square class of 0");
  // Scale by a rational square to land in O_K: z * c^2 = (c z) * c.
  Int c = lcm(z.a.get_den(), z.b.get_den());
  auto w = to_ok(Rational(c) * z);
  if (!w) throw error("internal: denominator clearing failed");
  return squarefree_class(*w * OKElem(z.f, c, 0));
}

SquareClass identity_class(Field f) { return SquareClass{f, OKElem::integer(f, 1)}; }

bool same_class(const KElem& x, const KElem& y) {
  if (x.is_zero() || y.is_zero()) throw zero_input_error("square class of 0");
  return is_square_k(x * y);
}

SquareClass class_mul(const SquareClass& s, const SquareClass& t) {
  require_same_field(s.f, t.f, "square class product");
  return squarefree_class(s.rep * t.rep);
}

// ===========================================================================
// quadratic extensions

ExtId::ExtId(SquareClass cls) : d_(std::move(cls)) {
  if (d_.is_identity())
    throw precondition_error("K(sqrt(d)) needs a nonsquare d; got the identity class");
}

LElem::LElem(ExtId e, KElem uu, KElem vv) : ext(e), u(std::move(uu)), v(std::move(vv)) {
  require_same_field(ext.base_field(), u.f, "L element");
  require_same_field(ext.base_field(), v.f, "L element");
}

namespace {

void require_same_ext(const LElem& x, const LElem& y, const char* what) {
  if (x.ext != y.ext) throw field_mismatch_error(std::string(what) + ": different extensions");
}

}  // namespace

KElem LElem::norm_l() const { return u * u - ext.d() * (v * v); }

LElem LElem::inverse() const {
  KElem n = norm_l();
  if (n.is_zero()) throw division_by_zero_error("inverse of 0 in L");
  KElem ni = n.inverse();
  return LElem(ext, u * ni, -(v * ni));
}

LElem operator+(const LElem& x, const LElem& y) {
  require_same_ext(x, y, "L addition");
  return LElem(x.ext, x.u + y.u, x.v + y.v);
}

LElem operator-(const LElem& x, const LElem& y) {
  require_same_ext(x, y, "L subtraction");
  return LElem(x.ext, x.u - y.u, x.v - y.v);
}

LElem operator*(const LElem& x, const LElem& y) {
  require_same_ext(x, y, "L multiplication");
  return LElem(x.ext, x.u * y.u + x.ext.d() * (x.v * y.v), x.u * y.v + x.v * y.u);
}

LElem operator/(const LElem& x, const LElem& y) {
  require_same_ext(x, y, "L division");
  return x * y.inverse();
}

bool operator==(const LElem& x, const LElem& y) {
  require_same_ext(x, y, "L comparison");
  return x.u == y.u && x.v == y.v;
}

int cmp(const LElem& x, const LElem& y) {
  require_same_ext(x, y, "L ordering");
  int c = cmp(x.u, y.u);
  if (c != 0) return c;
  return cmp(x.v, y.v);
}

std::optional<LElem> l_sqrt(const LElem& z) {
  const ExtId& ext = z.ext;
  Field f = ext.base_field();
  KElem d = ext.d();
  if (z.in_k()) {
    if (auto r = k_sqrt(z.u)) return LElem(ext, *r, KElem(f, 0, 0));
    // u = d t^2 means sqrt(u) = t sqrt(d)
    if (auto t = k_sqrt(z.u / d)) return LElem(ext, KElem(f, 0, 0), *t);
    return std::nullopt;
  }
  // (p + q sqrt(d))^2 = z forces p^2 in { (u +- s)/2 } with s^2 = u^2 - d v^2.
  // The two choices multiply to d (v/2)^2, a nonsquare, so at most one works.
  auto s = k_sqrt(z.norm_l());
  if (!s) return std::nullopt;
  for (int sign : {+1, -1}) {
    KElem zeta = Rational(1, 2) * (sign > 0 ? z.u + *s : z.u - *s);
    if (zeta.is_zero()) continue;
    auto p = k_sqrt(zeta);
    if (!p) continue;
    KElem q = z.v / (Rational(2) * *p);
    LElem root(ext, *p, q);
    if (!(root * root == z)) continue;
    if (!kelem_pos(root.v)) root = -root;
    return root;
  }
  return std::nullopt;
}

bool is_square_l(const LElem& z) { return l_sqrt(z).has_value(); }

bool is_square_in_ext(const KElem& z, const ExtId& ext) {
  require_same_field(z.f, ext.base_field(), "square test in extension");
  if (z.is_zero()) return true;
  return is_square_k(z) || is_square_k(z * ext.d());
}

// ===========================================================================
// heights and enumeration

Int height(const OKElem& z) {
  Int ax = abs(z.x), ay = abs(z.y);
  return ax > ay ? ax : ay;
}

namespace {

Int rational_height(const Rational& q) {
  if (sgn(q) == 0) return Int(0);
  Int n = abs(q.get_num());
  const Int& d = q.get_den();
  return n > d ? n : d;
}

}  // namespace

std::pair<Rational, Rational> basis_coords(const KElem& z) {
  if (!z.f.one_mod_four()) return {z.a, z.b};
  return {z.a - z.b, 2 * z.b};
}

Int height(const KElem& z) {
  if (z.is_zero()) return Int(0);
  auto [X, Y] = basis_coords(z);
  Int hx = rational_height(X), hy = rational_height(Y);
  Int h = hx > hy ? hx : hy;
  return h > 1 ? h : Int(1);
}

std::vector<OKElem> enumerate_ok(Field f, const Int& H) {
  std::vector<OKElem> out;
  out.emplace_back(f, 0, 0);
  for (Int h(1); h <= H; h += 1) {
    for (Int x = -h; x <= h; x += 1) {
      bool edge_x = (abs(x) == h);
      for (Int y = -h; y <= h; y += 1) {
        if (!edge_x && abs(y) != h) continue;
        out.emplace_back(f, x, y);
      }
    }
  }
  return out;
}

std::vector<Rational> enumerate_q(const Int& H) {
  std::vector<Rational> out;
  out.emplace_back(0);
  for (Int h(1); h <= H; h += 1) {
    for (Int den(1); den <= h; den += 1) {
      if (den == h) {
        for (Int num = -h; num <= h; num += 1) {
          if (sgn(num) == 0) continue;  // 0 is its own height-0 shell
          if (gcd(abs(num), den) != 1) continue;
          out.push_back(make_rational(num, den));
        }
      } else {
        for (Int num : {Int(-h), Int(h)}) {
          if (gcd(abs(num), den) != 1) continue;
          out.push_back(make_rational(num, den));
        }
      }
    }
  }
  return out;
}

std::vector<KElem> enumerate_k(Field f, const Int& H) {
  std::vector<Rational> qs = enumerate_q(H);
  KElem w = f.omega();
  std::vector<KElem> out;
  out.reserve(qs.size() * qs.size());
  for (const Rational& X : qs)
    for (const Rational& Y : qs) out.push_back(KElem(f, X, Rational(0)) + Y * w);
  return out;
}

// ===========================================================================
// text io

std::string to_string(const KElem& z) {
  if (sgn(z.b) == 0) return to_string(z.a);
  Rational ab = abs(z.b);
  std::string term = (ab == 1) ? "w" : to_string(ab) + "*w";
  if (sgn(z.a) == 0) return (sgn(z.b) < 0 ? "-" : "") + term;
  return to_string(z.a) + (sgn(z.b) < 0 ? "-" : "+") + term;
}

std::string to_string(const OKElem& z) { return to_string(z.embed()); }

namespace {

// number := digits [ '/' digits ]
Rational scan_number(const std::string& s, std::size_t& pos) {
  std::size_t start = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos == start) throw parse_error("expected a number in '" + s + "'");
  Int num(s.substr(start, pos - start));
  if (pos < s.size() && s[pos] == '/') {
    ++pos;
    std::size_t dstart = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == dstart) throw parse_error("expected a denominator in '" + s + "'");
    Int den(s.substr(dstart, pos - dstart));
    if (sgn(den) == 0) throw parse_error("zero denominator in '" + s + "'");
    return make_rational(num, den);
  }
  return Rational(num);
}

}  // namespace

KElem parse_kelem(Field f, std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw parse_error("empty element");
  KElem acc(f, 0, 0);
  std::size_t pos = 0;
  bool first = true;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = (s[pos] == '-') ? -1 : 1;
      ++pos;
    } else if (!first) {
      throw parse_error("expected '+' or '-' in '" + s + "'");
    }
    first = false;
    if (pos >= s.size()) throw parse_error("dangling sign in '" + s + "'");
    KElem term(f, 0, 0);
    if (s[pos] == 'w') {
      ++pos;
      term = KElem(f, 0, 1);
    } else if (s.compare(pos, 6, "lambda") == 0 || s[pos] == 'L' ||
               s.compare(pos, 2, "\xce\xbb") == 0) {
      // primitive cube root of unity, only a thing in Q(sqrt(-3))
      if (f.D() != -3)
        throw parse_error("'lambda' only makes sense over D=-3");
      pos += (s[pos] == 'l') ? 6 : (s[pos] == 'L' ? 1 : 2);
      term = KElem(f, Rational(-1, 2), Rational(1, 2));
    } else {
      Rational r = scan_number(s, pos);
      if (pos < s.size() && s[pos] == '*') {
        ++pos;
        if (pos >= s.size() || s[pos] != 'w')
          throw parse_error("expected 'w' after '*' in '" + s + "'");
        ++pos;
        term = KElem(f, 0, r);
      } else {
        term = KElem(f, r, 0);
      }
    }
    acc = (sign < 0) ? acc - term : acc + term;
  }
  return acc;
}

}  // namespace torsionlab
