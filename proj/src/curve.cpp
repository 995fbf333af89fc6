#include "torsionlab/curve.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace torsionlab {

Curve new_curve(Field f, const KElem& M, const KElem& N) {
  require_same_field(f, M.f, "curve coefficient M");
  require_same_field(f, N.f, "curve coefficient N");
  if (M.is_zero() || N.is_zero() || M == N)
    throw singular_curve_error("E(" + to_string(M) + "," + to_string(N) +
                               ")@" + std::to_string(f.D()) +
                               " is singular: need M N (M - N) != 0");
  return Curve{f, M, N};
}

Curve twist_curve(const Curve& e, const KElem& d) {
  require_same_field(e.f, d.f, "twist scalar");
  if (d.is_zero()) throw zero_input_error("twist by 0");
  return new_curve(e.f, d * e.M, d * e.N);
}

bool operator==(const Curve& a, const Curve& b) {
  return a.f == b.f && a.M == b.M && a.N == b.N;
}

std::string to_string(const Curve& e) {
  return "E(" + to_string(e.M) + "," + to_string(e.N) + ")@" + std::to_string(e.f.D());
}

Curve parse_curve(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  auto bad = [&](const char* why) {
    throw parse_error(std::string("bad curve '") + std::string(text) + "': " + why);
  };
  if (s.size() < 2 || s[0] != 'E' || s[1] != '(') bad("expected E(M,N)@D");
  std::size_t comma = s.find(',', 2);
  if (comma == std::string::npos) bad("missing ','");
  std::size_t close = s.find(")@", comma + 1);
  if (close == std::string::npos) bad("missing ')@D'");
  int d = 0;
  try {
    std::size_t used = 0;
    d = std::stoi(s.substr(close + 2), &used);
    if (close + 2 + used != s.size()) bad("trailing characters after D");
  } catch (const std::logic_error&) {
    bad("D is not an integer");
  }
  Field f = [&] {
    try {
      return Field(d);
    } catch (const precondition_error& ex) {
      throw parse_error(ex.what());
    }
  }();
  KElem M = parse_kelem(f, s.substr(2, comma - 2));
  KElem N = parse_kelem(f, s.substr(comma + 1, close - comma - 1));
  return new_curve(f, M, N);
}

KPoly rhs_poly(const Curve& e) {
  KElem one = KElem::integer(e.f, 1);
  return KPoly(e.f, {KElem::integer(e.f, 0), e.M * e.N, e.M + e.N, one});
}

KPoly psi3_poly(const Curve& e) {
  KElem mn = e.M * e.N;
  return KPoly(e.f, {-(mn * mn), KElem::integer(e.f, 0), Rational(6) * mn,
                     Rational(4) * (e.M + e.N), KElem::integer(e.f, 3)});
}

std::pair<Curve, Int> scale_to_integral(const Curve& e) {
  Int t(1);
  for (const KElem* z : {&e.M, &e.N}) {
    auto [X, Y] = basis_coords(*z);
    t = lcm(t, lcm(X.get_den(), Y.get_den()));
  }
  Rational t2(t * t);
  return {new_curve(e.f, t2 * e.M, t2 * e.N), t};
}

// ---------------------------------------------------------------------------
// shapes

TorsionShape::TorsionShape(long mm, long nn) : m(mm), n(nn) {
  if (m < 1 || n < 1 || n % m != 0)
    throw precondition_error("torsion shape " + std::to_string(mm) + "x" +
                             std::to_string(nn) + ": need 1 <= m and m | n");
}

bool shape_less(TorsionShape a, TorsionShape b) {
  return a.m != b.m ? a.m < b.m : a.n < b.n;
}

std::string to_string(TorsionShape s) {
  return std::to_string(s.m) + "x" + std::to_string(s.n);
}

TorsionShape parse_shape(std::string_view t) {
  std::string s(t);
  std::size_t x = s.find('x');
  if (x == std::string::npos) throw parse_error("bad shape '" + s + "': expected MxN");
  try {
    std::size_t u1 = 0, u2 = 0;
    long m = std::stol(s.substr(0, x), &u1);
    long n = std::stol(s.substr(x + 1), &u2);
    if (u1 != x || x + 1 + u2 != s.size())
      throw parse_error("bad shape '" + s + "': trailing characters");
    return TorsionShape(m, n);
  } catch (const std::logic_error&) {
    throw parse_error("bad shape '" + s + "': expected MxN with integers");
  }
}

// ---------------------------------------------------------------------------
// group law instances

CurveEq<KElem> over_k(const Curve& e) {
  return CurveEq<KElem>(e.M, e.N, KElem::integer(e.f, 1));
}

CurveEq<LElem> over_l(const Curve& e, const ExtId& ext) {
  require_same_field(e.f, ext.base_field(), "extension of the curve's field");
  return CurveEq<LElem>(LElem::from_k(ext, e.M), LElem::from_k(ext, e.N),
                        LElem::from_k(ext, KElem::integer(e.f, 1)));
}

// ---------------------------------------------------------------------------
// branch translates and the order criteria

std::pair<KElem, KElem> branch_pair(const Curve& e, int branch) {
  switch (branch) {
    case 0:
      return {e.M, e.N};
    case 1:
      return {-e.M, e.N - e.M};
    case 2:
      return {-e.N, e.M - e.N};
    default:
      throw precondition_error("branch index must be 0, 1 or 2");
  }
}

std::optional<Order4Witness> ono_order4(const Curve& e) {
  for (int br = 0; br < 3; ++br) {
    auto [A, B] = branch_pair(e, br);
    auto s = k_sqrt(A);
    if (!s) continue;
    auto t = k_sqrt(B);
    if (!t) continue;
    return Order4Witness{br, *s, *t};
  }
  return std::nullopt;
}

namespace {

// z = num/den with num, den in O_K and gcd(num, den) a unit
std::pair<OKElem, OKElem> as_ok_fraction(const KElem& z) {
  auto [X, Y] = basis_coords(z);
  Int t = lcm(X.get_den(), Y.get_den());
  auto num = to_ok(Rational(t) * z);
  if (!num) throw error("internal: denominator clearing failed");
  OKElem den(z.f, t, Int(0));
  if (!num->is_zero()) {
    OKElem g = gcd_ok(*num, den);
    if (!g.is_unit()) {
      num = *exact_div(*num, g);
      den = *exact_div(den, g);
    }
  }
  return {*num, den};
}

}  // namespace

std::optional<Order8Witness> ono_order8(const Curve& e) {
  for (int br = 0; br < 3; ++br) {
    auto [A, B] = branch_pair(e, br);
    auto s = k_sqrt(A / B);
    if (!s) continue;
    for (const KElem& ss : {*s, -*s}) {
      auto r = k_sqrt(ss);  // A/B = r^4
      if (!r) continue;
      auto [u, v] = as_ok_fraction(*r);
      KElem u4 = (u * u * u * u).embed();
      auto d = k_sqrt(A / u4);
      if (!d) continue;  // unit rescalings of u cannot change this squareness
      OKElem s2 = u * u + v * v;
      auto wroot = k_sqrt(s2.embed());
      if (!wroot) continue;
      auto w = to_ok(*wroot);
      if (!w) throw error("internal: sqrt of an O_K element left O_K");
      return Order8Witness{br, *d, u, v, *w};
    }
  }
  return std::nullopt;
}

std::optional<Order3Param> order3_param(const Curve& e) {
  KElem one = KElem::integer(e.f, 1);
  for (const KElem& x0 : k_roots(psi3_poly(e))) {
    // the point itself must be K-rational, not just its x-coordinate
    if (!is_square_k(x0 * (x0 + e.M) * (x0 + e.N))) continue;
    auto s = k_sqrt((e.M + x0) / x0);  // = (a + b) / b up to sign
    if (!s) continue;
    for (const KElem& t : {*s - one, -*s - one}) {
      if (t.is_zero()) continue;
      auto [a, b] = as_ok_fraction(t);
      // pin the unit ambiguity of (a, b): normalize b to its canonical associate
      OKElem bc = canonical_associate(b);
      for (const auto& lam : e.f.units()) {
        if (lam * b == bc) {
          a = lam * a;
          b = bc;
          break;
        }
      }
      KElem c2 = x0 / (a * a * b * b).embed();
      auto c = k_sqrt(c2);
      if (!c) continue;
      OKElem two_b = b + b, two_a = a + a;
      if ((a * a * a * (a + two_b)).embed() * c2 == e.M &&
          (b * b * b * (b + two_a)).embed() * c2 == e.N)
        return Order3Param{a, b, *c};
    }
  }
  return std::nullopt;
}

std::vector<PythTriple> gen_pyth(Field f, int count) {
  std::vector<PythTriple> out;
  if (count <= 0) return out;
  std::set<std::tuple<Int, Int, Int, Int, Int, Int>> seen;
  for (Int H(1); static_cast<int>(out.size()) < count && H <= 64; H += 1) {
    auto shell = enumerate_ok(f, H);
    for (const auto& s : shell) {
      for (const auto& t : shell) {
        if (height(s) < H && height(t) < H) continue;  // covered at a smaller H
        OKElem u = s * s - t * t;
        OKElem v = (s * t) + (s * t);
        OKElem w = s * s + t * t;
        if (u.is_zero() || v.is_zero() || w.is_zero()) continue;
        OKElem g = gcd_ok(u, v);
        if (!g.is_unit()) {
          u = *exact_div(u, g);
          v = *exact_div(v, g);
          w = *exact_div(w, g);  // g^2 | w^2 forces g | w
        }
        auto key = std::make_tuple(u.x, u.y, v.x, v.y, w.x, w.y);
        if (!seen.insert(key).second) continue;
        out.push_back({u, v, w});
        if (static_cast<int>(out.size()) == count) return out;
      }
    }
  }
  return out;
}

PythTriple gen_pyth(const KElem& m) {
  KElem one = KElem::integer(m.f, 1);
  if ((one + m * m).is_zero())
    throw precondition_error("gen_pyth: 1 + m^2 = 0, the triple degenerates");
  auto [num, den] = as_ok_fraction(m);
  OKElem n2 = num * num, d2 = den * den;
  return {d2 - n2, (num * den) + (num * den), d2 + n2};
}

}  // namespace torsionlab
