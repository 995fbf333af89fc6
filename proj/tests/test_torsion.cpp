#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "torsionlab/torsion.hpp"

using namespace torsionlab;

namespace {

const Field f1(-1), f3(-3), f7(-7);

KElem K(Field f, const char* s) { return parse_kelem(f, s); }
Curve C(const char* s) { return parse_curve(s); }

// E(u^4, v^4) over Q(sqrt(-7)) with u = (1-3w)/2, v = -3-w: the curve whose
// 2-part reaches C2 x C16 over K(sqrt(465/2 + 45/2 w)).
Curve stress7() { return C("E(449/2+93/2*w,-248+24*w)@-7"); }
ExtId stress7_ext() { return ExtId(squarefree_class(K(f7, "465/2+45/2*w"))); }

// A deterministic batch of small nonsingular curves over f.
std::vector<Curve> sample_curves(Field f, size_t count) {
  std::vector<Curve> out;
  std::vector<KElem> zs = enumerate_k(f, 2);
  for (const KElem& m : zs) {
    for (const KElem& n : zs) {
      if (m.is_zero() || n.is_zero() || m == n) continue;
      out.push_back(new_curve(f, m, n));
      if (out.size() == count) return out;
    }
  }
  return out;
}

long total_order(const std::vector<std::vector<Pt<KElem>>>& levels) {
  long t = 0;
  for (const auto& lv : levels) t += static_cast<long>(lv.size());
  return t;
}

struct EnvGuard {
  ~EnvGuard() { unsetenv("TORSIONLAB_MAX_CHAIN"); }
};

}  // namespace

TEST_CASE("division polynomial engine") {
  for (const char* s : {"E(64,189)@-1", "E(64,189)@-3", "E(-1,1)@-1", "E(1/2,-3/4)@-1",
                        "E(-1,lambda)@-3", "E(449/2+93/2*w,-248+24*w)@-7"}) {
    Curve e = C(s);
    CHECK(psi_n(e, 2) == rhs_poly(e));
    CHECK(psi_n(e, 3) == psi3_poly(e));
    CHECK(psi3(e) == psi3_poly(e));
    // odd degree (n^2-1)/2; even degree (n^2-4)/2 + 3 from the f(x) factor
    for (int n : {3, 5, 7, 9}) CHECK(psi_n(e, n).degree() == (n * n - 1) / 2);
    for (int n : {4, 6, 8, 10}) CHECK(psi_n(e, n).degree() == (n * n - 4) / 2 + 3);
    // psi_5(0) = (MN)^6: the even term of the recurrence vanishes at a root of f
    KElem mn = e.M * e.N;
    KElem mn2 = mn * mn, mn6 = mn2 * mn2 * mn2;
    CHECK(psi_n(e, 5).eval(KElem::integer(e.f, 0)) == mn6);
  }

  Curve e = C("E(64,189)@-1");
  CHECK(psi3(e) == KPoly(f1, {K(f1, "-146313216"), K(f1, "0"), K(f1, "72576"), K(f1, "1012"),
                              K(f1, "3")}));
  CHECK(psi3(e).eval(K(f1, "36")).is_zero());
  CHECK(psi_n(e, 6).eval(K(f1, "36")).is_zero());   // order 3 divides 6
  CHECK(psi_n(e, 9).eval(K(f1, "36")).is_zero());   // and 9
  CHECK_FALSE(psi_n(e, 5).eval(K(f1, "36")).is_zero());

  // x = i has exact order 4 on E(-1,1) over Q(i)
  Curve c4 = C("E(-1,1)@-1");
  KElem xi = K(f1, "w");
  CHECK(psi_n(c4, 4).eval(xi).is_zero());
  CHECK(psi_n(c4, 8).eval(xi).is_zero());
  CHECK_FALSE(psi_n(c4, 2).eval(xi).is_zero());
  CHECK_FALSE(psi_n(c4, 3).eval(xi).is_zero());

  CHECK_THROWS_AS(psi_n(e, 0), precondition_error);
  CHECK_THROWS_AS(psi_n(e, 11), precondition_error);
  CHECK_THROWS_AS(psi_n(e, -3), precondition_error);
}

TEST_CASE("lift quantities") {
  Curve e = C("E(1,16)@-1");
  auto eq = over_k(e);
  auto q = lift_quantities(e, eq.at(K(f1, "4"), K(f1, "20")));
  REQUIRE(q.size() == 3);
  CHECK(q[0] == K(f1, "4"));
  CHECK(q[1] == K(f1, "5"));
  CHECK(q[2] == K(f1, "20"));

  // 2-torsion drops the zero slot
  auto q0 = lift_quantities(e, eq.at(K(f1, "0"), K(f1, "0")));
  REQUIRE(q0.size() == 2);
  CHECK(q0[0] == K(f1, "1"));
  CHECK(q0[1] == K(f1, "16"));

  Curve big = C("E(81,256)@-1");
  auto q1 = lift_quantities(big, over_k(big).at(K(f1, "-81"), K(f1, "0")));
  REQUIRE(q1.size() == 2);
  CHECK(q1[0] == K(f1, "-81"));
  CHECK(q1[1] == K(f1, "175"));

  CHECK_THROWS_AS(lift_quantities(e, eq.infinity()), precondition_error);
  CHECK_THROWS_AS(lift_quantities(e, eq.at(K(f1, "1"), K(f1, "1"))), precondition_error);
}

TEST_CASE("lifting criterion over K and L") {
  auto origin = [](const Curve& e) { return over_k(e).at(KElem::integer(e.f, 0), KElem::integer(e.f, 0)); };
  CHECK(lifts_in(C("E(81,256)@-1"), origin(C("E(81,256)@-1"))));
  CHECK_FALSE(lifts_in(C("E(-2,1)@-1"), origin(C("E(-2,1)@-1"))));

  // E(-1,-9) over Q(sqrt(-3)): (0,0) lifts only after adjoining sqrt(-1)
  Curve e = C("E(-1,-9)@-3");
  CHECK_FALSE(lifts_in(e, origin(e)));
  ExtId ext(squarefree_class(K(f3, "-1")));
  auto eql = over_l(e, ext);
  auto pl = eql.at(LElem::from_k(ext, K(f3, "0")), LElem::from_k(ext, K(f3, "0")));
  CHECK(lifts_in(e, ext, pl));
}

TEST_CASE("explicit halving") {
  Curve e = C("E(1,16)@-1");
  auto eq = over_k(e);
  auto hs = halve(e, eq.at(K(f1, "0"), K(f1, "0")));
  REQUIRE(hs.size() == 4);
  CHECK(hs[0] == eq.at(K(f1, "-4"), K(f1, "-12")));
  CHECK(hs[1] == eq.at(K(f1, "-4"), K(f1, "12")));
  CHECK(hs[2] == eq.at(K(f1, "4"), K(f1, "-20")));
  CHECK(hs[3] == eq.at(K(f1, "4"), K(f1, "20")));
  for (const auto& p : hs) {
    CHECK(eq.on_curve(p));
    CHECK(eq.dbl(p) == eq.at(K(f1, "0"), K(f1, "0")));
  }

  CHECK_THROWS_AS(halve(C("E(-2,1)@-1"), eq.at(K(f1, "0"), K(f1, "0"))), no_lift_error);

  // over L = Q(sqrt(-3))(sqrt(-1)): (-625, 0) on E(625,576) halves there
  Curve big = C("E(625,576)@-3");
  ExtId ext(squarefree_class(K(f3, "-1")));
  auto eql = over_l(big, ext);
  auto pl = eql.at(LElem::from_k(ext, K(f3, "-625")), LElem::from_k(ext, K(f3, "0")));
  CHECK(lifts_in(big, ext, pl));
  auto hl = halve(big, ext, pl);
  REQUIRE(hl.size() == 4);
  for (const auto& p : hl) {
    CHECK(eql.on_curve(p));
    CHECK(eql.dbl(p) == pl);
  }
  auto pk = over_k(big).at(K(f3, "-625"), K(f3, "0"));
  CHECK_THROWS_AS(halve(big, pk), no_lift_error);
}

TEST_CASE("two-power chains over K") {
  auto chain = two_power_subgroup(C("E(81,256)@-1"));
  CHECK(chain.a == 1);
  CHECK(chain.b == 3);
  REQUIRE(chain.levels.size() == 4);
  CHECK(chain.levels[0].size() == 1);
  CHECK(chain.levels[1].size() == 3);
  CHECK(chain.levels[2].size() == 4);
  CHECK(chain.levels[3].size() == 8);
  CHECK(total_order(chain.levels) == 16);

  auto c44 = two_power_subgroup(C("E(16,25)@-1"));
  CHECK(c44.a == 2);
  CHECK(c44.b == 2);
  CHECK(total_order(c44.levels) == 16);

  // over Q(sqrt(-3)) the square root of -16 is gone, so only (0,0) halves
  auto c24 = two_power_subgroup(C("E(16,25)@-3"));
  CHECK(c24.a == 1);
  CHECK(c24.b == 2);

  auto c22 = two_power_subgroup(C("E(-2,1)@-1"));
  CHECK(c22.a == 1);
  CHECK(c22.b == 1);

  auto c24b = two_power_subgroup(C("E(-1,1)@-1"));
  CHECK(c24b.a == 1);
  CHECK(c24b.b == 2);
  bool has_i = false;
  for (const auto& p : c24b.levels[2]) has_i = has_i || p.x == K(f1, "w");
  CHECK(has_i);
}

TEST_CASE("two-power chains over L") {
  Curve e = C("E(16,25)@-1");
  ExtId ext5(squarefree_class(K(f1, "5")));
  auto chain = two_power_subgroup(e, ext5);
  CHECK(chain.a == 2);
  CHECK(chain.b == 3);
  REQUIRE(chain.levels.size() == 4);
  CHECK(chain.levels[3].size() == 16);

  // chain soundness at every level
  auto eq = over_l(e, ext5);
  for (size_t k = 0; k < chain.levels.size(); ++k) {
    for (const auto& p : chain.levels[k]) {
      CHECK(eq.on_curve(p));
      CHECK(eq.mul(1L << k, p) == eq.infinity());
      if (k > 0) CHECK(eq.mul(1L << (k - 1), p) != eq.infinity());
    }
  }
}

TEST_CASE("chain order cap") {
  EnvGuard guard;
  setenv("TORSIONLAB_MAX_CHAIN", "8", 1);
  CHECK(chain_cap() == 8);
  CHECK_THROWS_AS(two_power_subgroup(C("E(81,256)@-1")), cap_exceeded_error);
  // a group of order exactly the cap is fine
  setenv("TORSIONLAB_MAX_CHAIN", "16", 1);
  CHECK(two_power_subgroup(C("E(81,256)@-1")).b == 3);

  setenv("TORSIONLAB_MAX_CHAIN", "banana", 1);
  CHECK_THROWS_AS(chain_cap(), parse_error);
  setenv("TORSIONLAB_MAX_CHAIN", "2", 1);
  CHECK_THROWS_AS(chain_cap(), parse_error);
  unsetenv("TORSIONLAB_MAX_CHAIN");
  CHECK(chain_cap() == 32);
}

TEST_CASE("odd torsion points") {
  OddPart odd = odd_points(C("E(64,189)@-3"));
  CHECK(odd.three == 1);
  CHECK(odd.five == 0);
  bool found = false;
  for (const auto& p : odd.pts3) {
    if (p.x == K(f3, "36")) {
      found = true;
      CHECK(p.q == K(f3, "810000"));
      REQUIRE(p.y.has_value());
      CHECK(*p.y * *p.y == p.q);
    }
  }
  CHECK(found);

  // same x-root is rational over Q(i) too
  CHECK(odd_points(C("E(64,189)@-1")).three == 1);
  CHECK(odd_points(C("E(-1,1)@-1")).three == 0);
  CHECK(odd_points(C("E(81,256)@-1")).three == 0);
  CHECK(odd_points(C("E(81,256)@-1")).five == 0);

  // the rescaling path: E(64/25, 189/25) has the order-3 point at x = 36/25
  OddPart scaled = odd_points(C("E(64/25,189/25)@-3"));
  CHECK(scaled.three == 1);
  bool found_scaled = false;
  for (const auto& p : scaled.pts3) found_scaled = found_scaled || p.x == K(f3, "36/25");
  CHECK(found_scaled);

  // nonsquare q keeps the root but not the point: twist E(64,189) by 5
  OddPart tw = odd_points(C("E(320,945)@-1"));
  CHECK(tw.three == 0);
  bool root_no_point = false;
  for (const auto& p : tw.pts3)
    root_no_point = root_no_point || (p.x == K(f1, "180") && !p.y.has_value());
  CHECK(root_no_point);
}

TEST_CASE("torsion over K") {
  CHECK(torsion_over_k(C("E(81,256)@-1")) == TorsionShape(2, 8));
  CHECK(torsion_over_k(C("E(-1,lambda)@-3")) == TorsionShape(2, 2));
  CHECK(torsion_over_k(C("E(16,25)@-3")) == TorsionShape(2, 4));
  CHECK(torsion_over_k(C("E(16,25)@-1")) == TorsionShape(4, 4));
  CHECK(torsion_over_k(C("E(64,189)@-1")) == TorsionShape(2, 6));
  CHECK(torsion_over_k(C("E(64,189)@-3")) == TorsionShape(2, 6));
  CHECK(torsion_over_k(C("E(625,576)@-3")) == TorsionShape(2, 4));
  CHECK(torsion_over_k(C("E(-2,1)@-1")) == TorsionShape(2, 2));
  CHECK(torsion_over_k(stress7()) == TorsionShape(2, 8));

  KTorsion full = torsion_over_k_full(C("E(81,256)@-1"));
  CHECK(full.shape == TorsionShape(2, 8));
  CHECK(full.two.b == 3);
  CHECK(full.odd.three == 0);
}

TEST_CASE("torsion over quadratic extensions") {
  CHECK(torsion_over_ext(C("E(64,189)@-1"), squarefree_class(K(f1, "5"))) == TorsionShape(2, 12));
  CHECK(torsion_over_ext(C("E(320,945)@-1"), squarefree_class(K(f1, "5"))) == TorsionShape(2, 12));
  CHECK(torsion_over_ext(C("E(625,576)@-3"), squarefree_class(K(f3, "-1"))) == TorsionShape(4, 4));
  CHECK(torsion_over_ext(C("E(16,25)@-1"), squarefree_class(K(f1, "5"))) == TorsionShape(4, 8));

  LTorsion full = torsion_over_ext_full(C("E(64,189)@-1"), ExtId(squarefree_class(K(f1, "5"))));
  CHECK(full.shape == TorsionShape(2, 12));
  CHECK(full.two.a == 1);
  CHECK(full.two.b == 2);
  CHECK(full.three == 1);
  CHECK(full.five == 0);

  CHECK_THROWS_AS(torsion_over_ext(C("E(1,4)@-1"), identity_class(f1)), precondition_error);
  CHECK_THROWS_AS(torsion_over_ext(C("E(1,4)@-1"), ExtId(squarefree_class(K(f3, "2")))),
                  field_mismatch_error);
}

TEST_CASE("C2 x C16 over a quadratic extension of Q(sqrt(-7))") {
  Curve e = stress7();
  ExtId ext = stress7_ext();
  auto chain = two_power_subgroup(e, ext);
  CHECK(chain.a == 1);
  CHECK(chain.b == 4);
  CHECK(torsion_over_ext(e, ext) == TorsionShape(2, 16));

  // the level-4 points really have order 16
  auto eq = over_l(e, ext);
  REQUIRE(chain.levels.size() == 5);
  CHECK(chain.levels[4].size() == 16);
  const auto& p = chain.levels[4][0];
  CHECK(eq.mul(16, p) == eq.infinity());
  CHECK(eq.mul(8, p) != eq.infinity());
}

TEST_CASE("chain properties on a curve sample") {
  for (Field f : {f1, f3}) {
    auto curves = sample_curves(f, 20);
    REQUIRE(curves.size() == 20);
    for (const Curve& e : curves) {
      KTorsion t = torsion_over_k_full(e);
      CHECK(t.shape.n % t.shape.m == 0);
      auto eq = over_k(e);
      for (size_t k = 0; k < t.two.levels.size(); ++k) {
        for (const auto& p : t.two.levels[k]) {
          CHECK(eq.on_curve(p));
          CHECK(eq.mul(1L << k, p) == eq.infinity());
          if (k == 0) continue;
          CHECK(eq.mul(1L << (k - 1), p) != eq.infinity());
          // fibers: either the point lifts with exactly 4 halves or not at all
          if (lifts_in(e, p)) {
            CHECK(halve(e, p).size() == 4);
          } else {
            CHECK_THROWS_AS(halve(e, p), no_lift_error);
          }
        }
      }
      // psi oracle, levels 1 and 2: the level-k x-coordinates are exactly the
      // K-roots of psi_{2^k} that are new at level k and carry a rational y.
      // (K-rational order-8 points are halves of K-rational order-4 points,
      // so level 3 is checked by evaluation below instead of root-finding,
      // which would mean factoring constants the size of g_8(0).)
      std::vector<KElem> prev_roots;
      for (size_t k = 1; k <= 2; ++k) {
        KPoly psi = psi_n(e, 1 << k);
        std::vector<KElem> roots = k_roots(psi);
        std::vector<KElem> expect;
        for (const KElem& x : roots) {
          bool old = std::find(prev_roots.begin(), prev_roots.end(), x) != prev_roots.end();
          if (!old && is_square_k(x * (x + e.M) * (x + e.N))) expect.push_back(x);
        }
        std::vector<KElem> got;
        if (k < t.two.levels.size())
          for (const auto& p : t.two.levels[k]) got.push_back(p.x);
        std::sort(got.begin(), got.end(), kelem_less);
        got.erase(std::unique(got.begin(), got.end()), got.end());
        std::sort(expect.begin(), expect.end(), kelem_less);
        CHECK(got == expect);
        prev_roots = std::move(roots);
      }
      if (t.two.levels.size() > 3) {
        KPoly psi8 = psi_n(e, 8), psi4 = psi_n(e, 4);
        for (const auto& p : t.two.levels[3]) {
          CHECK(psi8.eval(p.x).is_zero());
          CHECK_FALSE(psi4.eval(p.x).is_zero());
        }
      }
    }
  }
}

TEST_CASE("extension torsion properties on a sample") {
  for (Field f : {f1, f3}) {
    std::vector<ExtId> exts;
    for (const char* s : {"2", "5", "-1", "w"}) {
      SquareClass c = squarefree_class(K(f, s));
      if (!c.is_identity()) exts.push_back(ExtId(c));
    }
    auto curves = sample_curves(f, 8);
    for (const Curve& e : curves) {
      KTorsion base = torsion_over_k_full(e);
      for (const ExtId& ext : exts) {
        LTorsion lt = torsion_over_ext_full(e, ext);
        // kwon divisibility
        KTorsion tw = torsion_over_k_full(twist_curve(e, ext.d()));
        long bound = base.shape.order() * tw.shape.order();
        CHECK(bound % lt.shape.order() == 0);
        // the K-part embeds
        CHECK(lt.shape.order() % base.shape.order() == 0);
        // 3-part of the decomposition against the K-rational psi_3 roots
        // that acquire a rational y over L
        int rational_over_l = 0;
        for (const auto& p : base.odd.pts3)
          if (is_square_in_ext(p.q, ext)) ++rational_over_l;
        if (lt.three == 0) CHECK(rational_over_l == 0);
        if (lt.three == 1) CHECK(rational_over_l == 1);
        if (lt.three == 2) CHECK(rational_over_l >= 2);
      }
    }
  }
}
