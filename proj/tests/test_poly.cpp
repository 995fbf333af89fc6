#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "torsionlab/poly.hpp"

using namespace torsionlab;

namespace {

const Field f1(-1), f3(-3), f7(-7);

KElem K(Field f, const char* s) { return parse_kelem(f, s); }
KPoly lin(const KElem& root) {  // x - root
  return KPoly(root.f, {-root, KElem::integer(root.f, 1)});
}

std::vector<KElem> sorted(std::vector<KElem> v) {
  std::sort(v.begin(), v.end(), kelem_less);
  return v;
}

}  // namespace

TEST_CASE("construction and evaluation") {
  KPoly z(f1);
  CHECK(z.is_zero());
  CHECK(z.degree() == -1);
  CHECK_THROWS_AS(z.lead(), zero_input_error);

  KPoly p(f1, {K(f1, "1"), K(f1, "0"), K(f1, "2*w"), K(f1, "0"), K(f1, "0")});
  CHECK(p.degree() == 2);  // trailing zeros trimmed
  CHECK(p.lead() == K(f1, "2*w"));
  CHECK(p.coeff(1) == K(f1, "0"));
  CHECK(p.coeff(7) == K(f1, "0"));
  CHECK(p.eval(K(f1, "w")) == K(f1, "1-2*w"));  // 1 + 2w*(w^2) = 1 - 2w
  CHECK(p.eval(K(f1, "0")) == K(f1, "1"));

  CHECK(KPoly(f1, {K(f1, "0")}).is_zero());
  CHECK_THROWS_AS(KPoly(f1, {K(f3, "1")}), field_mismatch_error);
  CHECK_THROWS_AS(p.eval(K(f3, "1")), field_mismatch_error);
}

TEST_CASE("ring operations") {
  KPoly x = kpoly_x(f3);
  KPoly one = kpoly_const(f3, K(f3, "1"));
  KPoly sq = (x + one) * (x + one);
  CHECK(sq == KPoly(f3, {K(f3, "1"), K(f3, "2"), K(f3, "1")}));
  CHECK((x + one) * (x - one) == x * x - one);
  CHECK((sq - sq).is_zero());
  CHECK((-sq) + sq == KPoly(f3));
  CHECK(K(f3, "w") * x == KPoly(f3, {K(f3, "0"), K(f3, "w")}));
  CHECK((x * KPoly(f3)).is_zero());

  // cancellation in the top coefficient must re-trim
  KPoly a(f3, {K(f3, "1"), K(f3, "1")});
  KPoly b(f3, {K(f3, "2"), K(f3, "1")});
  CHECK((a - b).degree() == 0);

  CHECK(shifted(x * x, K(f3, "1")) == sq);  // (x+1)^2
  CHECK(shifted(sq, K(f3, "-1")) == x * x);
  KPoly p(f3, {K(f3, "w"), K(f3, "-3"), K(f3, "1/2")});
  for (const char* at : {"0", "1", "-2+w", "1/2-3/2*w"})
    CHECK(shifted(p, K(f3, "5-w")).eval(K(f3, at)) == p.eval(K(f3, at) + K(f3, "5-w")));
}

TEST_CASE("root extraction over Q(i)") {
  // assembled from known linear factors, plus factors with no K-roots,
  // plus a unit content
  std::vector<KElem> rts{K(f1, "-1/3"), K(f1, "2+w"), K(f1, "2-w"),
                         K(f1, "5"),    K(f1, "w"),   K(f1, "-w")};
  KPoly p = kpoly_const(f1, K(f1, "2*w"));
  p = p * KPoly(f1, {K(f1, "1"), K(f1, "3")});            // 3x + 1
  for (std::size_t i = 1; i < rts.size(); ++i) p = p * lin(rts[i]);
  p = p * KPoly(f1, {K(f1, "1"), K(f1, "-1"), K(f1, "1")});  // x^2 - x + 1: no roots here
  CHECK(k_roots(p) == sorted(rts));

  CHECK(k_roots(KPoly(f1, {K(f1, "1"), K(f1, "0"), K(f1, "1")})) ==
        std::vector<KElem>{K(f1, "-w"), K(f1, "w")});
  CHECK(k_roots(kpoly_const(f1, K(f1, "5"))).empty());
  CHECK_THROWS_AS(k_roots(KPoly(f1)), zero_input_error);

  // x^2(x - 1 - w): powers of x contribute the root 0 once
  KPoly q = kpoly_x(f1) * kpoly_x(f1) * lin(K(f1, "1+w"));
  CHECK(k_roots(q) == sorted({K(f1, "0"), K(f1, "1+w")}));

  // repeated roots reported once
  KPoly r = lin(K(f1, "3")) * lin(K(f1, "3")) * lin(K(f1, "-w")) * lin(K(f1, "-w"));
  CHECK(k_roots(r) == sorted({K(f1, "3"), K(f1, "-w")}));

  // large integer roots stay inside the norm bound
  KPoly big = lin(K(f1, "1000000")) * lin(K(f1, "-1"));
  CHECK(k_roots(big) == sorted({K(f1, "1000000"), K(f1, "-1")}));
}

TEST_CASE("root extraction in other fields") {
  // x^2 - x + 1 has its roots in Q(sqrt(-3)) and only there
  KPoly c(f3, {K(f3, "1"), K(f3, "-1"), K(f3, "1")});
  CHECK(k_roots(c) == sorted({K(f3, "1/2+1/2*w"), K(f3, "1/2-1/2*w")}));
  CHECK(k_roots(KPoly(f3, {K(f3, "1"), K(f3, "0"), K(f3, "1")})).empty());  // x^2 + 1

  KElem u = K(f7, "1/2-3/2*w");  // in O_K for D = -7
  KPoly p = KPoly(f7, {K(f7, "-1"), K(f7, "2")}) * lin(u) * lin(K(f7, "-4"));
  CHECK(k_roots(p) == sorted({K(f7, "1/2"), u, K(f7, "-4")}));

  // denominators of roots divide the leading coefficient: lead 4 here
  KPoly h = KPoly(f3, {K(f3, "-w"), K(f3, "4")});  // 4x - w
  CHECK(k_roots(h) == std::vector<KElem>{K(f3, "1/4*w")});
}

TEST_CASE("numerator hint") {
  KPoly p = lin(K(f1, "36")) * lin(K(f1, "-336"));  // constant -12096
  auto plain = k_roots(p);
  CHECK(plain == sorted({K(f1, "36"), K(f1, "-336")}));

  Factorization exact = factor_ok(OKElem::integer(f1, 12096));
  CHECK(k_roots(p, &exact) == plain);
  // any nonzero multiple works; extra divisors are discarded candidates
  Factorization padded = factor_ok(OKElem::integer(f1, 12096 * 35));
  CHECK(k_roots(p, &padded) == plain);
}

TEST_CASE("3-division quartic of a known curve") {
  // E(64, 189): psi_3 = 3x^4 + 4(M+N)x^3 + 6MNx^2 - (MN)^2, with the
  // x-coordinate 36 of an order-3 point among its roots
  KPoly psi3(f1, {K(f1, "-146313216"), K(f1, "0"), K(f1, "72576"), K(f1, "1012"), K(f1, "3")});
  auto rts = k_roots(psi3);
  CHECK(std::find(rts.begin(), rts.end(), K(f1, "36")) != rts.end());
  for (const auto& r : rts) CHECK(psi3.eval(r).is_zero());
  // same quartic viewed over Q(sqrt(-3)) keeps the rational root
  KPoly psi3b(f3, {K(f3, "-146313216"), K(f3, "0"), K(f3, "72576"), K(f3, "1012"), K(f3, "3")});
  auto rtsb = k_roots(psi3b);
  CHECK(std::find(rtsb.begin(), rtsb.end(), K(f3, "36")) != rtsb.end());
  for (const auto& r : rtsb) CHECK(psi3b.eval(r).is_zero());
}
