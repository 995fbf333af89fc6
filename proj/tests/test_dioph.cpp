// Diophantine searches: emptiness certificates at small heights, witness
// verification where solutions genuinely exist, the auxiliary point lists
// against their reference values, and certificate serialization.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <string>
#include <vector>

#include "torsionlab/dioph.hpp"
#include "torsionlab/errors.hpp"
#include "torsionlab/growth.hpp"
#include "torsionlab/torsion.hpp"

using namespace torsionlab;

namespace {

const Field f1(-1);
const Field f3(-3);
const Field f7(-7);

KElem K(Field f, const char* text) { return parse_kelem(f, text); }

long long nonzero_count(Field f, long h) {
  long long n = 0;
  for (const OKElem& z : enumerate_ok(f, Int(h)))
    if (!z.is_zero()) ++n;
  return n;
}

bool sorted_by_coords(const std::vector<std::vector<KElem>>& pts) {
  return std::is_sorted(pts.begin(), pts.end(),
                        [](const std::vector<KElem>& p, const std::vector<KElem>& q) {
                          if (int c = cmp(p[0], q[0]); c != 0) return c < 0;
                          return cmp(p[1], q[1]) < 0;
                        });
}

bool contains_point(const std::vector<std::vector<KElem>>& pts, const KElem& x, const KElem& y) {
  for (const auto& p : pts)
    if (p[0] == x && p[1] == y) return true;
  return false;
}

KElem fourth(const KElem& z) {
  const KElem z2 = z * z;
  return z2 * z2;
}

// M = a^3 (a + 2b) as in the order-2/order-3 parameter systems.
KElem branch_product(const KElem& a, const KElem& b) { return a * a * a * (a + b + b); }

}  // namespace

TEST_CASE("quartic difference search is empty over the two main fields") {
  for (Field f : {f1, f3}) {
    const SearchResult r = search_fermat(f, 6);
    CHECK(r.solutions.empty());
    CHECK(r.system == "fermat");
    CHECK(r.bound == 6);
    const long long n = nonzero_count(f, 6);
    CHECK(r.scanned == n * n);
  }
  CHECK_THROWS_AS(search_fermat(f1, 0), precondition_error);
}

TEST_CASE("quartic difference solutions over the seventh field verify exactly") {
  const SearchResult r = search_fermat(f7, 4);
  REQUIRE(!r.solutions.empty());
  for (const auto& sol : r.solutions) {
    REQUIRE(sol.size() == 3);
    const KElem &u = sol[0], &v = sol[1], &w = sol[2];
    CHECK(!u.is_zero());
    CHECK(!v.is_zero());
    CHECK(!w.is_zero());
    CHECK(fourth(u) - fourth(v) == w * w);
  }
  // One of the hits powers the known high-torsion curve over this field.
  const KElem u = K(f7, "1/2-3/2*w"), v = K(f7, "-3-w");
  const Curve e = new_curve(f7, fourth(u), fourth(v));
  CHECK(torsion_over_k(e) == TorsionShape{2, 8});
}

TEST_CASE("order-2 = order-3 systems have no small solutions") {
  for (Field f : {f1, f3}) {
    const SearchResult plain = search_s23(f, 6, false);
    const SearchResult modified = search_s23(f, 6, true);
    CHECK(plain.solutions.empty());
    CHECK(modified.solutions.empty());
    CHECK(plain.system == "s23");
    CHECK(modified.system == "s23m");
    // Same admissible (a, b) box for both variants.
    CHECK(plain.scanned == modified.scanned);
    CHECK(plain.scanned > 0);
  }
}

TEST_CASE("order-3 = order-3 system has no small solutions over the main fields") {
  for (Field f : {f1, f3}) {
    const SearchResult r = search_s33(f, 4);
    CHECK(r.solutions.empty());
    // The certificate covers every ordered pair of admissible pairs even
    // though only equal-ratio pairs can match.
    const SearchResult s23 = search_s23(f, 4, false);
    CHECK(r.scanned == s23.scanned * s23.scanned);
  }
}

TEST_CASE("order-3 = order-3 witnesses over the seventh field verify exactly") {
  const SearchResult r = search_s33(f7, 3);
  REQUIRE(!r.solutions.empty());
  for (const auto& sol : r.solutions) {
    REQUIRE(sol.size() == 7);
    const KElem &a = sol[0], &b = sol[1], &c = sol[2];
    const KElem &a0 = sol[3], &b0 = sol[4], &c0 = sol[5], &d = sol[6];
    const KElem m = branch_product(a, b), n = branch_product(b, a);
    const KElem m0 = branch_product(a0, b0), n0 = branch_product(b0, a0);
    CHECK(d * m * c * c == m0 * c0 * c0);
    CHECK(d * n * c * c == n0 * c0 * c0);
    CHECK(!is_square_k(d));
  }
  // Scaling a pair by a constant gives an equal ratio with a square d, so
  // e.g. (1,2) against (2,4) must not be reported despite matching ratios.
  for (const auto& sol : r.solutions) {
    CHECK(!(sol[0] * sol[4] == sol[1] * sol[3] && is_square_k(sol[6])));
  }
}

TEST_CASE("auxiliary curve points reproduce the reference lists") {
  const auto tables = nlohmann::json::parse(tables_json_text());
  REQUIRE(tables.at("aux").size() == 10);
  for (const auto& entry : tables.at("aux")) {
    const Field f(entry.at("field").get<int>());
    const std::string id = entry.at("curve").get<std::string>();
    INFO(id, " over D = ", f.D());
    const SearchResult r = enumerate_aux_points(id, f, 20);
    CHECK(r.solutions.size() == entry.at("points").size());
    CHECK(sorted_by_coords(r.solutions));
    for (const auto& pt : entry.at("points")) {
      const KElem x = parse_kelem(f, pt.at(0).get<std::string>());
      const KElem y = parse_kelem(f, pt.at(1).get<std::string>());
      INFO("expected point (", pt.at(0).get<std::string>(), ", ", pt.at(1).get<std::string>(), ")");
      CHECK(contains_point(r.solutions, x, y));
    }
  }
}

TEST_CASE("auxiliary points satisfy their equations and close under negation") {
  for (const std::string& id : aux_curve_ids()) {
    for (Field f : {f1, f3}) {
      const SearchResult r = enumerate_aux_points(id, f, 8);
      const bool longform = id.rfind("y2+", 0) == 0;
      const KElem a1 = KElem::integer(f, longform ? 2 : 0);
      const KElem a3 = a1;
      for (const auto& pt : r.solutions) {
        const KElem &x = pt[0], &y = pt[1];
        CHECK(contains_point(r.solutions, x, -y - a1 * x - a3));
      }
    }
  }
  // Spot-check the defining equations on two of the curves.
  for (const auto& pt : enumerate_aux_points("y2=x3-4x", f3, 8).solutions) {
    const KElem &x = pt[0], &y = pt[1];
    CHECK(y * y == x * x * x - Rational(4) * x);
  }
  for (const auto& pt : enumerate_aux_points("y2+2xy+2y=x3-x2-2x", f3, 8).solutions) {
    const KElem &x = pt[0], &y = pt[1];
    const KElem two = KElem::integer(f3, 2);
    CHECK(y * y + two * x * y + two * y == x * x * x - x * x - two * x);
  }
}

TEST_CASE("unknown auxiliary ids are rejected") {
  CHECK(aux_curve_ids().size() == 7);
  CHECK_THROWS_AS(enumerate_aux_points("y2=x3+9x", f1, 5), precondition_error);
  CHECK_THROWS_AS(enumerate_aux_points("y2=x3-x", f1, 0), precondition_error);
}

TEST_CASE("certificates serialize deterministically with the documented keys") {
  const SearchResult r = search_fermat(f7, 3);
  const std::string text = result_to_json(r);
  CHECK(text == result_to_json(search_fermat(f7, 3)));

  const auto j = nlohmann::json::parse(text);
  CHECK(j.at("system") == "fermat");
  CHECK(j.at("field") == -7);
  CHECK(j.at("bound") == 3);
  CHECK(j.at("scanned").get<long long>() == r.scanned);
  CHECK(j.at("wall_time").is_null());
  CHECK(j.at("solutions").size() == r.solutions.size());
  for (std::size_t i = 0; i < r.solutions.size(); ++i)
    for (std::size_t k = 0; k < 3; ++k)
      CHECK(parse_kelem(f7, j.at("solutions").at(i).at(k).get<std::string>()) == r.solutions[i][k]);

  const auto timed = nlohmann::json::parse(result_to_json(r, true));
  CHECK(timed.at("wall_time").is_number());
}
