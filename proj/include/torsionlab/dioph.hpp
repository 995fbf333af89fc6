#pragma once
// Bounded-height exhaustive searches for the Diophantine systems whose
// emptiness underlies the classification results, plus exact point
// enumeration on the small auxiliary curves those arguments quote. The
// searches certify "no solutions of height <= H", not the full statements
// (those rest on rank computations this library does not reproduce); every
// certificate is deterministic and every solution it does emit satisfies its
// defining equations exactly.

#include <string>
#include <vector>

#include "torsionlab/numfield.hpp"

namespace torsionlab {

// Outcome of one search. `scanned` counts the parameter tuples the
// certificate covers: ordered (u,v) pairs for fermat, (a,b) pairs for the
// order-2=order-3 systems, ordered pairs of parameter pairs for
// order-3=order-3, and x values for aux curves. Scale factors (the c's) are
// not enumerated: every defining condition is invariant under multiplying a
// coordinate pattern by a square, so c = 1 loses nothing.
struct SearchResult {
  std::string system;
  Field field;
  long bound = 0;
  std::vector<std::vector<KElem>> solutions;
  long long scanned = 0;
  double seconds = 0.0;  // wall time, serialized only on request
};

// u^4 - v^4 = w^2 with u v w != 0: enumerates u, v in O_K of height <= h and
// records {u, v, w} for every nontrivial hit. Expected empty for D = -1, -3
// (any height); D = -7 genuinely has solutions and gets no emptiness claim.
SearchResult search_fermat(Field f, long h);

// d s^2 = a^3 (a+2b) c^2, d t^2 = b^3 (b+2a) c^2 with s^2 != t^2 and
// a/b outside {-2, -1, -1/2, 0, 1}: a hit means M = a^3(a+2b) and
// N = b^3(b+2a) share a square class and differ, and is recorded as
// {a, b, c, d, s, t} with the witnesses filled in. The modified variant
// replaces the first equation by -s^2 = a^3 (a+2b) c^2, i.e. asks for -M
// and N to be squares; hits are {a, b, c, s, t}. Both expected empty.
SearchResult search_s23(Field f, long h, bool modified);

// d a^3(a+2b) c^2 = a0^3(a0+2b0) c0^2 and d b^3(b+2a) c^2 = b0^3(b0+2a0) c0^2
// with d a nonsquare and both ratios outside the excluded set: a hit means
// the two parameter pairs produce proportional (M, N) with a nonsquare
// ratio, recorded as {a, b, c, a0, b0, c0, d}. Expected empty.
SearchResult search_s33(Field f, long h);

// All affine K-points with x of height <= h on one of the quoted auxiliary
// curves, as {x, y} pairs sorted by coordinates. Throws precondition_error
// for an unknown id; aux_curve_ids() lists the known ones.
SearchResult enumerate_aux_points(const std::string& curve_id, Field f, long h);
const std::vector<std::string>& aux_curve_ids();

// Certificate JSON: {system, field, bound, solutions, scanned, wall_time}.
// wall_time is null unless include_timing (timing would break byte-for-byte
// reproducibility of certificates).
std::string result_to_json(const SearchResult& r, bool include_timing = false);

}  // namespace torsionlab
