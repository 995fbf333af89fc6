#pragma once
// Growth of torsion in quadratic extensions L = K(sqrt(d)). The library
// computes the finite set of square classes d that could possibly enlarge
// E(K)_tor, measures the torsion over each, classifies the quadratic twists,
// and checks everything against the catalog of attainable shapes, growth
// counts and twist shapes for D = -1 and -3 (the conformance data embedded
// from data/tables.json). A conformance miss over those two fields can only
// mean a bug, so the default policy turns it into an exception.

#include <optional>
#include <string>
#include <vector>

#include "torsionlab/curve.hpp"
#include "torsionlab/numfield.hpp"
#include "torsionlab/torsion.hpp"

namespace torsionlab {

struct GrowthRecord {
  SquareClass d;
  TorsionShape shape_l{1, 1};  // strictly larger than the shape over K
};

struct TwistRecord {
  SquareClass d;
  TorsionShape shape{1, 1};  // of twist(E, d) over K
};

// What to do when a computed result contradicts the catalog: Throw raises
// conformance_violation_error (test mode), Collect records the message in
// the report and keeps going (CLI mode; --strict rethrows at the end).
enum class ConformancePolicy { Throw, Collect };

struct AnalysisReport {
  Curve curve;
  TorsionShape shape_k{1, 1};
  std::vector<GrowthRecord> growth;  // deduplicated by class, sorted by (norm, x, y) of d
  std::vector<TwistRecord> twists;   // one per candidate class, same order
  std::vector<std::string> violations;  // conformance misses (Collect policy only)
  std::vector<std::string> notes;       // non-fatal observations (D outside -1, -3)

  long g() const { return static_cast<long>(growth.size()); }
};

// Every square class whose extension could enlarge the torsion: for each
// point of 2-power order (every chain level, 2-torsion included), the single
// class shared by all of its nonsquare lift quantities, and for each K-root
// x0 of psi_3 or psi_5, the class of x0(x0+M)(x0+N) when that is not a
// square. The identity class is excluded. No other quadratic extension can
// grow: a new 2-power point halves a K-rational one further down its chain,
// and a new odd point is a K-rational psi-root whose y lives in K(sqrt(d)).
std::vector<SquareClass> candidate_extensions(const Curve& e);

// Torsion over K, torsion over every candidate extension (kept where the
// order strictly increases), and the twist shapes, with conformance checked
// against the catalog when D is -1 or -3. For the other fields candidate
// completeness is not theorem-backed; extra_height >= 1 additionally tries
// every nonsquare class of height <= extra_height and merges what it finds,
// recording growth outside the candidate set as a note.
AnalysisReport analyze(const Curve& e, ConformancePolicy policy = ConformancePolicy::Throw,
                       long extra_height = 0);

// Shape over K of twist(E, d) for each given class. Nonidentity classes are
// checked against the catalog of twist shapes when D is -1 or -3; a twist by
// the identity must reproduce the shape of E itself. Violations go to
// *violations under Collect (when the pointer is given).
std::vector<TwistRecord> twist_shapes(const Curve& e, const std::vector<SquareClass>& ds,
                                      ConformancePolicy policy = ConformancePolicy::Throw,
                                      std::vector<std::string>* violations = nullptr);

// The unique class d with C4 x C4 inside E(K(sqrt(d))), or nullopt when no
// quadratic extension reaches full 4-torsion. Requires shape (2,4) over K
// (precondition_error otherwise): full 4-torsion needs every one of the six
// branch quantities +-M, +-N, +-(M-N) square in L, so the answer is the
// single class shared by all the nonsquare ones, if they do share one.
std::optional<SquareClass> full4_extension(const Curve& e);

// The catalog rows for base shape `base` over D = -1 or -3 (precondition_error
// elsewhere): attainable shapes over quadratic extensions, attainable growth
// counts g, and attainable shapes of nontrivial quadratic twists.
std::vector<TorsionShape> conformance_growth(Field f, TorsionShape base);
std::vector<long> conformance_g(Field f, TorsionShape base);
std::vector<TorsionShape> conformance_twists(Field f, TorsionShape base);

// The embedded reference data (data/tables.json, frozen at build time).
const char* tables_json_text();

// One golden-table row re-derived from scratch and compared. `row` names the
// curve, `detail` explains a failure (or summarizes the match).
struct TableCheck {
  std::string table;
  std::string row;
  bool pass = false;
  std::string detail;
};

// Re-derives every row of the four reference tables: the growth tables are
// compared record by record (square classes matched by same_class, shapes in
// normal form), the extension tables by the shape over the printed K(sqrt(d)).
// Failures become report entries, never exceptions.
std::vector<TableCheck> check_tables();

// analyze() for every curve E(M,N) with M, N nonzero ring integers of height
// <= h and M != N, in enumeration order. `jobs` threads split the work; the
// merge preserves order, so the output is independent of the thread count.
std::vector<AnalysisReport> scan_curves(Field f, long h, int jobs = 1,
                                        ConformancePolicy policy = ConformancePolicy::Throw);

// Serialization: {field, M, N, shape_K, growth: [{d, shape}...], g,
// twists: [{d, shape}...]} with elements in the numfield text syntax, plus
// violations/notes when present. The text form is an aligned table, one row
// per curve; shapes that admit the C4 x C6 presentation carry it as a note.
std::string report_to_json(const AnalysisReport& r);
std::string reports_to_json(const std::vector<AnalysisReport>& rs);
std::string reports_to_text(const std::vector<AnalysisReport>& rs);
inline std::string report_to_text(const AnalysisReport& r) { return reports_to_text({r}); }
// "C2 x C8"; C2 x C12 additionally carries its C4 x C6 regrouping.
std::string shape_text(TorsionShape s);

}  // namespace torsionlab
