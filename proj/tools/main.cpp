// torsionlab command line: analyze one curve, reproduce the reference
// tables, sweep twists, generate curves by torsion shape, run the
// Diophantine searches, or batch-scan a height box.
//
// Exit codes: 0 success, 1 usage or parse failure, 2 singular curve,
// 3 conformance violation under --strict, 4 reference table mismatch.

#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "torsionlab/curve.hpp"
#include "torsionlab/dioph.hpp"
#include "torsionlab/errors.hpp"
#include "torsionlab/growth.hpp"

namespace {

using namespace torsionlab;

Curve curve_from(int d, const std::string& m, const std::string& n) {
  const Field f(d);
  return new_curve(f, parse_kelem(f, m), parse_kelem(f, n));
}

int run_analyze(int d, const std::string& m, const std::string& n, long bound, bool json,
                bool strict) {
  const AnalysisReport rep = analyze(curve_from(d, m, n), ConformancePolicy::Collect, bound);
  if (json)
    std::cout << report_to_json(rep) << "\n";
  else
    std::cout << report_to_text(rep);
  return strict && !rep.violations.empty() ? 3 : 0;
}

int run_tables(const std::string& which, bool json) {
  const std::string want = which == "all" ? "" : "table" + which;
  std::vector<TableCheck> selected;
  for (TableCheck& c : check_tables())
    if (want.empty() || c.table == want) selected.push_back(std::move(c));
  long failures = 0;
  for (const TableCheck& c : selected)
    if (!c.pass) ++failures;

  if (json) {
    auto arr = nlohmann::json::array();
    for (const TableCheck& c : selected)
      arr.push_back({{"table", c.table}, {"row", c.row}, {"pass", c.pass}, {"detail", c.detail}});
    std::cout << arr.dump(2) << "\n";
  } else {
    for (const TableCheck& c : selected)
      std::cout << c.table << "  " << (c.pass ? "pass" : "FAIL") << "  " << c.row << "  "
                << c.detail << "\n";
    std::cout << selected.size() << " row(s), " << failures << " failure(s)\n";
  }
  return failures ? 4 : 0;
}

int run_twists(int d, const std::string& m, const std::string& n, long height, bool json,
               bool strict) {
  const Curve e = curve_from(d, m, n);
  // Twist by every class seen in the height box, plus the curve's own
  // candidate extensions so the interesting twists appear at any height.
  std::vector<SquareClass> ds = candidate_extensions(e);
  for (const OKElem& z : enumerate_ok(e.f, Int(height))) {
    if (z.is_zero()) continue;
    const SquareClass c = squarefree_class(z);
    if (c.is_identity()) continue;
    if (std::none_of(ds.begin(), ds.end(), [&](const SquareClass& s) { return s == c; }))
      ds.push_back(c);
  }
  std::sort(ds.begin(), ds.end(), square_class_less);

  std::vector<std::string> violations;
  const std::vector<TwistRecord> twists =
      twist_shapes(e, ds, ConformancePolicy::Collect, &violations);

  if (json) {
    nlohmann::json j;
    j["field"] = d;
    j["M"] = to_string(e.M);
    j["N"] = to_string(e.N);
    auto arr = nlohmann::json::array();
    for (const TwistRecord& t : twists)
      arr.push_back({{"d", to_string(t.d.elem())}, {"shape", {t.shape.m, t.shape.n}}});
    j["twists"] = arr;
    if (!violations.empty()) j["violations"] = violations;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << to_string(e) << "  " << shape_text(torsion_over_k(e)) << "\n";
    for (const TwistRecord& t : twists)
      std::cout << "  (" << to_string(t.d.elem()) << ", " << shape_text(t.shape) << ")\n";
    for (const std::string& v : violations) std::cout << "  ! " << v << "\n";
  }
  return strict && !violations.empty() ? 3 : 0;
}

int run_gen(int d, const std::string& shape_arg, long count, long height, bool json) {
  const TorsionShape shape = parse_shape(shape_arg);
  const std::vector<Curve> curves = gen_curves(shape, Field(d), height, count);
  if (json) {
    auto arr = nlohmann::json::array();
    for (const Curve& e : curves)
      arr.push_back({{"field", d}, {"M", to_string(e.M)}, {"N", to_string(e.N)}});
    std::cout << arr.dump(2) << "\n";
  } else {
    std::cout << shape_text(shape) << " over D=" << d << ":\n";
    for (const Curve& e : curves) std::cout << "  " << to_string(e) << "\n";
  }
  return 0;
}

int run_dioph(const std::string& system, int d, long bound, const std::string& curve_id,
              bool timing, bool json) {
  const Field f(d);
  SearchResult r;
  if (system == "fermat") {
    r = search_fermat(f, bound);
  } else if (system == "s23") {
    r = search_s23(f, bound, false);
  } else if (system == "s23m") {
    r = search_s23(f, bound, true);
  } else if (system == "s33") {
    r = search_s33(f, bound);
  } else {  // aux; the flag is validated against this set
    if (curve_id.empty())
      throw precondition_error("dioph --system aux needs --curve; known ids: " +
                               [] {
                                 std::string all;
                                 for (const std::string& id : aux_curve_ids())
                                   all += (all.empty() ? "" : ", ") + id;
                                 return all;
                               }());
    r = enumerate_aux_points(curve_id, f, bound);
  }

  if (json) {
    std::cout << result_to_json(r, timing) << "\n";
  } else {
    std::cout << r.system << " over D=" << d << ", height <= " << bound << ": "
              << r.solutions.size() << " solution(s), " << r.scanned << " tuple(s) scanned\n";
    for (const auto& sol : r.solutions) {
      std::cout << "  (";
      for (std::size_t i = 0; i < sol.size(); ++i)
        std::cout << (i ? ", " : "") << to_string(sol[i]);
      std::cout << ")\n";
    }
    if (timing) std::cout << "  wall " << r.seconds << "s\n";
  }
  return 0;
}

int run_scan(int d, long height, int jobs, bool json, bool strict) {
  const std::vector<AnalysisReport> reps =
      scan_curves(Field(d), height, jobs, ConformancePolicy::Collect);
  long violations = 0;
  for (const AnalysisReport& r : reps) violations += static_cast<long>(r.violations.size());
  if (json) {
    std::cout << reports_to_json(reps) << "\n";
  } else {
    std::cout << reports_to_text(reps);
    std::cout << reps.size() << " curve(s), " << violations << " violation(s)\n";
  }
  return strict && violations ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact torsion growth for E(M,N): y^2 = x(x+M)(x+N) over Q(sqrt(D))"};
  app.require_subcommand(1);

  int d = -1, jobs = 1;
  std::string m, n, table = "all", system, shape, curve_id;
  long bound = 0, height = 6, count = 1, scan_height = 0, dioph_bound = 0;
  bool json = false, strict = false, timing = false;

  const std::string d_help = "field: D in {-1, -2, -3, -7, -11}";
  const std::string elem_help = "element, e.g. 16, -1/2+1/2*w, 3+2*w (w = sqrt(D))";

  CLI::App* analyze_cmd = app.add_subcommand("analyze", "torsion, growth and twists of one curve");
  analyze_cmd->add_option("--D", d, d_help)->required();
  analyze_cmd->add_option("--M", m, elem_help)->required();
  analyze_cmd->add_option("--N", n, elem_help)->required();
  analyze_cmd->add_option("--bound", bound, "also try every extension class of height <= this");
  analyze_cmd->add_flag("--json", json, "machine-readable output");
  analyze_cmd->add_flag("--strict", strict, "exit 3 on conformance violations");

  CLI::App* tables_cmd = app.add_subcommand("tables", "re-derive the reference tables");
  tables_cmd->add_option("--table", table, "3, 4, 5, 6 or all")
      ->check(CLI::IsMember({"3", "4", "5", "6", "all"}));
  tables_cmd->add_flag("--json", json, "machine-readable output");

  CLI::App* twists_cmd = app.add_subcommand("twists", "torsion of the quadratic twists");
  twists_cmd->add_option("--D", d, d_help)->required();
  twists_cmd->add_option("--M", m, elem_help)->required();
  twists_cmd->add_option("--N", n, elem_help)->required();
  twists_cmd->add_option("--height", height, "twist by all classes of height <= this");
  twists_cmd->add_flag("--json", json, "machine-readable output");
  twists_cmd->add_flag("--strict", strict, "exit 3 on conformance violations");

  CLI::App* gen_cmd = app.add_subcommand("gen", "generate curves with a given torsion shape");
  gen_cmd->add_option("--D", d, d_help)->required();
  gen_cmd->add_option("--shape", shape, "torsion shape, e.g. 2x8")->required();
  gen_cmd->add_option("--count", count, "how many curves");
  gen_cmd->add_option("--height", height, "parameter search height")->default_val(25);
  gen_cmd->add_flag("--json", json, "machine-readable output");

  CLI::App* dioph_cmd = app.add_subcommand("dioph", "bounded Diophantine searches");
  dioph_cmd->add_option("--system", system, "fermat, s23, s23m, s33 or aux")
      ->required()
      ->check(CLI::IsMember({"fermat", "s23", "s23m", "s33", "aux"}));
  dioph_cmd->add_option("--D", d, d_help)->required();
  dioph_cmd->add_option("--bound", dioph_bound, "search height")->required();
  dioph_cmd->add_option("--curve", curve_id, "auxiliary curve id (aux only)");
  dioph_cmd->add_flag("--timing", timing, "include wall time in the output");
  dioph_cmd->add_flag("--json", json, "machine-readable output");

  CLI::App* scan_cmd = app.add_subcommand("scan", "analyze every curve in a height box");
  scan_cmd->add_option("--D", d, d_help)->required();
  scan_cmd->add_option("--height", scan_height, "box height for M, N")->required();
  scan_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  scan_cmd->add_flag("--json", json, "machine-readable output");
  scan_cmd->add_flag("--strict", strict, "exit 3 on conformance violations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(analyze_cmd)) return run_analyze(d, m, n, bound, json, strict);
    if (app.got_subcommand(tables_cmd)) return run_tables(table, json);
    if (app.got_subcommand(twists_cmd)) return run_twists(d, m, n, height, json, strict);
    if (app.got_subcommand(gen_cmd)) return run_gen(d, shape, count, height, json);
    if (app.got_subcommand(dioph_cmd))
      return run_dioph(system, d, dioph_bound, curve_id, timing, json);
    if (app.got_subcommand(scan_cmd)) return run_scan(d, scan_height, jobs, json, strict);
  } catch (const singular_curve_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const conformance_violation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
