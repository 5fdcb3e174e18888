#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "projray/json_io.hpp"

using namespace projray;
using jsonio::Json;

namespace {

struct RunResult {
  int exit_code = -1;
  Json output;
  bool has_output = false;
};

int run_count = 0;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Drives the installed binary exactly the way a user would: input file,
// output file, flags, exit code.
RunResult run_cli(const std::string& command_and_flags, const Json& input,
                  bool with_input = true) {
  const std::string tag = "cli_case_" + std::to_string(run_count++);
  const std::string in_path = tag + "_in.json";
  const std::string out_path = tag + "_out.json";

  std::string cmd = std::string(PROJRAY_CLI_PATH) + " " + command_and_flags +
                    " --output " + out_path;
  if (with_input) {
    jsonio::write_file(in_path, input);
    cmd += " --input " + in_path;
  }
  cmd += " > /dev/null 2>&1";

  RunResult result;
  const int raw = std::system(cmd.c_str());
  result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream probe(out_path);
  if (probe.good()) {
    result.output = jsonio::parse_file(out_path);
    result.has_output = true;
  }
  std::remove(in_path.c_str());
  std::remove(out_path.c_str());
  return result;
}

Json vec_json(std::initializer_list<Complex> entries) {
  Vector v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (const Complex& c : entries) v(i++) = c;
  return jsonio::vector_to_json(v);
}

constexpr double kInvSqrt2 = 0.70710678118654752;

}  // namespace

TEST_CASE("metric on orthogonal rays gives the three classical values") {
  Json in;
  in["x"] = vec_json({1.0, 0.0});
  in["y"] = vec_json({0.0, 1.0});
  const RunResult r = run_cli("metric", in);
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.has_output);
  CHECK(r.output["chordal"].get<double>() ==
        doctest::Approx(1.41421356).epsilon(1e-8));
  CHECK(r.output["riemannian"].get<double>() ==
        doctest::Approx(1.57079632).epsilon(1e-8));
  CHECK(r.output["projector"].get<double>() ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("midpoint halves the distance and rejects orthogonal inputs") {
  Json in;
  in["x"] = vec_json({1.0, 0.0});
  in["y"] = vec_json({kInvSqrt2, kInvSqrt2});
  const RunResult r = run_cli("midpoint", in);
  REQUIRE(r.exit_code == 0);
  const double d_xy = r.output["d_xy"].get<double>();
  CHECK(r.output["d_xm"].get<double>() ==
        doctest::Approx(d_xy / 2.0).epsilon(1e-9));
  CHECK(r.output["d_my"].get<double>() ==
        doctest::Approx(d_xy / 2.0).epsilon(1e-9));

  Json orth;
  orth["x"] = vec_json({1.0, 0.0});
  orth["y"] = vec_json({0.0, 1.0});
  const RunResult bad = run_cli("midpoint", orth);
  CHECK(bad.exit_code == 2);
  REQUIRE(bad.has_output);
  CHECK(bad.output["code"] == Json("orthogonal_midpoint"));
  CHECK(bad.output["context"].contains("overlap"));
}

TEST_CASE("chain emits the full dyadic subdivision") {
  Json in;
  in["x"] = vec_json({1.0, 0.0});
  in["y"] = vec_json({kInvSqrt2, kInvSqrt2});
  in["depth"] = 3;
  const RunResult r = run_cli("chain", in);
  REQUIRE(r.exit_code == 0);
  CHECK(r.output["rays"].size() == 9);
  CHECK(r.output["max_gap_error"].get<double>() <= 1e-8);

  in["depth"] = 40;
  CHECK(run_cli("chain", in).exit_code == 2);
}

TEST_CASE("section fixes the phase against the base vector") {
  // g = diag(e^{i pi/3}, 1); the section rotates the first entry real
  const Complex w = std::polar(1.0, M_PI / 3.0);
  Json in;
  Json g = Json::array();
  g.push_back(Json::array({jsonio::complex_to_json(w),
                           jsonio::complex_to_json(0.0)}));
  g.push_back(Json::array({jsonio::complex_to_json(0.0),
                           jsonio::complex_to_json(1.0)}));
  in["g"] = g;
  const RunResult r = run_cli("section", in);
  REQUIRE(r.exit_code == 0);
  const Matrix section =
      jsonio::matrix_from_json(r.output["section"], "section");
  Matrix expected(2, 2);
  expected << 1.0, 0.0, 0.0, std::polar(1.0, -M_PI / 3.0);
  CHECK((section - expected).norm() <= 1e-12);
}

TEST_CASE("separation-test reports the spanning frame as separating") {
  Json in;
  in["frame"] = Json::array({vec_json({1.0, 0.0}), vec_json({0.0, 1.0}),
                             vec_json({kInvSqrt2, kInvSqrt2}),
                             vec_json({kInvSqrt2, Complex(0.0, kInvSqrt2)})});
  const RunResult r = run_cli("separation-test", in);
  REQUIRE(r.exit_code == 0);
  CHECK(r.output["rank"] == Json(4));
  CHECK(r.output["separates_ball"] == Json(true));
}

TEST_CASE("counterexample produces a verified witness for the 3-vector frame") {
  Json in;
  in["frame"] = Json::array({vec_json({1.0, 0.0}), vec_json({0.0, 1.0}),
                             vec_json({kInvSqrt2, kInvSqrt2})});
  const RunResult r = run_cli("counterexample --seed 11", in);
  REQUIRE(r.exit_code == 0);
  CHECK(r.output["status"] == Json("witness_found"));
  REQUIRE(r.output.contains("witness"));
  CHECK(r.output["witness"]["max_h_gap"].get<double>() <= 1e-9);
  CHECK(r.output["witness"]["ray_distance"].get<double>() > 1e-6);
  CHECK(r.output["certificate_residual"].get<double>() <= 1e-9);
}

TEST_CASE("components splits planted blocks and respects --tol-orth") {
  Json in;
  in["rays"] = Json::array(
      {vec_json({1.0, 0.0, 0.0}), vec_json({kInvSqrt2, kInvSqrt2, 0.0}),
       vec_json({0.0, 0.0, 1.0})});
  const RunResult r = run_cli("components", in);
  REQUIRE(r.exit_code == 0);
  CHECK(r.output["count"] == Json(2));
  CHECK(r.output["components"][0]["indices"] == Json::array({0, 1}));
  CHECK(r.output["components"][1]["indices"] == Json::array({2}));

  // a generous tolerance swallows the 1/sqrt(2) couplings too
  const RunResult loose = run_cli("components --tol-orth 0.9", in);
  REQUIRE(loose.exit_code == 0);
  CHECK(loose.output["count"] == Json(3));
}

TEST_CASE("ba-split resolves the two-block product example") {
  // algebra M2 x 1: H = diag(1,4,2,5) splits into diag(0,0,1,1) in the
  // algebra (ground level zero) plus diag(1,4,1,4) in the commutant
  Json algebra = Json::array();
  const auto unit4 = [](int i, int j) {
    Matrix m = Matrix::Zero(4, 4);
    m(i, j) = 1.0;
    m(i + 1, j + 1) = 1.0;
    return m;
  };
  algebra.push_back(jsonio::matrix_to_json(unit4(0, 0)));
  algebra.push_back(jsonio::matrix_to_json(unit4(0, 2)));
  algebra.push_back(jsonio::matrix_to_json(unit4(2, 0)));
  algebra.push_back(jsonio::matrix_to_json(unit4(2, 2)));

  Matrix h = Matrix::Zero(4, 4);
  h.diagonal() << 1.0, 4.0, 2.0, 5.0;

  Json in;
  in["hamiltonian"] = jsonio::matrix_to_json(h);
  in["algebra"] = algebra;
  const RunResult r = run_cli("ba-split", in);
  REQUIRE(r.exit_code == 0);

  CHECK(r.output["residuals"]["membership"].get<double>() <= 1e-9);
  CHECK(r.output["residuals"]["commutation"].get<double>() <= 1e-9);
  CHECK(r.output["residuals"]["reconstruction"].get<double>() <= 1e-9);

  const Matrix inner =
      jsonio::matrix_from_json(r.output["inner_part"], "inner");
  const Matrix commutant_part =
      jsonio::matrix_from_json(r.output["commutant_part"], "commutant");
  Matrix expected_inner = Matrix::Zero(4, 4);
  expected_inner.diagonal() << 0.0, 0.0, 1.0, 1.0;
  Matrix expected_comm = Matrix::Zero(4, 4);
  expected_comm.diagonal() << 1.0, 4.0, 1.0, 4.0;
  CHECK((inner - expected_inner).norm() <= 1e-9);
  CHECK((commutant_part - expected_comm).norm() <= 1e-9);
}

TEST_CASE("min-energy grounds the example spectrum") {
  Json in;
  Matrix h = Matrix::Zero(2, 2);
  h.diagonal() << 3.0, -2.0;
  in["hamiltonian"] = jsonio::matrix_to_json(h);
  const RunResult r = run_cli("min-energy", in);
  REQUIRE(r.exit_code == 0);
  CHECK(r.output["mu0"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.output["min_eigenvalue_after"].get<double>() ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("commutant of the two-block product algebra") {
  Json in;
  const auto unit4 = [](int i, int j) {
    Matrix m = Matrix::Zero(4, 4);
    m(i, j) = 1.0;
    m(i + 1, j + 1) = 1.0;
    return m;
  };
  in["operators"] = Json::array({jsonio::matrix_to_json(unit4(0, 2)),
                                 jsonio::matrix_to_json(unit4(2, 0))});
  const RunResult r = run_cli("commutant", in);
  REQUIRE(r.exit_code == 0);
  CHECK(r.output["dimension"] == Json(4));
  CHECK(r.output["generated_dimension"] == Json(4));
  CHECK(r.output["double_commutant_dimension"] == Json(4));
  CHECK(r.output["irreducible"] == Json(false));
  CHECK(r.output["basis"].size() == 4);
}

TEST_CASE("descent-check and rigidity-check run end to end") {
  Json in;
  Matrix shift = Matrix::Zero(2, 2);
  shift(0, 1) = 1.0;
  in["generators"] = Json::array({jsonio::matrix_to_json(shift)});
  Matrix h = Matrix::Zero(2, 2);
  h.diagonal() << 0.0, 1.0;
  in["hamiltonian"] = jsonio::matrix_to_json(h);
  const RunResult r = run_cli("descent-check", in);
  REQUIRE(r.exit_code == 0);
  CHECK(r.output["restricted_irreducible"] == Json(true));
  CHECK(r.output["implication_holds"] == Json(true));

  Json rig;
  Matrix x = Matrix::Zero(2, 2);
  x(0, 0) = Complex(0.0, 1.0);
  x(1, 1) = Complex(0.0, -2.0);
  rig["x"] = jsonio::matrix_to_json(x);
  rig["y"] = jsonio::matrix_to_json(x * x);
  const RunResult rr = run_cli("rigidity-check", rig);
  REQUIRE(rr.exit_code == 0);
  CHECK(rr.output["commutes"] == Json(true));
  CHECK(rr.output["commutator_norm"].get<double>() <= 1e-12);
}

TEST_CASE("continuity-probe flags the straddling ray of the mixed example") {
  Json blocks = Json::array();
  Json b1;
  b1["dim"] = 1;
  b1["mode"] = "continuous";
  b1["rate"] = 1;
  Json b2;
  b2["dim"] = 1;
  b2["mode"] = "twisted";
  b2["character"] = "1";
  blocks.push_back(b1);
  blocks.push_back(b2);

  Json in;
  in["blocks"] = blocks;
  in["ray"] = vec_json({kInvSqrt2, kInvSqrt2});
  in["sequence"]["length"] = 16;

  const RunResult r = run_cli("continuity-probe", in);
  REQUIRE(r.exit_code == 0);
  CHECK(r.output["components"].size() == 2);
  CHECK(r.output["ray_component"].is_null());
  REQUIRE(r.output["probes"].size() == 2);
  CHECK(r.output["probes"][0]["verdict"] == Json("discontinuity_witness"));
  CHECK(r.output["probes"][0]["sup_tail_gap"].get<double>() > 0.5);
  CHECK(r.output["probes"][1]["verdict"] == Json("continuous_at_zero"));

  // the same ray placed inside one block is continuous along both sequences
  in["ray"] = vec_json({1.0, 0.0});
  const RunResult pure = run_cli("continuity-probe", in);
  REQUIRE(pure.exit_code == 0);
  CHECK(pure.output["ray_component"] == Json(0));
  CHECK(pure.output["probes"][0]["verdict"] == Json("continuous_at_zero"));
}

TEST_CASE("sweep tallies pass on a small deterministic run") {
  const RunResult r = run_cli("sweep --trials 12 --dims 5 --seed 9", Json(),
                              /*with_input=*/false);
  REQUIRE(r.exit_code == 0);
  CHECK(r.output["all_passed"] == Json(true));
  CHECK(r.output["descent"]["violations"] == Json(0));
  CHECK(r.output["rigidity"]["commuting_detected"] == Json(12));
  CHECK(r.output["witness"]["witness_found"].get<int>() > 0);
}

TEST_CASE("identical config and seed give byte-identical reports") {
  Json in;
  in["frame"] = Json::array({vec_json({1.0, 0.0}), vec_json({0.0, 1.0}),
                             vec_json({kInvSqrt2, kInvSqrt2})});
  jsonio::write_file("cli_det_in.json", in);

  const std::string base = std::string(PROJRAY_CLI_PATH) +
                           " counterexample --seed 31 --input cli_det_in.json"
                           " --output ";
  REQUIRE(std::system((base + "cli_det_a.json").c_str()) == 0);
  REQUIRE(std::system((base + "cli_det_b.json").c_str()) == 0);
  CHECK(slurp("cli_det_a.json") == slurp("cli_det_b.json"));
  CHECK(!slurp("cli_det_a.json").empty());

  std::remove("cli_det_in.json");
  std::remove("cli_det_a.json");
  std::remove("cli_det_b.json");
}

TEST_CASE("malformed inputs exit through the parse family") {
  // missing required field
  Json in;
  in["x"] = vec_json({1.0, 0.0});
  CHECK(run_cli("metric", in).exit_code == 1);

  // missing input file entirely
  const RunResult no_input = run_cli("metric", Json(), /*with_input=*/false);
  CHECK(no_input.exit_code == 1);
  REQUIRE(no_input.has_output);
  CHECK(no_input.output["code"] == Json("parse_error"));

  // unknown subcommand is a usage error
  const int raw = std::system(
      (std::string(PROJRAY_CLI_PATH) + " frobnicate > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(raw) != 0);
}
