// Command line front end: every library operation behind one binary with
// JSON input and output, deterministic seeding, and three exit families
// (0 success, 1 parse or I/O trouble, 2 violated mathematical preconditions).

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "projray/components.hpp"
#include "projray/continuity.hpp"
#include "projray/covariance.hpp"
#include "projray/json_io.hpp"
#include "projray/projective.hpp"
#include "projray/rng.hpp"
#include "projray/separation.hpp"

using namespace projray;
using jsonio::Json;

namespace {

bool verbose_logging() {
  const char* env = std::getenv("PROJRAY_LOG");
  return env != nullptr && *env != '\0' && std::string(env) != "0";
}

void log_line(const std::string& msg) {
  if (verbose_logging()) std::cerr << "projray: " << msg << "\n";
}

struct Options {
  std::string input_path;
  std::string output_path;
  std::uint64_t seed = 0;
  double tol_orth = 1e-10;
  int trials = 100;
  int dims = 8;
};

void emit(const Options& opts, const Json& report) {
  if (opts.output_path.empty()) {
    std::cout << jsonio::dump_deterministic(report);
  } else {
    jsonio::write_file(opts.output_path, report);
    log_line("wrote " + opts.output_path);
  }
}

Json load_input(const Options& opts) {
  if (opts.input_path.empty()) {
    throw jsonio::ParseError("this command requires --input FILE");
  }
  return jsonio::parse_file(opts.input_path);
}

const Json& field(const Json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) {
    throw jsonio::ParseError("missing required field \"" + key + "\"");
  }
  return j.at(key);
}

Ray ray_field(const Json& j, const std::string& key) {
  return Ray(jsonio::vector_from_json(field(j, key), key));
}

std::vector<Matrix> matrix_list(const Json& j, const std::string& key) {
  const Json& arr = field(j, key);
  if (!arr.is_array() || arr.empty()) {
    throw jsonio::ParseError("field \"" + key +
                             "\" must be a non-empty array of matrices");
  }
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(
        jsonio::matrix_from_json(arr[i], key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

// ---------------------------------------------------------------- commands

Json run_metric(const Options& opts) {
  const Json in = load_input(opts);
  const Ray x = ray_field(in, "x");
  const Ray y = ray_field(in, "y");
  Json out;
  out["chordal"] = chordal_distance(x, y);
  out["riemannian"] = riemannian_distance(x, y);
  out["projector"] = projector_distance(x, y);
  out["overlap"] = std::abs(inner(x.rep(), y.rep()));
  return out;
}

Json run_midpoint(const Options& opts) {
  const Json in = load_input(opts);
  const Ray x = ray_field(in, "x");
  const Ray y = ray_field(in, "y");
  const Ray mid = midpoint(x, y, opts.tol_orth);
  Json out;
  out["midpoint"] = jsonio::vector_to_json(mid.rep());
  out["d_xy"] = riemannian_distance(x, y);
  out["d_xm"] = riemannian_distance(x, mid);
  out["d_my"] = riemannian_distance(mid, y);
  return out;
}

Json run_chain(const Options& opts) {
  const Json in = load_input(opts);
  const Ray x = ray_field(in, "x");
  const Ray y = ray_field(in, "y");
  const Json& depth_json = field(in, "depth");
  if (!depth_json.is_number_integer()) {
    throw jsonio::ParseError("field \"depth\" must be an integer");
  }
  const int depth = depth_json.get<int>();

  const std::vector<Ray> chain = dyadic_chain(x, y, depth, opts.tol_orth);
  const double total = riemannian_distance(x, y);
  const double expected_gap =
      total / static_cast<double>(std::size_t{1} << depth);

  double max_gap_error = 0.0;
  Json rays = Json::array();
  for (std::size_t k = 0; k < chain.size(); ++k) {
    rays.push_back(jsonio::vector_to_json(chain[k].rep()));
    if (k > 0) {
      const double gap = riemannian_distance(chain[k - 1], chain[k]);
      max_gap_error = std::max(max_gap_error, std::abs(gap - expected_gap));
    }
  }
  Json out;
  out["depth"] = depth;
  out["total_distance"] = total;
  out["expected_gap"] = expected_gap;
  out["max_gap_error"] = max_gap_error;
  out["rays"] = std::move(rays);
  return out;
}

Json run_section(const Options& opts) {
  const Json in = load_input(opts);
  const Matrix g = jsonio::matrix_from_json(field(in, "g"), "g");
  Vector v0;
  if (in.contains("v0")) {
    v0 = jsonio::vector_from_json(in.at("v0"), "v0");
  } else {
    v0 = Vector::Zero(g.rows());
    if (g.rows() > 0) v0(0) = 1.0;
  }
  const Matrix section = phase_normalized_section(g, v0);
  Json out;
  out["section"] = jsonio::matrix_to_json(section);
  out["base_overlap"] =
      jsonio::complex_to_json(inner(Vector(section * v0), v0));
  return out;
}

Frame frame_from_input(const Json& in) {
  const Json& arr = field(in, "frame");
  if (!arr.is_array()) {
    throw jsonio::ParseError("field \"frame\" must be an array of vectors");
  }
  std::vector<Vector> vs;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    vs.push_back(jsonio::vector_from_json(
        arr[i], "frame[" + std::to_string(i) + "]"));
  }
  return Frame(vs);
}

Json run_separation_test(const Options& opts) {
  const Json in = load_input(opts);
  const Frame frame = frame_from_input(in);
  const int rank = projector_span_rank(frame);
  const int full = static_cast<int>(frame.dim() * frame.dim());
  Json out;
  out["rank"] = rank;
  out["full_rank"] = full;
  out["separates_ball"] = rank == full;
  return out;
}

std::string status_string(SeparationStatus status) {
  switch (status) {
    case SeparationStatus::Separates:
      return "separates";
    case SeparationStatus::WitnessFound:
      return "witness_found";
    case SeparationStatus::CertificateOnly:
      return "certificate_only";
    case SeparationStatus::NoIndefiniteElement:
      return "no_indefinite_element";
  }
  return "unknown";
}

Json run_counterexample(const Options& opts) {
  const Json in = load_input(opts);
  const Frame frame = frame_from_input(in);
  const SeparationReport report = find_unresolved_pair(frame, opts.seed);

  Json out;
  out["rank"] = report.projector_rank;
  out["full_rank"] = report.full_rank;
  out["separates_ball"] = report.separates;
  out["status"] = status_string(report.status);
  if (report.witness.has_value()) {
    Json w;
    w["w1"] = jsonio::vector_to_json(report.witness->w1.rep());
    w["w2"] = jsonio::vector_to_json(report.witness->w2.rep());
    w["max_h_gap"] = report.witness->max_h_gap;
    w["ray_distance"] =
        riemannian_distance(report.witness->w1.ray(), report.witness->w2.ray());
    out["witness"] = std::move(w);
  }
  if (report.certificate.has_value()) {
    out["certificate"] = jsonio::matrix_to_json(*report.certificate);
    out["certificate_residual"] = report.certificate_residual;
  }
  return out;
}

Json run_components(const Options& opts) {
  const Json in = load_input(opts);
  const Json& arr = field(in, "rays");
  if (!arr.is_array()) {
    throw jsonio::ParseError("field \"rays\" must be an array of vectors");
  }
  std::vector<Ray> rays;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    rays.emplace_back(jsonio::vector_from_json(
        arr[i], "rays[" + std::to_string(i) + "]"));
  }

  const ComponentDecomposition dec =
      indecomposable_components(rays, opts.tol_orth);
  Json comps = Json::array();
  for (const Component& c : dec.components) {
    Json one;
    one["indices"] = c.indices;
    one["dimension"] = static_cast<int>(c.basis.cols());
    one["basis"] = jsonio::matrix_to_json(c.basis);
    comps.push_back(std::move(one));
  }
  Json out;
  out["count"] = static_cast<int>(dec.components.size());
  out["indecomposable"] = dec.components.size() == 1;
  out["min_coupling"] = dec.min_coupling;
  out["cross_residual"] = dec.cross_residual;
  out["components"] = std::move(comps);
  return out;
}

Json run_ba_split(const Options& opts) {
  const Json in = load_input(opts);
  const Matrix h = jsonio::matrix_from_json(field(in, "hamiltonian"),
                                            "hamiltonian");
  const MatrixAlgebra algebra =
      MatrixAlgebra::from_span(matrix_list(in, "algebra"));
  const SplitResult split = borchers_arveson_split(h, algebra);

  double commutation = 0.0;
  for (const Matrix& b : algebra.basis()) {
    commutation =
        std::max(commutation, commutator(split.commutant_part, b).norm());
  }
  Json out;
  out["inner_part"] = jsonio::matrix_to_json(split.inner_part);
  out["commutant_part"] = jsonio::matrix_to_json(split.commutant_part);
  out["mu0"] = split.mu0;
  Json residuals;
  residuals["membership"] = algebra.membership_residual(split.inner_part);
  residuals["commutation"] = commutation;
  residuals["reconstruction"] =
      (split.inner_part + split.commutant_part - h).norm();
  out["residuals"] = std::move(residuals);
  return out;
}

Json run_min_energy(const Options& opts) {
  const Json in = load_input(opts);
  const Matrix h = jsonio::matrix_from_json(field(in, "hamiltonian"),
                                            "hamiltonian");
  const EnergyShift shift = minimal_energy_shift(h);
  Json out;
  out["mu0"] = shift.mu0;
  out["shifted"] = jsonio::matrix_to_json(shift.shifted);
  out["min_eigenvalue_after"] =
      hermitian_eigen(shift.shifted).eigenvalues(0);
  return out;
}

Json run_commutant(const Options& opts) {
  const Json in = load_input(opts);
  const std::vector<Matrix> ops = matrix_list(in, "operators");
  const Eigen::Index n = ops.front().rows();
  const MatrixAlgebra comm = commutant_of_set(ops, n);
  const MatrixAlgebra generated = generate_star_algebra(ops, n);

  Json basis = Json::array();
  for (const Matrix& b : comm.basis()) {
    basis.push_back(jsonio::matrix_to_json(b));
  }
  Json out;
  out["dimension"] = comm.dim();
  out["generated_dimension"] = generated.dim();
  out["double_commutant_dimension"] = double_commutant(generated).dim();
  out["irreducible"] = comm.dim() == 1;
  out["basis"] = std::move(basis);
  return out;
}

Json run_descent_check(const Options& opts) {
  const Json in = load_input(opts);
  CovariantPair pair;
  pair.generators = matrix_list(in, "generators");
  pair.hamiltonian = jsonio::matrix_from_json(field(in, "hamiltonian"),
                                              "hamiltonian");
  const DescentReport report = irreducibility_descent_check(pair);
  Json out;
  out["joint_commutant_dim"] = report.joint_commutant_dim;
  out["algebra_commutant_dim"] = report.algebra_commutant_dim;
  out["joint_irreducible"] = report.joint_irreducible;
  out["restricted_irreducible"] = report.restricted_irreducible;
  out["implication_holds"] = report.implication_holds;
  return out;
}

Json run_rigidity_check(const Options& opts) {
  const Json in = load_input(opts);
  const Matrix x = jsonio::matrix_from_json(field(in, "x"), "x");
  const Matrix y = jsonio::matrix_from_json(field(in, "y"), "y");
  const RigidityReport report = spectral_rigidity_check(x, y);
  Json out;
  out["commutator_norm"] = report.commutator_norm;
  out["hypothesis_residual"] = report.hypothesis_residual;
  out["certified_bound"] = report.certified_bound;
  out["trace_certificate"] = report.trace_certificate;
  out["commutes"] = report.commutes;
  return out;
}

BlockRepresentation representation_from_input(const Json& in) {
  const Json& arr = field(in, "blocks");
  if (!arr.is_array() || arr.empty()) {
    throw jsonio::ParseError("field \"blocks\" must be a non-empty array");
  }
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const Json& bj = arr[i];
    const std::string where = "blocks[" + std::to_string(i) + "]";
    if (!bj.is_object()) {
      throw jsonio::ParseError(where + " must be an object");
    }
    Block b;
    const Json& dim = field(bj, "dim");
    if (!dim.is_number_integer()) {
      throw jsonio::ParseError(where + ".dim must be an integer");
    }
    b.dim = dim.get<int>();
    const std::string mode = field(bj, "mode").get<std::string>();
    if (mode == "continuous") {
      b.mode = BlockMode::Continuous;
    } else if (mode == "twisted") {
      b.mode = BlockMode::Twisted;
    } else {
      throw jsonio::ParseError(where +
                               ".mode must be \"continuous\" or \"twisted\"");
    }
    // the rate in turns; "theta" and "character" are accepted aliases for
    // the continuous and twisted flavors respectively
    const char* keys[] = {"rate", "theta", "character"};
    bool found = false;
    for (const char* key : keys) {
      if (bj.contains(key)) {
        b.rate = jsonio::rational_from_json(bj.at(key), where);
        found = true;
        break;
      }
    }
    if (!found) {
      throw jsonio::ParseError(where + " needs a \"rate\" field");
    }
    blocks.push_back(std::move(b));
  }
  return BlockRepresentation(std::move(blocks));
}

std::string verdict_string(ProbeVerdict v) {
  return v == ProbeVerdict::DiscontinuityWitness ? "discontinuity_witness"
                                                 : "continuous_at_zero";
}

Json run_continuity_probe(const Options& opts) {
  const Json in = load_input(opts);
  const BlockRepresentation rep = representation_from_input(in);
  const Ray state = ray_field(in, "ray");

  int length = 24;
  Rational scale(1, 2);
  if (in.contains("sequence")) {
    const Json& sj = in.at("sequence");
    if (sj.contains("length")) {
      if (!sj.at("length").is_number_integer()) {
        throw jsonio::ParseError("sequence.length must be an integer");
      }
      length = sj.at("length").get<int>();
    }
    if (sj.contains("scale")) {
      scale = jsonio::rational_from_json(sj.at("scale"), "sequence.scale");
    }
  }

  const std::vector<NullSequence> sequences{
      adversarial_null_sequence(length, scale), tame_null_sequence(length)};
  const std::vector<ProbeResult> probes =
      orbit_continuity_probe(rep, state, sequences);

  Json comps = Json::array();
  for (const ContinuousComponent& c : continuous_ray_components(rep)) {
    Json one;
    one["character"] = jsonio::rational_to_json(c.character);
    one["blocks"] = c.blocks;
    one["coordinates"] = c.coordinates;
    comps.push_back(std::move(one));
  }

  Json probe_json = Json::array();
  for (const ProbeResult& p : probes) {
    Json one;
    one["label"] = p.sequence_label;
    one["verdict"] = verdict_string(p.verdict);
    one["sup_tail_gap"] = p.sup_tail_gap;
    one["gaps"] = p.gaps;
    probe_json.push_back(std::move(one));
  }

  Json out;
  out["components"] = std::move(comps);
  const std::optional<int> home = component_of_ray(rep, state);
  out["ray_component"] = home.has_value() ? Json(*home) : Json(nullptr);
  out["probes"] = std::move(probe_json);
  return out;
}

// Randomized property sweeps, one tally per suite.  Per-trial generators are
// forked from the master seed, so tallies are reproducible byte for byte.
Json run_sweep(const Options& opts) {
  if (opts.trials < 1) {
    throw PreconditionError("invalid_length", "trials must be positive",
                            {{"trials", static_cast<double>(opts.trials)}});
  }
  if (opts.dims < 2 || opts.dims > 12) {
    throw PreconditionError("invalid_length",
                            "sweep dimensions must lie between 2 and 12",
                            {{"dims", static_cast<double>(opts.dims)}});
  }
  Rng master(opts.seed);
  const int trials = opts.trials;

  // irreducibility descent over random covariant instances; roughly forty
  // percent single-block algebras so the joint-irreducible (non-vacuous)
  // case shows up in force
  int descent_held = 0;
  int descent_joint_irreducible = 0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = master.fork(static_cast<std::uint64_t>(trial));
    std::vector<BlockSpec> blocks;
    if (rng.below(5) < 2) {
      blocks.push_back({2 + static_cast<int>(rng.below(
                                static_cast<std::uint64_t>(opts.dims - 1))),
                        1});
    } else {
      int budget = opts.dims;
      while (budget >= 2 && blocks.size() < 3) {
        const int d = 1 + static_cast<int>(rng.below(2));
        const int m = 1 + static_cast<int>(rng.below(2));
        if (d * m > budget) break;
        blocks.push_back({d, m});
        budget -= d * m;
      }
      if (blocks.empty()) blocks.push_back({2, 1});
    }
    const CovariantInstance inst = random_covariant_instance(rng, blocks);
    CovariantPair pair;
    pair.generators = inst.generators;
    pair.hamiltonian = inst.hamiltonian;
    const DescentReport report = irreducibility_descent_check(pair);
    if (report.implication_holds) ++descent_held;
    if (report.joint_irreducible) ++descent_joint_irreducible;
  }

  // spectral rigidity on exactly-commuting pairs
  int rigidity_commuting = 0;
  int rigidity_bound_ok = 0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = master.fork(0x10000u + static_cast<std::uint64_t>(trial));
    const Eigen::Index n =
        2 + static_cast<Eigen::Index>(rng.below(
                static_cast<std::uint64_t>(opts.dims - 1)));
    const auto [x, y] = random_commuting_pair(rng, n);
    const RigidityReport report = spectral_rigidity_check(x, y);
    if (report.commutes) ++rigidity_commuting;
    const double lhs = report.commutator_norm * report.commutator_norm;
    if (lhs <= report.certified_bound * report.certified_bound + 1e-9) {
      ++rigidity_bound_ok;
    }
  }

  // separation witnesses on random deficient frames in dimensions 2 and 3
  int witness_found = 0;
  int witness_valid = 0;
  int certificate_only = 0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = master.fork(0x20000u + static_cast<std::uint64_t>(trial));
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.below(2));
    const std::size_t count = static_cast<std::size_t>(n * n) - 1;
    std::vector<Vector> vs;
    for (std::size_t j = 0; j < count; ++j) {
      vs.push_back(rng.gaussian_vector(n));
    }
    const SeparationReport report =
        find_unresolved_pair(Frame(vs), rng.fork(1).below(1u << 30));
    if (report.status == SeparationStatus::WitnessFound) {
      ++witness_found;
      const UnresolvedPair& w = *report.witness;
      const bool gap_ok = w.max_h_gap < 1e-9;
      const bool distinct =
          riemannian_distance(w.w1.ray(), w.w2.ray()) > 1e-6;
      if (gap_ok && distinct) ++witness_valid;
    } else if (report.status == SeparationStatus::CertificateOnly) {
      ++certificate_only;
    }
  }

  Json out;
  out["seed"] = opts.seed;
  out["trials"] = trials;
  Json descent;
  descent["implications_held"] = descent_held;
  descent["joint_irreducible"] = descent_joint_irreducible;
  descent["violations"] = trials - descent_held;
  out["descent"] = std::move(descent);
  Json rigidity;
  rigidity["commuting_detected"] = rigidity_commuting;
  rigidity["bound_satisfied"] = rigidity_bound_ok;
  out["rigidity"] = std::move(rigidity);
  Json witness;
  witness["witness_found"] = witness_found;
  witness["witness_valid"] = witness_valid;
  witness["certificate_only"] = certificate_only;
  out["witness"] = std::move(witness);
  out["all_passed"] = descent_held == trials && rigidity_commuting == trials &&
                      rigidity_bound_ok == trials &&
                      witness_valid == witness_found && witness_found > 0;
  return out;
}

Json precondition_error_json(const PreconditionError& e) {
  Json out;
  out["code"] = e.code();
  out["message"] = e.what();
  Json context = Json::object();
  for (const auto& [key, value] : e.context()) {
    context[key] = value;
  }
  out["context"] = std::move(context);
  return out;
}

Json parse_error_json(const std::string& message) {
  Json out;
  out["code"] = "parse_error";
  out["message"] = message;
  out["context"] = Json::object();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"projective ray geometry and operator algebra toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opts;
  app.add_option("--input", opts.input_path, "input JSON file");
  app.add_option("--output", opts.output_path,
                 "output JSON file (stdout when omitted)");
  app.add_option("--seed", opts.seed, "deterministic random seed");
  app.add_option("--tol-orth", opts.tol_orth, "orthogonality tolerance");
  app.add_option("--trials", opts.trials, "trial count for sweep");
  app.add_option("--dims", opts.dims, "dimension cap for sweep");

  struct Command {
    const char* name;
    const char* help;
    Json (*run)(const Options&);
  };
  const Command commands[] = {
      {"metric", "distances between two rays", run_metric},
      {"midpoint", "geodesic midpoint of two rays", run_midpoint},
      {"chain", "dyadic geodesic subdivision", run_chain},
      {"section", "phase-normalized unitary section", run_section},
      {"separation-test", "projector span rank of a frame",
       run_separation_test},
      {"counterexample", "unresolved pair search for a frame",
       run_counterexample},
      {"components", "indecomposable components of a ray family",
       run_components},
      {"ba-split", "split a flow generator across algebra and commutant",
       run_ba_split},
      {"min-energy", "ground the spectrum of a hermitian generator",
       run_min_energy},
      {"commutant", "commutant and generated algebra of an operator set",
       run_commutant},
      {"descent-check", "irreducibility descent for a covariant pair",
       run_descent_check},
      {"rigidity-check", "double-commutator control of a commutator",
       run_rigidity_check},
      {"continuity-probe", "orbit continuity of a block representation",
       run_continuity_probe},
      {"sweep", "randomized property sweeps with tallies", run_sweep},
  };
  for (const Command& command : commands) {
    app.add_subcommand(command.name, command.help);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const std::string chosen = app.get_subcommands().front()->get_name();
  log_line("running " + chosen);

  const auto emit_or_complain = [&](const Json& j) {
    try {
      emit(opts, j);
    } catch (const std::exception& e) {
      std::cerr << "projray: cannot write report: " << e.what() << "\n";
    }
  };

  for (const Command& command : commands) {
    if (chosen != command.name) continue;
    try {
      emit(opts, command.run(opts));
      return 0;
    } catch (const PreconditionError& e) {
      emit_or_complain(precondition_error_json(e));
      log_line(std::string("precondition violated: ") + e.what());
      return 2;
    } catch (const jsonio::ParseError& e) {
      emit_or_complain(parse_error_json(e.what()));
      log_line(std::string("parse error: ") + e.what());
      return 1;
    }
  }
  std::cerr << "unknown command " << chosen << "\n";
  return 1;
}
