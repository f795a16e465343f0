// pncert: numerical-range and unitary-certification toolbox, command-line front end.
//
// Exit codes: 0 success, 2 input error, 3 numerical non-convergence.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pncert/io.hpp"

namespace {

using namespace pncert;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("PNCERT_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ParseError("PNCERT_SEED is not a valid unsigned integer: " +
                       std::string(env));
    }
  }
  return 0;
}

Split parse_split(const std::string& text, Eigen::Index dim) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ParseError("split must look like d1:d2, got: " + text);
  Eigen::Index d1 = 0, d2 = 0;
  try {
    d1 = std::stoll(text.substr(0, colon));
    d2 = std::stoll(text.substr(colon + 1));
  } catch (const std::exception&) {
    throw ParseError("split must look like d1:d2, got: " + text);
  }
  if (d1 < 1 || d2 < 1 || d1 * d2 != dim)
    throw ParseError("split " + text + " does not factor matrix dimension " +
                     std::to_string(dim));
  return {d1, d2};
}

/// All output is buffered and written in one go so a failed run never leaves
/// a partial file behind.
void emit(const std::string& out_path, const std::string& payload) {
  if (out_path.empty()) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw ParseError("cannot open output file: " + out_path);
  out << payload;
}

// ---------------------------------------------------------------- numrange

int cmd_numrange(const std::string& matrix_file, int angles,
                 const std::string& out_path) {
  Matrix x = read_matrix_file(matrix_file);
  if (x.rows() != x.cols()) throw ParseError("numrange: matrix must be square");
  NumRangePolygon poly = boundary(x, angles);
  NumRangeResult dist = dist_origin(x);
  json doc{{"command", "numrange"},
           {"angles", angles},
           {"polygon", polygon_to_json(poly)},
           {"distance", dist.distance},
           {"value", complex_to_json(dist.value)},
           {"achiever", vector_to_json(dist.achiever.amplitudes())},
           {"converged", dist.converged}};
  emit(out_path, doc.dump(2));
  std::cerr << "distance to origin: " << dist.distance << "\n";
  if (!dist.converged) throw NumericalFailure("numrange: angular search did not converge");
  return kExitOk;
}

// ----------------------------------------------------------------- pnr-min

int cmd_pnr_min(const std::string& matrix_file, const std::string& split_text,
                int restarts, std::uint64_t seed, const std::string& out_path) {
  Matrix x = read_matrix_file(matrix_file);
  if (x.rows() != x.cols()) throw ParseError("pnr-min: matrix must be square");
  Split split = parse_split(split_text, x.rows());
  SeesawOptions opts;
  opts.restarts = restarts;
  Rng rng(seed);
  PnrResult r = z_distance(x, split, rng, opts);
  double trace_bound = trace_upper_bound(x, split);
  json doc = pnr_result_to_json(r);
  doc["command"] = "pnr-min";
  doc["metadata"] = {{"seed", seed},
                     {"restarts", restarts},
                     {"split", {split.first, split.second}}};
  doc["trace_upper_bound"] = trace_bound;
  emit(out_path, doc.dump(2));
  std::cerr << "distance: " << r.distance << "   trace upper bound: " << trace_bound
            << "\n";
  if (!r.converged) throw NumericalFailure("pnr-min: seesaw did not converge");
  return kExitOk;
}

// ------------------------------------------------------------------ shadow

int cmd_shadow(const std::string& matrix_file, const std::string& family,
               Eigen::Index d, double alpha, const std::string& split_text,
               std::size_t n, std::uint64_t seed, const std::string& out_path) {
  Matrix x;
  Split split{0, 0};
  json family_meta;
  if (!family.empty()) {
    if (family != "t-alpha")
      throw ParseError("shadow: unknown family (available: t-alpha)");
    if (d < 2) throw ParseError("shadow: family t-alpha needs --d >= 2");
    if (alpha < 0.0 || alpha > 1.0) throw ParseError("shadow: alpha outside [0,1]");
    Rng urng = Rng(seed).substream(1);
    Rng vrng = Rng(seed).substream(2);
    UnitaryMatrix u = haar_unitary(d, urng);
    UnitaryMatrix v = haar_unitary(d, vrng);
    UnitaryMatrix t = t_alpha_family(u, v, alpha);
    x = t.matrix();
    split = {d, d};
    family_meta = {{"family", "t-alpha"}, {"d", d}, {"alpha", alpha},
                   {"component_seed_streams", {1, 2}}};
  } else {
    if (matrix_file.empty())
      throw ParseError("shadow: provide a matrix file or --family t-alpha");
    x = read_matrix_file(matrix_file);
    if (x.rows() != x.cols()) throw ParseError("shadow: matrix must be square");
    split = parse_split(split_text, x.rows());
  }
  Rng rng = Rng(seed).substream(0);
  ShadowSampleSet samples = shadow_sample(x, split, n, rng);
  std::ostringstream csv;
  write_shadow_csv(csv, samples);
  emit(out_path, csv.str());

  json meta{{"command", "shadow"},
            {"seed", seed},
            {"n", n},
            {"split", {split.first, split.second}}};
  if (!family_meta.is_null()) meta["family"] = family_meta;
  if (out_path.empty()) {
    std::cerr << meta.dump(2) << "\n";
  } else {
    std::ofstream side(out_path + ".meta.json", std::ios::trunc);
    if (!side) throw ParseError("cannot open sidecar file: " + out_path + ".meta.json");
    side << meta.dump(2) << "\n";
  }
  return kExitOk;
}

// ----------------------------------------------------------------- certify

int cmd_certify(const std::string& u_file, const std::string& v_file, double delta,
                const std::string& mode, const std::string& split_text,
                std::size_t simulate_shots, std::uint64_t seed,
                const std::string& out_path) {
  Matrix um = read_matrix_file(u_file);
  Matrix vm = read_matrix_file(v_file);
  if (um.rows() != vm.rows() || um.cols() != vm.cols())
    throw ParseError("certify: U and V dimensions differ");
  if (um.rows() != um.cols()) throw ParseError("certify: matrices must be square");
  std::optional<Split> split;
  if (!split_text.empty()) split = parse_split(split_text, um.rows());
  if (mode == "local" && !split)
    throw ParseError("certify: local mode needs --split d1:d2");
  if (simulate_shots > 0 && mode != "local")
    throw ParseError("certify: --simulate needs --mode local");

  json doc{{"command", "certify"},
           {"delta", delta},
           {"metadata", {{"seed", seed}}}};
  try {
    CertificationProblem problem(
        split ? UnitaryMatrix(um, *split) : UnitaryMatrix(um),
        split ? UnitaryMatrix(vm, *split) : UnitaryMatrix(vm), delta);
    CertificationPlan plan = mode == "local"
                                 ? [&] {
                                     Rng rng = Rng(seed).substream(0);
                                     return certify_local(problem, rng);
                                   }()
                                 : certify_global(problem);
    doc["plan"] = plan_to_json(plan);
    if (simulate_shots > 0) {
      if (!plan.omega_perp)
        throw NumericalFailure("certify: plan lacks a reject direction");
      Rng prng = Rng(seed).substream(1);
      OneWayProtocol proto =
          one_way_protocol(plan.omega, *plan.omega_perp, *split, prng);
      doc["protocol"] = {{"residual", proto.residual},
                         {"alice_basis", json::array()}};
      for (const PureState& a : proto.alice_basis)
        doc["protocol"]["alice_basis"].push_back(vector_to_json(a.amplitudes()));
      Rng srng = Rng(seed).substream(2);
      ProtocolTranscript t = simulate_protocol(problem, plan, proto,
                                               simulate_shots, srng);
      doc["transcript"] = transcript_to_json(t);
    }
    emit(out_path, doc.dump(2));
    std::cerr << (mode == "local" ? "z" : "v") << " = " << plan.z_or_v
              << "   predicted p2 = " << plan.p2_predicted << "\n";
    if (!plan.converged)
      throw NumericalFailure("certify: optimizer did not converge");
  } catch (const ProtocolSearchError& e) {
    throw NumericalFailure(std::string(e.what()) + " (best residual " +
                           std::to_string(e.best_residual()) + ")");
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return kExitOk;
}

// -------------------------------------------------------------- haar-study

int cmd_haar_study(Eigen::Index d1, Eigen::Index d2, std::size_t trials,
                   std::uint64_t seed, const std::string& out_path) {
  if (trials < 1) throw ParseError("haar-study: trials must be >= 1");
  if (d1 < 1 || d2 < 1) throw ParseError("haar-study: dimensions must be >= 1");
  Rng rng(seed);
  ZeroFractionStudy study = zero_fraction_study(d1, d2, trials, rng);
  std::size_t zeros = 0;
  for (double v : study.per_trial)
    if (v <= 1e-6) ++zeros;
  auto [lo, hi] = wilson_interval(zeros, trials);
  double theory = std::exp(-(std::log(2.0) / 2.0) *
                           static_cast<double>(std::max(d1 * d1, d2 * d2)));
  json doc{{"command", "haar-study"},
           {"metadata", {{"seed", seed}}},
           {"d1", d1},
           {"d2", d2},
           {"trials", trials},
           {"fraction_nonzero_z", 1.0 - study.fraction},
           {"fraction_zero_z", study.fraction},
           {"fraction_zero_wilson95", {lo, hi}},
           {"reference_nonzero_probability_bound", theory},
           {"per_trial_z", study.per_trial}};
  emit(out_path, doc.dump(2));
  std::cerr << "zero fraction: " << study.fraction << "  (Wilson 95%: [" << lo << ", "
            << hi << "]); reference bound on nonzero probability: " << theory << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- examples

int cmd_examples(const std::string& name) {
  const double tol = 1e-6;
  bool all_ok = true;
  auto report = [&](const std::string& label, double expected, double computed) {
    bool ok = std::abs(expected - computed) <= tol;
    all_ok = all_ok && ok;
    std::cout << label << ": expected " << expected << ", computed " << computed
              << "  [" << (ok ? "pass" : "FAIL") << "]\n";
  };

  if (name == "reflection") {
    for (Eigen::Index d = 2; d <= 5; ++d) {
      Rng rng(1000 + static_cast<std::uint64_t>(d));
      PnrResult r = z_distance(reflection_example(d).matrix(), {d, d}, rng);
      report("z(reflection, d=" + std::to_string(d) + ")",
             static_cast<double>(d - 2) / static_cast<double>(d), r.distance);
    }
  } else if (name == "product-ii") {
    Matrix u1 = Matrix::Zero(2, 2);
    u1(0, 0) = 1.0;
    u1(1, 1) = Complex(0.0, 1.0);
    Matrix u = kron(u1, u1);
    report("v(U1 (x) U2)", 0.0, dist_origin(u).distance);
    Rng rng(2000);
    report("z(U1 (x) U2)", 0.5, z_distance(u, {2, 2}, rng).distance);
  } else if (name == "diagonal-quadruple") {
    Matrix d = Matrix::Zero(4, 4);
    d(0, 0) = 1.0;
    d(1, 1) = Complex(0.0, 1.0);
    d(2, 2) = Complex(0.0, 1.0);
    d(3, 3) = -1.0;
    report("z(diag(1,i,i,-1)) via quadruples", 0.5, z_diagonal_quadruples(d, {2, 2}));
    Rng rng(3000);
    report("z(diag(1,i,i,-1)) via seesaw", 0.5, z_distance(d, {2, 2}, rng).distance);
  } else if (name == "trace-bound") {
    Rng rng(4000);
    std::size_t violations = 0;
    for (int t = 0; t < 20; ++t) {
      Rng sub = rng.substream(t);
      Matrix u = haar_unitary(4, sub).matrix();
      Rng seesaw = sub.substream(1);
      PnrResult r = z_distance(u, {2, 2}, seesaw);
      if (r.distance > trace_upper_bound(u, {2, 2}) + 1e-9) ++violations;
    }
    report("trace-bound violations over 20 Haar draws", 0.0,
           static_cast<double>(violations));
  } else {
    std::cerr << "unknown example '" << name
              << "'; available: reflection, product-ii, diagonal-quadruple, "
                 "trace-bound\n";
    return kExitInput;
  }
  return all_ok ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical-range and unitary-certification toolbox"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  try {
    seed = default_seed();
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  // numrange
  std::string nr_matrix, nr_out;
  int nr_angles = 256;
  CLI::App* numrange = app.add_subcommand("numrange", "numerical-range boundary and distance to origin");
  numrange->add_option("matrix", nr_matrix, "matrix JSON file")->required();
  numrange->add_option("--angles", nr_angles, "support directions")->check(CLI::Range(16, 1 << 20));
  numrange->add_option("--out", nr_out, "output JSON path (default: stdout)");

  // pnr-min
  std::string pm_matrix, pm_split, pm_out;
  int pm_restarts = 20;
  CLI::App* pnr_min = app.add_subcommand("pnr-min", "minimum modulus over the product numerical range");
  pnr_min->add_option("matrix", pm_matrix, "matrix JSON file")->required();
  pnr_min->add_option("--split", pm_split, "tensor split d1:d2")->required();
  pnr_min->add_option("--restarts", pm_restarts, "seesaw restarts")->check(CLI::PositiveNumber);
  pnr_min->add_option("--seed", seed, "RNG seed");
  pnr_min->add_option("--out", pm_out, "output JSON path (default: stdout)");

  // shadow
  std::string sh_matrix, sh_family, sh_split, sh_out;
  Eigen::Index sh_d = 0;
  double sh_alpha = 0.0;
  std::size_t sh_n = 10000;
  CLI::App* shadow = app.add_subcommand("shadow", "Monte Carlo product-state expectation samples");
  shadow->add_option("matrix", sh_matrix, "matrix JSON file (omit with --family)");
  shadow->add_option("--family", sh_family, "built-in family (t-alpha)");
  shadow->add_option("--d", sh_d, "local dimension for the built-in family");
  shadow->add_option("--alpha", sh_alpha, "interpolation parameter in [0,1]");
  shadow->add_option("--split", sh_split, "tensor split d1:d2 (matrix input)");
  shadow->add_option("--n", sh_n, "number of samples");
  shadow->add_option("--seed", seed, "RNG seed");
  shadow->add_option("--out", sh_out, "output CSV path (default: stdout)");

  // certify
  std::string cf_u, cf_v, cf_mode = "local", cf_split, cf_out;
  double cf_delta = 0.0;
  std::size_t cf_shots = 0;
  CLI::App* certify = app.add_subcommand("certify", "optimal certification strategy for U vs V");
  certify->add_option("U", cf_u, "hypothesis U matrix JSON")->required();
  certify->add_option("V", cf_v, "alternative V matrix JSON")->required();
  certify->add_option("--delta", cf_delta, "significance level")->check(CLI::Range(0.0, 1.0));
  certify->add_option("--mode", cf_mode, "local or global")->check(CLI::IsMember({"local", "global"}));
  certify->add_option("--split", cf_split, "tensor split d1:d2");
  certify->add_option("--simulate", cf_shots, "Monte Carlo shots for the one-way protocol");
  certify->add_option("--seed", seed, "RNG seed");
  certify->add_option("--out", cf_out, "output JSON path (default: stdout)");

  // haar-study
  Eigen::Index hs_d1 = 2, hs_d2 = 2;
  std::size_t hs_trials = 100;
  std::string hs_out;
  CLI::App* haar_study = app.add_subcommand("haar-study", "zero fraction of z over Haar-random unitaries");
  haar_study->add_option("--d1", hs_d1, "Alice dimension");
  haar_study->add_option("--d2", hs_d2, "Bob dimension");
  haar_study->add_option("--trials", hs_trials, "number of Haar draws");
  haar_study->add_option("--seed", seed, "RNG seed");
  haar_study->add_option("--out", hs_out, "output JSON path (default: stdout)");

  // examples
  std::string ex_name;
  CLI::App* examples = app.add_subcommand("examples", "reproduce a named worked example");
  examples->add_option("name", ex_name, "reflection | product-ii | diagonal-quadruple | trace-bound")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (numrange->parsed()) return cmd_numrange(nr_matrix, nr_angles, nr_out);
    if (pnr_min->parsed())
      return cmd_pnr_min(pm_matrix, pm_split, pm_restarts, seed, pm_out);
    if (shadow->parsed())
      return cmd_shadow(sh_matrix, sh_family, sh_d, sh_alpha, sh_split, sh_n, seed,
                        sh_out);
    if (certify->parsed())
      return cmd_certify(cf_u, cf_v, cf_delta, cf_mode, cf_split, cf_shots, seed,
                         cf_out);
    if (haar_study->parsed())
      return cmd_haar_study(hs_d1, hs_d2, hs_trials, seed, hs_out);
    if (examples->parsed()) return cmd_examples(ex_name);
  } catch (const NumericalFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitInput;
}
