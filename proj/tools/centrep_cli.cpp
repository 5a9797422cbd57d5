#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "centrep/errors.hpp"
#include "centrep/json_io.hpp"

using namespace centrep;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitHypothesis = 3;

std::size_t max_dim() {
  if (const char* env = std::getenv("CENTREP_MAX_DIM")) {
    const long v = std::atol(env);
    if (v >= 2) return static_cast<std::size_t>(v);
  }
  return 16;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << content << "\n";
}

Instance load_instance(const std::string& path) {
  const Instance inst = instance_from_json(read_json_file(path));
  if (inst.dim() > max_dim())
    throw std::invalid_argument("instance dimension exceeds CENTREP_MAX_DIM");
  return inst;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

struct VerifyOptions {
  std::string input, report;
  bool oracle = false;
  bool as_json = false;
};

int run_verify(const VerifyOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  const Instance inst = load_instance(opt.input);
  const WitnessCertificate cert = construct_witness(inst.epsilon, inst.omega, inst.theta);
  const CheckReport checks = verify_certificate(cert, inst.epsilon, inst.omega, inst.theta);
  bool pass = checks.checks.all() && !cert.used_fallback;

  json report = certificate_to_json(cert, inst.dim(), instance_hash(inst));
  if (opt.oracle) {
    const LieAlgebra l = build_instance_algebra(inst.theta, inst.epsilon, inst.omega);
    const OmegaAssembly assembly =
        assemble_witness_form(l, cert.alpha, cert.beta, cert.gamma);
    const Multivector u_star = Multivector::basis_vector(l.dim, *l.u_index + 1);
    const Multivector target =
        wedge(u_star, embed(cert.alpha, l.dim)) + embed(cert.beta, l.dim);
    Vec z = vec_zero(l.dim);
    z[*l.z_index] = 1;
    const bool contraction_matches = contract(z, assembly.omega_form) == target;
    const bool not_exact = !exactness_oracle(l, target);
    report["oracle"] = {{"omega_closed", true},
                        {"contraction_matches", contraction_matches},
                        {"class_nontrivial", not_exact},
                        {"witness_degree", target.grade()}};
    pass = pass && contraction_matches && not_exact;
  }
  report["outcome"] = pass ? "pass" : "fail";
  report["elapsed_ms"] = elapsed_ms(start);
  if (!checks.detail.empty()) report["detail"] = checks.detail;

  if (!opt.report.empty()) write_output(opt.report, report.dump(2));
  if (opt.as_json) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << "case: " << case_tag_name(cert.case_tag) << "\n"
              << "checks: A=" << cert.checks.a << " B=" << cert.checks.b
              << " C=" << cert.checks.c << " D=" << cert.checks.d << "\n"
              << "outcome: " << (pass ? "pass" : "fail") << "\n";
    if (!checks.detail.empty()) std::cout << checks.detail;
  }
  return pass ? kExitPass : kExitCheckFailure;
}

int run_cohomology(const std::string& path, bool as_json) {
  const json j = read_json_file(path);
  const LieAlgebra l = algebra_from_json(j);
  if (l.dim > max_dim()) throw std::invalid_argument("dimension exceeds CENTREP_MAX_DIM");
  if (!check_jacobi(l).empty())
    throw HypothesisError("algebra fails the Jacobi identity");
  const Cohomology h = cohomology(l);
  const CentralActionReport act = central_action(l);
  if (as_json) {
    json out = {{"betti", h.betti},
                {"nilpotent", is_nilpotent(l)},
                {"central_action_nontrivial", act.nontrivial}};
    if (act.nontrivial) {
      out["witness"] = {{"degree", act.degree},
                        {"cocycle", multivector_to_json(act.cocycle)},
                        {"contraction", multivector_to_json(act.contraction)}};
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "betti:";
    for (auto b : h.betti) std::cout << " " << b;
    std::cout << "\n";
    if (!is_nilpotent(l)) std::cout << "note: algebra is not nilpotent\n";
    if (act.nontrivial) {
      std::cout << "central action: nontrivial, witness degree " << act.degree << "\n";
    } else {
      std::cout << "central action: trivial (exhaustive search over the center "
                   "and cocycle bases)\n";
    }
  }
  return kExitPass;
}

int run_canonical(const std::string& path, bool as_json) {
  const Instance inst = load_instance(path);
  if (!apply_derivation(inst.theta, inst.omega).is_zero())
    throw HypothesisError("θΩ ≠ 0");
  const CanonicalDecomposition d = canonical_decomposition(inst.theta, inst.omega);
  const auto failure = d.check_invariants(inst.theta, inst.omega);
  const bool pass = !failure.has_value();
  if (as_json) {
    json out = decomposition_to_json(d);
    out["outcome"] = pass ? "pass" : "fail";
    if (failure) out["failure"] = *failure;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "p=" << d.p() << " q=" << d.q() << " rank=" << d.rank() << "\n"
              << "outcome: " << (pass ? "pass" : "fail") << "\n";
    if (failure) std::cout << *failure << "\n";
  }
  return pass ? kExitPass : kExitCheckFailure;
}

int run_lefschetz(const std::string& path, bool as_json) {
  const Instance inst = load_instance(path);
  if (!apply_derivation(inst.theta, inst.omega).is_zero())
    throw HypothesisError("θΩ ≠ 0");
  const CanonicalDecomposition d = canonical_decomposition(inst.theta, inst.omega);
  const std::size_t r = d.rank();
  bool pass = true;
  json table = json::array();
  for (std::size_t k = 0; k <= r; ++k) {
    const Matrix m = lefschetz_map(d, k);
    const bool bijective = m.rows == m.cols && rank(m) == m.rows;
    pass = pass && bijective;
    table.push_back({{"k", k}, {"size", m.rows}, {"bijective", bijective}});
  }
  if (as_json) {
    std::cout << json{{"rank", r}, {"maps", table}, {"outcome", pass ? "pass" : "fail"}}.dump(2)
              << "\n";
  } else {
    std::cout << "rank r = " << r << "\n";
    for (const auto& row : table)
      std::cout << "k=" << row["k"] << " size=" << row["size"]
                << (row["bijective"].get<bool>() ? " bijective" : " NOT bijective") << "\n";
    std::cout << "outcome: " << (pass ? "pass" : "fail") << "\n";
  }
  return pass ? kExitPass : kExitCheckFailure;
}

int run_oracle(const std::string& path, bool as_json) {
  const Instance inst = load_instance(path);
  const LieAlgebra l = build_instance_algebra(inst.theta, inst.epsilon, inst.omega);
  const CentralActionReport act = central_action(l);
  if (as_json) {
    json out = {{"algebra", algebra_to_json(l)},
                {"central_action_nontrivial", act.nontrivial}};
    if (act.nontrivial) out["witness_degree"] = act.degree;
    out["outcome"] = act.nontrivial ? "pass" : "fail";
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "assembled algebra dim " << l.dim << "\n"
              << "central action: " << (act.nontrivial ? "nontrivial" : "TRIVIAL") << "\n"
              << "outcome: " << (act.nontrivial ? "pass" : "fail") << "\n";
  }
  return act.nontrivial ? kExitPass : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact witness certificates for the nontriviality of the central\n"
      "representation on the cohomology of central extensions of nilpotent\n"
      "Lie algebras with a codimension-one abelian ideal."};
  app.require_subcommand(1);

  std::size_t dim_i = 2;
  std::uint64_t seed = 1;
  std::string case_name, out_file;
  auto* gen = app.add_subcommand("generate", "Generate a (θ, ε, Ω) instance");
  gen->add_option("--dim-i", dim_i, "Dimension of the abelian ideal I")->required();
  gen->add_option("--seed", seed, "PRNG seed (SplitMix64)");
  gen->add_option("--case", case_name, "Target case tag (uses a fixed template)");
  gen->add_option("--out", out_file, "Output file (default: stdout)");

  VerifyOptions vopt;
  auto* ver = app.add_subcommand("verify", "Construct and verify a witness certificate");
  ver->add_option("--input", vopt.input, "Instance JSON file")->required();
  ver->add_flag("--oracle", vopt.oracle,
                "Also run the independent Chevalley-Eilenberg oracle. Cheap for "
                "dim I <= 6; cost grows with the 2^n exterior basis beyond that.");
  ver->add_option("--report", vopt.report, "Write a JSON report to this file");
  ver->add_flag("--json", vopt.as_json, "Print the JSON report to stdout");

  std::string algebra_file;
  bool coh_json = false;
  auto* coh = app.add_subcommand("cohomology", "Betti numbers and central action");
  coh->add_option("--algebra", algebra_file, "Lie algebra JSON file")->required();
  coh->add_flag("--json", coh_json, "JSON output");

  std::string canon_file;
  bool canon_json = false;
  auto* canon = app.add_subcommand("canonical", "Canonical decomposition of (θ, Ω)");
  canon->add_option("--input", canon_file, "Instance JSON file")->required();
  canon->add_flag("--json", canon_json, "JSON output");

  std::string lef_file;
  bool lef_json = false;
  auto* lef = app.add_subcommand("lefschetz", "Verify bijectivity of all Lefschetz maps");
  lef->add_option("--input", lef_file, "Instance JSON file")->required();
  lef->add_flag("--json", lef_json, "JSON output");

  std::string oracle_file;
  bool oracle_json = false;
  auto* orc = app.add_subcommand("oracle", "Brute-force cohomology check of the Theorem");
  orc->add_option("--input", oracle_file, "Instance JSON file")->required();
  orc->add_flag("--json", oracle_json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      if (dim_i < 2) throw std::invalid_argument("--dim-i must be >= 2");
      if (dim_i > max_dim()) throw std::invalid_argument("--dim-i exceeds CENTREP_MAX_DIM");
      InstanceSpec spec;
      spec.dim_i = dim_i;
      spec.seed = seed;
      if (!case_name.empty()) {
        const auto tag = case_tag_parse(case_name);
        if (!tag) throw std::invalid_argument("unknown case tag: " + case_name);
        spec.target_case = *tag;
      }
      const Instance inst = random_instance(spec);
      write_output(out_file, instance_to_json(inst).dump(2));
      return kExitPass;
    }
    if (ver->parsed()) return run_verify(vopt);
    if (coh->parsed()) return run_cohomology(algebra_file, coh_json);
    if (canon->parsed()) return run_canonical(canon_file, canon_json);
    if (lef->parsed()) return run_lefschetz(lef_file, lef_json);
    if (orc->parsed()) return run_oracle(oracle_file, oracle_json);
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis violation: " << e.what() << "\n";
    return kExitHypothesis;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kExitCheckFailure;
  }
  return kExitUsage;
}
