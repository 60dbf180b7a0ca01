// qpar — depth-reduction toolkit for quantum circuits.
//
// Subcommands: gen, parallelize, verify, depth, stats. Circuits travel as
// format_version "1" JSON documents. Exit codes: 0 success, 1 I/O or parse
// error, 2 precondition violation, 3 verification failure.

#include <chrono>
#include <cmath>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpar/circuit.hpp"
#include "qpar/constants.hpp"
#include "qpar/error.hpp"
#include "qpar/generators.hpp"
#include "qpar/io.hpp"
#include "qpar/passes.hpp"
#include "qpar/rng.hpp"
#include "qpar/simulate.hpp"

using nlohmann::json;
using namespace qpar;

namespace {

struct CommonOpts {
  std::uint64_t seed = 0;
  double tolerance = 1e-8;
  int max_sim_qubits = SIM_MAX_QUBITS;
  bool as_json = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--seed", opts.seed, "Seed for randomized steps");
  cmd->add_option("--tolerance", opts.tolerance, "Numerical tolerance");
  cmd->add_option("--max-sim-qubits", opts.max_sim_qubits,
                  "Dense-simulation qubit cap");
  cmd->add_flag("--json", opts.as_json, "Machine-readable report on stdout");
}

struct VerificationResult {
  bool ran = false;
  bool pass = false;
  std::string oracle;
  double max_leakage = 0.0;
  double max_deviation = 0.0;
  double global_phase_applied = 0.0;
};

struct Report {
  std::string command;
  std::string pass_name;
  std::size_t input_gates = 0;
  std::size_t output_gates = 0;
  int depth_before = -1;
  int depth_after = -1;
  int ancillae_used = 0;
  long claimed_depth_bound = -1;
  VerificationResult verification;
  double wall_time_s = 0.0;
  std::string notes;

  json to_json() const {
    json out;
    out["command"] = command;
    if (!pass_name.empty()) out["pass"] = pass_name;
    out["input_gates"] = input_gates;
    out["output_gates"] = output_gates;
    if (depth_before >= 0) out["depth_before"] = depth_before;
    if (depth_after >= 0) out["depth_after"] = depth_after;
    out["ancillae_used"] = ancillae_used;
    if (claimed_depth_bound >= 0) out["claimed_depth_bound"] = claimed_depth_bound;
    if (verification.ran) {
      json v;
      v["verdict"] = verification.pass ? "pass" : "fail";
      v["oracle"] = verification.oracle;
      v["max_leakage"] = verification.max_leakage;
      v["max_deviation"] = verification.max_deviation;
      v["global_phase_applied"] = verification.global_phase_applied;
      out["verification"] = std::move(v);
    }
    out["wall_time_s"] = wall_time_s;
    if (!notes.empty()) out["notes"] = notes;
    return out;
  }

  void print(bool as_json) const {
    if (as_json) {
      std::cout << to_json().dump(2) << "\n";
      return;
    }
    std::cout << command;
    if (!pass_name.empty()) std::cout << " [" << pass_name << "]";
    std::cout << ": " << input_gates << " -> " << output_gates << " gates";
    if (depth_before >= 0) std::cout << ", depth " << depth_before;
    if (depth_after >= 0) std::cout << " -> " << depth_after;
    if (claimed_depth_bound >= 0) std::cout << " (bound " << claimed_depth_bound << ")";
    std::cout << ", ancillae " << ancillae_used << "\n";
    if (verification.ran) {
      std::cout << "verification (" << verification.oracle << "): "
                << (verification.pass ? "pass" : "FAIL")
                << ", leakage " << verification.max_leakage << ", deviation "
                << verification.max_deviation << ", global phase "
                << verification.global_phase_applied << "\n";
    }
    if (!notes.empty()) std::cout << "notes: " << notes << "\n";
    std::cout << "wall time " << wall_time_s << " s\n";
  }
};

Mat2 named_unitary(const std::string& name, std::uint64_t seed) {
  const Complex i(0, 1);
  if (name == "hadamard")
    return (Mat2() << 1, 1, 1, -1).finished() / std::sqrt(2.0);
  if (name == "x") return (Mat2() << 0, 1, 1, 0).finished();
  if (name == "y") return (Mat2() << 0, -i, i, 0).finished();
  if (name == "z") return (Mat2() << 1, 0, 0, -1).finished();
  if (name == "s") return (Mat2() << 1, 0, 0, i).finished();
  if (name == "t")
    return (Mat2() << 1, 0, 0, std::polar(1.0, TWO_PI / 8)).finished();
  if (name == "random") {
    Rng rng(seed);
    return rng.random_unitary2();
  }
  throw ParseError("unknown unitary '" + name +
                   "' (expected hadamard|x|y|z|s|t|random)");
}

Permutation permutation_from_circuit(const Circuit& c) {
  const Gf2Matrix m = gf2_simulate(c);
  if (!m.is_permutation_matrix())
    throw PreconditionError(
        "input circuit does not compute a wire permutation (its GF(2) map is "
        "not a permutation matrix)");
  Permutation p;
  p.images.assign(m.dim(), 0);
  for (int row = 0; row < m.dim(); ++row)
    p.images[m.row_support(row).front()] = row;
  return p;
}

// Serial reference for the binary-power circuit: controlled-U^{2^{k-1-j}}
// from each control qubit j onto the target.
Circuit power_reference(const ComplexMatrix& u, int k) {
  Circuit ref;
  const int t = static_cast<int>(std::lround(std::log2(u.rows())));
  ref.width_data = k + t;
  ComplexMatrix weight_power = u;  // U^{2^{k-1-j}} built from the top bit down
  std::vector<ComplexMatrix> powers(k);
  for (int j = k - 1; j >= 0; --j) {
    powers[j] = weight_power;
    if (j > 0) weight_power = weight_power * weight_power;
  }
  for (int j = 0; j < k; ++j) {
    if (t == 1) {
      ref.gates.push_back(ControlledUGate{j, k, Mat2(powers[j])});
    } else {
      std::vector<int> qs{j};
      for (int q = 0; q < t; ++q) qs.push_back(k + q);
      std::vector<double> phases(std::size_t{2} << t, 0.0);
      for (Eigen::Index x = 0; x < powers[j].rows(); ++x)
        phases[(std::size_t{1} << t) + x] = std::arg(powers[j](x, x));
      ref.gates.push_back(DiagonalGate{std::move(qs), std::move(phases)});
    }
  }
  return ref;
}

int run_gen(const std::string& family, int n, int count, const std::string& unitary,
            const std::string& sub_family, int shared_qubit,
            const std::string& out_path, const CommonOpts& opts) {
  Circuit c;
  if (family == "qft") {
    c = gen_qft(n);
  } else if (family == "staircase") {
    c = gen_staircase(n, named_unitary(unitary, opts.seed));
  } else if (family == "random") {
    const RandomFamily f = parse_random_family(sub_family);
    if (f == RandomFamily::Diagonal2q && shared_qubit >= 0)
      c = gen_diag_fanin_family(n, count, opts.seed, shared_qubit);
    else
      c = gen_random(f, n, count, opts.seed);
  } else {
    throw ParseError("unknown family '" + family + "' (expected qft|staircase|random)");
  }
  const json doc = circuit_to_json(c);
  if (out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    save_circuit_file(out_path, c);
    if (!opts.as_json)
      std::cout << "wrote " << c.gates.size() << " gates on " << c.width_total()
                << " qubits to " << out_path << "\n";
  }
  return 0;
}

VerificationResult verify_pass_output(const std::string& pass_name,
                                      const Circuit& input,
                                      const PassResult& result,
                                      const ComplexMatrix* power_u, int power_k,
                                      const CommonOpts& opts) {
  VerificationResult v;
  v.ran = true;
  if (pass_name == "cnot" || pass_name == "permute-anc" || pass_name == "permute") {
    v.oracle = "gf2";
    Gf2Matrix expected = gf2_simulate(input);
    const auto report = verify_gf2_embedding(expected, result.circuit);
    v.pass = report.pass;
    v.max_deviation = report.data_block_matches ? 0.0 : 1.0;
    v.max_leakage = report.ancilla_rows_clean ? 0.0 : 1.0;
  } else if (pass_name == "morse" || pass_name == "diag-fanin" ||
             pass_name == "diag-compress") {
    v.oracle = "phase-vector";
    const PhaseVector want = phase_vector(input);
    const PhaseVector got =
        embedded_phase_vector(result.circuit, input.width_data);
    v.max_deviation = phase_vector_distance(want, got);
    v.pass = v.max_deviation <= opts.tolerance;
  } else if (pass_name == "power") {
    v.oracle = "dense";
    const Circuit ref = power_reference(*power_u, power_k);
    const auto report = verify_embedding(ref, flatten(result.circuit), opts.tolerance,
                                         opts.seed, opts.max_sim_qubits);
    v.pass = report.pass && phase_distance(report.global_phase_applied, 0.0) <=
                                 opts.tolerance;
    v.max_leakage = report.max_leakage;
    v.max_deviation = report.max_block_deviation;
    v.global_phase_applied = report.global_phase_applied;
  } else {
    v.oracle = "dense";
    const auto report = verify_embedding(input, flatten(result.circuit),
                                         opts.tolerance, opts.seed,
                                         opts.max_sim_qubits);
    v.pass = report.pass;
    v.max_leakage = report.max_leakage;
    v.max_deviation = report.max_block_deviation;
    v.global_phase_applied = report.global_phase_applied;
  }
  return v;
}

int run_parallelize(const std::string& pass_name, const std::string& in_path,
                    const std::string& out_path, bool do_verify, int power_k,
                    bool log_depth, const CommonOpts& opts) {
  const auto start = std::chrono::steady_clock::now();
  const Circuit input = load_circuit_file(in_path).as_circuit();

  Report report;
  report.command = "parallelize";
  report.pass_name = pass_name;
  report.input_gates = input.gates.size();
  report.depth_before = depth(schedule_greedy(input));

  PassResult result;
  ComplexMatrix power_u;
  if (pass_name == "permute-anc") {
    result = permute_with_ancillae(permutation_from_circuit(input));
  } else if (pass_name == "permute") {
    result = permute_no_ancillae(permutation_from_circuit(input));
  } else if (pass_name == "fanout") {
    result = fanout_parallelize(input);
  } else if (pass_name == "diag-fanin") {
    result = diag_fanin_parallelize(input);
  } else if (pass_name == "commute-fanin") {
    result = commuting_fanin_parallelize(input);
  } else if (pass_name == "diag-compress") {
    result = diag_compress(input, log_depth);
  } else if (pass_name == "cnot") {
    result = cnot_parallelize(input);
  } else if (pass_name == "morse") {
    result = morse_synthesize(phase_vector(input));
  } else if (pass_name == "power") {
    power_u = full_unitary(input, opts.max_sim_qubits);
    result = power_circuit(power_u, power_k);
  } else {
    throw ParseError("unknown pass '" + pass_name + "'");
  }

  report.output_gates = result.circuit.gate_count();
  report.depth_after = depth(result.circuit);
  report.ancillae_used = result.ancillae_used;
  report.claimed_depth_bound = result.claimed_depth_bound;
  report.notes = result.notes;

  if (!out_path.empty()) save_circuit_file(out_path, result.circuit);
  if (do_verify)
    report.verification =
        verify_pass_output(pass_name, input, result, &power_u, power_k, opts);

  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.print(opts.as_json);
  return (do_verify && !report.verification.pass) ? 3 : 0;
}

int run_verify(const std::string& original_path, const std::string& candidate_path,
               const CommonOpts& opts) {
  const auto start = std::chrono::steady_clock::now();
  const Circuit original = load_circuit_file(original_path).as_circuit();
  const Circuit candidate = load_circuit_file(candidate_path).as_circuit();

  Report report;
  report.command = "verify";
  report.input_gates = original.gates.size();
  report.output_gates = candidate.gates.size();
  report.ancillae_used = candidate.width_total() - original.width_total();
  report.verification.ran = true;

  const auto cnot_only = [](const Circuit& c) {
    for (const Gate& g : c.gates)
      if (!std::holds_alternative<CnotGate>(g)) return false;
    return true;
  };

  if (cnot_only(original) && cnot_only(candidate)) {
    report.verification.oracle = "gf2";
    const auto r = verify_gf2_embedding(gf2_simulate(original), candidate);
    report.verification.pass = r.pass;
    report.verification.max_deviation = r.data_block_matches ? 0.0 : 1.0;
    report.verification.max_leakage = r.ancilla_rows_clean ? 0.0 : 1.0;
  } else {
    report.verification.oracle = "dense";
    const auto r = verify_embedding(original, candidate, opts.tolerance, opts.seed,
                                    opts.max_sim_qubits);
    report.verification.pass = r.pass;
    report.verification.max_leakage = r.max_leakage;
    report.verification.max_deviation = r.max_block_deviation;
    report.verification.global_phase_applied = r.global_phase_applied;
  }

  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.print(opts.as_json);
  return report.verification.pass ? 0 : 3;
}

int run_depth(const std::string& in_path, const CommonOpts& opts) {
  const auto start = std::chrono::steady_clock::now();
  const Circuit input = load_circuit_file(in_path).as_circuit();
  Report report;
  report.command = "depth";
  report.input_gates = input.gates.size();
  report.output_gates = input.gates.size();
  report.depth_after = depth(schedule_greedy(input));
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (opts.as_json) {
    json out = report.to_json();
    out["depth"] = report.depth_after;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "depth " << report.depth_after << " (" << input.gates.size()
              << " gates on " << input.width_total() << " qubits)\n";
  }
  return 0;
}

int run_stats(const std::string& in_path, const CommonOpts& opts) {
  const CircuitDocument doc = load_circuit_file(in_path);
  const Circuit input = doc.as_circuit();
  json counts = json::object();
  for (const Gate& g : input.gates) {
    const std::string kind = gate_kind_name(g);
    counts[kind] = counts.value(kind, 0) + 1;
  }
  json out;
  out["command"] = "stats";
  out["width_data"] = input.width_data;
  out["width_ancilla"] = input.width_ancilla;
  out["gates"] = input.gates.size();
  out["gates_by_kind"] = counts;
  out["layered_input"] = doc.layered.has_value();
  out["depth_greedy"] = depth(schedule_greedy(input));
  out["global_phase"] = input.global_phase;
  if (opts.as_json) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "width " << input.width_data << "+" << input.width_ancilla
              << ", gates " << input.gates.size() << ", greedy depth "
              << out["depth_greedy"] << "\n";
    for (const auto& [kind, cnt] : counts.items())
      std::cout << "  " << kind << ": " << cnt << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qpar: parallelization passes and oracles for quantum circuits"};
  app.require_subcommand(1);

  CommonOpts opts;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a circuit family");
  std::string gen_family, gen_unitary = "hadamard", gen_sub_family = "cnot";
  std::string gen_out;
  int gen_n = 1, gen_count = 10, gen_shared = -1;
  gen->add_option("generator", gen_family, "qft|staircase|random")->required();
  gen->add_option("--n", gen_n, "Size parameter")->required();
  gen->add_option("--count", gen_count, "Gate count for random families");
  gen->add_option("--unitary", gen_unitary, "Staircase unitary: hadamard|x|y|z|s|t|random");
  gen->add_option("--family", gen_sub_family,
                  "Random sub-family: cnot|diagonal-2q|controlled-commuting|permutation");
  gen->add_option("--shared-qubit", gen_shared,
                  "Pin every diagonal-2q gate to touch this qubit");
  gen->add_option("--out", gen_out, "Output path (stdout when omitted)");
  add_common(gen, opts);

  // parallelize
  auto* par = app.add_subcommand("parallelize", "Rewrite a circuit to lower depth");
  std::string par_pass, par_in, par_out;
  bool par_verify = false, par_log_depth = false;
  int par_power_k = 1;
  par->add_option("--pass", par_pass,
                  "permute-anc|permute|fanout|diag-fanin|commute-fanin|"
                  "diag-compress|cnot|morse|power")
      ->required();
  par->add_option("--in", par_in, "Input circuit file")->required();
  par->add_option("--out", par_out, "Output circuit file");
  par->add_flag("--verify", par_verify, "Check the result against its oracle");
  par->add_option("--power-k", par_power_k, "Control-register size for --pass power");
  par->add_flag("--log-depth", par_log_depth,
                "diag-compress: spend ancillae to reach logarithmic depth");
  add_common(par, opts);

  // verify
  auto* ver = app.add_subcommand("verify", "Check that one circuit embeds another");
  std::string ver_original, ver_candidate;
  ver->add_option("original", ver_original, "Reference circuit file")->required();
  ver->add_option("candidate", ver_candidate, "Candidate circuit file")->required();
  add_common(ver, opts);

  // depth
  auto* dep = app.add_subcommand("depth", "Greedy-schedule a circuit and report depth");
  std::string dep_in;
  dep->add_option("--in", dep_in, "Input circuit file")->required();
  add_common(dep, opts);

  // stats
  auto* sta = app.add_subcommand("stats", "Gate counts and widths");
  std::string sta_in;
  sta->add_option("--in", sta_in, "Input circuit file")->required();
  add_common(sta, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (gen->parsed())
      return run_gen(gen_family, gen_n, gen_count, gen_unitary, gen_sub_family,
                     gen_shared, gen_out, opts);
    if (par->parsed())
      return run_parallelize(par_pass, par_in, par_out, par_verify, par_power_k,
                             par_log_depth, opts);
    if (ver->parsed()) return run_verify(ver_original, ver_candidate, opts);
    if (dep->parsed()) return run_depth(dep_in, opts);
    if (sta->parsed()) return run_stats(sta_in, opts);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
