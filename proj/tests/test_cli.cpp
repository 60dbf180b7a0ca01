// End-to-end checks of the qpar binary: exit-code contract, file outputs,
// and report fields. The binary path comes from the build system.

#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "qpar/io.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(QPAR_BIN_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buffer{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buffer.data(), buffer.size(), pipe)) out += buffer.data();
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "qpar_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("gen qft writes the expected gate count") {
  const fs::path out = work_dir() / "qft4.json";
  const auto r = run("gen qft --n 4 --out " + out.string());
  CHECK(r.exit_code == 0);
  const auto doc = qpar::load_circuit_file(out);
  CHECK(doc.as_circuit().gates.size() == 10);
}

TEST_CASE("gen staircase --unitary hadamard emits n-1 gates") {
  const fs::path out = work_dir() / "stairs3.json";
  CHECK(run("gen staircase --n 3 --unitary hadamard --out " + out.string())
            .exit_code == 0);
  CHECK(qpar::load_circuit_file(out).as_circuit().gates.size() == 2);
}

TEST_CASE("gen random is byte-for-byte deterministic") {
  const fs::path a = work_dir() / "rand_a.json";
  const fs::path b = work_dir() / "rand_b.json";
  CHECK(run("gen random --family cnot --n 8 --count 20 --seed 1 --out " +
            a.string()).exit_code == 0);
  CHECK(run("gen random --family cnot --n 8 --count 20 --seed 1 --out " +
            b.string()).exit_code == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("gen rejects unknown families with exit 1") {
  CHECK(run("gen mystery --n 3").exit_code == 1);
  CHECK(run("gen random --family nope --n 3").exit_code == 1);
}

TEST_CASE("parallelize cnot --verify passes on a staircase") {
  const fs::path in = work_dir() / "stairs8.json";
  const fs::path out = work_dir() / "stairs8_par.json";
  // staircase of CNOTs written via gen random? build directly instead
  qpar::Circuit c;
  c.width_data = 8;
  for (int i = 0; i < 7; ++i) c.gates.push_back(qpar::CnotGate{i, i + 1});
  qpar::save_circuit_file(in, c);

  const auto r = run("parallelize --pass cnot --in " + in.string() + " --out " +
                     out.string() + " --verify --json");
  CHECK(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(report.at("verification").at("verdict") == "pass");
  CHECK(report.at("verification").at("oracle") == "gf2");
  const auto doc = qpar::load_circuit_file(out);
  REQUIRE(doc.layered.has_value());
  CHECK(doc.layered->width_ancilla == report.at("ancillae_used").get<int>());
}

TEST_CASE("parallelize morse on a non-diagonal input exits 2 naming the gate") {
  const fs::path in = work_dir() / "notdiag.json";
  qpar::Circuit c;
  c.width_data = 3;
  c.gates.push_back(qpar::SymmetricPhaseGate{0, 1, 0.5});
  c.gates.push_back(qpar::CnotGate{1, 2});
  qpar::save_circuit_file(in, c);
  const auto r = run("parallelize --pass morse --in " + in.string());
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("gate 1") != std::string::npos);
}

TEST_CASE("parallelize fanout reports depth 7 for eight gates") {
  const fs::path in = work_dir() / "fan8.json";
  qpar::Circuit c;
  c.width_data = 9;
  const qpar::Mat2 s = (qpar::Mat2() << 1, 0, 0, qpar::Complex(0, 1)).finished();
  for (int i = 0; i < 8; ++i) c.gates.push_back(qpar::ControlledUGate{0, i + 1, s});
  qpar::save_circuit_file(in, c);
  const auto r = run("parallelize --pass fanout --in " + in.string() + " --json --verify");
  CHECK(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(report.at("depth_after") == 7);
  CHECK(report.at("verification").at("verdict") == "pass");
}

TEST_CASE("parallelize power honors --power-k") {
  const fs::path in = work_dir() / "u1.json";
  qpar::Circuit c;
  c.width_data = 1;
  qpar::Mat2 u = qpar::Mat2::Identity();
  u(1, 1) = qpar::Complex(0, 1);
  c.gates.push_back(qpar::OneQubitGate{0, u});
  qpar::save_circuit_file(in, c);
  const auto r = run("parallelize --pass power --power-k 2 --in " + in.string() +
                     " --json --verify");
  CHECK(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(report.at("verification").at("verdict") == "pass");
}

TEST_CASE("verify: identical files pass with zero deviation") {
  const fs::path a = work_dir() / "same.json";
  qpar::Circuit c;
  c.width_data = 2;
  c.gates.push_back(qpar::SymmetricPhaseGate{0, 1, 0.3});
  qpar::save_circuit_file(a, c);
  const auto r = run("verify " + a.string() + " " + a.string() + " --json");
  CHECK(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(report.at("verification").at("verdict") == "pass");
  CHECK(report.at("verification").at("max_deviation").get<double>() == 0.0);
}

TEST_CASE("verify: an extra 0.1-rad phase gate fails with deviation ~0.0999") {
  const fs::path a = work_dir() / "orig.json";
  const fs::path b = work_dir() / "cand.json";
  qpar::Circuit c;
  c.width_data = 2;
  c.gates.push_back(qpar::CnotGate{0, 1});
  qpar::save_circuit_file(a, c);
  c.gates.push_back(qpar::SymmetricPhaseGate{0, 1, 0.1});
  qpar::save_circuit_file(b, c);
  const auto r = run("verify " + a.string() + " " + b.string() + " --json");
  CHECK(r.exit_code == 3);
  const json report = json::parse(r.out);
  const double dev = report.at("verification").at("max_deviation").get<double>();
  CHECK(dev == doctest::Approx(2 * std::sin(0.05)).epsilon(1e-6));
}

TEST_CASE("depth subcommand matches the scheduler") {
  const fs::path qft = work_dir() / "qft4b.json";
  run("gen qft --n 4 --out " + qft.string());
  auto r = run("depth --in " + qft.string() + " --json");
  CHECK(r.exit_code == 0);
  CHECK(json::parse(r.out).at("depth") == 7);

  const fs::path empty = work_dir() / "empty.json";
  qpar::Circuit c;
  c.width_data = 3;
  qpar::save_circuit_file(empty, c);
  r = run("depth --in " + empty.string() + " --json");
  CHECK(json::parse(r.out).at("depth") == 0);

  const fs::path stairs = work_dir() / "stairs5.json";
  run("gen staircase --n 5 --unitary t --out " + stairs.string());
  r = run("depth --in " + stairs.string() + " --json");
  CHECK(json::parse(r.out).at("depth") == 4);
}

TEST_CASE("stats reports gate kinds") {
  const fs::path in = work_dir() / "stats_in.json";
  qpar::Circuit c;
  c.width_data = 3;
  c.gates.push_back(qpar::CnotGate{0, 1});
  c.gates.push_back(qpar::CnotGate{1, 2});
  c.gates.push_back(qpar::SymmetricPhaseGate{0, 2, 0.4});
  qpar::save_circuit_file(in, c);
  const auto r = run("stats --in " + in.string() + " --json");
  CHECK(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(report.at("gates_by_kind").at("cnot") == 2);
  CHECK(report.at("gates_by_kind").at("symmetric_phase") == 1);
}

TEST_CASE("missing input files exit 1") {
  CHECK(run("depth --in /nonexistent/nope.json").exit_code == 1);
  CHECK(run("parallelize --pass cnot --in /nonexistent/nope.json").exit_code == 1);
}

TEST_CASE("precondition violations exit 2") {
  const fs::path in = work_dir() / "notperm.json";
  qpar::Circuit c;
  c.width_data = 2;
  c.gates.push_back(qpar::CnotGate{0, 1});
  qpar::save_circuit_file(in, c);  // valid CNOT circuit, but not a permutation
  CHECK(run("parallelize --pass permute-anc --in " + in.string()).exit_code == 2);
}

TEST_CASE("help exits 0, missing arguments exit 1") {
  CHECK(run("--help").exit_code == 0);
  CHECK(run("").exit_code == 1);                 // subcommand required
  CHECK(run("parallelize --in x.json").exit_code == 1);  // --pass required
}
