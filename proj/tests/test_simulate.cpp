#include <doctest.h>

#include "qpar/error.hpp"
#include "qpar/generators.hpp"
#include "qpar/simulate.hpp"
#include "test_helpers.hpp"

using namespace qpar;
using namespace qpar::testing;

namespace {

Circuit diagonal_only_circuit(int n, int count, std::uint64_t seed) {
  Rng rng(seed);
  Circuit c;
  c.width_data = n;
  for (int i = 0; i < count; ++i) {
    const int pick = rng.uniform_int(0, 2);
    const int a = rng.uniform_int(0, n - 1);
    int b = rng.uniform_int(0, n - 2);
    if (b >= a) ++b;
    if (pick == 0) {
      c.gates.push_back(SymmetricPhaseGate{a, b, rng.uniform(-3.0, 3.0)});
    } else if (pick == 1) {
      std::vector<double> phases(4);
      for (double& p : phases) p = rng.uniform(-3.0, 3.0);
      c.gates.push_back(DiagonalGate{{a, b}, phases});
    } else {
      Mat2 u = Mat2::Zero();
      u(0, 0) = std::polar(1.0, rng.uniform(-3.0, 3.0));
      u(1, 1) = std::polar(1.0, rng.uniform(-3.0, 3.0));
      c.gates.push_back(OneQubitGate{a, u});
    }
  }
  return c;
}

}  // namespace

TEST_CASE("apply: identity circuit leaves basis states alone") {
  Circuit c;
  c.width_data = 2;
  const StateVector out = apply(c, StateVector::basis(2, 0b01));
  CHECK(std::abs(out.amps[0b01] - Complex(1, 0)) <= 1e-15);
}

TEST_CASE("apply: CNOT copies onto a fresh target") {
  Circuit c;
  c.width_data = 2;
  c.gates.push_back(CnotGate{0, 1});
  StateVector in = StateVector::basis(2, 0);
  const Complex alpha(0.6, 0.0), beta(0.0, 0.8);
  in.amps[0b00] = alpha;  // |00>
  in.amps[0b10] = beta;   // |10>
  const StateVector out = apply(c, in);
  CHECK(std::abs(out.amps[0b00] - alpha) <= 1e-15);
  CHECK(std::abs(out.amps[0b11] - beta) <= 1e-15);
  CHECK(std::abs(out.amps[0b10]) <= 1e-15);
}

TEST_CASE("apply: symmetric phase hits only |11>") {
  const double theta = 1.234;
  Circuit c;
  c.width_data = 2;
  c.gates.push_back(SymmetricPhaseGate{0, 1, theta});
  for (std::uint64_t b = 0; b < 4; ++b) {
    const StateVector out = apply(c, StateVector::basis(2, b));
    const Complex expect = b == 3 ? std::polar(1.0, theta) : Complex(1, 0);
    CHECK(std::abs(out.amps[b] - expect) <= 1e-15);
  }
}

TEST_CASE("apply preserves the norm") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Circuit c = random_mixed_circuit(4, 15, seed);
    Rng rng(seed + 99);
    StateVector state;
    state.n = 4;
    state.amps = Eigen::VectorXcd::Zero(16);
    for (int i = 0; i < 16; ++i) state.amps[i] = rng.normal_complex();
    state.amps.normalize();
    const StateVector out = apply(c, state);
    CHECK(std::abs(out.norm() - 1.0) <= 1e-9);
  }
}

TEST_CASE("apply rejects width mismatch and oversized states") {
  Circuit c;
  c.width_data = 2;
  StateVector wrong = StateVector::basis(3, 0);
  CHECK_THROWS_AS(apply(c, wrong), PreconditionError);
}

TEST_CASE("full_unitary of the empty circuit is the identity") {
  Circuit c;
  c.width_data = 2;
  CHECK(max_abs(full_unitary(c) - ComplexMatrix::Identity(4, 4)) <= 1e-15);
}

TEST_CASE("full_unitary of CNOT(0,1) is block-diag(I, X)") {
  Circuit c;
  c.width_data = 2;
  c.gates.push_back(CnotGate{0, 1});
  ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
  expect(0, 0) = expect(1, 1) = 1;  // control 0: identity
  expect(3, 2) = expect(2, 3) = 1;  // control 1: X
  CHECK(max_abs(full_unitary(c) - expect) <= 1e-15);
}

TEST_CASE("full_unitary is unitary on random circuits") {
  for (std::uint64_t seed = 20; seed < 26; ++seed) {
    const ComplexMatrix u = full_unitary(random_mixed_circuit(3, 12, seed));
    CHECK(is_unitary(u, 1e-8));
  }
}

TEST_CASE("full_unitary enforces the dense cap") {
  Circuit c;
  c.width_data = 11;
  CHECK_THROWS_AS(full_unitary(c), SimSizeError);
  CHECK(full_unitary(c, 11).rows() == 2048);
}

TEST_CASE("gf2_simulate basics") {
  Circuit empty;
  empty.width_data = 3;
  CHECK(gf2_simulate(empty) == Gf2Matrix::identity(3));

  Circuit c;
  c.width_data = 2;
  c.gates.push_back(CnotGate{0, 1});
  c.gates.push_back(CnotGate{1, 0});
  const Gf2Matrix m = gf2_simulate(c);
  // hand propagation: wire0 = q0+q1 after the second gate, wire1 = q0+q1...
  // wire1 = q0+q1 after first; second adds wire1 into wire0: wire0 = q1 (mod 2)
  CHECK(m.get(0, 0) == false);
  CHECK(m.get(0, 1) == true);
  CHECK(m.get(1, 0) == true);
  CHECK(m.get(1, 1) == true);

  Circuit bad;
  bad.width_data = 2;
  bad.gates.push_back(SymmetricPhaseGate{0, 1, 0.5});
  CHECK_THROWS_AS(gf2_simulate(bad), PreconditionError);
}

TEST_CASE("CNOT circuits are invertible over GF(2)") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Circuit c = gen_random(RandomFamily::Cnot, 6, 24, seed);
    CHECK_NOTHROW(gf2_invert(gf2_simulate(c)));
  }
}

TEST_CASE("phase_vector basics") {
  Circuit empty;
  empty.width_data = 2;
  for (double w : phase_vector(empty).omega) CHECK(w == 0.0);

  Circuit c;
  c.width_data = 2;
  c.gates.push_back(SymmetricPhaseGate{0, 1, 0.77});
  const PhaseVector pv = phase_vector(c);
  CHECK(pv.omega == std::vector<double>{0.0, 0.0, 0.0, 0.77});

  Circuit two = c;
  two.gates.push_back(DiagonalGate{{0, 1}, {0.1, 0.2, 0.3, 0.4}});
  const PhaseVector sum = phase_vector(two);
  for (std::uint64_t b = 0; b < 4; ++b)
    CHECK(sum.omega[b] ==
          doctest::Approx(pv.omega[b] + 0.1 * (b == 0) + 0.2 * (b == 1) +
                          0.3 * (b == 2) + 0.4 * (b == 3)));

  Circuit bad;
  bad.width_data = 2;
  bad.gates.push_back(CnotGate{0, 1});
  CHECK_THROWS_AS(phase_vector(bad), PreconditionError);
}

TEST_CASE("cross-oracle: diagonal circuits agree between dense and phase vector") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 2 + static_cast<int>(seed % 4);
    const Circuit c = diagonal_only_circuit(n, 20, seed);
    const ComplexMatrix u = full_unitary(c);
    const PhaseVector pv = phase_vector(c);
    const std::uint64_t dim = pv.omega.size();
    for (std::uint64_t b = 0; b < dim; ++b) {
      CHECK(std::abs(u(b, b) - std::polar(1.0, pv.omega[b])) <= 1e-10);
      for (std::uint64_t r = 0; r < dim; ++r)
        if (r != b) CHECK(std::abs(u(r, b)) <= 1e-10);
    }
  }
}

TEST_CASE("cross-oracle: CNOT circuits act as x -> Mx on basis states") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 2 + static_cast<int>(seed % 5);
    const Circuit c = gen_random(RandomFamily::Cnot, n, 3 * n, seed);
    const Gf2Matrix m = gf2_simulate(c);
    const ComplexMatrix u = full_unitary(c);
    const std::uint64_t dim = std::uint64_t{1} << n;
    for (std::uint64_t x = 0; x < dim; ++x) {
      std::uint64_t y = 0;
      for (int row = 0; row < n; ++row) {
        int bit = 0;
        for (int col = 0; col < n; ++col)
          bit ^= m.get(row, col) & ((x >> (n - 1 - col)) & 1);
        y |= static_cast<std::uint64_t>(bit) << (n - 1 - row);
      }
      CHECK(std::abs(u(y, x) - Complex(1, 0)) == 0.0);  // exact
    }
  }
}

TEST_CASE("verify_embedding accepts a tensored-identity candidate") {
  const Circuit ref = random_mixed_circuit(3, 10, 1);
  Circuit cand = ref;
  cand.width_ancilla = 2;
  const auto report = verify_embedding(ref, cand, 1e-10);
  CHECK(report.pass);
  CHECK(report.max_leakage == 0.0);
  CHECK(report.max_block_deviation <= 1e-12);
  CHECK(report.exhaustive);
}

TEST_CASE("verify_embedding flags an ancilla left in |1>") {
  const Circuit ref = random_mixed_circuit(3, 6, 2);
  Circuit cand = ref;
  cand.width_ancilla = 1;
  cand.gates.push_back(OneQubitGate{3, pauli_x()});  // bug fixture
  const auto report = verify_embedding(ref, cand, 1e-9);
  CHECK(!report.pass);
  CHECK(!report.subspace_preserved);
  CHECK(report.max_leakage == doctest::Approx(1.0));
}

TEST_CASE("verify_embedding removes one shared global phase and reports it") {
  const Circuit ref = random_mixed_circuit(2, 8, 3);
  Circuit cand = ref;
  cand.global_phase += 0.4;
  const auto report = verify_embedding(ref, cand, 1e-9);
  CHECK(report.pass);
  CHECK(report.global_phase_applied == doctest::Approx(0.4));
}

TEST_CASE("verify_gf2_embedding checks block structure exactly") {
  Circuit ref;
  ref.width_data = 2;
  ref.gates.push_back(CnotGate{0, 1});
  const Gf2Matrix m = gf2_simulate(ref);

  Circuit good;
  good.width_data = 2;
  good.width_ancilla = 1;
  good.gates.push_back(CnotGate{0, 2});
  good.gates.push_back(CnotGate{2, 1});
  good.gates.push_back(CnotGate{0, 2});
  const auto ok = verify_gf2_embedding(m, good);
  CHECK(ok.pass);
  CHECK(ok.ancilla_block_identity);

  Circuit leaky = good;
  leaky.gates.pop_back();  // ancilla keeps q0
  const auto bad = verify_gf2_embedding(m, leaky);
  CHECK(!bad.pass);
  CHECK(!bad.ancilla_rows_clean);
}

TEST_CASE("embedded_phase_vector matches phase_vector on diagonal circuits") {
  for (std::uint64_t seed = 50; seed < 54; ++seed) {
    const Circuit c = diagonal_only_circuit(4, 15, seed);
    const PhaseVector direct = phase_vector(c);
    const PhaseVector embedded = embedded_phase_vector(c, 4);
    CHECK(phase_vector_distance(direct, embedded) == 0.0);
  }
}

TEST_CASE("embedded_phase_vector handles copy trees and matches dense") {
  // copy qubit 0 onto an ancilla, phase both, uncopy
  Circuit c;
  c.width_data = 2;
  c.width_ancilla = 1;
  c.gates.push_back(CnotGate{0, 2});
  c.gates.push_back(SymmetricPhaseGate{0, 1, 0.3});
  c.gates.push_back(DiagonalGate{{2, 1}, {0.0, 0.0, 0.0, 0.5}});
  c.gates.push_back(CnotGate{0, 2});

  const PhaseVector pv = embedded_phase_vector(c, 2);
  CHECK(pv.omega[3] == doctest::Approx(0.8));
  CHECK(pv.omega[0] == 0.0);

  const ComplexMatrix u = full_unitary(c);
  for (std::uint64_t x = 0; x < 4; ++x)
    CHECK(std::abs(u(x << 1, x << 1) - std::polar(1.0, pv.omega[x])) <= 1e-12);
}

TEST_CASE("embedded_phase_vector rejects non-diagonal embeddings") {
  Circuit c;
  c.width_data = 1;
  c.width_ancilla = 1;
  c.gates.push_back(CnotGate{0, 1});  // ancilla stays entangled
  CHECK_THROWS_AS(embedded_phase_vector(c, 1), PreconditionError);

  Circuit h;
  h.width_data = 1;
  h.gates.push_back(OneQubitGate{0, hadamard()});
  CHECK_THROWS_AS(embedded_phase_vector(h, 1), PreconditionError);
}

TEST_CASE("verify_embedding falls back to seeded random states beyond 256") {
  // 9 data qubits: 512 basis states, so the verifier samples 256 of them
  Circuit ref;
  ref.width_data = 9;
  ref.gates.push_back(CnotGate{0, 8});
  Circuit cand = ref;
  cand.width_ancilla = 1;
  const auto report = verify_embedding(ref, cand, 1e-9, 42);
  CHECK(report.pass);
  CHECK(!report.exhaustive);
  CHECK(report.seed == 42);
}
