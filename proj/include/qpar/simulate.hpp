#pragma once

#include <cstdint>

#include "qpar/circuit.hpp"
#include "qpar/constants.hpp"
#include "qpar/gf2.hpp"
#include "qpar/unitary.hpp"
#include "qpar/walsh.hpp"

namespace qpar {

/// Dense amplitude vector over 2^n basis states. Basis index b carries qubit 0
/// as its most significant bit, so ancillae (high qubit indices) occupy the
/// low-order bits of b.
struct StateVector {
  int n = 0;
  Eigen::VectorXcd amps;

  static StateVector basis(int n, std::uint64_t b);
  double norm() const { return amps.norm(); }
};

/// Applies the circuit gate by gate; each gate touches only its own qubits.
/// The circuit's global phase is multiplied in once.
void apply_in_place(const Circuit& c, StateVector& state,
                    int max_qubits = SIM_MAX_QUBITS);
StateVector apply(const Circuit& c, const StateVector& state,
                  int max_qubits = SIM_MAX_QUBITS);
StateVector apply(const LayeredCircuit& c, const StateVector& state,
                  int max_qubits = SIM_MAX_QUBITS);

/// 2^n × 2^n matrix of the circuit, built column by column from basis states.
ComplexMatrix full_unitary(const Circuit& c, int max_qubits = DENSE_MAX_QUBITS);
ComplexMatrix full_unitary(const LayeredCircuit& c, int max_qubits = DENSE_MAX_QUBITS);

/// Linear map of a CNOT-only circuit over GF(2), on all width_total wires.
/// Throws PreconditionError naming the first non-CNOT gate.
Gf2Matrix gf2_simulate(const Circuit& c);
Gf2Matrix gf2_simulate(const LayeredCircuit& c);

/// Phase vector of a circuit of diagonal gates (includes global_phase).
/// Entries are unreduced sums; compare mod 2π.
PhaseVector phase_vector(const Circuit& c);
PhaseVector phase_vector(const LayeredCircuit& c);

/// Result of checking that `candidate` realizes `reference` on the subspace
/// where the trailing ancilla qubits are |0⟩, up to one shared global phase.
struct EmbeddingReport {
  bool subspace_preserved = false;
  double max_leakage = 0.0;          // amplitude mass escaping the subspace
  double max_block_deviation = 0.0;  // data-register mismatch after dephasing
  double global_phase_applied = 0.0;
  bool pass = false;
  bool exhaustive = true;   // all data basis states checked
  std::uint64_t seed = 0;   // sampling seed when not exhaustive
};

/// Applies `candidate` to data basis states with ancillae |0⟩ and compares the
/// data register against `reference`. Exhaustive for 2^n ≤ 256 data states,
/// otherwise 256 seeded random basis states. The shared global phase is
/// estimated once, from the first state pair, then held fixed.
EmbeddingReport verify_embedding(const Circuit& reference, const Circuit& candidate,
                                 double tol, std::uint64_t seed = 0,
                                 int max_qubits = SIM_MAX_QUBITS);
EmbeddingReport verify_embedding(const Circuit& reference,
                                 const LayeredCircuit& candidate, double tol,
                                 std::uint64_t seed = 0,
                                 int max_qubits = SIM_MAX_QUBITS);

/// Exact embedding check for CNOT-only candidates, at any width: the data
/// block of the GF(2) map must equal `reference` and no data value may leak
/// into an ancilla wire.
struct Gf2EmbeddingReport {
  bool data_block_matches = false;
  bool ancilla_rows_clean = false;     // ancilla outputs independent of data
  bool ancilla_block_identity = false; // ancilla wires restored exactly
  bool pass = false;
};
Gf2EmbeddingReport verify_gf2_embedding(const Gf2Matrix& reference,
                                        const Circuit& candidate);
Gf2EmbeddingReport verify_gf2_embedding(const Gf2Matrix& reference,
                                        const LayeredCircuit& candidate);

/// Phase vector of the embedded action of a CNOT+diagonal circuit on the
/// ancillae-zero subspace, by exact basis-label propagation (no amplitudes,
/// so it works far beyond the dense-simulation cap). Throws if a gate is
/// neither CNOT nor diagonal, or if the embedded action is not diagonal.
PhaseVector embedded_phase_vector(const Circuit& candidate, int width_data);
PhaseVector embedded_phase_vector(const LayeredCircuit& candidate, int width_data);

}  // namespace qpar
