#pragma once

#include <complex>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace qpar {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

/// Arbitrary one-qubit unitary.
struct OneQubitGate {
  int qubit;
  Mat2 u;
};

/// Controlled one-qubit unitary; applies `u` to `target` when `control` is 1.
struct ControlledUGate {
  int control;
  int target;
  Mat2 u;
};

struct CnotGate {
  int control;
  int target;
};

/// Two-qubit diagonal gate applying e^{iθ} to the |11⟩ component only.
struct SymmetricPhaseGate {
  int q1;
  int q2;
  double theta;
};

/// k-qubit diagonal gate. `phases` has 2^k entries; the entry index is formed
/// from the qubit values with qubits[0] as the most significant bit.
struct DiagonalGate {
  std::vector<int> qubits;
  std::vector<double> phases;
};

using Gate = std::variant<OneQubitGate, ControlledUGate, CnotGate,
                          SymmetricPhaseGate, DiagonalGate>;

/// Qubit indices the gate touches, in declaration order.
std::vector<int> gate_support(const Gate& g);

/// Phase table of a gate that is diagonal in the computational basis.
/// Covers DiagonalGate, SymmetricPhaseGate, and OneQubit/ControlledU gates
/// whose matrix happens to be diagonal (within `tol` on off-diagonal entries).
struct DiagonalView {
  std::vector<int> qubits;      // ordered; qubits[0] is the phase-index MSB
  std::vector<double> phases;   // 2^k entries
};
std::optional<DiagonalView> as_diagonal(const Gate& g, double tol = 1e-12);

/// Human-readable gate name ("cnot", "diagonal", ...), matching the file format.
const char* gate_kind_name(const Gate& g);

}  // namespace qpar
