#pragma once

#include <string>
#include <vector>

#include "qpar/gate.hpp"

namespace qpar {

/// Gate list over `width_data` data qubits and `width_ancilla` ancillae.
/// Ancillae occupy the high index range width_data .. width_data+width_ancilla-1
/// and are required to start and end in |0⟩ by every construction here.
struct Circuit {
  int width_data = 1;
  int width_ancilla = 0;
  std::vector<Gate> gates;
  double global_phase = 0.0;

  int width_total() const { return width_data + width_ancilla; }
};

/// Circuit partitioned into layers of qubit-disjoint gates. The layer count is
/// the operational depth measure.
struct LayeredCircuit {
  int width_data = 1;
  int width_ancilla = 0;
  std::vector<std::vector<Gate>> layers;
  double global_phase = 0.0;

  int width_total() const { return width_data + width_ancilla; }
  std::size_t gate_count() const;
};

/// Bijection on n wires; images[i] is the wire where qubit i's content ends up.
struct Permutation {
  std::vector<int> images;

  int size() const { return static_cast<int>(images.size()); }
  bool is_valid() const;
  bool is_identity() const;
  /// Nontrivial cycles (length ≥ 2), each listed from its smallest element.
  std::vector<std::vector<int>> cycles() const;
};

struct Violation {
  int gate_index;  // -1 for circuit-level violations
  std::string message;
};

/// Checks the type invariants: index ranges, distinctness, unitarity within
/// EPS_UNITARY, diagonal phase-table sizes. Reports all violations found.
std::vector<Violation> validate(const Circuit& c);

/// Also checks that each layer's gate supports are pairwise disjoint.
std::vector<Violation> validate(const LayeredCircuit& c);

Circuit flatten(const LayeredCircuit& c);

/// As-soon-as-possible layering: each gate goes to the earliest layer after
/// every earlier gate that shares a qubit with it. Preserves the relative
/// order of overlapping gates, so the flattened result is a legal reordering.
LayeredCircuit schedule_greedy(const Circuit& c);

int depth(const LayeredCircuit& c);

}  // namespace qpar
