#pragma once

#include <string>

#include "qpar/circuit.hpp"
#include "qpar/unitary.hpp"
#include "qpar/walsh.hpp"

namespace qpar {

/// Output of a parallelization pass: a layered circuit with freshly allocated
/// ancillae (high wire indices) that realizes the source operator on the
/// ancillae-zero subspace, together with the construction's depth bound.
struct PassResult {
  LayeredCircuit circuit;
  int ancillae_used = 0;
  long claimed_depth_bound = 0;
  std::string notes;
};

/// Permutation in at most 4 CNOT layers with n ancillae: copy out, cancel the
/// originals, copy back in permuted order, cancel the ancillae. Fixed points
/// contribute no gates.
PassResult permute_with_ancillae(const Permutation& p);

/// Permutation in at most 6 CNOT layers with no ancillae: every cycle is the
/// composition of two sets of disjoint transpositions, and each transposition
/// set runs as parallel 3-CNOT swaps.
PassResult permute_no_ancillae(const Permutation& p);

/// Controlled gates (controlled-U or CNOT) sharing one control, applied to
/// distinct targets: fan the control out over a CNOT copy tree, fire all n
/// gates in one layer, uncopy. Depth 2⌈log2 n⌉+1 with n-1 ancillae.
PassResult fanout_parallelize(const Circuit& input);

/// Two-qubit diagonal gates sharing one qubit, partners distinct: entangled
/// copies of the shared qubit let all gates fire at once. Depth 2⌈log2 n⌉+1
/// with n-1 ancillae.
PassResult diag_fanin_parallelize(const Circuit& input);

/// Controlled-U gates with mutually commuting U's onto one target: rotate the
/// target into the shared eigenbasis, apply the controlled phases via the
/// diagonal fan-in, rotate back. Depth 2⌈log2 n⌉+3 with n-1 ancillae.
PassResult commuting_fanin_parallelize(const Circuit& input);

/// Circuit on k + t qubits applying u^q to the trailing t-qubit register,
/// where q is the binary integer on the leading k control qubits (control
/// qubit 0 is the most significant bit). Requires t = 1 or u diagonal; a
/// basis change on a wider register is not expressible in the gate set.
PassResult power_circuit(const ComplexMatrix& u, int control_bits);

/// Commuting diagonal circuit compression: merge all gates on the same qubit
/// tuple into one (phases add), then pack the merged gates greedily into
/// layers of disjoint tuples. With log_depth set, per-qubit copy trees run
/// every merged gate in a single middle layer instead.
PassResult diag_compress(const Circuit& input, bool log_depth = false);

/// CNOT circuit resynthesis to O(log n) depth with O(n²) ancillae: extract
/// the GF(2) map M, build each output row as a balanced tree of partial sums
/// on dedicated ancillae, uncompute the interior, rebuild the inputs from the
/// outputs via M⁻¹ to cancel them, and shift the outputs onto the data wires.
PassResult cnot_parallelize(const Circuit& input);

/// Exact synthesis of an arbitrary diagonal operator with no ancillae: expand
/// the phase vector in the parity basis and emit, per surviving subset, a
/// balanced CNOT parity tree, a one-qubit ±θ phase, and the inverse tree.
/// The empty-subset coefficient becomes the circuit's global phase.
PassResult morse_synthesize(const PhaseVector& pv);

}  // namespace qpar
