#pragma once

#include <cstdint>
#include <string>

#include "qpar/circuit.hpp"

namespace qpar {

/// Standard quantum Fourier transform gate list: Hadamard on each qubit
/// followed by symmetric phase shifts of angle π/2^{k-j} from every later
/// qubit k. The output register comes out in bit-reversed order (the reversal
/// is not included); full_unitary(gen_qft(n)) equals R·D where D is the DFT
/// matrix with ω = e^{2πi/2^n} and R the bit-reversal permutation. Greedy
/// scheduling packs the list into exactly 2n-1 layers.
Circuit gen_qft(int n);

/// Chain of controlled-U gates on consecutive qubit pairs (i, i+1).
Circuit gen_staircase(int n, const Mat2& u);

enum class RandomFamily { Cnot, Diagonal2q, ControlledCommuting, Permutation };

RandomFamily parse_random_family(const std::string& name);  // throws ParseError

/// Deterministic-for-seed random circuits per family:
///  - Cnot: `count` uniform CNOTs on n qubits.
///  - Diagonal2q: `count` two-qubit diagonal gates (random pairs and tables).
///  - ControlledCommuting: `count` controlled-U gates onto the last of n+1
///    qubits, with U_i = T·D_i·T† for a single random T (so they commute).
///  - Permutation: swap network (3 CNOTs per transposition) realizing a
///    random permutation of n wires.
Circuit gen_random(RandomFamily family, int n, int count, std::uint64_t seed);

/// Random bijection on n wires.
Permutation gen_random_permutation(int n, std::uint64_t seed);

/// `count` two-qubit diagonal gates all touching `shared` (default qubit 0),
/// with pairwise-distinct partner qubits; requires count < n.
Circuit gen_diag_fanin_family(int n, int count, std::uint64_t seed, int shared = 0);

}  // namespace qpar
