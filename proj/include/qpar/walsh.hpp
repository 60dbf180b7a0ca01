#pragma once

#include <cstdint>
#include <vector>

namespace qpar {

/// Exact description of a diagonal operator on n qubits: one phase angle per
/// basis state. Angles are stored unreduced; comparisons are made mod 2π.
struct PhaseVector {
  int n = 0;
  std::vector<double> omega;  // 2^n entries, basis-indexed (qubit 0 = MSB)

  static PhaseVector zeros(int n);
};

/// Coefficients of a phase vector in the parity basis: omega = Σ_s theta[s]·μ_s
/// where μ_s(x) = +1 if x has an even number of 1-bits inside s, -1 otherwise.
/// theta[0] is the global-phase component.
struct SubsetCoefficients {
  int n = 0;
  std::vector<double> theta;  // indexed by subset bitmask, 2^n entries
};

/// μ_s(x) as ±1.
int parity_sign(std::uint64_t x, std::uint64_t s);

/// theta[s] = 2^{-n} Σ_x omega[x]·μ_s(x); a scaled Walsh–Hadamard transform.
SubsetCoefficients walsh_coefficients(const PhaseVector& pv);

/// Inverse of walsh_coefficients (exact up to floating-point roundoff).
PhaseVector walsh_reconstruct(const SubsetCoefficients& sc);

/// Distance from a-b to the nearest multiple of 2π, in [0, π].
double phase_distance(double a, double b);

/// Max phase_distance over entries; the operator distance of two diagonal
/// circuits up to global phase is bounded by comparing with offsets removed.
double phase_vector_distance(const PhaseVector& a, const PhaseVector& b);

}  // namespace qpar
