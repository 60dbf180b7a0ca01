#pragma once

namespace qpar {

// Numerical tolerances used across the library.
inline constexpr double EPS_UNITARY = 1e-10;  // max-norm tolerance for u†u = I
inline constexpr double EPS_COMMUTE = 1e-9;   // max-norm tolerance for commutators
inline constexpr double PRUNE_EPS = 1e-12;    // subset coefficients below this are dropped

// Size caps for the brute-force simulators.
inline constexpr int SIM_MAX_QUBITS = 22;    // state-vector simulation
inline constexpr int DENSE_MAX_QUBITS = 10;  // full-unitary construction
inline constexpr int MORSE_MAX_N = 10;       // parity-basis synthesis (gate count is Θ(2^n))

inline constexpr double TWO_PI = 6.28318530717958647692528676655900577;

}  // namespace qpar
