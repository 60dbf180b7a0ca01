#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "qpar/constants.hpp"
#include "qpar/gate.hpp"

namespace qpar {

/// Seeded generator with explicit double extraction, so the same seed gives
/// the same stream on every platform (std::normal_distribution and friends
/// are implementation-defined; this avoids them).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }

  /// Standard normal via Box–Muller.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(TWO_PI * u2);
  }

  Complex normal_complex() { return {normal(), normal()}; }

  /// Haar-ish random 2×2 unitary: Gram–Schmidt of a complex Gaussian matrix.
  Mat2 random_unitary2() {
    Eigen::Vector2cd a(normal_complex(), normal_complex());
    Eigen::Vector2cd b(normal_complex(), normal_complex());
    a.normalize();
    b -= a * a.dot(b);
    b.normalize();
    Mat2 u;
    u.col(0) = a;
    u.col(1) = b;
    return u;
  }

  /// Fisher–Yates shuffle of 0..n-1.
  std::vector<int> permutation(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(p[i], p[uniform_int(0, i)]);
    return p;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qpar
