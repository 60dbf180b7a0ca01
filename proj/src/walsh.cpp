#include "qpar/walsh.hpp"

#include <bit>
#include <cmath>

#include "qpar/constants.hpp"
#include "qpar/error.hpp"

namespace qpar {

PhaseVector PhaseVector::zeros(int n) {
  PhaseVector pv;
  pv.n = n;
  pv.omega.assign(std::size_t{1} << n, 0.0);
  return pv;
}

int parity_sign(std::uint64_t x, std::uint64_t s) {
  return (std::popcount(x & s) & 1) ? -1 : 1;
}

namespace {

// In-place Walsh–Hadamard butterfly with the (-1)^{popcount(x&s)} kernel.
void wht(std::vector<double>& v) {
  const std::size_t size = v.size();
  for (std::size_t half = 1; half < size; half <<= 1) {
    for (std::size_t block = 0; block < size; block += half << 1) {
      for (std::size_t i = block; i < block + half; ++i) {
        const double a = v[i];
        const double b = v[i + half];
        v[i] = a + b;
        v[i + half] = a - b;
      }
    }
  }
}

void check_power_of_two(std::size_t size, const char* what) {
  if (size == 0 || (size & (size - 1)) != 0)
    throw PreconditionError(std::string(what) + ": length is not a power of two");
}

}  // namespace

SubsetCoefficients walsh_coefficients(const PhaseVector& pv) {
  check_power_of_two(pv.omega.size(), "walsh_coefficients");
  SubsetCoefficients sc;
  sc.n = pv.n;
  sc.theta = pv.omega;
  wht(sc.theta);
  const double scale = 1.0 / static_cast<double>(pv.omega.size());
  for (double& t : sc.theta) t *= scale;
  return sc;
}

PhaseVector walsh_reconstruct(const SubsetCoefficients& sc) {
  check_power_of_two(sc.theta.size(), "walsh_reconstruct");
  PhaseVector pv;
  pv.n = sc.n;
  pv.omega = sc.theta;
  wht(pv.omega);
  return pv;
}

double phase_distance(double a, double b) {
  return std::abs(std::remainder(a - b, TWO_PI));
}

double phase_vector_distance(const PhaseVector& a, const PhaseVector& b) {
  if (a.omega.size() != b.omega.size())
    throw PreconditionError("phase_vector_distance: size mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.omega.size(); ++i)
    worst = std::max(worst, phase_distance(a.omega[i], b.omega[i]));
  return worst;
}

}  // namespace qpar
