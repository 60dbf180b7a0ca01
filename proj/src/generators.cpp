#include "qpar/generators.hpp"

#include <cmath>

#include "qpar/constants.hpp"
#include "qpar/error.hpp"
#include "qpar/rng.hpp"

namespace qpar {

Circuit gen_qft(int n) {
  if (n < 1) throw PreconditionError("gen_qft: n must be at least 1");
  Circuit c;
  c.width_data = n;
  const Mat2 hadamard = (Mat2() << 1, 1, 1, -1).finished() / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    c.gates.push_back(OneQubitGate{j, hadamard});
    for (int k = j + 1; k < n; ++k) {
      const double angle = TWO_PI / 2.0 / std::pow(2.0, k - j);  // π / 2^{k-j}
      c.gates.push_back(SymmetricPhaseGate{j, k, angle});
    }
  }
  return c;
}

Circuit gen_staircase(int n, const Mat2& u) {
  if (n < 2) throw PreconditionError("gen_staircase: n must be at least 2");
  Mat2 residual = u.adjoint() * u - Mat2::Identity();
  if (residual.cwiseAbs().maxCoeff() > EPS_UNITARY)
    throw PreconditionError("gen_staircase: u is not unitary");
  const Mat2 x = (Mat2() << 0, 1, 1, 0).finished();
  const bool is_cnot = (u - x).cwiseAbs().maxCoeff() <= 1e-15;
  Circuit c;
  c.width_data = n;
  for (int i = 0; i + 1 < n; ++i) {
    if (is_cnot)
      c.gates.push_back(CnotGate{i, i + 1});
    else
      c.gates.push_back(ControlledUGate{i, i + 1, u});
  }
  return c;
}

RandomFamily parse_random_family(const std::string& name) {
  if (name == "cnot") return RandomFamily::Cnot;
  if (name == "diagonal-2q") return RandomFamily::Diagonal2q;
  if (name == "controlled-commuting") return RandomFamily::ControlledCommuting;
  if (name == "permutation") return RandomFamily::Permutation;
  throw ParseError("unknown random family '" + name + "'");
}

namespace {

void append_swap(Circuit& c, int a, int b) {
  c.gates.push_back(CnotGate{a, b});
  c.gates.push_back(CnotGate{b, a});
  c.gates.push_back(CnotGate{a, b});
}

}  // namespace

Circuit gen_random(RandomFamily family, int n, int count, std::uint64_t seed) {
  if (n < 1) throw PreconditionError("gen_random: n must be at least 1");
  Rng rng(seed);
  Circuit c;
  c.width_data = n;

  switch (family) {
    case RandomFamily::Cnot: {
      if (n < 2) throw PreconditionError("gen_random: cnot family needs n >= 2");
      for (int i = 0; i < count; ++i) {
        const int control = rng.uniform_int(0, n - 1);
        int target = rng.uniform_int(0, n - 2);
        if (target >= control) ++target;
        c.gates.push_back(CnotGate{control, target});
      }
      break;
    }
    case RandomFamily::Diagonal2q: {
      if (n < 2) throw PreconditionError("gen_random: diagonal-2q family needs n >= 2");
      for (int i = 0; i < count; ++i) {
        const int a = rng.uniform_int(0, n - 1);
        int b = rng.uniform_int(0, n - 2);
        if (b >= a) ++b;
        if (rng.uniform() < 0.5) {
          c.gates.push_back(SymmetricPhaseGate{a, b, rng.uniform(-TWO_PI, TWO_PI)});
        } else {
          std::vector<double> phases(4);
          for (double& p : phases) p = rng.uniform(-TWO_PI, TWO_PI);
          c.gates.push_back(DiagonalGate{{a, b}, std::move(phases)});
        }
      }
      break;
    }
    case RandomFamily::ControlledCommuting: {
      // n controls, shared target on the extra last wire; all U_i share the
      // eigenbasis T, so they commute exactly.
      c.width_data = n + 1;
      const int target = n;
      const Mat2 t = rng.random_unitary2();
      const auto controls = rng.permutation(n);
      for (int i = 0; i < count; ++i) {
        Eigen::Vector2cd d(std::polar(1.0, rng.uniform(-TWO_PI, TWO_PI)),
                           std::polar(1.0, rng.uniform(-TWO_PI, TWO_PI)));
        const Mat2 u = t * d.asDiagonal() * t.adjoint();
        c.gates.push_back(ControlledUGate{controls[i % n], target, u});
      }
      break;
    }
    case RandomFamily::Permutation: {
      const Permutation p = gen_random_permutation(n, seed);
      for (const auto& cycle : p.cycles())
        for (std::size_t i = 1; i < cycle.size(); ++i)
          append_swap(c, cycle[0], cycle[i]);
      break;
    }
  }
  return c;
}

Permutation gen_random_permutation(int n, std::uint64_t seed) {
  if (n < 1) throw PreconditionError("gen_random_permutation: n must be at least 1");
  Rng rng(seed);
  return Permutation{rng.permutation(n)};
}

Circuit gen_diag_fanin_family(int n, int count, std::uint64_t seed, int shared) {
  if (count >= n)
    throw PreconditionError("gen_diag_fanin_family: need count < n for distinct partners");
  if (shared < 0 || shared >= n)
    throw PreconditionError("gen_diag_fanin_family: shared qubit out of range");
  Rng rng(seed);
  Circuit c;
  c.width_data = n;
  std::vector<int> partners;
  for (int q = 0; q < n; ++q)
    if (q != shared) partners.push_back(q);
  for (int i = n - 2; i > 0; --i)
    std::swap(partners[i], partners[rng.uniform_int(0, i)]);
  for (int i = 0; i < count; ++i) {
    const int other = partners[i];
    if (rng.uniform() < 0.5) {
      c.gates.push_back(SymmetricPhaseGate{shared, other, rng.uniform(-TWO_PI, TWO_PI)});
    } else {
      std::vector<double> phases(4);
      for (double& p : phases) p = rng.uniform(-TWO_PI, TWO_PI);
      // orientation varies: sometimes the shared qubit is listed second
      if (rng.uniform() < 0.5)
        c.gates.push_back(DiagonalGate{{shared, other}, std::move(phases)});
      else
        c.gates.push_back(DiagonalGate{{other, shared}, std::move(phases)});
    }
  }
  return c;
}

}  // namespace qpar
