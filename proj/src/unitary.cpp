#include "qpar/unitary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qpar/error.hpp"

namespace qpar {

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  ComplexMatrix r = u.adjoint() * u;
  r -= ComplexMatrix::Identity(u.rows(), u.cols());
  return max_abs(r) <= tol;
}

double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
  return max_abs(a * b - b * a);
}

namespace {

double phase_in_2pi(const Complex& z) {
  double p = std::arg(z);
  if (p < 0) p += TWO_PI;
  // arg can return values that round up to 2π; fold them back
  if (p >= TWO_PI) p -= TWO_PI;
  return p;
}

void normalize_column_phases(ComplexMatrix& t) {
  for (Eigen::Index c = 0; c < t.cols(); ++c) {
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      const Complex entry = t(r, c);
      if (std::abs(entry) > 1e-8) {
        t.col(c) *= std::conj(entry) / std::abs(entry);
        break;
      }
    }
  }
}

}  // namespace

Eigensystem eig_unitary(const ComplexMatrix& u) {
  const Eigen::Index n = u.rows();
  if (n < 1 || (n & (n - 1)) != 0)
    throw PreconditionError("eig_unitary: dimension must be a power of two");
  if (!is_unitary(u, 1e-8))
    throw PreconditionError("eig_unitary: input is not unitary");

  // A unitary is normal, so it shares an orthonormal eigenbasis with the
  // Hermitian matrices u + u† and (u - u†)/i. Diagonalizing the first and
  // refining inside its eigenvalue clusters with the second gives an
  // orthonormal basis even when eigenvalue phases collide at ±θ.
  ComplexMatrix cos_part = u + u.adjoint();
  ComplexMatrix sin_part = (u - u.adjoint()) * Complex(0, -1);

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> cos_solver(cos_part);
  ComplexMatrix basis = cos_solver.eigenvectors();
  const Eigen::VectorXd cos_vals = cos_solver.eigenvalues();

  constexpr double CLUSTER_TOL = 1e-6;
  Eigen::Index begin = 0;
  while (begin < n) {
    Eigen::Index end = begin + 1;
    while (end < n && cos_vals(end) - cos_vals(end - 1) <= CLUSTER_TOL) ++end;
    if (end - begin > 1) {
      ComplexMatrix block = basis.middleCols(begin, end - begin);
      ComplexMatrix restricted = block.adjoint() * sin_part * block;
      restricted = (restricted + restricted.adjoint()) / 2.0;
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> refine(restricted);
      basis.middleCols(begin, end - begin) = block * refine.eigenvectors();
    }
    begin = end;
  }

  Eigen::VectorXcd d(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Complex lambda = basis.col(k).dot(u * basis.col(k));
    d(k) = lambda / std::abs(lambda);
  }

  // Deterministic output: order by eigenvalue phase, fix each column's phase.
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return phase_in_2pi(d(a)) < phase_in_2pi(d(b));
  });

  Eigensystem out;
  out.t.resize(n, n);
  out.d.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.t.col(k) = basis.col(order[k]);
    out.d(k) = d(order[k]);
  }
  normalize_column_phases(out.t);
  return out;
}

namespace {

// Circular distance between the two eigenvalue phases of a 2×2 unitary.
double eigenphase_separation(const Mat2& u) {
  const Complex tr = u(0, 0) + u(1, 1);
  const Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  const Complex disc = std::sqrt(tr * tr - 4.0 * det);
  const Complex l1 = (tr + disc) / 2.0;
  const Complex l2 = (tr - disc) / 2.0;
  if (std::abs(l1) < 1e-12 || std::abs(l2) < 1e-12) return 0.0;
  return std::abs(std::arg(l1 * std::conj(l2)));
}

}  // namespace

SimultaneousDiag simultaneous_diagonalize(const std::vector<Mat2>& us) {
  for (std::size_t i = 0; i < us.size(); ++i) {
    for (std::size_t j = i + 1; j < us.size(); ++j) {
      const double norm = commutator_norm(us[i], us[j]);
      if (norm > EPS_COMMUTE) {
        std::ostringstream msg;
        msg << "operators " << i << " and " << j
            << " do not commute (commutator max-norm " << norm << ")";
        throw NotCommutingError(i, j, norm, msg.str());
      }
    }
  }

  SimultaneousDiag out;
  out.t = Mat2::Identity();

  std::size_t pivot = us.size();
  double best_sep = 1e-12;
  for (std::size_t i = 0; i < us.size(); ++i) {
    const double sep = eigenphase_separation(us[i]);
    if (sep > best_sep) {
      best_sep = sep;
      pivot = i;
    }
  }
  if (pivot < us.size()) {
    Eigensystem es = eig_unitary(us[pivot]);
    out.t = es.t;
  }

  out.ds.reserve(us.size());
  for (const Mat2& u : us) {
    const Mat2 rotated = out.t.adjoint() * u * out.t;
    out.ds.push_back(Eigen::Vector2cd(rotated(0, 0), rotated(1, 1)));
  }
  return out;
}

}  // namespace qpar
