#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qpar/constants.hpp"
#include "qpar/gate.hpp"

namespace qpar {

using ComplexMatrix = Eigen::MatrixXcd;

double max_abs(const ComplexMatrix& m);
bool is_unitary(const ComplexMatrix& u, double tol = EPS_UNITARY);
double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b);

/// Unitary eigendecomposition u = t · diag(d) · t†, with t unitary and the
/// entries of d of unit modulus. Columns are ordered by increasing eigenvalue
/// phase in [0, 2π), and each column's first nonzero entry is made real
/// positive, so the output is deterministic.
struct Eigensystem {
  ComplexMatrix t;
  Eigen::VectorXcd d;
};
Eigensystem eig_unitary(const ComplexMatrix& u);

/// Shared eigenbasis for a family of pairwise-commuting 2×2 unitaries:
/// us[i] = t · diag(ds[i]) · t† for all i. The basis comes from the family
/// member with the widest eigenvalue phase separation; if every member is
/// scalar, t = I. Throws NotCommutingError naming the offending pair.
struct SimultaneousDiag {
  Mat2 t;
  std::vector<Eigen::Vector2cd> ds;
};
SimultaneousDiag simultaneous_diagonalize(const std::vector<Mat2>& us);

}  // namespace qpar
