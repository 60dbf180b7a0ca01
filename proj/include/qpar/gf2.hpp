#pragma once

#include <cstdint>
#include <vector>

namespace qpar {

/// Square bit matrix over GF(2). Rows are packed into 64-bit words; this is
/// the linear map computed by a CNOT circuit (output = M · input).
class Gf2Matrix {
 public:
  Gf2Matrix() : n_(0), words_per_row_(0) {}
  explicit Gf2Matrix(int n);
  static Gf2Matrix identity(int n);

  int dim() const { return n_; }
  bool get(int row, int col) const;
  void set(int row, int col, bool value);

  /// row[dst] += row[src] (mod 2); the effect of CNOT(src→dst) on wire forms.
  void add_row(int src, int dst);

  std::vector<int> row_support(int row) const;
  int row_weight(int row) const;
  int col_weight(int col) const;

  bool is_identity() const;
  bool is_permutation_matrix() const;

  bool operator==(const Gf2Matrix& other) const;
  bool operator!=(const Gf2Matrix& other) const { return !(*this == other); }

 private:
  int n_;
  int words_per_row_;
  std::vector<std::uint64_t> words_;  // row-major

  std::uint64_t* row_ptr(int row) { return words_.data() + std::size_t(row) * words_per_row_; }
  const std::uint64_t* row_ptr(int row) const {
    return words_.data() + std::size_t(row) * words_per_row_;
  }

  friend Gf2Matrix gf2_mul(const Gf2Matrix& a, const Gf2Matrix& b);
  friend Gf2Matrix gf2_invert(const Gf2Matrix& m);
};

/// Product over GF(2). Throws PreconditionError on dimension mismatch.
Gf2Matrix gf2_mul(const Gf2Matrix& a, const Gf2Matrix& b);

/// Inverse via Gauss–Jordan elimination. Throws SingularMatrixError when the
/// matrix is singular (i.e. it did not come from a reversible CNOT circuit).
Gf2Matrix gf2_invert(const Gf2Matrix& m);

}  // namespace qpar
