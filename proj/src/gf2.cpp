#include "qpar/gf2.hpp"

#include <bit>

#include "qpar/error.hpp"

namespace qpar {

Gf2Matrix::Gf2Matrix(int n)
    : n_(n), words_per_row_((n + 63) / 64),
      words_(std::size_t(n) * ((n + 63) / 64), 0) {}

Gf2Matrix Gf2Matrix::identity(int n) {
  Gf2Matrix m(n);
  for (int i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

bool Gf2Matrix::get(int row, int col) const {
  return (row_ptr(row)[col >> 6] >> (col & 63)) & 1u;
}

void Gf2Matrix::set(int row, int col, bool value) {
  std::uint64_t& w = row_ptr(row)[col >> 6];
  const std::uint64_t mask = std::uint64_t{1} << (col & 63);
  if (value)
    w |= mask;
  else
    w &= ~mask;
}

void Gf2Matrix::add_row(int src, int dst) {
  const std::uint64_t* s = row_ptr(src);
  std::uint64_t* d = row_ptr(dst);
  for (int w = 0; w < words_per_row_; ++w) d[w] ^= s[w];
}

std::vector<int> Gf2Matrix::row_support(int row) const {
  std::vector<int> out;
  for (int col = 0; col < n_; ++col)
    if (get(row, col)) out.push_back(col);
  return out;
}

int Gf2Matrix::row_weight(int row) const {
  int total = 0;
  const std::uint64_t* r = row_ptr(row);
  for (int w = 0; w < words_per_row_; ++w) total += std::popcount(r[w]);
  return total;
}

int Gf2Matrix::col_weight(int col) const {
  int total = 0;
  for (int row = 0; row < n_; ++row) total += get(row, col);
  return total;
}

bool Gf2Matrix::is_identity() const { return *this == identity(n_); }

bool Gf2Matrix::is_permutation_matrix() const {
  std::vector<bool> col_seen(n_, false);
  for (int row = 0; row < n_; ++row) {
    if (row_weight(row) != 1) return false;
    const int col = row_support(row).front();
    if (col_seen[col]) return false;
    col_seen[col] = true;
  }
  return true;
}

bool Gf2Matrix::operator==(const Gf2Matrix& other) const {
  return n_ == other.n_ && words_ == other.words_;
}

Gf2Matrix gf2_mul(const Gf2Matrix& a, const Gf2Matrix& b) {
  if (a.dim() != b.dim())
    throw PreconditionError("gf2_mul: dimension mismatch");
  const int n = a.dim();
  Gf2Matrix out(n);
  for (int i = 0; i < n; ++i) {
    std::uint64_t* dst = out.row_ptr(i);
    for (int k = 0; k < n; ++k) {
      if (!a.get(i, k)) continue;
      const std::uint64_t* src = b.row_ptr(k);
      for (int w = 0; w < out.words_per_row_; ++w) dst[w] ^= src[w];
    }
  }
  return out;
}

Gf2Matrix gf2_invert(const Gf2Matrix& m) {
  const int n = m.dim();
  Gf2Matrix work = m;
  Gf2Matrix inv = Gf2Matrix::identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int row = col; row < n; ++row) {
      if (work.get(row, col)) {
        pivot = row;
        break;
      }
    }
    if (pivot < 0)
      throw SingularMatrixError("gf2_invert: matrix is singular (column " +
                                std::to_string(col) + " has no pivot)");
    if (pivot != col) {
      for (int w = 0; w < work.words_per_row_; ++w)
        std::swap(work.row_ptr(pivot)[w], work.row_ptr(col)[w]);
      for (int w = 0; w < inv.words_per_row_; ++w)
        std::swap(inv.row_ptr(pivot)[w], inv.row_ptr(col)[w]);
    }
    for (int row = 0; row < n; ++row) {
      if (row != col && work.get(row, col)) {
        work.add_row(col, row);
        inv.add_row(col, row);
      }
    }
  }
  return inv;
}

}  // namespace qpar
