#include <doctest.h>

#include "qpar/error.hpp"
#include "qpar/gf2.hpp"
#include "qpar/rng.hpp"

using namespace qpar;

namespace {

Gf2Matrix random_invertible(int n, std::uint64_t seed) {
  // product of random transvections applied to I stays invertible
  Rng rng(seed);
  Gf2Matrix m = Gf2Matrix::identity(n);
  for (int step = 0; step < 4 * n; ++step) {
    const int src = rng.uniform_int(0, n - 1);
    int dst = rng.uniform_int(0, n - 2);
    if (dst >= src) ++dst;
    m.add_row(src, dst);
  }
  return m;
}

}  // namespace

TEST_CASE("gf2_mul identities") {
  const Gf2Matrix id = Gf2Matrix::identity(3);
  CHECK(gf2_mul(id, id) == id);

  Gf2Matrix t = Gf2Matrix::identity(2);
  t.set(0, 1, true);  // row-addition elementary matrix
  CHECK(gf2_mul(t, t) == Gf2Matrix::identity(2));
}

TEST_CASE("gf2_mul against gf2_invert on random invertible matrices") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Gf2Matrix m = random_invertible(4, seed);
    CHECK(gf2_mul(m, gf2_invert(m)) == Gf2Matrix::identity(4));
    CHECK(gf2_mul(gf2_invert(m), m) == Gf2Matrix::identity(4));
  }
}

TEST_CASE("gf2_invert basics") {
  CHECK(gf2_invert(Gf2Matrix::identity(2)) == Gf2Matrix::identity(2));

  Gf2Matrix t = Gf2Matrix::identity(2);
  t.set(0, 1, true);
  CHECK(gf2_invert(t) == t);  // transvections are involutions

  CHECK_THROWS_AS(gf2_invert(Gf2Matrix(2)), SingularMatrixError);
}

TEST_CASE("gf2_invert is an involution") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 2 + static_cast<int>(seed * 7) % 63;
    const Gf2Matrix m = random_invertible(n, seed + 1000);
    CHECK(gf2_invert(gf2_invert(m)) == m);
  }
}

TEST_CASE("gf2_mul rejects dimension mismatch") {
  CHECK_THROWS_AS(gf2_mul(Gf2Matrix::identity(2), Gf2Matrix::identity(3)),
                  PreconditionError);
}

TEST_CASE("permutation-matrix detection") {
  Gf2Matrix p(3);
  p.set(0, 1, true);
  p.set(1, 2, true);
  p.set(2, 0, true);
  CHECK(p.is_permutation_matrix());
  p.set(0, 0, true);
  CHECK(!p.is_permutation_matrix());
}
