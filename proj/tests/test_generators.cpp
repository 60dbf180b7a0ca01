#include <doctest.h>

#include <set>

#include "qpar/error.hpp"
#include "qpar/generators.hpp"
#include "qpar/io.hpp"
#include "qpar/simulate.hpp"
#include "test_helpers.hpp"

using namespace qpar;
using namespace qpar::testing;

namespace {

// DFT matrix with ω = e^{2πi/2^n}, composed with the bit-reversal output
// permutation: the oracle for the generated transform circuit.
ComplexMatrix qft_reference(int n) {
  const std::uint64_t dim = std::uint64_t{1} << n;
  ComplexMatrix dft(dim, dim);
  for (std::uint64_t r = 0; r < dim; ++r)
    for (std::uint64_t c = 0; c < dim; ++c)
      dft(r, c) = std::polar(1.0 / std::sqrt(static_cast<double>(dim)),
                             TWO_PI * static_cast<double>(r * c) / dim);
  ComplexMatrix out(dim, dim);
  for (std::uint64_t r = 0; r < dim; ++r) {
    std::uint64_t rev = 0;
    for (int b = 0; b < n; ++b) rev |= ((r >> b) & 1) << (n - 1 - b);
    out.row(r) = dft.row(rev);
  }
  return out;
}

}  // namespace

TEST_CASE("gen_qft gate count is n + n(n-1)/2") {
  for (int n = 1; n <= 8; ++n)
    CHECK(gen_qft(n).gates.size() == static_cast<std::size_t>(n + n * (n - 1) / 2));
}

TEST_CASE("gen_qft schedules to exactly 2n-1 layers") {
  for (int n = 1; n <= 8; ++n) CHECK(depth(schedule_greedy(gen_qft(n))) == 2 * n - 1);
}

TEST_CASE("gen_qft(1) is a single Hadamard") {
  const Circuit c = gen_qft(1);
  REQUIRE(c.gates.size() == 1);
  const auto* g = std::get_if<OneQubitGate>(&c.gates[0]);
  REQUIRE(g != nullptr);
  CHECK(max_abs(g->u - hadamard()) <= 1e-15);
}

TEST_CASE("gen_qft matches the DFT matrix on bit-reversed outputs") {
  for (int n = 1; n <= 5; ++n) {
    CAPTURE(n);
    CHECK(max_abs(full_unitary(gen_qft(n)) - qft_reference(n)) <= 1e-10);
  }
}

TEST_CASE("gen_staircase emits n-1 chained controlled gates") {
  CHECK(gen_staircase(2, hadamard()).gates.size() == 1);
  const Circuit c = gen_staircase(5, hadamard());
  CHECK(c.gates.size() == 4);
  CHECK(depth(schedule_greedy(c)) == longest_overlap_chain(c));
  CHECK(depth(schedule_greedy(c)) == 4);
  CHECK_THROWS_AS(gen_staircase(3, (Mat2() << 1, 1, 0, 1).finished()),
                  PreconditionError);
}

TEST_CASE("gen_random is deterministic for a fixed seed") {
  const Circuit a = gen_random(RandomFamily::Cnot, 4, 10, 7);
  const Circuit b = gen_random(RandomFamily::Cnot, 4, 10, 7);
  CHECK(circuit_to_json(a) == circuit_to_json(b));
  const Circuit c = gen_random(RandomFamily::Cnot, 4, 10, 8);
  CHECK(circuit_to_json(a) != circuit_to_json(c));
}

TEST_CASE("gen_random permutation family realizes a bijection") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Permutation p = gen_random_permutation(5, seed + 1);
    CHECK(p.is_valid());
    const Circuit c = gen_random(RandomFamily::Permutation, 5, 0, seed + 1);
    const Gf2Matrix m = gf2_simulate(c);
    CHECK(m.is_permutation_matrix());
    // swap network and Permutation agree: column j has its 1 in row images[j]
    for (int j = 0; j < 5; ++j) CHECK(m.get(p.images[j], j));
  }
}

TEST_CASE("gen_random controlled-commuting gates commute pairwise") {
  const Circuit c = gen_random(RandomFamily::ControlledCommuting, 3, 4, 2);
  std::vector<Mat2> us;
  for (const Gate& g : c.gates) {
    const auto* cu = std::get_if<ControlledUGate>(&g);
    REQUIRE(cu != nullptr);
    CHECK(cu->target == 3);
    us.push_back(cu->u);
  }
  for (std::size_t i = 0; i < us.size(); ++i)
    for (std::size_t j = i + 1; j < us.size(); ++j)
      CHECK(commutator_norm(us[i], us[j]) <= 1e-9);
}

TEST_CASE("generated circuits validate cleanly") {
  CHECK(validate(gen_qft(6)).empty());
  CHECK(validate(gen_staircase(6, hadamard())).empty());
  CHECK(validate(gen_random(RandomFamily::Cnot, 5, 20, 3)).empty());
  CHECK(validate(gen_random(RandomFamily::Diagonal2q, 5, 20, 3)).empty());
  CHECK(validate(gen_random(RandomFamily::ControlledCommuting, 4, 4, 3)).empty());
  CHECK(validate(gen_random(RandomFamily::Permutation, 6, 0, 3)).empty());
  CHECK(validate(gen_diag_fanin_family(6, 5, 3)).empty());
}

TEST_CASE("gen_diag_fanin_family gates all touch the shared qubit") {
  const Circuit c = gen_diag_fanin_family(8, 7, 11, 2);
  std::set<int> partners;
  for (const Gate& g : c.gates) {
    const auto support = gate_support(g);
    REQUIRE(support.size() == 2);
    const bool touches = support[0] == 2 || support[1] == 2;
    CHECK(touches);
    partners.insert(support[0] == 2 ? support[1] : support[0]);
  }
  CHECK(partners.size() == 7);
}

TEST_CASE("gen_staircase canonicalizes controlled-X into CNOT gates") {
  const Mat2 x = (Mat2() << 0, 1, 1, 0).finished();
  const Circuit c = gen_staircase(4, x);
  for (const Gate& g : c.gates) CHECK(std::holds_alternative<CnotGate>(g));
  CHECK_NOTHROW(gf2_simulate(c));
}
