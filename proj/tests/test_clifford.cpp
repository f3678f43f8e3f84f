#include <doctest.h>

#include <cmath>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "hcs/clifford.hpp"
#include "hcs/dense_oracle.hpp"
#include "hcs/errors.hpp"
#include "test_helpers.hpp"

using namespace hcs;
using testing::gate;

namespace {

std::vector<CliffordGate2> generators() {
  return {gate("ZI", "XI", "IX", "IZ"),    // H on 0
          gate("XI", "ZI", "IZ", "IX"),    // H on 1
          gate("-YI", "ZI", "IX", "IZ"),   // S on 0
          gate("XI", "ZI", "-IY", "IZ"),   // S on 1
          gate("XX", "ZI", "IX", "ZZ")};   // CNOT 0 -> 1
}

}  // namespace

TEST_CASE("invalid images are rejected") {
  CHECK_THROWS_AS(gate("XI", "XI", "IX", "IZ"), ConfigError);
  CHECK_THROWS_AS(gate("iXI", "ZI", "IX", "IZ"), ConfigError);
  CHECK_THROWS_AS(gate("XI", "ZI", "XX", "IZ"), ConfigError);
}

TEST_CASE("H, S and CNOT generate 11520 gates") {
  const auto gens = generators();
  std::unordered_set<std::uint32_t> seen;
  std::deque<CliffordGate2> frontier{CliffordGate2()};
  seen.insert(CliffordGate2().key());
  while (!frontier.empty()) {
    const CliffordGate2 g = frontier.front();
    frontier.pop_front();
    for (const auto& h : gens) {
      const CliffordGate2 next = testing::compose(g, h);
      if (seen.insert(next.key()).second) frontier.push_back(next);
    }
  }
  CHECK(seen.size() == kTwoQubitCliffordCount);
}

TEST_CASE("random gates are uniform over the group") {
  Rng rng(17);
  const std::size_t per_bin = 20;
  std::unordered_map<std::uint32_t, std::size_t> counts;
  for (std::size_t i = 0; i < per_bin * kTwoQubitCliffordCount; ++i) ++counts[random_two_qubit_clifford(rng).key()];
  CHECK(counts.size() == kTwoQubitCliffordCount);
  double chi2 = 0.0;
  for (const auto& [key, c] : counts) chi2 += (c - double(per_bin)) * (c - double(per_bin)) / per_bin;
  const double dof = kTwoQubitCliffordCount - 1.0;
  CHECK(std::abs(chi2 - dof) < 5.0 * std::sqrt(2.0 * dof));
}

TEST_CASE("lookup tables match dense conjugation") {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const CliffordGate2 g = random_two_qubit_clifford(rng);
    const oracle::Matrix u = oracle::gate_unitary(g);
    CHECK((u.adjoint() * u - oracle::Matrix::Identity(4, 4)).norm() < 1e-12);
    for (std::uint8_t code = 0; code < 16; ++code) {
      PauliString p(2);
      p.set(0, static_cast<Pauli>(code & 3));
      p.set(1, static_cast<Pauli>(code >> 2));
      const oracle::Matrix mp = oracle::pauli_matrix(p);
      const SignedPauli h = gate_conjugate(g, SignedPauli(p), 0, 1);
      CHECK((oracle::pauli_matrix(h) - u.adjoint() * mp * u).norm() < 1e-12);
      SignedPauli s(p);
      apply_gate(g, s, 0, 1, false);
      CHECK((oracle::pauli_matrix(s) - u * mp * u.adjoint()).norm() < 1e-12);
    }
  }
}

TEST_CASE("inverse undoes the gate") {
  Rng rng(8);
  for (int t = 0; t < 100; ++t) {
    const CliffordGate2 g = random_two_qubit_clifford(rng);
    CHECK(testing::compose(g, g.inverse()) == CliffordGate2());
    CHECK(testing::compose(g.inverse(), g) == CliffordGate2());
  }
}

TEST_CASE("gates act on arbitrary sites of a long string") {
  Rng rng(9);
  const CliffordGate2 g = random_two_qubit_clifford(rng);
  SignedPauli p(PauliString::parse("XIIZIY"));
  SignedPauli q = p;
  apply_gate(g, q, 3, 1, true);
  apply_gate(g, q, 3, 1, false);
  CHECK(q == p);
  CHECK(q.pauli.at(0) == Pauli::X);
}
