#include <doctest.h>

#include <cmath>

#include "hcs/appendix.hpp"
#include "hcs/dense_oracle.hpp"
#include "hcs/errors.hpp"
#include "hcs/tableau.hpp"
#include "test_helpers.hpp"

using namespace hcs;

TEST_CASE("zero state traces") {
  const auto t = StabilizerTableau::zero_state(3);
  CHECK(t.rank() == 3);
  CHECK(t.trace_pauli(PauliString::parse("ZIZ")) == 1);
  CHECK(t.trace_pauli(PauliString::parse("XII")) == 0);
  CHECK(t.trace_pauli(PauliString(3)) == 1);
}

TEST_CASE("from_generators validates its input") {
  CHECK_THROWS_AS(StabilizerTableau::from_generators(2, {SignedPauli::parse("XI"), SignedPauli::parse("ZI")}),
                  ConfigError);
  CHECK_THROWS_AS(StabilizerTableau::from_generators(2, {SignedPauli::parse("iXI")}), ConfigError);
  CHECK_THROWS_AS(StabilizerTableau::from_generators(2, {SignedPauli::parse("XX"), SignedPauli::parse("-XX")}),
                  ConfigError);
  CHECK_THROWS_AS(StabilizerTableau::from_generators(2, {SignedPauli::parse("XX"), SignedPauli::parse("XX")}),
                  ConfigError);
}

TEST_CASE("traces of random stabilizer states match dense matrices") {
  Rng rng(21);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 1 + t % 4;
    const auto st = random_stabilizer_state(n, rng);
    CHECK(st.rank() == n);
    const oracle::Matrix rho = oracle::density_matrix(st);
    CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
    CHECK((rho * rho - rho).norm() < 1e-10);
    for (std::size_t i = 0; i < (std::size_t{1} << (2 * n)); ++i) {
      const PauliString p = oracle::pauli_from_index(n, i);
      CHECK(st.trace_pauli(p) == doctest::Approx(oracle::trace_pauli(rho, p)).epsilon(1e-10));
    }
  }
}

TEST_CASE("measurement follows the Born rule and collapses") {
  Rng rng(4);
  int plus = 0;
  const int shots = 4000;
  for (int s = 0; s < shots; ++s) {
    auto t = StabilizerTableau::zero_state(2);
    const int out = t.measure(0, Pauli::X, rng);
    plus += out == 0;
    CHECK(t.trace_pauli(PauliString::parse("XI")) == (out == 0 ? 1 : -1));
    CHECK(t.measure(0, Pauli::X, rng) == out);
  }
  CHECK(std::abs(plus - shots / 2) < 4 * std::sqrt(shots / 4.0));
}

TEST_CASE("projection onto an impossible outcome is a contradiction") {
  auto t = StabilizerTableau::zero_state(2);
  CHECK_THROWS_AS(t.project(0, Pauli::Z, 1), ContradictionError);
  t.project(0, Pauli::Z, 0);
  CHECK(t.rank() == 2);
}

TEST_CASE("projection grows a mixed tableau") {
  StabilizerTableau t(3);
  CHECK(t.rank() == 0);
  t.project(1, Pauli::Y, 1);
  CHECK(t.rank() == 1);
  CHECK(t.trace_pauli(PauliString::parse("IYI")) == -1);
}

TEST_CASE("region purity matches dense partial traces") {
  Rng rng(13);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + t % 3;
    const auto st = random_stabilizer_state(n, rng);
    const oracle::Matrix rho = oracle::density_matrix(st);
    std::vector<std::size_t> region;
    for (std::size_t q = 0; q < n; ++q)
      if (coin(rng)) region.push_back(q);
    CHECK(st.region_purity(region) == doctest::Approx(oracle::region_purity(rho, region)).epsilon(1e-10));
  }
}

TEST_CASE("gates on a tableau agree with dense evolution") {
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    auto st = random_stabilizer_state(3, rng);
    const CliffordGate2 g = random_two_qubit_clifford(rng);
    const oracle::Matrix u = oracle::embed_two_qubit(oracle::gate_unitary(g), 3, 2, 0);
    const oracle::Matrix expected = u * oracle::density_matrix(st) * u.adjoint();
    st.apply_gate(g, 2, 0, false);
    CHECK((oracle::density_matrix(st) - expected).norm() < 1e-10);
  }
}
