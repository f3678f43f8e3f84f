#include <doctest.h>

#include "hcs/dense_oracle.hpp"
#include "hcs/errors.hpp"
#include "hcs/pauli.hpp"
#include "test_helpers.hpp"

using namespace hcs;

TEST_CASE("pauli strings parse and print") {
  const PauliString p = PauliString::parse("XIZY");
  CHECK(p.str() == "XIZY");
  CHECK(p.at(0) == Pauli::X);
  CHECK(p.at(3) == Pauli::Y);
  CHECK(p.support_size() == 3);
  CHECK(p.support_mask() == 0b1101);
  CHECK_THROWS_AS(PauliString::parse("XQ"), ConfigError);
  CHECK(PauliString(5).is_identity());
}

TEST_CASE("strings wider than one word") {
  PauliString p(130);
  p.set(0, Pauli::X);
  p.set(64, Pauli::Y);
  p.set(129, Pauli::Z);
  CHECK(p.n_words() == 3);
  CHECK(p.support() == std::vector<std::size_t>{0, 64, 129});
  CHECK(PauliString::parse(p.str()) == p);
}

TEST_CASE("signed paulis parse") {
  CHECK(SignedPauli::parse("-iXZ").phase == 3);
  CHECK(SignedPauli::parse("iZ").phase == 1);
  CHECK(SignedPauli::parse("-YI").sign() == -1);
  CHECK(SignedPauli::parse("XX").phase == 0);
}

TEST_CASE("single-qubit products") {
  // X Z = -i Y with the Hermitian Y.
  const SignedPauli xz = multiply(SignedPauli::parse("X"), SignedPauli::parse("Z"));
  CHECK(xz.pauli.str() == "Y");
  CHECK(xz.phase == 3);
  const SignedPauli zx = multiply(SignedPauli::parse("Z"), SignedPauli::parse("X"));
  CHECK(zx.phase == 1);
}

TEST_CASE("products and commutation agree with dense matrices") {
  Rng rng(3);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + t % 4;
    SignedPauli a(testing::random_pauli(n, rng), static_cast<std::uint8_t>(uniform_below(rng, 4)));
    SignedPauli b(testing::random_pauli(n, rng), static_cast<std::uint8_t>(uniform_below(rng, 4)));
    const oracle::Matrix ma = oracle::pauli_matrix(a), mb = oracle::pauli_matrix(b);
    CHECK((oracle::pauli_matrix(multiply(a, b)) - ma * mb).norm() < 1e-12);
    const bool dense_commute = (ma * mb - mb * ma).norm() < 1e-12;
    CHECK(commutes(a.pauli, b.pauli) == dense_commute);
  }
}

TEST_CASE("size mismatch is rejected") {
  CHECK_THROWS_AS(commutes(PauliString(2), PauliString(3)), ConfigError);
}
