#include <doctest.h>

#include <bit>
#include <cmath>
#include <map>

#include "hcs/appendix.hpp"
#include "hcs/errors.hpp"
#include "hcs/weight_exact.hpp"

using namespace hcs;

TEST_CASE("area toy closed form") {
  CHECK(toy_area(1, 1).weight == doctest::Approx(1.0 / 3));
  CHECK(toy_area(2, 3).weight == doctest::Approx(std::pow(5.0, -3)));
  CHECK(toy_area(3, 1).beta == doctest::Approx(std::cbrt(9.0)));
  CHECK_THROWS_AS(toy_area(0, 1), ConfigError);
}

TEST_CASE("volume toy closed form") {
  const auto v = toy_volume(2, 1, 12);
  const double q = 1.0 / 15, r = 7.0 / 15, eps = 1.0 / 65;
  CHECK(v.weight == doctest::Approx(q + eps * (r - q)));
  CHECK(toy_volume_beta(0.5) == doctest::Approx(std::sqrt(15.0)));
  CHECK(toy_volume_beta(1e-3) == doctest::Approx(2.0).epsilon(1e-2));
  CHECK_THROWS_AS(toy_volume(1, 1, 4), ConfigError);
  CHECK_THROWS_AS(toy_volume(3, 1, 10), ConfigError);
  CHECK_THROWS_AS(toy_volume_beta(1.0), ConfigError);
  CHECK_FALSE(BlockToySpec{2, 1, ToyPhase::Volume, 4}.validate().empty());
}

namespace {
int omega(std::uint64_t ax, std::uint64_t az, std::uint64_t bx, std::uint64_t bz) {
  return std::popcount((ax & bz) ^ (az & bx)) & 1;
}
}  // namespace

TEST_CASE("random symplectic maps preserve the form") {
  Rng rng(6);
  for (std::size_t n : {1, 3, 7}) {
    const auto s = random_symplectic(n, rng);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(omega(s.x_img_x[i], s.x_img_z[i], s.z_img_x[j], s.z_img_z[j]) == (i == j));
        CHECK(omega(s.x_img_x[i], s.x_img_z[i], s.x_img_x[j], s.x_img_z[j]) == 0);
        CHECK(omega(s.z_img_x[i], s.z_img_z[i], s.z_img_x[j], s.z_img_z[j]) == 0);
      }
    }
  }
}

TEST_CASE("random symplectic images are uniform") {
  Rng rng(10);
  std::map<std::pair<std::uint64_t, std::uint64_t>, int> counts;
  const int draws = 30000;
  for (int t = 0; t < draws; ++t) ++counts[random_symplectic(2, rng).apply(0, 1)];
  CHECK(counts.size() == 15);
  double chi2 = 0.0;
  for (const auto& [k, c] : counts) chi2 += (c - draws / 15.0) * (c - draws / 15.0) / (draws / 15.0);
  CHECK(chi2 < 41.3);  // 99.9% quantile for 14 degrees of freedom is 36.1
}

TEST_CASE("toy Monte Carlo matches the closed forms") {
  {
    const BlockToySpec spec{2, 2, ToyPhase::Area, 0};
    const auto e = toy_monte_carlo(spec, toy_block_pauli(spec), 20000, 3);
    CHECK(std::abs(e.weight - toy_area(2, 2).weight) < 4 * e.std_error);
  }
  {
    const BlockToySpec spec{2, 1, ToyPhase::Volume, 8};
    const auto e = toy_monte_carlo(spec, toy_block_pauli(spec), 20000, 4);
    CHECK(std::abs(e.weight - toy_volume(2, 1, 8).weight) < 4 * e.std_error);
  }
  const BlockToySpec spec{2, 1, ToyPhase::Area, 0};
  CHECK_THROWS_AS(toy_monte_carlo(spec, PauliString::parse("ZI"), 10, 1), ConfigError);
}

TEST_CASE("two-site Ising energy") {
  for (double h : {0.3, 1.0, 2.5}) {
    const auto st = tfim_solve(2, h);
    CHECK(st.energy == doctest::Approx(-std::sqrt(1.0 + 4.0 * h * h)).epsilon(1e-8));
    CHECK(st.residual < 1e-9);
  }
}

TEST_CASE("Lanczos agrees with dense diagonalization") {
  const auto a = tfim_solve(9, 0.8, TfimSolver::Dense);
  const auto b = tfim_solve(9, 0.8, TfimSolver::Lanczos);
  CHECK(a.energy == doctest::Approx(b.energy).epsilon(1e-11));
  CHECK((a.psi - b.psi).norm() < 1e-6);
  CHECK(statmech_pauli_weight(a.psi, {3, 4, 5}) ==
        doctest::Approx(statmech_pauli_weight(b.psi, {3, 4, 5})).epsilon(1e-6));
  CHECK_THROWS_AS(tfim_solve(kTfimMaxSites + 1, 1.0), ConfigError);
}

TEST_CASE("stat-mech weights of product states") {
  const std::size_t n = 5;
  Eigen::VectorXd plus = Eigen::VectorXd::Ones(32);
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(32);
  zero(0) = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::size_t> support;
    for (std::size_t q = 0; q < k; ++q) support.push_back(q);
    CHECK(statmech_pauli_weight(plus, support) == doctest::Approx(std::pow(3.0, -double(k))));
    CHECK(statmech_pauli_weight(zero, support) == 0.0);
  }
  CHECK_THROWS_AS(statmech_pauli_weight(Eigen::VectorXd::Ones(6), {0}), ConfigError);
}

TEST_CASE("stat-mech weight grows with the field") {
  double prev = 0.0;
  for (double h : {0.2, 1.0, 5.0}) {
    const double w = statmech_pauli_weight(tfim_ground_state(8, h), {3, 4});
    CHECK(w > prev);
    prev = w;
  }
  CHECK(prev < 1.0 / 9.0);
}

TEST_CASE("perturbative expressions") {
  const auto b = perturbative_betas(0.7, 1.3, 1.0);
  CHECK(b.beta_volume == doctest::Approx(1.0 + 2.0 / std::tanh(0.7)));
  CHECK(b.beta_area == doctest::Approx(3.0));
  CHECK(tfim_beta_small_h(0.2) > 40.0);
  CHECK(tfim_beta_large_h(1e6) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK_THROWS_AS(perturbative_betas(0.0, 1.0, 0.5), ConfigError);
}

TEST_CASE("entanglement features and weights are inverse transforms") {
  Rng rng(2);
  std::vector<double> w(64);
  for (auto& x : w) x = uniform01(rng);
  const auto back = ef_to_weights(weights_to_ef(w));
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(back[i] == doctest::Approx(w[i]).epsilon(1e-10));
  std::vector<double> full(16);
  for (std::size_t a = 0; a < 16; ++a) full[a] = std::pow(3.0, -std::popcount(a));
  for (double f : weights_to_ef(full)) CHECK(f == doctest::Approx(1.0));
  CHECK_THROWS_AS(weights_to_ef(std::vector<double>(6)), ConfigError);
}

TEST_CASE("features of circuit weights stay in [0, 1]") {
  const auto w = evolve_exact(5, {4, true}, 0.4);
  std::vector<double> table(32);
  for (std::uint64_t a = 0; a < 32; ++a) table[a] = w.query(a);
  for (double f : weights_to_ef(table)) {
    CHECK(f > -1e-12);
    CHECK(f < 1.0 + 1e-12);
  }
}
