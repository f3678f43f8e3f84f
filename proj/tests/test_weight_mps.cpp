#include <doctest.h>

#include <bit>
#include <cmath>

#include "hcs/errors.hpp"
#include "hcs/weight_mps.hpp"

using namespace hcs;

namespace {
double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max(std::abs(b[i]), 1e-300);
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}
}  // namespace

TEST_CASE("untruncated MPS reproduces the exact weights") {
  const std::size_t n = 9;
  for (double p : {0.05, 0.3, 0.8}) {
    const CircuitShape shape{6, true};
    auto exact = evolve_exact(n, shape, p);
    WeightMPS mps(n, {256, 0.0});
    mps.apply_layers(weight_schedule(shape), p);
    mps.normalize();
    auto dense = mps.to_dense();
    CHECK(max_rel_diff(dense, exact.masses()) < 1e-9);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); mask += 5) {
      std::vector<std::size_t> support;
      for (std::size_t q = 0; q < n; ++q)
        if ((mask >> q) & 1u) support.push_back(q);
      CHECK(mps.query_weight(support) == doctest::Approx(exact.query(mask)).epsilon(1e-9));
    }
    CHECK(mps.ledger().discarded_total == 0.0);
  }
}

TEST_CASE("consecutive queries") {
  WeightMPS mps(8, {64, 1e-14});
  mps.apply_periods(8, 1.0);
  mps.normalize();
  for (std::size_t k = 1; k <= 6; ++k) {
    CHECK(mps.query_consecutive_weight(1, k) == doctest::Approx(std::pow(3.0, -double(k))).epsilon(1e-9));
  }
  CHECK_THROWS_AS(mps.query_consecutive_weight(5, 4), ConfigError);
}

TEST_CASE("bond dimension respects chi_max") {
  WeightMPS mps(16, {4, 0.0});
  mps.apply_periods(10, 0.2);
  for (std::size_t d : mps.bond_dims()) CHECK(d <= 4);
  CHECK(mps.ledger().max_bond <= 4);
  CHECK(mps.ledger().discarded_total > 0.0);
}

TEST_CASE("steady MPS matches exact steady state") {
  const std::size_t n = 10;
  MpsSteadyInfo info;
  auto mps = evolve_steady_mps(n, 0.4, {128, 0.0}, {{3, 4}, {0, 10}}, 1e-12, 2000, &info);
  CHECK(info.converged);
  auto exact = evolve_exact(n, {info.unitary_layers, false}, 0.4);
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t s = (n - k) / 2;
    CHECK(mps.query_consecutive_weight(s, k) == doctest::Approx(exact.query_consecutive(s, k)).epsilon(1e-8));
  }
}

TEST_CASE("fused layers equal separate layers") {
  WeightMPS a(7, {64, 0.0});
  WeightMPS b(7, {64, 0.0});
  a.apply_unitary_measurement(1, 0.35);
  b.apply_unitary(1);
  b.apply_measurement(0.35);
  a.normalize();
  b.normalize();
  CHECK(max_rel_diff(a.to_dense(), b.to_dense()) < 1e-12);
}

TEST_CASE("gauge does not change untruncated results") {
  const CircuitShape shape{5, true};
  std::vector<double> ref;
  for (double g : {1.0, 0.5, 2.0}) {
    WeightMPS mps(8, {256, 0.0, g});
    mps.apply_layers(weight_schedule(shape), 0.3);
    mps.normalize();
    const auto dense = mps.to_dense();
    if (ref.empty()) ref = dense;
    CHECK(max_rel_diff(dense, ref) < 1e-9);
  }
  CHECK_THROWS_AS(WeightMPS(4, {8, 0.0, 0.0}), ConfigError);
}

TEST_CASE("gauged truncation keeps large supports accurate") {
  const std::size_t n = 16;
  const double p = 0.1;
  const auto exact = evolve_exact(n, {64, false}, p);
  double err_plain = 0.0, err_gauged = 0.0;
  for (double g : {1.0, 0.75}) {
    WeightMPS mps(n, {128, 1e-12, g});
    mps.apply_layers(weight_schedule({64, false}), p);
    mps.normalize();
    double& err = g == 1.0 ? err_plain : err_gauged;
    for (std::size_t k = 1; k <= n; ++k) {
      const std::size_t s = (n - k) / 2;
      err = std::max(err, std::abs(std::log(mps.query_consecutive_weight(s, k) / exact.query_consecutive(s, k))));
    }
  }
  CHECK(err_gauged < 1e-4);
  CHECK(err_gauged < err_plain);
}
