#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hcs/errors.hpp"
#include "hcs/scaling.hpp"

using namespace hcs;

TEST_CASE("fit recovers synthetic parameters") {
  std::vector<std::pair<double, double>> pts;
  for (int k = 1; k <= 40; ++k) pts.emplace_back(k, k * std::log(2.2) + 0.6 * std::log(double(k)) + 0.1);
  const auto fit = fit_beta_delta(pts, 5, 30);
  CHECK(fit.beta == doctest::Approx(2.2).epsilon(1e-10));
  CHECK(fit.delta == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(fit.intercept == doctest::Approx(0.1).epsilon(1e-8));
  CHECK(fit.n_points == 26);
  CHECK(fit.rms < 1e-10);
}

TEST_CASE("fit rejects degenerate windows") {
  std::vector<std::pair<double, double>> pts{{1, 1.0}, {2, 2.0}, {3, 3.0}, {4, 4.0}};
  CHECK_THROWS_AS(fit_beta_delta(pts, 1, 3), ConfigError);
  std::vector<std::pair<double, double>> same{{2, 1.0}, {2, 1.1}, {2, 0.9}, {2, 1.0}};
  CHECK_THROWS_AS(fit_beta_delta(same, 1, 3), ConfigError);
}

TEST_CASE("default window") {
  CHECK(default_fit_window(64) == std::pair<std::size_t, std::size_t>{8, 48});
  CHECK(default_fit_window(32) == std::pair<std::size_t, std::size_t>{8, 24});
  CHECK(centered_start(64, 10) == 27);
}

TEST_CASE("full measurement gives beta = 3") {
  const auto curve = shadow_norm_curve(24, 1.0, 16, {16, 1e-12});
  const auto fit = fit_beta_delta(curve, 2, 16);
  CHECK(fit.beta == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(std::abs(fit.delta) < 1e-8);
}

TEST_CASE("MPS and dense curves agree") {
  CurveOptions opts;
  opts.steady_tol = 0.0;
  opts.max_unitary_layers = 48;
  for (double p : {0.2, 0.6}) {
    const auto a = shadow_norm_curve(12, p, 12, {64, 0.0}, opts);
    const auto b = shadow_norm_curve_exact(12, p, 12, opts);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
      CHECK(a.points[i].first == b.points[i].first);
      CHECK(std::abs(a.points[i].second - b.points[i].second) < 1e-8);
    }
  }
}

TEST_CASE("norm grows with k") {
  const auto curve = shadow_norm_curve(20, 0.4, 16, {32, 1e-12});
  for (std::size_t i = 1; i < curve.points.size(); ++i) CHECK(curve.points[i].second > curve.points[i - 1].second);
}

TEST_CASE("p grid parsing") {
  const auto g = parse_p_grid("0.1:0.3:0.1");
  REQUIRE(g.size() == 3);
  CHECK(g[2] == doctest::Approx(0.3));
  CHECK(parse_p_grid("0.2,0.5") == std::vector<double>{0.2, 0.5});
  CHECK_THROWS_AS(parse_p_grid("0.1:0.2"), ConfigError);
  CHECK_THROWS_AS(parse_p_grid("x"), ConfigError);
  CHECK_THROWS_AS(parse_p_grid("0.5:0.1:0.1"), ConfigError);
}

TEST_CASE("small sweep finds an interior minimum") {
  SweepOptions opts;
  opts.k_min = 3;
  opts.k_max = 12;
  const auto rep = sweep_and_minimize({0.05, 0.15, 0.25, 0.35, 0.45}, 20, {32, 1e-10}, opts);
  CHECK(rep.rows.size() == 9);
  double coarse_min = 1e9;
  for (const auto& r : rep.rows)
    if (!r.refinement) coarse_min = std::min(coarse_min, r.fit.beta);
  CHECK(rep.beta_min <= coarse_min + 1e-9);
  CHECK(rep.p_star > 0.05);
  CHECK(rep.p_star < 0.45);
  std::ostringstream out;
  write_sweep(out, rep);
  CHECK(out.str().rfind("p,beta,delta", 0) == 0);
}
