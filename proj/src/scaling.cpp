#include "hcs/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "hcs/errors.hpp"
#include "hcs/weight_exact.hpp"

namespace hcs {

std::size_t centered_start(std::size_t n_qubits, std::size_t k) { return (n_qubits - k) / 2; }

namespace {

template <class Query>
std::vector<std::pair<std::size_t, double>> centered_points(std::size_t n, std::size_t k_max, bool average,
                                                            Query&& query) {
  std::vector<std::pair<std::size_t, double>> pts;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const std::size_t s = centered_start(n, k);
    double y = -std::log(query(s, k));
    if (average && s + 1 + k <= n) y = 0.5 * (y - std::log(query(s + 1, k)));
    if (!std::isfinite(y)) {
      throw ConfigError("weight of a size-" + std::to_string(k) + " support vanishes; the norm is infinite");
    }
    pts.emplace_back(k, y);
  }
  return pts;
}

}  // namespace

NormCurve shadow_norm_curve(std::size_t n_qubits, double p, std::size_t k_max, const MpsParams& params,
                            const CurveOptions& options) {
  if (k_max == 0 || k_max > n_qubits) throw ConfigError("k_max must lie in 1..N");
  const std::size_t probe_k = std::max<std::size_t>(1, k_max);
  const std::vector<std::pair<std::size_t, std::size_t>> probes = {
      {centered_start(n_qubits, probe_k), probe_k},
      {centered_start(n_qubits, (probe_k + 1) / 2), (probe_k + 1) / 2}};
  MpsSteadyInfo info;
  const WeightMPS m =
      evolve_steady_mps(n_qubits, p, params, probes, options.steady_tol, options.max_unitary_layers, &info);
  NormCurve c;
  c.p = p;
  c.n_qubits = n_qubits;
  c.params = params;
  c.depth = info.unitary_layers;
  c.converged = info.converged;
  c.ledger = m.ledger();
  c.points = centered_points(n_qubits, k_max, options.average_alignments,
                             [&](std::size_t s, std::size_t k) { return m.query_consecutive_weight(s, k); });
  return c;
}

NormCurve shadow_norm_curve_exact(std::size_t n_qubits, double p, std::size_t k_max, const CurveOptions& options) {
  if (k_max == 0 || k_max > n_qubits) throw ConfigError("k_max must lie in 1..N");
  SteadyStateInfo info;
  const RegionWeightVector v = evolve_steady(n_qubits, p, options.steady_tol, options.max_unitary_layers, &info);
  NormCurve c;
  c.p = p;
  c.n_qubits = n_qubits;
  c.params = MpsParams{0, 0.0};
  c.depth = info.unitary_layers;
  c.converged = info.converged;
  c.points = centered_points(n_qubits, k_max, options.average_alignments,
                             [&](std::size_t s, std::size_t k) { return v.query_consecutive(s, k); });
  return c;
}

FitResult fit_beta_delta(const std::vector<std::pair<double, double>>& points, std::size_t k_min,
                         std::size_t k_max) {
  if (k_min < 1 || k_max <= k_min) throw ConfigError("fit window needs 1 <= k_min < k_max");
  std::vector<std::pair<double, double>> sel;
  for (const auto& pt : points) {
    if (pt.first >= static_cast<double>(k_min) && pt.first <= static_cast<double>(k_max)) sel.push_back(pt);
  }
  if (sel.size() < 4) throw ConfigError("fit needs at least 4 points in the window");
  const Eigen::Index n = static_cast<Eigen::Index>(sel.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = sel[i].first;
    a(i, 1) = std::log(sel[i].first);
    a(i, 2) = 1.0;
    y(i) = sel[i].second;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < 3) throw ConfigError("fit design is rank deficient; widen the k window");
  const Eigen::Vector3d c = qr.solve(y);
  const Eigen::VectorXd resid = a * c - y;
  FitResult f;
  f.beta = std::exp(c(0));
  f.delta = c(1) / 2.0;
  f.intercept = c(2);
  f.k_min = k_min;
  f.k_max = k_max;
  f.n_points = sel.size();
  f.rms = std::sqrt(resid.squaredNorm() / n);
  const double s2 = n > 3 ? resid.squaredNorm() / (n - 3) : 0.0;
  f.covariance = s2 * (a.transpose() * a).inverse();
  return f;
}

FitResult fit_beta_delta(const NormCurve& curve, std::size_t k_min, std::size_t k_max) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(curve.points.size());
  for (const auto& [k, y] : curve.points) pts.emplace_back(static_cast<double>(k), y);
  return fit_beta_delta(pts, k_min, k_max);
}

std::pair<std::size_t, std::size_t> default_fit_window(std::size_t n_qubits) {
  const std::size_t hi = n_qubits > 8 ? std::min<std::size_t>(48, n_qubits - 8) : 0;
  return {8, hi};
}

SweepReport sweep_and_minimize(const std::vector<double>& p_grid, std::size_t n_qubits, const MpsParams& params,
                               const SweepOptions& options, Exec exec) {
  for (double p : p_grid) {
    if (!(p > 0.0 && p <= 1.0)) throw ConfigError("sweep rates must lie in (0, 1]");
  }
  if (options.k_max > n_qubits) throw ConfigError("k_max exceeds N");
  std::vector<double> grid = p_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const std::size_t min_rates = options.refine ? 5 : 3;
  if (grid.size() < min_rates) throw ConfigError("sweep needs at least " + std::to_string(min_rates) + " distinct rates");

  auto run = [&](const std::vector<double>& ps, bool refinement) {
    std::vector<SweepRow> rows(ps.size());
    std::vector<NormCurve> curves(ps.size());
    for_each_index(ps.size(), exec, [&](std::size_t i) {
      curves[i] = shadow_norm_curve(n_qubits, ps[i], options.k_max, params, options.curve);
      rows[i].p = ps[i];
      rows[i].fit = fit_beta_delta(curves[i], options.k_min, options.k_max);
      rows[i].depth = curves[i].depth;
      rows[i].converged = curves[i].converged;
      rows[i].refinement = refinement;
    });
    return std::make_pair(rows, curves);
  };

  SweepReport rep;
  rep.n_qubits = n_qubits;
  auto [rows, curves] = run(grid, false);

  std::size_t imin = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].fit.beta < rows[imin].fit.beta) imin = i;
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const bool left = i == 0 || rows[i].fit.beta < rows[i - 1].fit.beta;
    const bool right = i + 1 == rows.size() || rows[i].fit.beta < rows[i + 1].fit.beta;
    if (left && right) ++rep.local_minima;
  }
  if (rep.local_minima != 1) {
    rep.warnings.push_back("beta(p) has " + std::to_string(rep.local_minima) + " local minima on the grid");
  }
  const bool interior = imin > 0 && imin + 1 < rows.size();
  if (!interior) rep.warnings.push_back("grid minimum sits at the edge of the grid");

  const double p0 = rows[imin].p;
  const double h_lo = imin > 0 ? p0 - rows[imin - 1].p : (imin + 1 < rows.size() ? rows[imin + 1].p - p0 : 0.05);
  const double h_hi = imin + 1 < rows.size() ? rows[imin + 1].p - p0 : h_lo;
  double lo = p0 - h_lo, hi = p0 + h_hi;

  if (options.refine) {
    // Five points around the coarse minimum, the minimum itself included.
    std::vector<double> extra;
    for (double f : {-0.5, -0.25, 0.25, 0.5}) {
      const double p = p0 + f * (f < 0 ? h_lo : h_hi);
      if (p > 0.0 && p <= 1.0) extra.push_back(p);
    }
    auto [r2, c2] = run(extra, true);
    rows.insert(rows.end(), r2.begin(), r2.end());
    curves.insert(curves.end(), c2.begin(), c2.end());
  }

  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rows[a].p < rows[b].p; });
  for (std::size_t i : order) {
    rep.rows.push_back(rows[i]);
    rep.curves.push_back(std::move(curves[i]));
  }

  // Quadratic through every point in the bracket around the coarse minimum.
  std::vector<std::pair<double, double>> local;
  for (const auto& r : rep.rows) {
    if (r.p >= lo - 1e-12 && r.p <= hi + 1e-12) local.emplace_back(r.p, r.fit.beta);
  }
  double p_star = p0, beta_star = rows[imin].fit.beta;
  for (const auto& r : rep.rows) {
    if (r.fit.beta < beta_star) {
      beta_star = r.fit.beta;
      p_star = r.p;
    }
  }
  if (interior && local.size() >= 3) {
    Eigen::MatrixXd a(local.size(), 3);
    Eigen::VectorXd y(local.size());
    for (std::size_t i = 0; i < local.size(); ++i) {
      const double x = local[i].first - p0;
      a(i, 0) = x * x;
      a(i, 1) = x;
      a(i, 2) = 1.0;
      y(i) = local[i].second;
    }
    const Eigen::Vector3d c = a.colPivHouseholderQr().solve(y);
    const double vertex = c(0) > 0.0 ? -c(1) / (2.0 * c(0)) : 0.0;
    if (c(0) > 0.0 && p0 + vertex >= lo && p0 + vertex <= hi) {
      rep.quadratic_ok = true;
      p_star = p0 + vertex;
      beta_star = c(2) - c(1) * c(1) / (4.0 * c(0));
    } else {
      rep.warnings.push_back("beta(p) is not convex near the grid minimum; using the discrete minimum");
    }
  }
  rep.p_star = p_star;
  rep.beta_min = beta_star;

  const NormCurve at_min = shadow_norm_curve(n_qubits, p_star, options.k_max, params, options.curve);
  rep.fit_at_min = fit_beta_delta(at_min, options.k_min, options.k_max);
  rep.delta_at_min = rep.fit_at_min.delta;
  return rep;
}

std::vector<double> parse_p_grid(const std::string& text) {
  std::vector<double> out;
  auto num = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw ConfigError("trailing text");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + s + "' in p grid");
    }
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw ConfigError("p grid range must be start:stop:step");
    const double a = num(parts[0]), b = num(parts[1]), step = num(parts[2]);
    if (!(step > 0.0) || b < a) throw ConfigError("p grid range needs step > 0 and stop >= start");
    const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) out.push_back(std::round((a + i * step) * 1e12) / 1e12);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(num(item));
  }
  if (out.empty()) throw ConfigError("empty p grid");
  return out;
}

void write_curves(std::ostream& out, const std::vector<NormCurve>& curves) {
  out << "p,k,log_norm\n";
  const auto old = out.precision(12);
  for (const auto& c : curves) {
    for (const auto& [k, y] : c.points) out << c.p << ',' << k << ',' << y << '\n';
  }
  out.precision(old);
}

void write_sweep(std::ostream& out, const SweepReport& report) {
  out << "p,beta,delta,fit_rms,beta_error,depth,converged,refinement\n";
  const auto old = out.precision(10);
  for (const auto& r : report.rows) {
    out << r.p << ',' << r.fit.beta << ',' << r.fit.delta << ',' << r.fit.rms << ',' << r.fit.beta_error() << ','
        << r.depth << ',' << (r.converged ? 1 : 0) << ',' << (r.refinement ? 1 : 0) << '\n';
  }
  out << "# minimum p_star=" << report.p_star << " beta_min=" << report.beta_min
      << " delta=" << report.delta_at_min << " quadratic_fit=" << (report.quadratic_ok ? "ok" : "failed") << '\n';
  for (const auto& w : report.warnings) out << "# warning: " << w << '\n';
  out.precision(old);
}

}  // namespace hcs
