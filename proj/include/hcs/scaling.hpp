#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hcs/parallel.hpp"
#include "hcs/weight_mps.hpp"

namespace hcs {

/// -log w(P) against operator size k for one measurement rate.
struct NormCurve {
  double p = 0.0;
  std::size_t n_qubits = 0;
  std::vector<std::pair<std::size_t, double>> points;  // (k, log shadow norm), k increasing
  MpsParams params;
  std::size_t depth = 0;  // unitary layers
  bool converged = false;
  TruncationLedger ledger;
};

struct CurveOptions {
  /// Average -log w over the two centered placements of each support so the
  /// curve does not inherit the brick-wall parity staircase.
  bool average_alignments = true;
  double steady_tol = 1e-8;
  std::size_t max_unitary_layers = 0;  // 0 means 4N
};

/// Start site of the centered length-k support: floor((N - k) / 2).
std::size_t centered_start(std::size_t n_qubits, std::size_t k);

/// Steady-state MPS weights at rate p, queried on centered supports k = 1..k_max.
NormCurve shadow_norm_curve(std::size_t n_qubits, double p, std::size_t k_max, const MpsParams& params,
                            const CurveOptions& options = {});

/// Same curve from the dense engine (N <= 20); used as a reference.
NormCurve shadow_norm_curve_exact(std::size_t n_qubits, double p, std::size_t k_max,
                                  const CurveOptions& options = {});

struct FitResult {
  double beta = 0.0;
  double delta = 0.0;
  double intercept = 0.0;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();  // of (log beta, 2 delta, intercept)
  std::size_t k_min = 0;
  std::size_t k_max = 0;
  double rms = 0.0;
  std::size_t n_points = 0;

  double beta_error() const { return beta * std::sqrt(covariance(0, 0)); }
  double delta_error() const { return 0.5 * std::sqrt(covariance(1, 1)); }
};

/// Least squares of log norm on (k, log k, 1) over k in [k_min, k_max].
/// Throws ConfigError with fewer than 4 points or a rank-deficient design.
FitResult fit_beta_delta(const std::vector<std::pair<double, double>>& points, std::size_t k_min,
                         std::size_t k_max);
FitResult fit_beta_delta(const NormCurve& curve, std::size_t k_min, std::size_t k_max);

/// Default window [8, min(48, N - 8)].
std::pair<std::size_t, std::size_t> default_fit_window(std::size_t n_qubits);

struct SweepRow {
  double p = 0.0;
  FitResult fit;
  std::size_t depth = 0;
  bool converged = false;
  bool refinement = false;
};

struct SweepReport {
  std::size_t n_qubits = 0;
  std::vector<SweepRow> rows;      // sorted by p
  std::vector<NormCurve> curves;   // same order as rows
  double p_star = 0.0;
  double beta_min = 0.0;
  double delta_at_min = 0.0;
  FitResult fit_at_min;
  bool quadratic_ok = false;
  std::size_t local_minima = 0;  // on the coarse grid
  std::vector<std::string> warnings;
};

struct SweepOptions {
  std::size_t k_min = 8;
  std::size_t k_max = 48;
  bool refine = true;
  CurveOptions curve;
};

/// beta(p) on the grid, 5 refinement points around the coarse minimum, a
/// quadratic fit for (p*, beta_min) and a final curve at p* for Delta.
/// Grid points run in parallel.
SweepReport sweep_and_minimize(const std::vector<double>& p_grid, std::size_t n_qubits, const MpsParams& params,
                               const SweepOptions& options, Exec exec = Exec::Parallel);

/// "a:b:step" or a comma list. Throws ConfigError on malformed text.
std::vector<double> parse_p_grid(const std::string& text);

/// p,k,log_norm
void write_curves(std::ostream& out, const std::vector<NormCurve>& curves);
/// p,beta,delta,fit_rms plus bookkeeping columns.
void write_sweep(std::ostream& out, const SweepReport& report);

}  // namespace hcs
