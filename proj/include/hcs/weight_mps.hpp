#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "hcs/circuit.hpp"
#include "hcs/weight_exact.hpp"

namespace hcs {

struct MpsParams {
  std::size_t chi_max = 128;
  double trunc_tol = 1e-12;  // max discarded squared singular mass per update, relative
  /// Tensors hold m[A] * gauge^|A| instead of the masses m[A]. A diagonal
  /// similarity, so exact results do not depend on it; it only changes which
  /// regions dominate the norm that truncation is measured against.
  double gauge = 0.75;
};

/// Running record of what the SVD truncations threw away.
struct TruncationLedger {
  double discarded_total = 0.0;  // sum over updates of relative discarded mass
  double discarded_max = 0.0;    // largest single-update discard
  std::size_t updates = 0;
  std::size_t max_bond = 1;
};

/// Region-basis weight masses as a matrix product state with physical
/// dimension 2 (empty / non-identity per site). The represented vector is
/// exp(log_scale) times the tensor contraction.
///
/// Layers are applied as two-site updates in mixed-canonical form: the
/// orthogonality center is swept across the chain and every bond is split
/// by a truncated SVD. A unitary layer immediately followed by a
/// measurement layer is fused into one two-site update per bond.
class WeightMPS {
 public:
  /// w(P) = delta_{P,1}; all bonds have dimension 1.
  explicit WeightMPS(std::size_t n_qubits, MpsParams params = {});

  std::size_t n_qubits() const noexcept { return tensors_.size(); }
  const MpsParams& params() const noexcept { return params_; }
  const TruncationLedger& ledger() const noexcept { return ledger_; }
  std::size_t canonical_center() const noexcept { return center_; }
  /// Dimensions of the N+1 bonds, boundaries included.
  std::vector<std::size_t> bond_dims() const;
  double log_scale() const noexcept { return log_scale_; }

  void apply_measurement(double p);
  void apply_unitary(int parity);
  /// Unitary layer followed by a measurement layer, fused.
  void apply_unitary_measurement(int parity, double p);
  /// Applies a weight-order schedule, fusing U-then-M pairs.
  void apply_layers(const std::vector<LayerSpec>& schedule, double p);
  /// `n_periods` repetitions of [U, M] in weight order with the parities
  /// arranged so the last unitary layer has parity 0.
  void apply_periods(std::size_t n_periods, double p);

  /// Multiplies the represented vector by `factor` > 0.
  void scale(double factor);
  /// Rescales so that the empty-region contraction equals 1. Throws
  /// ConfigError if it is not positive.
  void normalize();

  /// log of the empty-region contraction, i.e. masses[empty].
  double log_empty_mass() const;
  /// masses[empty] itself (may overflow for unnormalized states).
  double empty_mass() const;

  /// w(P) for a Pauli on sites [start, start + k), as the ratio of the
  /// contraction with selectors (0, 1/3) inside and (1, 0) outside to the
  /// empty-region contraction.
  double query_consecutive_weight(std::size_t start, std::size_t k) const;
  /// Same for an arbitrary support given as a site list.
  double query_weight(const std::vector<std::size_t>& support) const;

  /// Dense masses over all 2^N regions (N <= 20), scale included.
  std::vector<double> to_dense() const;

 private:
  using Site = std::array<Eigen::MatrixXd, 2>;

  struct SignedLog {
    double log_abs = 0.0;
    int sign = 1;
  };
  SignedLog contract(const std::vector<std::array<double, 2>>& selectors) const;

  void move_center_right();
  void move_center_left();
  void move_center_to(std::size_t site);
  void apply_site(std::size_t site, const Mat2& m);
  void apply_bond(std::size_t q, const Mat4& g, bool left_to_right);
  /// One sweep applying `gate` on the parity's bonds and `idle_op` (if any) on
  /// sites outside every bond.
  void sweep(int parity, const Mat4* gate, const Mat2* idle_op);
  void rescale_center();

  std::vector<Site> tensors_;
  MpsParams params_;
  TruncationLedger ledger_;
  std::size_t center_ = 0;
  double log_scale_ = 0.0;
};

/// Deep-circuit MPS weights: [U(1), M, U(0), M] pairs until the probe
/// weights change by less than `tol` in log per period or the depth reaches
/// `max_unitary_layers` (0 means 4N).
struct MpsSteadyInfo {
  std::size_t unitary_layers = 0;
  double last_log_change = 0.0;
  bool converged = false;
};
WeightMPS evolve_steady_mps(std::size_t n_qubits, double p, const MpsParams& params,
                            const std::vector<std::pair<std::size_t, std::size_t>>& probes, double tol = 1e-8,
                            std::size_t max_unitary_layers = 0, MpsSteadyInfo* info = nullptr);

}  // namespace hcs
