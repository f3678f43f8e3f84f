#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hcs/circuit.hpp"
#include "hcs/parallel.hpp"

namespace hcs {

using Mat2 = std::array<std::array<double, 2>, 2>;  // [row][col]
using Mat4 = std::array<std::array<double, 4>, 4>;

/// Single-site measurement layer in the region basis (identity, non-identity):
/// [[1, p/3], [p, 1 - 2p/3]]. Column j holds the image of basis state j.
Mat2 meas_transfer(double p);

/// Two-site unitary layer in the region basis (empty, {0}, {1}, {0,1}),
/// index b0 + 2 b1: the empty region is fixed, every other region spreads
/// as (0, 1/5, 1/5, 3/5).
Mat4 unitary_transfer();

/// Pauli-weight mass per support region, masses[A] = sum_{supp P = A} w(P),
/// stored densely over all 2^N regions (bit q of A is qubit q).
///
/// Within a region the weight is uniform over the 3^|A| Paulis, so
/// w(P) = masses[supp P] / 3^|supp P|.
class RegionWeightVector {
 public:
  static constexpr std::size_t kMaxQubits = 20;

  /// w(P) = delta_{P,1}: the maximally mixed starting point.
  explicit RegionWeightVector(std::size_t n_qubits);

  std::size_t n_qubits() const noexcept { return n_; }
  const std::vector<double>& masses() const noexcept { return masses_; }
  std::vector<double>& masses() noexcept { return masses_; }
  bool normalized() const noexcept { return normalized_; }

  void apply_measurement(double p, Exec exec = Exec::Parallel);
  /// Bonds (parity + 2j, parity + 2j + 1), open boundary.
  void apply_unitary(int parity, Exec exec = Exec::Parallel);
  void apply(const LayerSpec& layer, double p, Exec exec = Exec::Parallel);

  /// Divides by masses[empty]. Throws ConfigError if that mass vanishes.
  void normalize();

  /// w(P) for any Pauli supported on `support_mask`. Requires normalized().
  double query(std::uint64_t support_mask) const;
  /// Consecutive support [start, start + k).
  double query_consecutive(std::size_t start, std::size_t k) const;

 private:
  std::size_t n_;
  std::vector<double> masses_;
  bool normalized_ = true;
};

/// Weight evolution runs the reconstruction direction, i.e. the forward
/// layer sequence reversed.
std::vector<LayerSpec> weight_schedule(const CircuitShape& shape);

/// Evolves delta_{A,empty} through the schedule of `shape` and normalizes once
/// (ratio of averages).
RegionWeightVector evolve_exact(std::size_t n_qubits, const CircuitShape& shape, double p,
                                Exec exec = Exec::Parallel);

struct SteadyStateInfo {
  std::size_t unitary_layers = 0;  // depth reached
  double last_change = 0.0;        // max-norm change over the last period
  bool converged = false;
};

/// Deep-circuit weights: repeats [U(1), M, U(0), M] (weight order), so the
/// state matches a forward circuit that starts with a measurement and a
/// parity-0 layer. Stops when the normalized masses change by less than
/// `tol` over one period or after `max_unitary_layers` (0 means 4N).
RegionWeightVector evolve_steady(std::size_t n_qubits, double p, double tol = 1e-10,
                                 std::size_t max_unitary_layers = 0, SteadyStateInfo* info = nullptr,
                                 Exec exec = Exec::Parallel);

/// Delimited table: support_mask, support_size, weight.
void write_weight_table(std::ostream& out, const RegionWeightVector& v);

}  // namespace hcs
