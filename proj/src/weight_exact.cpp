#include "hcs/weight_exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>

#include "hcs/errors.hpp"

namespace hcs {

Mat2 meas_transfer(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("measurement rate must lie in [0, 1]");
  return {{{1.0, p / 3.0}, {p, 1.0 - 2.0 * p / 3.0}}};
}

Mat4 unitary_transfer() {
  Mat4 m{};
  m[0][0] = 1.0;
  for (int c = 1; c < 4; ++c) {
    m[1][c] = 0.2;
    m[2][c] = 0.2;
    m[3][c] = 0.6;
  }
  return m;
}

RegionWeightVector::RegionWeightVector(std::size_t n_qubits) : n_(n_qubits) {
  if (n_qubits == 0 || n_qubits > kMaxQubits) {
    throw ConfigError("exact weight evolution supports 1.." + std::to_string(kMaxQubits) + " qubits");
  }
  masses_.assign(std::size_t{1} << n_qubits, 0.0);
  masses_[0] = 1.0;
}

namespace {

// Kernels over the 2^N mass vector. The `if` clause keeps one code path for
// both the OpenMP kernel and its serial reference.

void site_kernel(std::vector<double>& v, std::size_t n, std::size_t q, const Mat2& m, Exec exec) {
  const std::size_t bit = std::size_t{1} << q;
  const long long half = static_cast<long long>(std::size_t{1} << (n - 1));
  double* data = v.data();
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel && half >= 4096)
  for (long long i = 0; i < half; ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    const std::size_t a0 = ((u >> q) << (q + 1)) | (u & (bit - 1));
    const std::size_t a1 = a0 | bit;
    const double v0 = data[a0];
    const double v1 = data[a1];
    data[a0] = m[0][0] * v0 + m[0][1] * v1;
    data[a1] = m[1][0] * v0 + m[1][1] * v1;
  }
}

void bond_kernel(std::vector<double>& v, std::size_t n, std::size_t q, const Mat4& m, Exec exec) {
  const std::size_t b0 = std::size_t{1} << q;
  const std::size_t b1 = b0 << 1;
  const long long quarter = static_cast<long long>(std::size_t{1} << (n - 2));
  double* data = v.data();
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel && quarter >= 4096)
  for (long long i = 0; i < quarter; ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    const std::size_t a = ((u >> q) << (q + 2)) | (u & (b0 - 1));
    const std::size_t idx[4] = {a, a | b0, a | b1, a | b0 | b1};
    double in[4];
    for (int k = 0; k < 4; ++k) in[k] = data[idx[k]];
    for (int r = 0; r < 4; ++r) {
      data[idx[r]] = m[r][0] * in[0] + m[r][1] * in[1] + m[r][2] * in[2] + m[r][3] * in[3];
    }
  }
}

}  // namespace

void RegionWeightVector::apply_measurement(double p, Exec exec) {
  const Mat2 m = meas_transfer(p);
  for (std::size_t q = 0; q < n_; ++q) site_kernel(masses_, n_, q, m, exec);
  normalized_ = normalized_ && p == 0.0;
}

void RegionWeightVector::apply_unitary(int parity, Exec exec) {
  if (parity != 0 && parity != 1) throw ConfigError("parity must be 0 or 1");
  const Mat4 m = unitary_transfer();
  for (std::size_t q = static_cast<std::size_t>(parity); q + 1 < n_; q += 2) bond_kernel(masses_, n_, q, m, exec);
}

void RegionWeightVector::apply(const LayerSpec& layer, double p, Exec exec) {
  if (layer.kind == LayerKind::Measurement) {
    apply_measurement(p, exec);
  } else {
    apply_unitary(layer.parity, exec);
  }
}

void RegionWeightVector::normalize() {
  const double z = masses_[0];
  if (!(z > 0.0)) throw ConfigError("cannot normalize: identity mass vanishes");
  for (double& m : masses_) m /= z;
  masses_[0] = 1.0;
  normalized_ = true;
}

double RegionWeightVector::query(std::uint64_t support_mask) const {
  if (!normalized_) throw ConfigError("query requires a normalized weight vector");
  if (n_ < 64 && (support_mask >> n_) != 0) throw ConfigError("support outside the register");
  const int k = std::popcount(support_mask);
  return masses_[support_mask] * std::pow(3.0, -k);
}

double RegionWeightVector::query_consecutive(std::size_t start, std::size_t k) const {
  if (start + k > n_) throw ConfigError("support range exceeds the register");
  const std::uint64_t mask = k == 0 ? 0 : (((std::uint64_t{1} << k) - 1) << start);
  return query(mask);
}

std::vector<LayerSpec> weight_schedule(const CircuitShape& shape) {
  std::vector<LayerSpec> s = forward_layers(shape);
  std::reverse(s.begin(), s.end());
  return s;
}

RegionWeightVector evolve_exact(std::size_t n_qubits, const CircuitShape& shape, double p, Exec exec) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("measurement rate must lie in [0, 1]");
  RegionWeightVector v(n_qubits);
  for (const LayerSpec& layer : weight_schedule(shape)) {
    v.apply(layer, p, exec);
    // Rescaling commutes with the linear layers, so normalizing as we go
    // equals the single division at the end while avoiding overflow.
    if (layer.kind == LayerKind::Measurement) v.normalize();
  }
  v.normalize();
  return v;
}

RegionWeightVector evolve_steady(std::size_t n_qubits, double p, double tol, std::size_t max_unitary_layers,
                                 SteadyStateInfo* info, Exec exec) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("measurement rate must lie in [0, 1]");
  if (max_unitary_layers == 0) max_unitary_layers = 4 * n_qubits;
  RegionWeightVector v(n_qubits);
  SteadyStateInfo st;
  std::vector<double> previous = v.masses();
  while (st.unitary_layers < max_unitary_layers) {
    v.apply_unitary(1, exec);
    v.apply_measurement(p, exec);
    v.apply_unitary(0, exec);
    v.apply_measurement(p, exec);
    v.normalize();
    st.unitary_layers += 2;
    double change = 0.0;
    for (std::size_t a = 0; a < previous.size(); ++a) change = std::max(change, std::abs(v.masses()[a] - previous[a]));
    st.last_change = change;
    previous = v.masses();
    if (change < tol) {
      st.converged = true;
      break;
    }
  }
  if (info) *info = st;
  return v;
}

void write_weight_table(std::ostream& out, const RegionWeightVector& v) {
  out << "support_mask,support_size,weight\n";
  const auto old_precision = out.precision(17);
  for (std::uint64_t a = 0; a < v.masses().size(); ++a) {
    out << a << ',' << std::popcount(a) << ',' << v.query(a) << '\n';
  }
  out.precision(old_precision);
}

}  // namespace hcs
