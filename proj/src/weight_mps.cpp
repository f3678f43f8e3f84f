#include "hcs/weight_mps.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "hcs/errors.hpp"

namespace hcs {

namespace {

using Eigen::MatrixXd;

Mat4 fuse(const Mat4& u, const Mat2& m) {
  Mat4 g{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += m[r & 1][k & 1] * m[r >> 1][k >> 1] * u[k][c];
      g[r][c] = acc;
    }
  }
  return g;
}

Mat2 gauged(const Mat2& m, double g) {
  Mat2 out = m;
  out[0][1] /= g;
  out[1][0] *= g;
  return out;
}

Mat4 gauged(const Mat4& m, double g) {
  static constexpr int kSize[4] = {0, 1, 1, 2};
  Mat4 out = m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out[r][c] *= std::pow(g, kSize[r] - kSize[c]);
  }
  return out;
}

}  // namespace

WeightMPS::WeightMPS(std::size_t n_qubits, MpsParams params) : params_(params) {
  if (n_qubits < 2) throw ConfigError("weight MPS needs at least two sites");
  if (params.chi_max < 1) throw ConfigError("chi_max must be at least 1");
  if (!(params.trunc_tol >= 0.0)) throw ConfigError("trunc_tol must be non-negative");
  if (!(params.gauge > 0.0) || !std::isfinite(params.gauge)) throw ConfigError("gauge must be positive and finite");
  tensors_.resize(n_qubits);
  for (auto& t : tensors_) {
    t[0] = MatrixXd::Ones(1, 1);
    t[1] = MatrixXd::Zero(1, 1);
  }
}

std::vector<std::size_t> WeightMPS::bond_dims() const {
  std::vector<std::size_t> d;
  d.reserve(tensors_.size() + 1);
  d.push_back(static_cast<std::size_t>(tensors_.front()[0].rows()));
  for (const auto& t : tensors_) d.push_back(static_cast<std::size_t>(t[0].cols()));
  return d;
}

void WeightMPS::move_center_right() {
  const std::size_t q = center_;
  Site& a = tensors_[q];
  const auto dl = a[0].rows();
  const auto dr = a[0].cols();
  MatrixXd stacked(2 * dl, dr);
  stacked << a[0], a[1];
  Eigen::HouseholderQR<MatrixXd> qr(stacked);
  const auto k = std::min<Eigen::Index>(2 * dl, dr);
  const MatrixXd qmat = qr.householderQ() * MatrixXd::Identity(2 * dl, k);
  const MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  a[0] = qmat.topRows(dl);
  a[1] = qmat.bottomRows(dl);
  Site& b = tensors_[q + 1];
  b[0] = r * b[0];
  b[1] = r * b[1];
  center_ = q + 1;
}

void WeightMPS::move_center_left() {
  const std::size_t q = center_;
  Site& a = tensors_[q];
  const auto dl = a[0].rows();
  const auto dr = a[0].cols();
  MatrixXd stacked(2 * dr, dl);  // transpose of [A0 A1]
  stacked << a[0].transpose(), a[1].transpose();
  Eigen::HouseholderQR<MatrixXd> qr(stacked);
  const auto k = std::min<Eigen::Index>(2 * dr, dl);
  const MatrixXd qmat = qr.householderQ() * MatrixXd::Identity(2 * dr, k);
  const MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  a[0] = qmat.topRows(dr).transpose();
  a[1] = qmat.bottomRows(dr).transpose();
  Site& b = tensors_[q - 1];
  b[0] = b[0] * r.transpose();
  b[1] = b[1] * r.transpose();
  center_ = q - 1;
}

void WeightMPS::move_center_to(std::size_t site) {
  while (center_ < site) move_center_right();
  while (center_ > site) move_center_left();
}

void WeightMPS::apply_site(std::size_t site, const Mat2& m) {
  Site& a = tensors_[site];
  const MatrixXd a0 = a[0];
  a[0] = m[0][0] * a0 + m[0][1] * a[1];
  a[1] = m[1][0] * a0 + m[1][1] * a[1];
}

void WeightMPS::apply_bond(std::size_t q, const Mat4& g, bool left_to_right) {
  Site& a = tensors_[q];
  Site& b = tensors_[q + 1];
  const auto dl = a[0].rows();
  const auto dr = b[0].cols();
  MatrixXd prod[4];
  for (int s0 = 0; s0 < 2; ++s0) {
    for (int s1 = 0; s1 < 2; ++s1) prod[s0 + 2 * s1] = a[s0] * b[s1];
  }
  MatrixXd theta(2 * dl, 2 * dr);
  for (int r = 0; r < 4; ++r) {
    MatrixXd block = MatrixXd::Zero(dl, dr);
    for (int c = 0; c < 4; ++c) {
      if (g[r][c] != 0.0) block += g[r][c] * prod[c];
    }
    theta.block((r & 1) * dl, (r >> 1) * dr, dl, dr) = block;
  }

  Eigen::BDCSVD<MatrixXd> svd(theta, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double total = s.squaredNorm();
  Eigen::Index keep = s.size();
  double discarded = 0.0;
  if (total > 0.0) {
    // Drop the smallest values while the dropped fraction stays within tolerance.
    while (keep > 1) {
      const double next = s(keep - 1) * s(keep - 1) / total;
      if (discarded + next > params_.trunc_tol && s(keep - 1) > 0.0) break;
      discarded += next;
      --keep;
    }
    while (keep > static_cast<Eigen::Index>(params_.chi_max)) {
      discarded += s(keep - 1) * s(keep - 1) / total;
      --keep;
    }
  } else {
    keep = 1;
  }
  ledger_.discarded_total += discarded;
  ledger_.discarded_max = std::max(ledger_.discarded_max, discarded);
  ++ledger_.updates;
  ledger_.max_bond = std::max(ledger_.max_bond, static_cast<std::size_t>(keep));

  const MatrixXd u = svd.matrixU().leftCols(keep);
  const MatrixXd vt = svd.matrixV().leftCols(keep).transpose();
  const auto sv = s.head(keep);
  if (left_to_right) {
    const MatrixXd svt = sv.asDiagonal() * vt;
    a[0] = u.topRows(dl);
    a[1] = u.bottomRows(dl);
    b[0] = svt.leftCols(dr);
    b[1] = svt.rightCols(dr);
    center_ = q + 1;
  } else {
    const MatrixXd us = u * sv.asDiagonal();
    a[0] = us.topRows(dl);
    a[1] = us.bottomRows(dl);
    b[0] = vt.leftCols(dr);
    b[1] = vt.rightCols(dr);
    center_ = q;
  }
}

void WeightMPS::rescale_center() {
  Site& c = tensors_[center_];
  const double norm = std::sqrt(c[0].squaredNorm() + c[1].squaredNorm());
  if (!(norm > 0.0) || !std::isfinite(norm)) throw ConfigError("weight MPS lost all mass");
  c[0] /= norm;
  c[1] /= norm;
  log_scale_ += std::log(norm);
}

void WeightMPS::sweep(int parity, const Mat4* gate, const Mat2* idle_op) {
  const std::size_t n = tensors_.size();
  auto bond_start = [&](std::size_t i) {
    return gate != nullptr && i + 1 < n && i >= static_cast<std::size_t>(parity) && (i - parity) % 2 == 0;
  };
  auto in_bond = [&](std::size_t i) { return bond_start(i) || (i > 0 && bond_start(i - 1)); };

  // Sweep away from the nearer end so the center never backtracks.
  const bool left_to_right = center_ < n / 2;
  move_center_to(left_to_right ? 0 : n - 1);
  if (left_to_right) {
    for (std::size_t i = 0; i < n; ++i) {
      if (bond_start(i)) {
        move_center_to(i);
        apply_bond(i, *gate, true);
        ++i;
      } else if (idle_op != nullptr && !in_bond(i)) {
        move_center_to(i);
        apply_site(i, *idle_op);
      }
    }
  } else {
    for (std::size_t j = n; j-- > 0;) {
      if (j > 0 && bond_start(j - 1)) {
        move_center_to(j);
        apply_bond(j - 1, *gate, false);
        --j;
      } else if (idle_op != nullptr && !in_bond(j)) {
        move_center_to(j);
        apply_site(j, *idle_op);
      }
    }
  }
  rescale_center();
}

void WeightMPS::apply_measurement(double p) {
  const Mat2 m = gauged(meas_transfer(p), params_.gauge);
  sweep(0, nullptr, &m);
}

void WeightMPS::apply_unitary(int parity) {
  if (parity != 0 && parity != 1) throw ConfigError("parity must be 0 or 1");
  const Mat4 u = gauged(unitary_transfer(), params_.gauge);
  sweep(parity, &u, nullptr);
}

void WeightMPS::apply_unitary_measurement(int parity, double p) {
  if (parity != 0 && parity != 1) throw ConfigError("parity must be 0 or 1");
  const Mat2 m = meas_transfer(p);
  const Mat4 g = gauged(fuse(unitary_transfer(), m), params_.gauge);
  const Mat2 mg = gauged(m, params_.gauge);
  sweep(parity, &g, &mg);
}

void WeightMPS::apply_layers(const std::vector<LayerSpec>& schedule, double p) {
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const LayerSpec& l = schedule[i];
    if (l.kind == LayerKind::Unitary && i + 1 < schedule.size() && schedule[i + 1].kind == LayerKind::Measurement) {
      apply_unitary_measurement(l.parity, p);
      ++i;
    } else if (l.kind == LayerKind::Unitary) {
      apply_unitary(l.parity);
    } else {
      apply_measurement(p);
    }
  }
}

void WeightMPS::apply_periods(std::size_t n_periods, double p) {
  for (std::size_t j = 0; j < n_periods; ++j) {
    apply_unitary_measurement(static_cast<int>((n_periods - 1 - j) % 2), p);
  }
}

void WeightMPS::scale(double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw ConfigError("scale factor must be positive and finite");
  log_scale_ += std::log(factor);
}

WeightMPS::SignedLog WeightMPS::contract(const std::vector<std::array<double, 2>>& selectors) const {
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Ones(1);
  SignedLog out;
  out.log_abs = log_scale_;
  for (std::size_t i = 0; i < tensors_.size(); ++i) {
    const auto& [a0, a1] = selectors[i];
    Eigen::RowVectorXd next;
    if (a1 == 0.0) {
      next = a0 * (v * tensors_[i][0]);
    } else if (a0 == 0.0) {
      next = a1 * (v * tensors_[i][1]);
    } else {
      next = a0 * (v * tensors_[i][0]) + a1 * (v * tensors_[i][1]);
    }
    const double m = next.cwiseAbs().maxCoeff();
    if (m == 0.0) {
      out.log_abs = -std::numeric_limits<double>::infinity();
      out.sign = 0;
      return out;
    }
    out.log_abs += std::log(m);
    v = next / m;
  }
  const double last = v(0);
  out.sign = last > 0 ? 1 : -1;
  out.log_abs += std::log(std::abs(last));
  return out;
}

double WeightMPS::log_empty_mass() const {
  const SignedLog z = contract(std::vector<std::array<double, 2>>(tensors_.size(), {1.0, 0.0}));
  if (z.sign <= 0) throw ConfigError("empty-region mass is not positive");
  return z.log_abs;
}

double WeightMPS::empty_mass() const { return std::exp(log_empty_mass()); }

void WeightMPS::normalize() { log_scale_ -= log_empty_mass(); }

double WeightMPS::query_weight(const std::vector<std::size_t>& support) const {
  std::vector<std::array<double, 2>> sel(tensors_.size(), {1.0, 0.0});
  for (std::size_t q : support) {
    if (q >= tensors_.size()) throw ConfigError("support site out of range");
    sel[q] = {0.0, 1.0 / (3.0 * params_.gauge)};
  }
  const SignedLog num = contract(sel);
  if (num.sign == 0) return 0.0;
  const double z = log_empty_mass();
  return num.sign * std::exp(num.log_abs - z);
}

double WeightMPS::query_consecutive_weight(std::size_t start, std::size_t k) const {
  if (start + k > tensors_.size()) throw ConfigError("support range exceeds the chain");
  std::vector<std::size_t> support(k);
  for (std::size_t j = 0; j < k; ++j) support[j] = start + j;
  return query_weight(support);
}

std::vector<double> WeightMPS::to_dense() const {
  const std::size_t n = tensors_.size();
  if (n > RegionWeightVector::kMaxQubits) throw ConfigError("dense conversion limited to 20 sites");
  std::vector<Eigen::RowVectorXd> rows{Eigen::RowVectorXd::Ones(1)};
  for (std::size_t q = 0; q < n; ++q) {
    std::vector<Eigen::RowVectorXd> next(rows.size() * 2);
    for (std::size_t a = 0; a < rows.size(); ++a) {
      next[a] = rows[a] * tensors_[q][0];
      next[a | (std::size_t{1} << q)] = rows[a] * tensors_[q][1];
    }
    rows = std::move(next);
  }
  const double s = std::exp(log_scale_);
  std::vector<double> out(rows.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    out[a] = s * rows[a](0) * std::pow(params_.gauge, -std::popcount(a));
  }
  return out;
}

WeightMPS evolve_steady_mps(std::size_t n_qubits, double p, const MpsParams& params,
                            const std::vector<std::pair<std::size_t, std::size_t>>& probes, double tol,
                            std::size_t max_unitary_layers, MpsSteadyInfo* info) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("measurement rate must lie in [0, 1]");
  if (max_unitary_layers == 0) max_unitary_layers = 4 * n_qubits;
  WeightMPS m(n_qubits, params);
  MpsSteadyInfo st;
  auto probe_logs = [&] {
    std::vector<double> out;
    out.reserve(probes.size());
    for (const auto& [start, k] : probes) out.push_back(std::log(std::max(m.query_consecutive_weight(start, k), 1e-300)));
    return out;
  };
  std::vector<double> previous = probe_logs();
  while (st.unitary_layers < max_unitary_layers) {
    m.apply_unitary_measurement(1, p);
    m.apply_unitary_measurement(0, p);
    st.unitary_layers += 2;
    const std::vector<double> now = probe_logs();
    double change = 0.0;
    for (std::size_t i = 0; i < now.size(); ++i) change = std::max(change, std::abs(now[i] - previous[i]));
    // Change per period; a pair of unitary layers is two periods.
    st.last_log_change = change / 2.0;
    previous = now;
    if (!probes.empty() && st.last_log_change < tol) {
      st.converged = true;
      break;
    }
  }
  m.normalize();
  if (info) *info = st;
  return m;
}

}  // namespace hcs
