#include <bit>
#include <cmath>

#include "hcs/appendix.hpp"
#include "hcs/errors.hpp"

namespace hcs {

namespace {

// Diagonal of H in the Z basis: -J sum z_i z_{i+1} - tilt sum z_i, z = +-1.
Eigen::VectorXd tfim_diagonal(std::size_t n) {
  const std::size_t dim = std::size_t{1} << n;
  Eigen::VectorXd d(dim);
  for (std::size_t s = 0; s < dim; ++s) {
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double zi = ((s >> i) & 1u) ? -1.0 : 1.0;
      e -= kTfimTilt * zi;
      if (i + 1 < n) e -= zi * (((s >> (i + 1)) & 1u) ? -1.0 : 1.0);
    }
    d(static_cast<Eigen::Index>(s)) = e;
  }
  return d;
}

void tfim_apply(const Eigen::VectorXd& diag, std::size_t n, double h, const Eigen::VectorXd& v, Eigen::VectorXd& out) {
  out = diag.cwiseProduct(v);
  const auto dim = static_cast<std::size_t>(v.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t s = 0; s < dim; ++s) out(s) -= h * v(s ^ bit);
  }
}

TfimState solve_dense(std::size_t n, double h) {
  const std::size_t dim = std::size_t{1} << n;
  const Eigen::VectorXd diag = tfim_diagonal(n);
  Eigen::MatrixXd hm = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t s = 0; s < dim; ++s) {
    hm(s, s) = diag(s);
    for (std::size_t i = 0; i < n; ++i) hm(s, s ^ (std::size_t{1} << i)) -= h;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hm);
  if (es.info() != Eigen::Success) throw ConfigError("dense TFIM diagonalization failed");
  TfimState st;
  st.psi = es.eigenvectors().col(0);
  st.energy = es.eigenvalues()(0);
  return st;
}

// Lanczos with full reorthogonalization, restarted from the current Ritz
// vector until the residual is small.
TfimState solve_lanczos(std::size_t n, double h) {
  const std::size_t dim = std::size_t{1} << n;
  const Eigen::VectorXd diag = tfim_diagonal(n);
  // Positive product start vector leaning toward the all-0 branch.
  const double t = h / (h + 4.0);
  Eigen::VectorXd start(dim);
  for (std::size_t s = 0; s < dim; ++s) start(s) = std::pow(t, std::popcount(s)) + 1e-3;
  start.normalize();

  const int krylov = 120;
  TfimState st;
  Eigen::VectorXd hv(dim);
  for (int restart = 0; restart < 60; ++restart) {
    Eigen::MatrixXd q(dim, krylov);
    std::vector<double> alpha, beta;
    q.col(0) = start;
    int m = 0;
    for (; m < krylov; ++m) {
      tfim_apply(diag, n, h, q.col(m), hv);
      const double a = q.col(m).dot(hv);
      alpha.push_back(a);
      hv -= q.leftCols(m + 1) * (q.leftCols(m + 1).transpose() * hv);
      hv -= q.leftCols(m + 1) * (q.leftCols(m + 1).transpose() * hv);
      const double b = hv.norm();
      if (m + 1 == krylov || b < 1e-13) {
        ++m;
        break;
      }
      beta.push_back(b);
      q.col(m + 1) = hv / b;
    }
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      tri(i, i) = alpha[i];
      if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    start = q.leftCols(m) * es.eigenvectors().col(0);
    start.normalize();
    st.energy = es.eigenvalues()(0);
    tfim_apply(diag, n, h, start, hv);
    st.residual = (hv - st.energy * start).norm();
    if (st.residual < 1e-10) break;
  }
  st.psi = start;
  return st;
}

}  // namespace

TfimState tfim_solve(std::size_t n_sites, double h_over_j, TfimSolver solver) {
  if (n_sites < 1 || n_sites > kTfimMaxSites) {
    throw ConfigError("TFIM solver supports 1.." + std::to_string(kTfimMaxSites) + " sites");
  }
  if (!(h_over_j >= 0.0) || !std::isfinite(h_over_j)) throw ConfigError("h/J must be finite and non-negative");
  if (solver == TfimSolver::Auto) solver = n_sites <= 8 ? TfimSolver::Dense : TfimSolver::Lanczos;
  TfimState st = solver == TfimSolver::Dense ? solve_dense(n_sites, h_over_j) : solve_lanczos(n_sites, h_over_j);
  if (st.psi(0) < 0.0) st.psi = -st.psi;
  st.psi.normalize();
  if (solver == TfimSolver::Dense) {
    Eigen::VectorXd hv(st.psi.size());
    tfim_apply(tfim_diagonal(n_sites), n_sites, h_over_j, st.psi, hv);
    st.residual = (hv - st.energy * st.psi).norm();
  }
  return st;
}

Eigen::VectorXd tfim_ground_state(std::size_t n_sites, double h_over_j) {
  return tfim_solve(n_sites, h_over_j).psi;
}

double statmech_pauli_weight(const Eigen::VectorXd& psi, const std::vector<std::size_t>& support) {
  const auto dim = static_cast<std::size_t>(psi.size());
  if (dim == 0 || !std::has_single_bit(dim)) throw ConfigError("state length must be a power of two");
  const std::size_t n = static_cast<std::size_t>(std::countr_zero(dim));
  std::size_t mask = 0;
  for (std::size_t q : support) {
    if (q >= n) throw ConfigError("support outside the chain");
    mask |= std::size_t{1} << q;
  }
  // <0| (2 I + X) |s_i> is 2 for s_i = 0 and 1 for s_i = 1; inside the
  // support the 0 branch is removed. Factors of 2^n are scaled out.
  double num = 0.0, den = 0.0;
  for (std::size_t s = 0; s < dim; ++s) {
    const double term = psi(static_cast<Eigen::Index>(s)) * std::ldexp(1.0, -std::popcount(s));
    den += term;
    if ((s & mask) == mask) num += term;
  }
  if (den == 0.0) throw ConfigError("statmech weight denominator vanishes");
  return num / den;
}

PerturbativeBetas perturbative_betas(double c, double c_prime, double p) {
  if (!(c > 0.0 && c_prime > 0.0)) throw ConfigError("c and c' must be positive");
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("measurement rate must lie in (0, 1]");
  return {1.0 + 2.0 / std::tanh(c * p), 3.0 * std::exp(-c_prime * (1.0 - p))};
}

double tfim_beta_small_h(double h_over_j) {
  if (!(h_over_j > 0.0)) throw ConfigError("h/J must be positive");
  return 1.0 + 2.0 / std::tanh(h_over_j / 4.0);
}

double tfim_beta_large_h(double h_over_j) {
  if (!(h_over_j > 0.0)) throw ConfigError("h/J must be positive");
  return 3.0 * std::exp(-2.0 / (9.0 * h_over_j));
}

namespace {

void subset_zeta(std::vector<double>& f) {
  for (std::size_t bit = 1; bit < f.size(); bit <<= 1) {
    for (std::size_t a = 0; a < f.size(); ++a) {
      if (a & bit) f[a] += f[a ^ bit];
    }
  }
}

std::size_t region_size(std::size_t len) {
  if (len == 0 || !std::has_single_bit(len) || len > (std::size_t{1} << 24)) {
    throw ConfigError("feature map must cover all 2^r subsets of a region (r <= 24)");
  }
  return static_cast<std::size_t>(std::countr_zero(len));
}

}  // namespace

std::vector<double> ef_to_weights(const std::vector<double>& features) {
  region_size(features.size());
  std::vector<double> f(features.size());
  for (std::size_t b = 0; b < f.size(); ++b) f[b] = std::pow(-2.0, std::popcount(b)) * features[b];
  subset_zeta(f);
  for (std::size_t a = 0; a < f.size(); ++a) f[a] *= std::pow(-1.0 / 3.0, std::popcount(a));
  return f;
}

std::vector<double> weights_to_ef(const std::vector<double>& weights) {
  region_size(weights.size());
  std::vector<double> f(weights.size());
  for (std::size_t b = 0; b < f.size(); ++b) f[b] = std::pow(3.0, std::popcount(b)) * weights[b];
  subset_zeta(f);
  for (std::size_t a = 0; a < f.size(); ++a) f[a] = std::ldexp(f[a], -std::popcount(a));
  return f;
}

}  // namespace hcs
