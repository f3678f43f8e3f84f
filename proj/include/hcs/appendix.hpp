#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hcs/parallel.hpp"
#include "hcs/pauli.hpp"
#include "hcs/rng.hpp"
#include "hcs/tableau.hpp"

namespace hcs {

// ---- block toy models -------------------------------------------------------

enum class ToyPhase { Area, Volume };

struct BlockToySpec {
  std::size_t block_size = 1;     // n
  std::size_t blocks_covered = 1;  // m
  ToyPhase phase = ToyPhase::Area;
  std::size_t total_qubits = 0;   // N, volume phase only

  /// Throws ConfigError on invalid sizes. Returns a caveat string (empty if
  /// none) when the volume model has fewer than 4 logical qubits.
  std::string validate() const;
};

struct ToyValue {
  double weight = 0.0;
  double beta = 0.0;
};

/// w = (2^n + 1)^-m, log beta = log(2^n + 1) / n.
ToyValue toy_area(std::size_t n, std::size_t m);

/// w = q^m + eps (r^m - q^m) and beta at f = 1/n. Requires n >= 2.
ToyValue toy_volume(std::size_t n, std::size_t m, std::size_t total_qubits);

/// log beta(f) = f log((4^{1/f} - 1) / (2^{1/f - 1} - 1)) for 0 < f < 1.
double toy_volume_beta(double f);

/// Uniformly random element of Sp(2n, 2) given as the images of X_i and Z_i
/// (as packed x/z masks). Built by symplectic Gram-Schmidt: each new pair is
/// drawn uniformly from the complement of the previous ones.
struct Symplectic {
  std::size_t n = 0;
  std::vector<std::uint64_t> x_img_x, x_img_z;  // image of X_i
  std::vector<std::uint64_t> z_img_x, z_img_z;  // image of Z_i

  /// Image of the Pauli with masks (x, z), phase dropped.
  std::pair<std::uint64_t, std::uint64_t> apply(std::uint64_t x, std::uint64_t z) const;
};
Symplectic random_symplectic(std::size_t n, Rng& rng);

/// Uniformly random pure stabilizer state: the images of Z_i under a random
/// symplectic map, each with a random sign.
StabilizerTableau random_stabilizer_state(std::size_t n, Rng& rng);

struct ToyEstimate {
  double weight = 0.0;
  double std_error = 0.0;
  std::size_t shots = 0;
};

/// Monte-Carlo E (Tr P sigma)^2 for the block circuits: random n-qubit
/// Cliffords per block (area), or per-block decoding with n-1 measured
/// syndrome qubits followed by one global Clifford on the logical qubits
/// (volume). Snapshots are built as stabilizer states and P must cover whole
/// blocks: its support is exactly m blocks starting at block 0 of a register
/// of m*n (area) or N (volume) qubits.
ToyEstimate toy_monte_carlo(const BlockToySpec& spec, const PauliString& p, std::size_t shots, std::uint64_t seed,
                            Exec exec = Exec::Parallel);

/// Pauli with Z on every site of blocks 0..m-1.
PauliString toy_block_pauli(const BlockToySpec& spec);

// ---- Ising stat-mech picture --------------------------------------------------

inline constexpr std::size_t kTfimMaxSites = 14;
inline constexpr double kTfimTilt = 1e-9;

enum class TfimSolver { Auto, Dense, Lanczos };

/// Ground state of H = -J sum Z_i Z_{i+1} - h sum X_i - tilt sum Z_i (open
/// chain, J = 1). Basis index bit i is site i (bit set = spin down); the
/// vector is real, normalized, with a non-negative |0...0> amplitude. Auto
/// uses dense diagonalization up to 8 sites and Lanczos above.
struct TfimState {
  Eigen::VectorXd psi;
  double energy = 0.0;
  double residual = 0.0;  // ||H psi - E psi||
};
TfimState tfim_solve(std::size_t n_sites, double h_over_j, TfimSolver solver = TfimSolver::Auto);
Eigen::VectorXd tfim_ground_state(std::size_t n_sites, double h_over_j);

/// <0| prod_i (2 theta_i I + X_i) |psi> / <0| prod_i (2 I + X_i) |psi> with
/// theta_i = 0 on the support. Throws ConfigError if the denominator vanishes.
double statmech_pauli_weight(const Eigen::VectorXd& psi, const std::vector<std::size_t>& support);

struct PerturbativeBetas {
  double beta_volume = 0.0;  // 1 + 2 coth(c p)
  double beta_area = 0.0;    // 3 exp(-c' (1 - p))
};
PerturbativeBetas perturbative_betas(double c, double c_prime, double p);

/// Small-h/J first-order weight base: 1 + 2 coth(h / 4J).
double tfim_beta_small_h(double h_over_j);
/// Large-h/J first-order weight base: 3 exp(-2J / 9h).
double tfim_beta_large_h(double h_over_j);

/// Entanglement features W(B) -> per-Pauli weights w_A over all subsets of
/// an r-site region (index = subset mask). Input size must be 2^r.
std::vector<double> ef_to_weights(const std::vector<double>& features);
/// Inverse: W(A) = 2^-|A| sum_{B in A} 3^|B| w_B.
std::vector<double> weights_to_ef(const std::vector<double>& weights);

/// model,params,k_or_m,analytic,monte_carlo,std_error
struct AppendixRow {
  std::string model;
  std::string params;
  std::size_t k_or_m = 0;
  double analytic = 0.0;
  double monte_carlo = 0.0;
  double std_error = 0.0;
};
void write_appendix_table(std::ostream& out, const std::vector<AppendixRow>& rows);

}  // namespace hcs
