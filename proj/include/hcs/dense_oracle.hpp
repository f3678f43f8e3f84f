#pragma once

// Brute-force density-matrix reference for N <= 6 qubits. Everything here is
// computed from dense matrices built site by site, independent of the
// symplectic code paths it is used to check.

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "hcs/circuit.hpp"
#include "hcs/clifford.hpp"
#include "hcs/pauli.hpp"
#include "hcs/tableau.hpp"

namespace hcs::oracle {

using Matrix = Eigen::MatrixXcd;

inline constexpr std::size_t kMaxQubits = 6;

/// Dense matrix of a Pauli string. Qubit q is bit q of the basis index.
Matrix pauli_matrix(const PauliString& p);
Matrix pauli_matrix(const SignedPauli& p);

/// Pauli string for index c in [0, 4^N): site q carries code (c >> 2q) & 3.
PauliString pauli_from_index(std::size_t n_qubits, std::size_t index);

/// 4x4 unitary U with U^dag P U equal to the gate's stored images, up to a
/// global phase. Built from the images alone: U^dag|00> spans the joint +1
/// eigenspace of the Z images and U^dag|b> = img(X0)^b0 img(X1)^b1 U^dag|00>.
Matrix gate_unitary(const CliffordGate2& g);

/// Embeds a 4x4 operator on qubits (q0, q1) of an n-qubit register.
Matrix embed_two_qubit(const Matrix& op, std::size_t n_qubits, std::size_t q0, std::size_t q1);

/// (1 + (-1)^outcome P_site)/2.
Matrix site_projector(std::size_t n_qubits, std::size_t site, Pauli basis, int outcome);

/// 2^-N sum over the stabilizer group.
Matrix density_matrix(const StabilizerTableau& t);

/// Tr(P rho), real part.
double trace_pauli(const Matrix& rho, const PauliString& p);

/// Tr(rho_A^2) via explicit partial trace over the complement of `region`.
double region_purity(const Matrix& rho, const std::vector<std::size_t>& region);

/// Overall Kraus operator K = prod_l K_l (later layers to the left), using
/// the outcomes stored in `record`.
Matrix kraus_operator(const ShadowRecord& record);

struct ChannelResult {
  double probability = 0.0;  // p(b | rho, C) = Tr(K rho K^dag)
  Matrix snapshot;           // K^dag K / Tr(K^dag K)
};

/// Throws ContradictionError if Tr(K^dag K) vanishes.
ChannelResult channel_apply(const Matrix& rho, const ShadowRecord& record);

/// p(b | C) = Tr(K K^dag) / 2^N.
double prior_probability(const ShadowRecord& record);

/// Every outcome assignment of the record's measurement events.
std::vector<ShadowRecord> enumerate_outcomes(const ShadowRecord& circuit);

/// Executes a circuit on a dense state, drawing Born-rule outcomes.
ShadowRecord run_dense(const Matrix& rho, ShadowRecord circuit, Rng& rng);

/// Monte-Carlo Pauli weights of the prior ensemble: per-Pauli averages of
/// (Tr P sigma)^2 over `shots` circuits with maximally mixed input.
struct WeightTable {
  std::size_t n_qubits = 0;
  std::size_t shots = 0;
  std::vector<double> per_pauli;         // indexed by pauli index, size 4^N
  std::vector<double> per_pauli_sq;      // mean of (Tr P sigma)^4 for error bars
  std::vector<double> by_support;        // mean weight per Pauli, indexed by support mask
  std::vector<double> by_support_error;  // standard error of by_support

  double weight(const PauliString& p) const;
};
WeightTable mc_pauli_weight(std::size_t n_qubits, const CircuitShape& shape, double p, std::size_t shots,
                            std::uint64_t seed);

/// Monte-Carlo estimate of the measurement channel in the Pauli basis:
/// M(P, P') = E_prior Tr(P sigma) Tr(P' sigma).
struct ChannelReport {
  std::size_t n_qubits = 0;
  std::size_t shots = 0;
  double max_offdiag_z = 0.0;      // max |M(P,P')| / stderr over P != P'
  double max_offdiag = 0.0;        // max |M(P,P')| over P != P'
  std::size_t offdiag_entries = 0;
  std::size_t offdiag_beyond_4sigma = 0;  // entries with |M| > 4 stderr
  std::vector<double> diagonal;    // M(P, P)
  std::vector<double> diagonal_error;
};
ChannelReport verify_measurement_channel(std::size_t n_qubits, const CircuitShape& shape, double p,
                                         std::size_t shots, std::uint64_t seed);

/// Exact identities over random records: each record draws a uniformly random
/// stabilizer state rho, a circuit of the given shape and Born outcomes.
/// Errors are maxima of absolute deviations.
struct IdentityReport {
  std::size_t records = 0;
  double max_snapshot_error = 0.0;      // dense K^dag K / Tr vs stabilizer reconstruction
  double max_bayes_error = 0.0;         // Tr(sigma rho) vs 2^-N p(b|rho,C) / p(b|C)
  double max_completeness_error = 0.0;  // |sum_b p(b|rho,C) - 1|
  double max_probability_excess = 0.0;  // how far any probability leaves [0, 1]
  std::size_t enumerated = 0;           // records whose outcomes were enumerated
};
IdentityReport check_identities(std::size_t n_qubits, const CircuitShape& shape, double p, std::size_t n_records,
                                std::uint64_t seed, std::size_t max_enumerated_events = 12);

}  // namespace hcs::oracle
