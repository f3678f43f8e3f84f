#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hcs/clifford.hpp"
#include "hcs/pauli.hpp"
#include "hcs/rng.hpp"

namespace hcs {

/// Mixed stabilizer state sigma = 2^-N * sum_{g in <generators>} g with
/// 0 <= s <= N signed, commuting, independent generators of phase +1 or -1.
///
/// Only stabilizers are stored (no destabilizers). After every mutation the
/// generators are brought to reduced row-echelon form over the 2N symplectic
/// columns (x bits of qubits 0..N-1, then z bits), which turns membership
/// tests into one reduction pass.
class StabilizerTableau {
 public:
  /// Maximally mixed state on n qubits (no generators).
  explicit StabilizerTableau(std::size_t n_qubits);

  /// Throws ConfigError if generators do not commute, are not Hermitian, have
  /// the wrong size, or are dependent.
  static StabilizerTableau from_generators(std::size_t n_qubits, std::vector<SignedPauli> generators);

  /// Computational basis state |0...0>.
  static StabilizerTableau zero_state(std::size_t n_qubits);

  std::size_t n_qubits() const noexcept { return n_; }
  std::size_t rank() const noexcept { return gens_.size(); }
  const std::vector<SignedPauli>& generators() const noexcept { return gens_; }

  /// Tr(P sigma): +1 or -1 if +-P is in the stabilizer group, else 0.
  int trace_pauli(const PauliString& p) const;

  /// Born-rule measurement of the Hermitian Pauli `observable`; returns the
  /// outcome bit b (eigenvalue (-1)^b) and updates the state.
  int measure(const PauliString& observable, Rng& rng);
  int measure(std::size_t site, Pauli basis, Rng& rng);

  /// Applies the projector (1 + (-1)^outcome P)/2 and renormalizes. Throws
  /// ContradictionError when the projection has zero probability.
  void project(const PauliString& observable, int outcome);
  void project(std::size_t site, Pauli basis, int outcome);

  /// Conjugates every generator by a two-qubit gate on (q0, q1).
  /// heisenberg = true maps g -> U^dag g U, otherwise g -> U g U^dag.
  void apply_gate(const CliffordGate2& gate, std::size_t q0, std::size_t q1, bool heisenberg);
  /// Brick layer: gates[j] on bond (parity + 2j, parity + 2j + 1).
  void apply_gate_layer(std::span<const CliffordGate2> gates, int parity, bool heisenberg);

  /// Replaces each generator by f(generator). f must be a Clifford action.
  template <class F>
  void transform(F&& f) {
    for (auto& g : gens_) f(g);
    canonicalize();
  }

  /// Tr(sigma_A^2) for the reduced state on `region`.
  double region_purity(std::span<const std::size_t> region) const;

 private:
  enum class Membership { Anticommutes, InGroup, Outside };
  struct Classification {
    Membership kind;
    int sign;  // valid when kind == InGroup
  };
  Classification classify(const PauliString& p, std::size_t* first_anticommuting) const;
  void replace_anticommuting(const PauliString& p, int outcome, std::size_t first);
  void add_generator(const PauliString& p, int outcome);
  void canonicalize();
  bool column_bit(const PauliString& p, std::size_t column) const noexcept;

  std::size_t n_;
  std::vector<SignedPauli> gens_;
  std::vector<std::size_t> pivots_;
};

}  // namespace hcs
