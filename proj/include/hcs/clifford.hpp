#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "hcs/pauli.hpp"
#include "hcs/rng.hpp"

namespace hcs {

/// Two-qubit Clifford gate U, stored through its Heisenberg action P -> U^dag P U
/// on the generators X⊗I, Z⊗I, I⊗X, I⊗Z (qubit 0 is the left character).
///
/// Lookup tables for both directions are built once at construction: the
/// Heisenberg table maps a 2-qubit Pauli code to U^dag P U and the Schrodinger
/// table maps it to U P U^dag. A 2-qubit code packs (x0, z0, x1, z1) as bits 0..3.
class CliffordGate2 {
 public:
  struct Image {
    std::uint8_t code = 0;   // 2-qubit Pauli code
    std::uint8_t phase = 0;  // i^phase
  };

  /// Identity gate.
  CliffordGate2();

  /// Builds a gate from the images of (X⊗I, Z⊗I, I⊗X, I⊗Z). Throws ConfigError
  /// unless the images are Hermitian 2-qubit Paulis with the canonical
  /// commutation relations.
  static CliffordGate2 from_images(const std::array<SignedPauli, 4>& images);

  const std::array<SignedPauli, 4>& images() const noexcept { return images_; }

  Image heisenberg(std::uint8_t code) const noexcept { return heis_[code & 15]; }
  Image schrodinger(std::uint8_t code) const noexcept { return schr_[code & 15]; }

  CliffordGate2 inverse() const;

  /// Packs the four signed images into 20 bits; distinct gates (mod global
  /// phase) have distinct keys.
  std::uint32_t key() const noexcept;

  friend bool operator==(const CliffordGate2& a, const CliffordGate2& b) { return a.key() == b.key(); }

 private:
  void build_tables();

  std::array<SignedPauli, 4> images_;
  std::array<Image, 16> heis_{};
  std::array<Image, 16> schr_{};
};

/// Number of two-qubit Clifford gates modulo global phase.
inline constexpr std::size_t kTwoQubitCliffordCount = 11520;

/// Uniform draw from the two-qubit Clifford group (mod phase). Rejection-free:
/// picks the image of X⊗I among 30 signed Paulis, Z⊗I among the 16 that
/// anticommute with it, I⊗X among the 6 in the commutant, I⊗Z among the 4
/// completing the pair.
CliffordGate2 random_two_qubit_clifford(Rng& rng);

/// 2-qubit Pauli code of sites (q0, q1) of p.
std::uint8_t bond_code(const PauliString& p, std::size_t q0, std::size_t q1) noexcept;

/// U^dag P U with the gate acting on qubits (q0, q1). Identity elsewhere.
SignedPauli gate_conjugate(const CliffordGate2& g, const SignedPauli& p, std::size_t q0, std::size_t q1);

/// In-place versions. `heisenberg` applies P -> U^dag P U, otherwise P -> U P U^dag.
void apply_gate(const CliffordGate2& g, SignedPauli& p, std::size_t q0, std::size_t q1, bool heisenberg);

/// Symplectic product of 2-qubit codes: true if they commute.
constexpr bool codes_commute(std::uint8_t a, std::uint8_t b) noexcept {
  const unsigned s = ((a & 1u) & ((b >> 1) & 1u)) ^ (((a >> 1) & 1u) & (b & 1u)) ^
                     (((a >> 2) & 1u) & ((b >> 3) & 1u)) ^ (((a >> 3) & 1u) & ((b >> 2) & 1u));
  return s == 0;
}

}  // namespace hcs
