#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hcs {

/// Single-qubit Pauli in (x, z) bit form: bit 0 = x, bit 1 = z.
enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

/// N-qubit Pauli operator without phase. Y on a site is the Hermitian Y, so
/// every PauliString is Hermitian. Bits are packed 64 qubits per word.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::size_t n_qubits);

  /// Parses "XIZY" (qubit 0 first). Throws ConfigError on other characters.
  static PauliString parse(std::string_view text);
  /// Single-site Pauli `p` on qubit `site`.
  static PauliString single(std::size_t n_qubits, std::size_t site, Pauli p);

  std::size_t n_qubits() const noexcept { return n_; }
  std::size_t n_words() const noexcept { return x_.size(); }

  Pauli at(std::size_t q) const noexcept;
  void set(std::size_t q, Pauli p) noexcept;

  bool is_identity() const noexcept;
  /// Number of non-identity sites.
  std::size_t support_size() const noexcept;
  std::vector<std::size_t> support() const;
  /// Support as a bitmask; requires n_qubits <= 64.
  std::uint64_t support_mask() const;

  std::string str() const;

  std::vector<std::uint64_t>& xs() noexcept { return x_; }
  std::vector<std::uint64_t>& zs() noexcept { return z_; }
  const std::vector<std::uint64_t>& xs() const noexcept { return x_; }
  const std::vector<std::uint64_t>& zs() const noexcept { return z_; }

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> x_;
  std::vector<std::uint64_t> z_;
};

/// True iff PQ = QP (symplectic product zero mod 2). Throws on size mismatch.
bool commutes(const PauliString& p, const PauliString& q);

/// Pauli operator with a phase i^phase, phase in {0,1,2,3}.
struct SignedPauli {
  PauliString pauli;
  std::uint8_t phase = 0;

  SignedPauli() = default;
  explicit SignedPauli(PauliString p, std::uint8_t ph = 0) : pauli(std::move(p)), phase(ph & 3u) {}

  /// Parses "+XZ", "-YI", "iZ", "-iX". A missing sign means +.
  static SignedPauli parse(std::string_view text);

  bool hermitian() const noexcept { return (phase & 1u) == 0; }
  /// +1 or -1; only meaningful when hermitian().
  int sign() const noexcept { return phase == 0 ? 1 : -1; }
  std::string str() const;

  friend bool operator==(const SignedPauli&, const SignedPauli&) = default;
};

/// Right-multiplies lhs in place by rhs (lhs <- lhs * rhs), tracking the phase exactly.
void right_multiply(SignedPauli& lhs, const SignedPauli& rhs);

/// Group product p * q with exact phase.
SignedPauli multiply(const SignedPauli& p, const SignedPauli& q);

}  // namespace hcs
