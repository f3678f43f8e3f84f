#include "hcs/pauli.hpp"

#include <bit>

#include "hcs/errors.hpp"

namespace hcs {

namespace {

constexpr std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

void check_same_size(const PauliString& p, const PauliString& q) {
  if (p.n_qubits() != q.n_qubits()) {
    throw ConfigError("Pauli length mismatch: " + std::to_string(p.n_qubits()) + " vs " +
                      std::to_string(q.n_qubits()));
  }
}

}  // namespace

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': case '_': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: throw ConfigError(std::string("invalid Pauli character '") + c + "'");
  }
}

PauliString::PauliString(std::size_t n_qubits)
    : n_(n_qubits), x_(words_for(n_qubits), 0), z_(words_for(n_qubits), 0) {}

PauliString PauliString::parse(std::string_view text) {
  PauliString p(text.size());
  for (std::size_t q = 0; q < text.size(); ++q) p.set(q, pauli_from_char(text[q]));
  return p;
}

PauliString PauliString::single(std::size_t n_qubits, std::size_t site, Pauli p) {
  if (site >= n_qubits) throw ConfigError("site index out of range");
  PauliString out(n_qubits);
  out.set(site, p);
  return out;
}

Pauli PauliString::at(std::size_t q) const noexcept {
  const std::uint64_t bit = 1ULL << (q & 63);
  const std::size_t w = q >> 6;
  return static_cast<Pauli>(((x_[w] & bit) ? 1 : 0) | ((z_[w] & bit) ? 2 : 0));
}

void PauliString::set(std::size_t q, Pauli p) noexcept {
  const std::uint64_t bit = 1ULL << (q & 63);
  const std::size_t w = q >> 6;
  const auto v = static_cast<std::uint8_t>(p);
  x_[w] = (v & 1) ? (x_[w] | bit) : (x_[w] & ~bit);
  z_[w] = (v & 2) ? (z_[w] | bit) : (z_[w] & ~bit);
}

bool PauliString::is_identity() const noexcept {
  for (std::size_t w = 0; w < x_.size(); ++w) {
    if (x_[w] | z_[w]) return false;
  }
  return true;
}

std::size_t PauliString::support_size() const noexcept {
  std::size_t k = 0;
  for (std::size_t w = 0; w < x_.size(); ++w) k += std::popcount(x_[w] | z_[w]);
  return k;
}

std::vector<std::size_t> PauliString::support() const {
  std::vector<std::size_t> out;
  for (std::size_t q = 0; q < n_; ++q) {
    if (at(q) != Pauli::I) out.push_back(q);
  }
  return out;
}

std::uint64_t PauliString::support_mask() const {
  if (n_ > 64) throw ConfigError("support_mask requires at most 64 qubits");
  return n_ == 0 ? 0 : (x_[0] | z_[0]);
}

std::string PauliString::str() const {
  std::string s(n_, 'I');
  for (std::size_t q = 0; q < n_; ++q) s[q] = pauli_char(at(q));
  return s;
}

bool commutes(const PauliString& p, const PauliString& q) {
  check_same_size(p, q);
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < p.n_words(); ++w) {
    acc ^= (p.xs()[w] & q.zs()[w]) ^ (p.zs()[w] & q.xs()[w]);
  }
  return (std::popcount(acc) & 1) == 0;
}

SignedPauli SignedPauli::parse(std::string_view text) {
  std::uint8_t phase = 0;
  if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
    if (text[0] == '-') phase = 2;
    text.remove_prefix(1);
  }
  if (!text.empty() && text[0] == 'i') {
    phase = static_cast<std::uint8_t>((phase + 1) & 3);
    text.remove_prefix(1);
  }
  return SignedPauli(PauliString::parse(text), phase);
}

std::string SignedPauli::str() const {
  static constexpr const char* kPrefix[4] = {"+", "+i", "-", "-i"};
  return kPrefix[phase & 3] + pauli.str();
}

void right_multiply(SignedPauli& lhs, const SignedPauli& rhs) {
  check_same_size(lhs.pauli, rhs.pauli);
  // Per-site phase of sigma_1 * sigma_2 = i^f sigma_3 with f in {-1, 0, +1}:
  // +1 for the cyclic orders XY, YZ, ZX and -1 for the reverse.
  int f = 0;
  auto& lx = lhs.pauli.xs();
  auto& lz = lhs.pauli.zs();
  const auto& rx = rhs.pauli.xs();
  const auto& rz = rhs.pauli.zs();
  for (std::size_t w = 0; w < lx.size(); ++w) {
    const std::uint64_t x1 = lx[w], z1 = lz[w], x2 = rx[w], z2 = rz[w];
    const std::uint64_t y1 = x1 & z1, xo1 = x1 & ~z1, zo1 = z1 & ~x1;
    const std::uint64_t y2 = x2 & z2, xo2 = x2 & ~z2, zo2 = z2 & ~x2;
    const std::uint64_t pos = (xo1 & y2) | (y1 & zo2) | (zo1 & xo2);
    const std::uint64_t neg = (y1 & xo2) | (zo1 & y2) | (xo1 & zo2);
    f += std::popcount(pos) - std::popcount(neg);
    lx[w] = x1 ^ x2;
    lz[w] = z1 ^ z2;
  }
  lhs.phase = static_cast<std::uint8_t>((lhs.phase + rhs.phase + (f % 4 + 4)) & 3);
}

SignedPauli multiply(const SignedPauli& p, const SignedPauli& q) {
  SignedPauli out = p;
  right_multiply(out, q);
  return out;
}

}  // namespace hcs
