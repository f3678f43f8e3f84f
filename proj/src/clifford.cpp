#include "hcs/clifford.hpp"

#include <vector>

#include "hcs/errors.hpp"

namespace hcs {

namespace {

SignedPauli code_to_pauli(std::uint8_t code) {
  PauliString p(2);
  p.set(0, static_cast<Pauli>(code & 3u));
  p.set(1, static_cast<Pauli>((code >> 2) & 3u));
  return SignedPauli(std::move(p), 0);
}

std::uint8_t pauli_to_code(const PauliString& p) {
  return static_cast<std::uint8_t>(static_cast<unsigned>(p.at(0)) | (static_cast<unsigned>(p.at(1)) << 2));
}

SignedPauli signed_code(std::uint8_t code, bool negative) {
  SignedPauli s = code_to_pauli(code);
  s.phase = negative ? 2 : 0;
  return s;
}

}  // namespace

CliffordGate2::CliffordGate2()
    : images_{SignedPauli::parse("+XI"), SignedPauli::parse("+ZI"), SignedPauli::parse("+IX"),
              SignedPauli::parse("+IZ")} {
  build_tables();
}

CliffordGate2 CliffordGate2::from_images(const std::array<SignedPauli, 4>& images) {
  for (const auto& im : images) {
    if (im.pauli.n_qubits() != 2) throw ConfigError("Clifford image must act on 2 qubits");
    if (!im.hermitian()) throw ConfigError("Clifford image must carry phase +1 or -1");
    if (im.pauli.is_identity()) throw ConfigError("Clifford image cannot be the identity");
  }
  // Required relations: images i, j anticommute iff {i, j} is {0,1} or {2,3}.
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const bool partners = (i == 0 && j == 1) || (i == 2 && j == 3);
      if (commutes(images[i].pauli, images[j].pauli) == partners) {
        throw ConfigError("Clifford images violate the symplectic condition");
      }
    }
  }
  CliffordGate2 g;
  g.images_ = images;
  g.build_tables();
  return g;
}

void CliffordGate2::build_tables() {
  for (std::uint8_t code = 0; code < 16; ++code) {
    // P = i^{x0 z0 + x1 z1} X0^x0 Z0^z0 X1^x1 Z1^z1, so its image is the same
    // ordered product of the generator images.
    SignedPauli acc(PauliString(2), 0);
    const unsigned x0 = code & 1u, z0 = (code >> 1) & 1u, x1 = (code >> 2) & 1u, z1 = (code >> 3) & 1u;
    if (x0) right_multiply(acc, images_[0]);
    if (z0) right_multiply(acc, images_[1]);
    if (x1) right_multiply(acc, images_[2]);
    if (z1) right_multiply(acc, images_[3]);
    acc.phase = static_cast<std::uint8_t>((acc.phase + x0 * z0 + x1 * z1) & 3u);
    heis_[code] = Image{pauli_to_code(acc.pauli), acc.phase};
  }
  for (std::uint8_t code = 0; code < 16; ++code) {
    const Image im = heis_[code];
    schr_[im.code] = Image{code, static_cast<std::uint8_t>((4 - im.phase) & 3u)};
  }
}

CliffordGate2 CliffordGate2::inverse() const {
  std::array<SignedPauli, 4> inv;
  static constexpr std::uint8_t kGenerators[4] = {0b0001, 0b0010, 0b0100, 0b1000};
  for (int i = 0; i < 4; ++i) {
    const Image im = schr_[kGenerators[i]];
    inv[i] = code_to_pauli(im.code);
    inv[i].phase = im.phase;
  }
  return from_images(inv);
}

std::uint32_t CliffordGate2::key() const noexcept {
  std::uint32_t k = 0;
  for (int i = 0; i < 4; ++i) {
    const std::uint32_t part = pauli_to_code(images_[i].pauli) | (images_[i].phase == 2 ? 16u : 0u);
    k |= part << (5 * i);
  }
  return k;
}

CliffordGate2 random_two_qubit_clifford(Rng& rng) {
  auto pick = [&rng](const std::vector<std::uint8_t>& candidates) {
    const std::uint64_t r = uniform_below(rng, 2 * candidates.size());
    return signed_code(candidates[r >> 1], (r & 1u) != 0);
  };
  std::vector<std::uint8_t> cand;
  cand.reserve(16);

  for (std::uint8_t c = 1; c < 16; ++c) cand.push_back(c);
  const SignedPauli a = pick(cand);
  const std::uint8_t ca = pauli_to_code(a.pauli);

  cand.clear();
  for (std::uint8_t c = 1; c < 16; ++c) {
    if (!codes_commute(c, ca)) cand.push_back(c);
  }
  const SignedPauli b = pick(cand);
  const std::uint8_t cb = pauli_to_code(b.pauli);

  cand.clear();
  for (std::uint8_t c = 1; c < 16; ++c) {
    if (codes_commute(c, ca) && codes_commute(c, cb)) cand.push_back(c);
  }
  const SignedPauli c_img = pick(cand);
  const std::uint8_t cc = pauli_to_code(c_img.pauli);

  cand.clear();
  for (std::uint8_t c = 1; c < 16; ++c) {
    if (codes_commute(c, ca) && codes_commute(c, cb) && !codes_commute(c, cc)) cand.push_back(c);
  }
  const SignedPauli d = pick(cand);

  return CliffordGate2::from_images({a, b, c_img, d});
}

std::uint8_t bond_code(const PauliString& p, std::size_t q0, std::size_t q1) noexcept {
  return static_cast<std::uint8_t>(static_cast<unsigned>(p.at(q0)) | (static_cast<unsigned>(p.at(q1)) << 2));
}

void apply_gate(const CliffordGate2& g, SignedPauli& p, std::size_t q0, std::size_t q1, bool heisenberg) {
  const std::size_t n = p.pauli.n_qubits();
  if (q0 >= n || q1 >= n || q0 == q1) throw ConfigError("invalid bond for two-qubit gate");
  const std::uint8_t code = bond_code(p.pauli, q0, q1);
  if (code == 0) return;
  const CliffordGate2::Image im = heisenberg ? g.heisenberg(code) : g.schrodinger(code);
  p.pauli.set(q0, static_cast<Pauli>(im.code & 3u));
  p.pauli.set(q1, static_cast<Pauli>((im.code >> 2) & 3u));
  p.phase = static_cast<std::uint8_t>((p.phase + im.phase) & 3u);
}

SignedPauli gate_conjugate(const CliffordGate2& g, const SignedPauli& p, std::size_t q0, std::size_t q1) {
  SignedPauli out = p;
  apply_gate(g, out, q0, q1, true);
  return out;
}

}  // namespace hcs
