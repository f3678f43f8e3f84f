#include "hcs/tableau.hpp"

#include <bit>
#include <cmath>
#include <utility>

#include "hcs/errors.hpp"

namespace hcs {

namespace {

void xor_into(PauliString& dst, const PauliString& src) {
  for (std::size_t w = 0; w < dst.n_words(); ++w) {
    dst.xs()[w] ^= src.xs()[w];
    dst.zs()[w] ^= src.zs()[w];
  }
}

/// GF(2) rank of a set of bit rows (destroys the input).
std::size_t gf2_rank(std::vector<std::vector<std::uint64_t>>& rows) {
  std::size_t rank = 0;
  if (rows.empty()) return 0;
  const std::size_t n_words = rows[0].size();
  for (std::size_t w = 0; w < n_words && rank < rows.size(); ++w) {
    for (int b = 0; b < 64 && rank < rows.size(); ++b) {
      const std::uint64_t bit = 1ULL << b;
      std::size_t pivot = rank;
      while (pivot < rows.size() && !(rows[pivot][w] & bit)) ++pivot;
      if (pivot == rows.size()) continue;
      std::swap(rows[rank], rows[pivot]);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r != rank && (rows[r][w] & bit)) {
          for (std::size_t k = 0; k < n_words; ++k) rows[r][k] ^= rows[rank][k];
        }
      }
      ++rank;
    }
  }
  return rank;
}

void check_site(std::size_t site, std::size_t n) {
  if (site >= n) throw ConfigError("site " + std::to_string(site) + " out of range for " + std::to_string(n) + " qubits");
}

}  // namespace

StabilizerTableau::StabilizerTableau(std::size_t n_qubits) : n_(n_qubits) {
  if (n_qubits == 0) throw ConfigError("tableau needs at least one qubit");
}

StabilizerTableau StabilizerTableau::from_generators(std::size_t n_qubits, std::vector<SignedPauli> generators) {
  StabilizerTableau t(n_qubits);
  if (generators.size() > n_qubits) throw ConfigError("more generators than qubits");
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const auto& g = generators[i];
    if (g.pauli.n_qubits() != n_qubits) throw ConfigError("generator size mismatch");
    if (!g.hermitian()) throw ConfigError("generator must carry phase +1 or -1");
    if (g.pauli.is_identity()) throw ConfigError("identity generator");
    for (std::size_t j = 0; j < i; ++j) {
      if (!commutes(g.pauli, generators[j].pauli)) throw ConfigError("generators do not commute");
    }
  }
  t.gens_ = std::move(generators);
  t.canonicalize();
  for (const auto& g : t.gens_) {
    if (g.pauli.is_identity()) throw ConfigError("generators are not independent");
  }
  return t;
}

StabilizerTableau StabilizerTableau::zero_state(std::size_t n_qubits) {
  std::vector<SignedPauli> gens;
  for (std::size_t q = 0; q < n_qubits; ++q) gens.emplace_back(PauliString::single(n_qubits, q, Pauli::Z));
  return from_generators(n_qubits, std::move(gens));
}

bool StabilizerTableau::column_bit(const PauliString& p, std::size_t column) const noexcept {
  const bool is_x = column < n_;
  const std::size_t q = is_x ? column : column - n_;
  const auto& words = is_x ? p.xs() : p.zs();
  return (words[q >> 6] >> (q & 63)) & 1u;
}

void StabilizerTableau::canonicalize() {
  pivots_.clear();
  std::size_t row = 0;
  for (std::size_t c = 0; c < 2 * n_ && row < gens_.size(); ++c) {
    std::size_t r = row;
    while (r < gens_.size() && !column_bit(gens_[r].pauli, c)) ++r;
    if (r == gens_.size()) continue;
    std::swap(gens_[row], gens_[r]);
    for (std::size_t r2 = 0; r2 < gens_.size(); ++r2) {
      if (r2 != row && column_bit(gens_[r2].pauli, c)) right_multiply(gens_[r2], gens_[row]);
    }
    pivots_.push_back(c);
    ++row;
  }
  // Rows past `row` reduced to the identity: only possible for dependent input.
  while (pivots_.size() < gens_.size()) pivots_.push_back(2 * n_);
}

int StabilizerTableau::trace_pauli(const PauliString& p) const {
  if (p.n_qubits() != n_) throw ConfigError("Pauli size does not match tableau");
  PauliString residual = p;
  SignedPauli acc(PauliString(n_), 0);
  for (std::size_t r = 0; r < gens_.size(); ++r) {
    if (pivots_[r] < 2 * n_ && column_bit(residual, pivots_[r])) {
      xor_into(residual, gens_[r].pauli);
      right_multiply(acc, gens_[r]);
    }
  }
  if (!residual.is_identity()) return 0;
  return acc.phase == 0 ? 1 : -1;
}

StabilizerTableau::Classification StabilizerTableau::classify(const PauliString& p,
                                                              std::size_t* first_anticommuting) const {
  for (std::size_t r = 0; r < gens_.size(); ++r) {
    if (!commutes(gens_[r].pauli, p)) {
      *first_anticommuting = r;
      return {Membership::Anticommutes, 0};
    }
  }
  const int eps = trace_pauli(p);
  if (eps != 0) return {Membership::InGroup, eps};
  return {Membership::Outside, 0};
}

void StabilizerTableau::replace_anticommuting(const PauliString& p, int outcome, std::size_t first) {
  for (std::size_t r = first + 1; r < gens_.size(); ++r) {
    if (!commutes(gens_[r].pauli, p)) right_multiply(gens_[r], gens_[first]);
  }
  gens_[first] = SignedPauli(p, outcome ? 2 : 0);
  canonicalize();
}

void StabilizerTableau::add_generator(const PauliString& p, int outcome) {
  gens_.emplace_back(p, outcome ? 2 : 0);
  canonicalize();
}

int StabilizerTableau::measure(const PauliString& observable, Rng& rng) {
  if (observable.n_qubits() != n_) throw ConfigError("observable size does not match tableau");
  if (observable.is_identity()) return 0;
  std::size_t first = 0;
  const Classification c = classify(observable, &first);
  switch (c.kind) {
    case Membership::InGroup:
      return c.sign > 0 ? 0 : 1;
    case Membership::Anticommutes: {
      const int b = coin(rng) ? 1 : 0;
      replace_anticommuting(observable, b, first);
      return b;
    }
    case Membership::Outside: {
      const int b = coin(rng) ? 1 : 0;
      add_generator(observable, b);
      return b;
    }
  }
  return 0;
}

int StabilizerTableau::measure(std::size_t site, Pauli basis, Rng& rng) {
  check_site(site, n_);
  return measure(PauliString::single(n_, site, basis), rng);
}

void StabilizerTableau::project(const PauliString& observable, int outcome) {
  if (observable.n_qubits() != n_) throw ConfigError("observable size does not match tableau");
  if (observable.is_identity()) {
    if (outcome) throw ContradictionError("projection onto -identity");
    return;
  }
  std::size_t first = 0;
  const Classification c = classify(observable, &first);
  switch (c.kind) {
    case Membership::InGroup:
      if ((c.sign > 0) != (outcome == 0)) {
        throw ContradictionError("zero-probability projection onto " + std::string(outcome ? "-" : "+") +
                                 observable.str());
      }
      return;
    case Membership::Anticommutes:
      replace_anticommuting(observable, outcome, first);
      return;
    case Membership::Outside:
      add_generator(observable, outcome);
      return;
  }
}

void StabilizerTableau::project(std::size_t site, Pauli basis, int outcome) {
  check_site(site, n_);
  project(PauliString::single(n_, site, basis), outcome);
}

void StabilizerTableau::apply_gate(const CliffordGate2& gate, std::size_t q0, std::size_t q1, bool heisenberg) {
  for (auto& g : gens_) hcs::apply_gate(gate, g, q0, q1, heisenberg);
  canonicalize();
}

void StabilizerTableau::apply_gate_layer(std::span<const CliffordGate2> gates, int parity, bool heisenberg) {
  if (gates.empty()) return;
  const std::size_t last = static_cast<std::size_t>(parity) + 2 * gates.size() - 1;
  if (parity < 0 || last >= n_) throw ConfigError("gate layer does not fit the register");
  for (auto& g : gens_) {
    for (std::size_t j = 0; j < gates.size(); ++j) {
      const std::size_t q0 = parity + 2 * j;
      hcs::apply_gate(gates[j], g, q0, q0 + 1, heisenberg);
    }
  }
  canonicalize();
}

double StabilizerTableau::region_purity(std::span<const std::size_t> region) const {
  std::vector<bool> in_region(n_, false);
  for (std::size_t q : region) {
    check_site(q, n_);
    in_region[q] = true;
  }
  std::size_t region_size = 0;
  for (bool b : in_region) region_size += b ? 1 : 0;
  // Elements supported inside the region form the kernel of the restriction
  // to the complement, so their count is 2^(s - rank(restricted generators)).
  std::vector<std::vector<std::uint64_t>> rows;
  rows.reserve(gens_.size());
  for (const auto& g : gens_) {
    std::vector<std::uint64_t> row;
    row.reserve(2 * g.pauli.n_words());
    PauliString restricted = g.pauli;
    for (std::size_t q = 0; q < n_; ++q) {
      if (in_region[q]) restricted.set(q, Pauli::I);
    }
    row.insert(row.end(), restricted.xs().begin(), restricted.xs().end());
    row.insert(row.end(), restricted.zs().begin(), restricted.zs().end());
    rows.push_back(std::move(row));
  }
  const std::size_t rank = gf2_rank(rows);
  const int exponent = static_cast<int>(gens_.size() - rank) - static_cast<int>(region_size);
  return std::ldexp(1.0, exponent);
}

}  // namespace hcs
