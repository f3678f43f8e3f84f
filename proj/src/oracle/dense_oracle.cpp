#include "hcs/dense_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>

#include "hcs/appendix.hpp"
#include "hcs/errors.hpp"

namespace hcs::oracle {

namespace {

using cd = std::complex<double>;

Matrix single_site(Pauli p) {
  Matrix m = Matrix::Zero(2, 2);
  switch (p) {
    case Pauli::I:
      m << 1, 0, 0, 1;
      break;
    case Pauli::X:
      m << 0, 1, 1, 0;
      break;
    case Pauli::Y:
      m << 0, cd(0, -1), cd(0, 1), 0;
      break;
    case Pauli::Z:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

cd phase_factor(std::uint8_t phase) {
  static const cd table[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
  return table[phase & 3u];
}

void check_size(std::size_t n) {
  if (n == 0 || n > kMaxQubits) throw ConfigError("dense oracle supports 1..6 qubits");
}

std::size_t dim(std::size_t n) { return std::size_t{1} << n; }

}  // namespace

Matrix pauli_matrix(const PauliString& p) {
  check_size(p.n_qubits());
  // Qubit 0 is the least significant bit, so it is the rightmost factor.
  Matrix m = single_site(p.at(0));
  for (std::size_t q = 1; q < p.n_qubits(); ++q) m = kron(single_site(p.at(q)), m);
  return m;
}

Matrix pauli_matrix(const SignedPauli& p) { return phase_factor(p.phase) * pauli_matrix(p.pauli); }

PauliString pauli_from_index(std::size_t n_qubits, std::size_t index) {
  PauliString p(n_qubits);
  for (std::size_t q = 0; q < n_qubits; ++q) p.set(q, static_cast<Pauli>((index >> (2 * q)) & 3u));
  return p;
}

Matrix gate_unitary(const CliffordGate2& g) {
  const auto& img = g.images();
  const Matrix ax0 = pauli_matrix(img[0]);
  const Matrix bz0 = pauli_matrix(img[1]);
  const Matrix ax1 = pauli_matrix(img[2]);
  const Matrix bz1 = pauli_matrix(img[3]);
  const Matrix id = Matrix::Identity(4, 4);
  const Matrix proj = 0.25 * (id + bz0) * (id + bz1);
  Eigen::Index best = 0;
  for (Eigen::Index c = 1; c < 4; ++c) {
    if (proj.col(c).norm() > proj.col(best).norm()) best = c;
  }
  const Eigen::VectorXcd v0 = proj.col(best).normalized();
  Matrix udag(4, 4);
  udag.col(0) = v0;
  udag.col(1) = ax0 * v0;
  udag.col(2) = ax1 * v0;
  udag.col(3) = ax0 * ax1 * v0;
  return udag.adjoint();
}

Matrix embed_two_qubit(const Matrix& op, std::size_t n_qubits, std::size_t q0, std::size_t q1) {
  check_size(n_qubits);
  if (q0 == q1 || q0 >= n_qubits || q1 >= n_qubits) throw ConfigError("invalid bond");
  const std::size_t d = dim(n_qubits);
  Matrix out = Matrix::Zero(d, d);
  const std::size_t mask = (std::size_t{1} << q0) | (std::size_t{1} << q1);
  for (std::size_t col = 0; col < d; ++col) {
    const std::size_t c_local = ((col >> q0) & 1u) | (((col >> q1) & 1u) << 1);
    const std::size_t rest = col & ~mask;
    for (std::size_t r_local = 0; r_local < 4; ++r_local) {
      const std::size_t row = rest | ((r_local & 1u) << q0) | (((r_local >> 1) & 1u) << q1);
      out(row, col) = op(r_local, c_local);
    }
  }
  return out;
}

Matrix site_projector(std::size_t n_qubits, std::size_t site, Pauli basis, int outcome) {
  const std::size_t d = dim(n_qubits);
  const double s = outcome ? -1.0 : 1.0;
  return 0.5 * (Matrix::Identity(d, d) + s * pauli_matrix(PauliString::single(n_qubits, site, basis)));
}

Matrix density_matrix(const StabilizerTableau& t) {
  const std::size_t n = t.n_qubits();
  check_size(n);
  const std::size_t d = dim(n);
  const auto& gens = t.generators();
  std::vector<Matrix> g;
  g.reserve(gens.size());
  for (const auto& s : gens) g.push_back(pauli_matrix(s));
  Matrix rho = Matrix::Zero(d, d);
  for (std::size_t subset = 0; subset < (std::size_t{1} << gens.size()); ++subset) {
    Matrix term = Matrix::Identity(d, d);
    for (std::size_t j = 0; j < gens.size(); ++j) {
      if ((subset >> j) & 1u) term = term * g[j];
    }
    rho += term;
  }
  return rho / static_cast<double>(d);
}

double trace_pauli(const Matrix& rho, const PauliString& p) {
  // P has one nonzero per column: P|t> = c_t |t ^ xmask>, so
  // Tr(P rho) = sum_t c_t rho(t, t ^ xmask).
  const std::size_t n = p.n_qubits();
  std::size_t xmask = 0;
  std::size_t zmask = 0;
  std::size_t n_y = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const Pauli s = p.at(q);
    if (s == Pauli::X || s == Pauli::Y) xmask |= std::size_t{1} << q;
    if (s == Pauli::Z || s == Pauli::Y) zmask |= std::size_t{1} << q;
    if (s == Pauli::Y) ++n_y;
  }
  const cd iy = phase_factor(static_cast<std::uint8_t>(n_y & 3u));
  cd acc = 0.0;
  for (std::size_t t = 0; t < dim(n); ++t) {
    const double sign = (std::popcount(t & zmask) & 1) ? -1.0 : 1.0;
    acc += sign * rho(t, t ^ xmask);
  }
  return (iy * acc).real();
}

double region_purity(const Matrix& rho, const std::vector<std::size_t>& region) {
  const std::size_t n = static_cast<std::size_t>(std::countr_zero(static_cast<std::size_t>(rho.rows())));
  std::vector<std::size_t> inside;
  std::vector<std::size_t> outside;
  for (std::size_t q = 0; q < n; ++q) {
    bool in = false;
    for (std::size_t r : region) in = in || r == q;
    (in ? inside : outside).push_back(q);
  }
  auto compose = [&](std::size_t a, std::size_t c) {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < inside.size(); ++j) idx |= ((a >> j) & 1u) << inside[j];
    for (std::size_t j = 0; j < outside.size(); ++j) idx |= ((c >> j) & 1u) << outside[j];
    return idx;
  };
  const std::size_t da = dim(inside.size());
  const std::size_t dc = dim(outside.size());
  Matrix reduced = Matrix::Zero(da, da);
  for (std::size_t a = 0; a < da; ++a) {
    for (std::size_t a2 = 0; a2 < da; ++a2) {
      for (std::size_t c = 0; c < dc; ++c) reduced(a, a2) += rho(compose(a, c), compose(a2, c));
    }
  }
  return (reduced * reduced).trace().real();
}

namespace {

Matrix unitary_layer_matrix(const CircuitLayer& layer, std::size_t n) {
  const std::size_t d = dim(n);
  Matrix u = Matrix::Identity(d, d);
  for (std::size_t j = 0; j < layer.gates.size(); ++j) {
    const std::size_t q0 = static_cast<std::size_t>(layer.parity) + 2 * j;
    u = embed_two_qubit(gate_unitary(layer.gates[j]), n, q0, q0 + 1) * u;
  }
  return u;
}

}  // namespace

Matrix kraus_operator(const ShadowRecord& record) {
  const std::size_t n = record.n_qubits;
  check_size(n);
  const std::size_t d = dim(n);
  Matrix k = Matrix::Identity(d, d);
  for (const auto& layer : record.layers) {
    if (layer.kind == LayerKind::Measurement) {
      for (const auto& e : layer.events) {
        if (e.outcome < 0) throw ConfigError("record has unexecuted measurements");
        k = site_projector(n, e.qubit, e.basis, e.outcome) * k;
      }
    } else {
      k = unitary_layer_matrix(layer, n) * k;
    }
  }
  return k;
}

ChannelResult channel_apply(const Matrix& rho, const ShadowRecord& record) {
  const Matrix k = kraus_operator(record);
  const Matrix kdk = k.adjoint() * k;
  const double norm = kdk.trace().real();
  if (norm < 1e-12) throw ContradictionError("outcome string has zero probability for every input");
  ChannelResult r;
  r.probability = (k * rho * k.adjoint()).trace().real();
  r.snapshot = kdk / norm;
  return r;
}

double prior_probability(const ShadowRecord& record) {
  const Matrix k = kraus_operator(record);
  return (k * k.adjoint()).trace().real() / static_cast<double>(k.rows());
}

std::vector<ShadowRecord> enumerate_outcomes(const ShadowRecord& circuit) {
  const std::size_t n_events = circuit.measurement_count();
  if (n_events > 20) throw ConfigError("too many measurement events to enumerate");
  std::vector<ShadowRecord> out;
  out.reserve(std::size_t{1} << n_events);
  for (std::size_t bits = 0; bits < (std::size_t{1} << n_events); ++bits) {
    ShadowRecord r = circuit;
    std::size_t j = 0;
    for (auto& layer : r.layers) {
      for (auto& e : layer.events) e.outcome = static_cast<int>((bits >> j++) & 1u);
    }
    out.push_back(std::move(r));
  }
  return out;
}

ShadowRecord run_dense(const Matrix& rho_in, ShadowRecord circuit, Rng& rng) {
  const std::size_t n = circuit.n_qubits;
  check_size(n);
  Matrix rho = rho_in;
  for (auto& layer : circuit.layers) {
    if (layer.kind == LayerKind::Measurement) {
      for (auto& e : layer.events) {
        const Matrix p0 = site_projector(n, e.qubit, e.basis, 0);
        const Matrix next0 = p0 * rho * p0;
        const double prob0 = next0.trace().real();
        const int b = uniform01(rng) < prob0 ? 0 : 1;
        if (b == 0) {
          rho = next0 / prob0;
        } else {
          const Matrix p1 = site_projector(n, e.qubit, e.basis, 1);
          rho = p1 * rho * p1;
          rho /= rho.trace().real();
        }
        e.outcome = b;
      }
    } else {
      const Matrix u = unitary_layer_matrix(layer, n);
      rho = u * rho * u.adjoint();
    }
  }
  return circuit;
}

double WeightTable::weight(const PauliString& p) const {
  std::size_t idx = 0;
  for (std::size_t q = 0; q < p.n_qubits(); ++q) idx |= static_cast<std::size_t>(p.at(q)) << (2 * q);
  return per_pauli.at(idx);
}

namespace {

/// Shared Monte-Carlo loop: draws prior circuits with a maximally mixed input
/// and hands the vector of Tr(P sigma) over all 4^N Paulis to `visit`.
template <class Visit>
void for_each_prior_snapshot(std::size_t n, const CircuitShape& shape, double p, std::size_t shots,
                             std::uint64_t seed, Visit&& visit) {
  check_size(n);
  const std::size_t d = dim(n);
  const std::size_t n_paulis = std::size_t{1} << (2 * n);
  std::vector<PauliString> paulis;
  paulis.reserve(n_paulis);
  for (std::size_t c = 0; c < n_paulis; ++c) paulis.push_back(pauli_from_index(n, c));
  const Matrix mixed = Matrix::Identity(d, d) / static_cast<double>(d);
  std::vector<double> traces(n_paulis);
  for (std::size_t s = 0; s < shots; ++s) {
    Rng rng = make_shot_rng(seed, s);
    ShadowRecord rec = run_dense(mixed, sample_circuit(n, shape, p, rng), rng);
    const Matrix sigma = channel_apply(mixed, rec).snapshot;
    for (std::size_t c = 0; c < n_paulis; ++c) traces[c] = trace_pauli(sigma, paulis[c]);
    visit(traces);
  }
}

std::size_t support_of_index(std::size_t index, std::size_t n) {
  std::size_t mask = 0;
  for (std::size_t q = 0; q < n; ++q) {
    if ((index >> (2 * q)) & 3u) mask |= std::size_t{1} << q;
  }
  return mask;
}

}  // namespace

WeightTable mc_pauli_weight(std::size_t n_qubits, const CircuitShape& shape, double p, std::size_t shots,
                            std::uint64_t seed) {
  if (shots == 0) throw ConfigError("need at least one shot");
  const std::size_t n_paulis = std::size_t{1} << (2 * n_qubits);
  const std::size_t n_regions = std::size_t{1} << n_qubits;
  WeightTable t;
  t.n_qubits = n_qubits;
  t.shots = shots;
  t.per_pauli.assign(n_paulis, 0.0);
  t.per_pauli_sq.assign(n_paulis, 0.0);
  std::vector<double> region_sum(n_regions, 0.0);
  std::vector<double> region_sumsq(n_regions, 0.0);
  std::vector<double> region_count(n_regions, 0.0);
  std::vector<std::size_t> region_of(n_paulis);
  for (std::size_t c = 0; c < n_paulis; ++c) {
    region_of[c] = support_of_index(c, n_qubits);
    region_count[region_of[c]] += 1.0;
  }
  std::vector<double> shot_region(n_regions);
  for_each_prior_snapshot(n_qubits, shape, p, shots, seed, [&](const std::vector<double>& tr) {
    std::fill(shot_region.begin(), shot_region.end(), 0.0);
    for (std::size_t c = 0; c < n_paulis; ++c) {
      const double t2 = tr[c] * tr[c];
      t.per_pauli[c] += t2;
      t.per_pauli_sq[c] += t2 * t2;
      shot_region[region_of[c]] += t2;
    }
    for (std::size_t a = 0; a < n_regions; ++a) {
      const double v = shot_region[a] / region_count[a];
      region_sum[a] += v;
      region_sumsq[a] += v * v;
    }
  });
  const double m = static_cast<double>(shots);
  for (std::size_t c = 0; c < n_paulis; ++c) {
    t.per_pauli[c] /= m;
    t.per_pauli_sq[c] /= m;
  }
  t.by_support.resize(n_regions);
  t.by_support_error.resize(n_regions);
  for (std::size_t a = 0; a < n_regions; ++a) {
    const double mean = region_sum[a] / m;
    const double var = std::max(0.0, region_sumsq[a] / m - mean * mean);
    t.by_support[a] = mean;
    t.by_support_error[a] = shots > 1 ? std::sqrt(var / (m - 1.0)) : 0.0;
  }
  return t;
}

ChannelReport verify_measurement_channel(std::size_t n_qubits, const CircuitShape& shape, double p,
                                         std::size_t shots, std::uint64_t seed) {
  if (n_qubits > 4) throw ConfigError("measurement-channel check supports N <= 4");
  if (shots < 2) throw ConfigError("need at least two shots");
  const std::size_t n_paulis = std::size_t{1} << (2 * n_qubits);
  std::vector<double> sum(n_paulis * n_paulis, 0.0);
  std::vector<double> sumsq(n_paulis * n_paulis, 0.0);
  std::vector<std::size_t> nonzero;
  for_each_prior_snapshot(n_qubits, shape, p, shots, seed, [&](const std::vector<double>& tr) {
    // Stabilizer snapshots have at most 2^N nonzero traces, so pairs are cheap.
    nonzero.clear();
    for (std::size_t c = 0; c < n_paulis; ++c) {
      if (std::abs(tr[c]) > 1e-12) nonzero.push_back(c);
    }
    for (std::size_t a : nonzero) {
      for (std::size_t b : nonzero) {
        const double v = tr[a] * tr[b];
        sum[a * n_paulis + b] += v;
        sumsq[a * n_paulis + b] += v * v;
      }
    }
  });
  const double m = static_cast<double>(shots);
  ChannelReport r;
  r.n_qubits = n_qubits;
  r.shots = shots;
  r.diagonal.resize(n_paulis);
  r.diagonal_error.resize(n_paulis);
  for (std::size_t a = 0; a < n_paulis; ++a) {
    for (std::size_t b = 0; b < n_paulis; ++b) {
      const std::size_t i = a * n_paulis + b;
      const double mean = sum[i] / m;
      const double var = std::max(0.0, sumsq[i] / m - mean * mean);
      const double se = std::sqrt(var / (m - 1.0));
      if (a == b) {
        r.diagonal[a] = mean;
        r.diagonal_error[a] = se;
        continue;
      }
      r.max_offdiag = std::max(r.max_offdiag, std::abs(mean));
      if (se > 0.0) {
        const double z = std::abs(mean) / se;
        r.max_offdiag_z = std::max(r.max_offdiag_z, z);
        if (z > 4.0) ++r.offdiag_beyond_4sigma;
      }
      ++r.offdiag_entries;
    }
  }
  return r;
}

IdentityReport check_identities(std::size_t n_qubits, const CircuitShape& shape, double p, std::size_t n_records,
                                std::uint64_t seed, std::size_t max_enumerated_events) {
  check_size(n_qubits);
  IdentityReport rep;
  rep.records = n_records;
  const double inv_dim = 1.0 / static_cast<double>(dim(n_qubits));
  for (std::size_t r = 0; r < n_records; ++r) {
    Rng rng = make_shot_rng(seed, r);
    const StabilizerTableau state = random_stabilizer_state(n_qubits, rng);
    const Matrix rho = density_matrix(state);
    const ShadowRecord circuit = sample_circuit(n_qubits, shape, p, rng);
    const ShadowRecord record = run_forward(state, circuit, rng);

    const ChannelResult ch = channel_apply(rho, record);
    const Matrix sigma = density_matrix(reconstruct_snapshot(record));
    rep.max_snapshot_error = std::max(rep.max_snapshot_error, (ch.snapshot - sigma).cwiseAbs().maxCoeff());
    const double overlap = (sigma * rho).trace().real();
    const double bayes = inv_dim * ch.probability / prior_probability(record);
    rep.max_bayes_error = std::max(rep.max_bayes_error, std::abs(overlap - bayes));

    if (circuit.measurement_count() <= max_enumerated_events) {
      double total = 0.0;
      for (const ShadowRecord& b : enumerate_outcomes(circuit)) {
        const Matrix k = kraus_operator(b);
        const double prob = (k * rho * k.adjoint()).trace().real();
        rep.max_probability_excess = std::max({rep.max_probability_excess, -prob, prob - 1.0});
        total += prob;
      }
      rep.max_completeness_error = std::max(rep.max_completeness_error, std::abs(total - 1.0));
      ++rep.enumerated;
    }
  }
  return rep;
}

}  // namespace hcs::oracle
