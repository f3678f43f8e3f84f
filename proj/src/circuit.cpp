#include "hcs/circuit.hpp"

#include <algorithm>

#include "hcs/errors.hpp"

namespace hcs {

bool ShadowRecord::executed() const {
  for (const auto& layer : layers) {
    for (const auto& e : layer.events) {
      if (e.outcome < 0) return false;
    }
  }
  return true;
}

std::size_t ShadowRecord::measurement_count() const {
  std::size_t k = 0;
  for (const auto& layer : layers) k += layer.events.size();
  return k;
}

InitialStateSpec InitialStateSpec::named(std::string label) {
  if (label != "ghz" && label != "zero" && label != "plus" && label != "mixed") {
    throw ConfigError("unknown initial state '" + label + "'");
  }
  InitialStateSpec s;
  s.label = std::move(label);
  return s;
}

InitialStateSpec InitialStateSpec::custom(std::vector<SignedPauli> generators) {
  InitialStateSpec s;
  s.label = "custom";
  s.generators = std::move(generators);
  return s;
}

StabilizerTableau InitialStateSpec::build(std::size_t n_qubits) const {
  if (generators) {
    auto t = StabilizerTableau::from_generators(n_qubits, *generators);
    if (t.rank() != n_qubits) throw ConfigError("custom initial state must be pure (N generators)");
    return t;
  }
  if (label == "ghz") return ghz_state(n_qubits);
  if (label == "zero") return StabilizerTableau::zero_state(n_qubits);
  if (label == "mixed") return StabilizerTableau(n_qubits);
  if (label == "plus") {
    std::vector<SignedPauli> gens;
    for (std::size_t q = 0; q < n_qubits; ++q) gens.emplace_back(PauliString::single(n_qubits, q, Pauli::X));
    return StabilizerTableau::from_generators(n_qubits, std::move(gens));
  }
  throw ConfigError("unknown initial state '" + label + "'");
}

StabilizerTableau ghz_state(std::size_t n_qubits) {
  if (n_qubits == 0) throw ConfigError("GHZ state needs at least one qubit");
  std::vector<SignedPauli> gens;
  PauliString all_x(n_qubits);
  for (std::size_t q = 0; q < n_qubits; ++q) all_x.set(q, Pauli::X);
  gens.emplace_back(all_x);
  for (std::size_t q = 0; q + 1 < n_qubits; ++q) {
    PauliString zz(n_qubits);
    zz.set(q, Pauli::Z);
    zz.set(q + 1, Pauli::Z);
    gens.emplace_back(zz);
  }
  return StabilizerTableau::from_generators(n_qubits, std::move(gens));
}

std::vector<LayerSpec> forward_layers(const CircuitShape& shape) {
  std::vector<LayerSpec> out;
  for (std::size_t l = 0; l < shape.n_unitary_layers; ++l) {
    out.push_back({LayerKind::Measurement, 0});
    out.push_back({LayerKind::Unitary, static_cast<int>(l % 2)});
  }
  if (shape.trailing_measurement) out.push_back({LayerKind::Measurement, 0});
  return out;
}

std::vector<LayerSpec> record_layers(const ShadowRecord& record) {
  std::vector<LayerSpec> out;
  out.reserve(record.layers.size());
  for (const auto& l : record.layers) {
    out.push_back({l.kind, l.kind == LayerKind::Unitary ? l.parity : 0});
  }
  return out;
}

CircuitShape record_shape(const ShadowRecord& record) {
  CircuitShape shape;
  shape.n_unitary_layers = 0;
  for (const auto& l : record.layers) shape.n_unitary_layers += l.kind == LayerKind::Unitary ? 1 : 0;
  shape.trailing_measurement = !record.layers.empty() && record.layers.back().kind == LayerKind::Measurement &&
                               record.layers.size() % 2 == 1;
  if (forward_layers(shape) != record_layers(record)) {
    throw ConfigError("record does not follow the [measurement, unitary] layer pattern");
  }
  return shape;
}

ShadowRecord sample_circuit(std::size_t n_qubits, const CircuitShape& shape, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("measurement rate must lie in [0, 1]");
  if (n_qubits == 0) throw ConfigError("circuit needs at least one qubit");
  static constexpr Pauli kBases[3] = {Pauli::X, Pauli::Y, Pauli::Z};
  ShadowRecord rec;
  rec.n_qubits = n_qubits;
  rec.p = p;
  std::bernoulli_distribution measured(p);
  for (const LayerSpec& spec : forward_layers(shape)) {
    CircuitLayer layer;
    layer.kind = spec.kind;
    if (spec.kind == LayerKind::Measurement) {
      for (std::size_t q = 0; q < n_qubits; ++q) {
        if (measured(rng)) layer.events.push_back({q, kBases[uniform_below(rng, 3)], -1});
      }
    } else {
      layer.parity = spec.parity;
      const std::size_t bonds = CircuitLayer::bond_count(n_qubits, spec.parity);
      layer.gates.reserve(bonds);
      for (std::size_t j = 0; j < bonds; ++j) layer.gates.push_back(random_two_qubit_clifford(rng));
    }
    rec.layers.push_back(std::move(layer));
  }
  return rec;
}

ShadowRecord run_forward(StabilizerTableau state, ShadowRecord circuit, Rng& rng) {
  if (state.n_qubits() != circuit.n_qubits) throw ConfigError("state and circuit sizes differ");
  for (auto& layer : circuit.layers) {
    if (layer.kind == LayerKind::Measurement) {
      for (auto& e : layer.events) e.outcome = state.measure(e.qubit, e.basis, rng);
    } else {
      state.apply_gate_layer(layer.gates, layer.parity, /*heisenberg=*/false);
    }
  }
  return circuit;
}

ShadowRecord simulate_shot(const InitialStateSpec& state, std::size_t n_qubits, const CircuitShape& shape,
                           double p, std::uint64_t master_seed, std::uint64_t shot_index) {
  Rng rng = make_shot_rng(master_seed, shot_index);
  ShadowRecord circuit = sample_circuit(n_qubits, shape, p, rng);
  circuit.master_seed = master_seed;
  circuit.shot_index = shot_index;
  circuit.initial_state_label = state.label;
  return run_forward(state.build(n_qubits), std::move(circuit), rng);
}

std::vector<ShadowRecord> simulate_shots(const InitialStateSpec& state, std::size_t n_qubits,
                                         const CircuitShape& shape, double p, std::uint64_t master_seed,
                                         std::size_t n_shots, Exec exec) {
  std::vector<ShadowRecord> out(n_shots);
  for_each_index(n_shots, exec, [&](std::size_t i) {
    out[i] = simulate_shot(state, n_qubits, shape, p, master_seed, i);
  });
  return out;
}

StabilizerTableau reconstruct_snapshot(const ShadowRecord& record) {
  StabilizerTableau sigma(record.n_qubits);
  for (auto it = record.layers.rbegin(); it != record.layers.rend(); ++it) {
    const CircuitLayer& layer = *it;
    if (layer.kind == LayerKind::Measurement) {
      for (const auto& e : layer.events) {
        if (e.outcome < 0) throw ConfigError("record has unexecuted measurements");
        sigma.project(e.qubit, e.basis, e.outcome);
      }
    } else {
      sigma.apply_gate_layer(layer.gates, layer.parity, /*heisenberg=*/true);
    }
  }
  return sigma;
}

}  // namespace hcs
