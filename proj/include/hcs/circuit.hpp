#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hcs/clifford.hpp"
#include "hcs/parallel.hpp"
#include "hcs/pauli.hpp"
#include "hcs/rng.hpp"
#include "hcs/tableau.hpp"

namespace hcs {

struct MeasurementEvent {
  std::size_t qubit = 0;
  Pauli basis = Pauli::Z;
  int outcome = -1;  // -1 until executed

  friend bool operator==(const MeasurementEvent&, const MeasurementEvent&) = default;
};

enum class LayerKind { Measurement, Unitary };

/// One layer of a hybrid circuit. Unitary layers place gates[j] on the bond
/// (parity + 2j, parity + 2j + 1) with open boundaries, so an edge qubit idles
/// when the parity excludes it.
struct CircuitLayer {
  LayerKind kind = LayerKind::Measurement;
  std::vector<MeasurementEvent> events;
  int parity = 0;
  std::vector<CliffordGate2> gates;

  static std::size_t bond_count(std::size_t n_qubits, int parity) {
    return n_qubits > static_cast<std::size_t>(parity) ? (n_qubits - parity) / 2 : 0;
  }

  friend bool operator==(const CircuitLayer&, const CircuitLayer&) = default;
};

/// Layer pattern of a hybrid circuit in forward time: n_unitary_layers
/// periods of [measurement, unitary], optionally closed by one more
/// measurement layer. Unitary layer l (0-based) has parity l % 2, so the first
/// one acts on bonds (0,1), (2,3), ...
struct CircuitShape {
  std::size_t n_unitary_layers = 1;
  bool trailing_measurement = false;

  friend bool operator==(const CircuitShape&, const CircuitShape&) = default;
};

/// One experiment: the circuit realization plus its outcomes.
struct ShadowRecord {
  static constexpr int kFormatVersion = 1;

  std::size_t n_qubits = 0;
  double p = 0.0;
  std::uint64_t master_seed = 0;
  std::uint64_t shot_index = 0;
  std::string initial_state_label;
  std::vector<CircuitLayer> layers;

  bool executed() const;
  std::size_t measurement_count() const;

  friend bool operator==(const ShadowRecord&, const ShadowRecord&) = default;
};

/// Initial state for forward sampling: a named state ("ghz", "zero", "plus",
/// or "mixed" for prior sampling) or an explicit generator list (label "custom").
struct InitialStateSpec {
  std::string label = "zero";
  std::optional<std::vector<SignedPauli>> generators;

  static InitialStateSpec named(std::string label);
  static InitialStateSpec custom(std::vector<SignedPauli> generators);
  StabilizerTableau build(std::size_t n_qubits) const;
};

/// GHZ state: generators X^N and Z_i Z_{i+1}.
StabilizerTableau ghz_state(std::size_t n_qubits);

/// Samples a circuit realization with unset outcomes.
ShadowRecord sample_circuit(std::size_t n_qubits, const CircuitShape& shape, double p, Rng& rng);

/// Executes `circuit` on `state` in place (Born-rule outcomes drawn from rng)
/// and returns the completed record.
ShadowRecord run_forward(StabilizerTableau state, ShadowRecord circuit, Rng& rng);

/// Samples and executes shot `shot_index`. The result depends only on
/// (master_seed, shot_index) and the arguments.
ShadowRecord simulate_shot(const InitialStateSpec& state, std::size_t n_qubits, const CircuitShape& shape,
                           double p, std::uint64_t master_seed, std::uint64_t shot_index);

/// Shots [0, n_shots) in order.
std::vector<ShadowRecord> simulate_shots(const InitialStateSpec& state, std::size_t n_qubits,
                                         const CircuitShape& shape, double p, std::uint64_t master_seed,
                                         std::size_t n_shots, Exec exec = Exec::Parallel);

/// Classical snapshot of a record: starts from the maximally mixed state and
/// walks the layers backwards, conjugating by U^dag . U for unitary layers and
/// projecting onto each recorded outcome. Throws ContradictionError if the
/// record is inconsistent.
StabilizerTableau reconstruct_snapshot(const ShadowRecord& record);

/// Forward layer sequence of a shape: kinds and parities only.
struct LayerSpec {
  LayerKind kind;
  int parity = 0;
  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};
std::vector<LayerSpec> forward_layers(const CircuitShape& shape);
/// Layer kinds of a concrete record, in forward order.
std::vector<LayerSpec> record_layers(const ShadowRecord& record);
/// Infers the shape of a record; throws ConfigError for non-standard layouts.
CircuitShape record_shape(const ShadowRecord& record);

}  // namespace hcs
