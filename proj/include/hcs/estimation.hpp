#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "hcs/circuit.hpp"
#include "hcs/parallel.hpp"
#include "hcs/pauli.hpp"
#include "hcs/tableau.hpp"
#include "hcs/weight_exact.hpp"
#include "hcs/weight_mps.hpp"

namespace hcs {

/// Weights at or below this are treated as zero.
inline constexpr double kWeightFloor = 1e-12;

struct ObservableTerm {
  double coefficient = 1.0;
  PauliString pauli;
};

/// O = sum_P o_P P with distinct Paulis.
struct ObservableSpec {
  std::string label;
  std::vector<ObservableTerm> terms;

  static ObservableSpec single(PauliString p, double coefficient = 1.0);
  /// "ZZII" or "0.5*ZZII+-1*XXII". The label defaults to the text.
  static ObservableSpec parse(const std::string& text);
  /// Throws ConfigError on empty, non-finite, mismatched or repeated terms.
  void validate(std::size_t n_qubits) const;
};

/// Source of prior Pauli weights w(P). Estimators only ever see this
/// interface, so the Markov engines and Monte-Carlo tables are interchangeable.
class WeightProvider {
 public:
  using Fn = std::function<double(const PauliString&)>;

  explicit WeightProvider(Fn fn, std::string name = "function");

  static WeightProvider exact(std::shared_ptr<const RegionWeightVector> weights);
  static WeightProvider exact(RegionWeightVector weights);
  static WeightProvider mps(std::shared_ptr<const WeightMPS> weights);
  static WeightProvider mps(WeightMPS weights);
  /// Weight depends on the support mask only (N <= 64).
  static WeightProvider by_support(std::vector<double> table, std::string name = "table");

  double operator()(const PauliString& p) const { return fn_(p); }
  const std::string& name() const noexcept { return name_; }

 private:
  Fn fn_;
  std::string name_;
};

/// sum_P o_P Tr(P sigma) / w(P). Throws IncompletenessError if a needed
/// weight is <= kWeightFloor.
double single_shot_estimate(const StabilizerTableau& snapshot, const ObservableSpec& obs,
                            const WeightProvider& weights);

enum class AggregateMethod { Mean, MedianOfMeans };

struct EstimateReport {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::size_t n_batches = 1;
  AggregateMethod method = AggregateMethod::MedianOfMeans;
};

/// Plain mean with the usual standard error of the mean.
EstimateReport mean_estimate(const std::vector<double>& values);

/// Median over n_batches contiguous batches (sizes differ by at most one).
/// The standard error is the spread of the batch means divided by
/// sqrt(n_batches), inflated by sqrt(pi/2) for the median.
EstimateReport median_of_means(const std::vector<double>& values, std::size_t n_batches = 10);

/// Reconstructs every snapshot and evaluates the single-shot estimator.
std::vector<double> single_shot_values(const std::vector<ShadowRecord>& records, const ObservableSpec& obs,
                                       const WeightProvider& weights, Exec exec = Exec::Parallel);

EstimateReport estimate_observable(const std::vector<ShadowRecord>& records, const ObservableSpec& obs,
                                   const WeightProvider& weights, std::size_t n_batches = 10,
                                   Exec exec = Exec::Parallel);

/// Mean of (Tr(P sigma)/w(P))^2 over prior records (maximally mixed input).
/// Reported with its standard error.
EstimateReport empirical_shadow_norm(const std::vector<ShadowRecord>& prior_records, const PauliString& p,
                                     const WeightProvider& weights, Exec exec = Exec::Parallel);

/// mean Tr(P sigma) / Tr(P rho) over posterior records of a known state: an
/// estimate of the prior weight w(P) without post-selection. Throws
/// ConfigError if tr_p_rho is zero.
EstimateReport benchmark_weight_from_known_state(const std::vector<ShadowRecord>& records, const PauliString& p,
                                                 double tr_p_rho, Exec exec = Exec::Parallel);

struct EstimateRow {
  std::string observable_label;
  double p = 0.0;
  EstimateReport report;
};

/// Header line plus one row per estimate:
/// observable_label,p,value,std_error,n_samples,n_batches
void write_estimate_table(std::ostream& out, const std::vector<EstimateRow>& rows);

}  // namespace hcs
