#include "hcs/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "hcs/errors.hpp"

namespace hcs {

ObservableSpec ObservableSpec::single(PauliString p, double coefficient) {
  ObservableSpec o;
  o.label = p.str();
  o.terms.push_back({coefficient, std::move(p)});
  return o;
}

ObservableSpec ObservableSpec::parse(const std::string& text) {
  ObservableSpec o;
  o.label = text;
  std::stringstream ss(text);
  std::string item;
  if (text.empty() || text.back() == '+') throw ConfigError("empty term in observable '" + text + "'");
  while (std::getline(ss, item, '+')) {
    if (item.empty()) throw ConfigError("empty term in observable '" + text + "'");
    ObservableTerm term;
    const auto star = item.find('*');
    std::string pauli_text = item;
    if (star != std::string::npos) {
      try {
        std::size_t used = 0;
        term.coefficient = std::stod(item.substr(0, star), &used);
        if (used != star) throw ConfigError("bad coefficient");
      } catch (const std::exception&) {
        throw ConfigError("bad coefficient in observable term '" + item + "'");
      }
      pauli_text = item.substr(star + 1);
    }
    if (pauli_text.empty()) throw ConfigError("missing Pauli string in observable term '" + item + "'");
    term.pauli = PauliString::parse(pauli_text);
    o.terms.push_back(std::move(term));
  }
  return o;
}

void ObservableSpec::validate(std::size_t n_qubits) const {
  if (terms.empty()) throw ConfigError("observable has no terms");
  std::set<std::string> seen;
  for (const auto& t : terms) {
    if (!std::isfinite(t.coefficient)) throw ConfigError("observable coefficient is not finite");
    if (t.pauli.n_qubits() != n_qubits) throw ConfigError("observable size does not match the register");
    if (!seen.insert(t.pauli.str()).second) throw ConfigError("repeated Pauli " + t.pauli.str() + " in observable");
  }
}

WeightProvider::WeightProvider(Fn fn, std::string name) : fn_(std::move(fn)), name_(std::move(name)) {
  if (!fn_) throw ConfigError("empty weight provider");
}

WeightProvider WeightProvider::exact(std::shared_ptr<const RegionWeightVector> weights) {
  if (!weights || !weights->normalized()) throw ConfigError("exact weights must be normalized");
  return WeightProvider(
      [w = std::move(weights)](const PauliString& p) {
        if (p.n_qubits() != w->n_qubits()) throw ConfigError("Pauli size does not match the weight engine");
        return w->query(p.support_mask());
      },
      "exact");
}

WeightProvider WeightProvider::exact(RegionWeightVector weights) {
  return exact(std::make_shared<const RegionWeightVector>(std::move(weights)));
}

WeightProvider WeightProvider::mps(std::shared_ptr<const WeightMPS> weights) {
  if (!weights) throw ConfigError("null MPS weights");
  return WeightProvider(
      [w = std::move(weights)](const PauliString& p) {
        if (p.n_qubits() != w->n_qubits()) throw ConfigError("Pauli size does not match the weight engine");
        return w->query_weight(p.support());
      },
      "mps");
}

WeightProvider WeightProvider::mps(WeightMPS weights) {
  return mps(std::make_shared<const WeightMPS>(std::move(weights)));
}

WeightProvider WeightProvider::by_support(std::vector<double> table, std::string name) {
  return WeightProvider(
      [t = std::move(table)](const PauliString& p) {
        const std::uint64_t mask = p.support_mask();
        if (mask >= t.size()) throw ConfigError("support outside the weight table");
        return t[mask];
      },
      std::move(name));
}

double single_shot_estimate(const StabilizerTableau& snapshot, const ObservableSpec& obs,
                            const WeightProvider& weights) {
  double total = 0.0;
  for (const auto& term : obs.terms) {
    if (term.coefficient == 0.0) continue;
    const double w = weights(term.pauli);
    if (!(w > kWeightFloor)) {
      throw IncompletenessError("Pauli weight of " + term.pauli.str() + " vanishes; the circuit cannot resolve it");
    }
    const int tr = snapshot.trace_pauli(term.pauli);
    if (tr != 0) total += term.coefficient * tr / w;
  }
  return total;
}

EstimateReport mean_estimate(const std::vector<double>& values) {
  if (values.empty()) throw ConfigError("no samples to aggregate");
  EstimateReport r;
  r.method = AggregateMethod::Mean;
  r.n_samples = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  r.value = sum / values.size();
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - r.value) * (v - r.value);
    r.std_error = std::sqrt(ss / (values.size() - 1) / values.size());
  }
  return r;
}

EstimateReport median_of_means(const std::vector<double>& values, std::size_t n_batches) {
  if (values.empty()) throw ConfigError("no samples to aggregate");
  if (n_batches == 0 || n_batches > values.size()) throw ConfigError("batch count must lie in 1..n_samples");
  std::vector<double> means(n_batches);
  const std::size_t base = values.size() / n_batches;
  const std::size_t extra = values.size() % n_batches;
  std::size_t pos = 0;
  for (std::size_t b = 0; b < n_batches; ++b) {
    const std::size_t len = base + (b < extra ? 1 : 0);
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += values[pos + i];
    means[b] = s / len;
    pos += len;
  }
  EstimateReport r;
  r.method = AggregateMethod::MedianOfMeans;
  r.n_samples = values.size();
  r.n_batches = n_batches;

  std::vector<double> sorted = means;
  std::sort(sorted.begin(), sorted.end());
  r.value = n_batches % 2 == 1 ? sorted[n_batches / 2] : 0.5 * (sorted[n_batches / 2 - 1] + sorted[n_batches / 2]);

  if (n_batches > 1) {
    double avg = 0.0;
    for (double m : means) avg += m;
    avg /= n_batches;
    double ss = 0.0;
    for (double m : means) ss += (m - avg) * (m - avg);
    const double sem = std::sqrt(ss / (n_batches - 1) / n_batches);
    r.std_error = std::sqrt(std::numbers::pi / 2.0) * sem;
  }
  return r;
}

std::vector<double> single_shot_values(const std::vector<ShadowRecord>& records, const ObservableSpec& obs,
                                       const WeightProvider& weights, Exec exec) {
  if (records.empty()) throw ConfigError("no shadow records");
  obs.validate(records.front().n_qubits);
  // Look the weights up once; the provider may not be cheap.
  std::vector<double> inv_w(obs.terms.size(), 0.0);
  for (std::size_t t = 0; t < obs.terms.size(); ++t) {
    if (obs.terms[t].coefficient == 0.0) continue;
    const double w = weights(obs.terms[t].pauli);
    if (!(w > kWeightFloor)) {
      throw IncompletenessError("Pauli weight of " + obs.terms[t].pauli.str() +
                                " vanishes; the circuit cannot resolve it");
    }
    inv_w[t] = obs.terms[t].coefficient / w;
  }
  std::vector<double> out(records.size());
  for_each_index(records.size(), exec, [&](std::size_t i) {
    if (records[i].n_qubits != records.front().n_qubits) throw ConfigError("records differ in register size");
    const StabilizerTableau sigma = reconstruct_snapshot(records[i]);
    double v = 0.0;
    for (std::size_t t = 0; t < obs.terms.size(); ++t) {
      if (inv_w[t] != 0.0) v += inv_w[t] * sigma.trace_pauli(obs.terms[t].pauli);
    }
    out[i] = v;
  });
  return out;
}

EstimateReport estimate_observable(const std::vector<ShadowRecord>& records, const ObservableSpec& obs,
                                   const WeightProvider& weights, std::size_t n_batches, Exec exec) {
  if (n_batches == 0 || n_batches > records.size()) throw ConfigError("batch count must lie in 1..n_records");
  return median_of_means(single_shot_values(records, obs, weights, exec), n_batches);
}

namespace {

std::vector<int> traces(const std::vector<ShadowRecord>& records, const PauliString& p, Exec exec) {
  if (records.empty()) throw ConfigError("no shadow records");
  std::vector<int> out(records.size());
  for_each_index(records.size(), exec, [&](std::size_t i) {
    if (records[i].n_qubits != p.n_qubits()) throw ConfigError("Pauli size does not match the records");
    out[i] = reconstruct_snapshot(records[i]).trace_pauli(p);
  });
  return out;
}

}  // namespace

EstimateReport empirical_shadow_norm(const std::vector<ShadowRecord>& prior_records, const PauliString& p,
                                     const WeightProvider& weights, Exec exec) {
  const double w = weights(p);
  if (!(w > kWeightFloor)) throw IncompletenessError("Pauli weight of " + p.str() + " vanishes");
  const std::vector<int> tr = traces(prior_records, p, exec);
  std::vector<double> v(tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) v[i] = (tr[i] * tr[i]) / (w * w);
  return mean_estimate(v);
}

EstimateReport benchmark_weight_from_known_state(const std::vector<ShadowRecord>& records, const PauliString& p,
                                                 double tr_p_rho, Exec exec) {
  if (tr_p_rho == 0.0 || !std::isfinite(tr_p_rho)) {
    throw ConfigError("benchmark weight needs a Pauli with nonzero expectation on the known state");
  }
  const std::vector<int> tr = traces(records, p, exec);
  std::vector<double> v(tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) v[i] = tr[i] / tr_p_rho;
  return mean_estimate(v);
}

void write_estimate_table(std::ostream& out, const std::vector<EstimateRow>& rows) {
  out << "observable_label,p,value,std_error,n_samples,n_batches\n";
  const auto old = out.precision(12);
  for (const auto& r : rows) {
    out << r.observable_label << ',' << r.p << ',' << r.report.value << ',' << r.report.std_error << ','
        << r.report.n_samples << ',' << r.report.n_batches << '\n';
  }
  out.precision(old);
}

}  // namespace hcs
