#include "commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "hcs/appendix.hpp"
#include "hcs/circuit.hpp"
#include "hcs/dense_oracle.hpp"
#include "hcs/errors.hpp"
#include "hcs/estimation.hpp"
#include "hcs/parallel.hpp"
#include "hcs/scaling.hpp"
#include "hcs/shadow_io.hpp"
#include "hcs/weight_exact.hpp"
#include "hcs/weight_mps.hpp"

namespace hcs::cli {

namespace {

using json = nlohmann::ordered_json;

// Every option lands here; the whole struct is echoed into output headers.
struct RunConfig {
  std::string subcommand;
  std::size_t n_qubits = 12;
  double p = 0.5;
  std::string p_list = "0.1,0.3,0.5,0.7,0.9";
  std::string p_grid = "0.05:0.95:0.05";
  std::size_t layers = 3;
  bool trailing_measurement = false;
  bool steady = false;
  std::size_t shots = 1000;
  std::size_t prior_shots = 0;
  std::uint64_t seed = 1;
  std::string state = "zero";
  std::size_t chi_max = 128;
  double trunc_tol = 1e-12;
  double gauge = MpsParams{}.gauge;
  std::size_t k_min = 8;
  std::size_t k_max = 48;
  std::string ks = "1,2,4,6";
  std::size_t batches = 10;
  std::string engine = "auto";
  std::string table = "consecutive";
  std::vector<std::string> observables;
  std::string input;
  std::string output;
  bool append = false;
  bool refine = true;
  bool single_alignment = false;
  std::string phase = "area";
  std::string block_sizes = "1,2,3";
  std::string blocks = "1,2,3";
  std::size_t total_qubits = 12;
  std::string h_list = "0.2,1,5";
  int threads = 0;

  json to_json() const {
    json j;
    j["subcommand"] = subcommand;
    auto put = [&](const char* key, auto value) { j[key] = value; };
    if (subcommand == "sample") {
      put("n_qubits", n_qubits), put("p", p), put("layers", layers), put("trailing_measurement", trailing_measurement);
      put("shots", shots), put("seed", seed), put("state", state);
    } else if (subcommand == "estimate") {
      put("input", input), put("observables", observables), put("batches", batches), put("engine", engine);
      put("chi_max", chi_max), put("trunc_tol", trunc_tol), put("gauge", gauge);
    } else if (subcommand == "weights") {
      put("n_qubits", n_qubits), put("p", p), put("layers", layers), put("trailing_measurement", trailing_measurement);
      put("steady", steady), put("engine", engine), put("table", table), put("chi_max", chi_max);
      put("trunc_tol", trunc_tol), put("gauge", gauge);
    } else if (subcommand == "scaling") {
      put("n_qubits", n_qubits), put("p_grid", p_grid), put("chi_max", chi_max), put("trunc_tol", trunc_tol), put("gauge", gauge);
      put("k_min", k_min), put("k_max", k_max), put("refine", refine), put("single_alignment", single_alignment);
    } else if (subcommand == "toy") {
      put("phase", phase), put("block_sizes", block_sizes), put("blocks", blocks), put("total_qubits", total_qubits);
      put("shots", shots), put("seed", seed);
    } else if (subcommand == "statmech") {
      put("n_qubits", n_qubits), put("h_over_j", h_list), put("k_max", k_max);
    } else if (subcommand == "demo-ghz") {
      put("n_qubits", n_qubits), put("layers", layers), put("p", p_list), put("shots", shots);
      put("prior_shots", prior_shots), put("seed", seed), put("ks", ks), put("batches", batches);
    } else if (subcommand == "verify") {
      put("shots", shots), put("seed", seed);
    }
    return j;
  }
};

void write_header(std::ostream& out, const RunConfig& cfg) {
  out << "# hcs " << cfg.subcommand << '\n';
  out << "# run_config: " << cfg.to_json().dump() << '\n';
}

// Collects output in memory and writes it to --out (or stdout) at the end, so
// a failed run never leaves a half-written table.
class Output {
 public:
  explicit Output(const RunConfig& cfg) : cfg_(cfg) { write_header(buf_, cfg); }
  std::ostream& stream() { return buf_; }
  void flush() {
    if (cfg_.output.empty() || cfg_.output == "-") {
      std::cout << buf_.str();
      return;
    }
    std::ofstream f(cfg_.output, cfg_.append ? std::ios::app : std::ios::trunc);
    if (!f) throw ConfigError("cannot open output file " + cfg_.output);
    f << buf_.str();
    if (!f) throw ConfigError("failed writing output file " + cfg_.output);
  }

 private:
  const RunConfig& cfg_;
  std::ostringstream buf_;
};

std::vector<double> parse_doubles(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError(std::string("bad number '") + item + "' in " + what);
    }
  }
  if (out.empty()) throw ConfigError(std::string("empty list for ") + what);
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  for (double v : parse_doubles(text, what)) {
    if (v < 0 || v != std::floor(v)) throw ConfigError(std::string("expected non-negative integers in ") + what);
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

void check_rate(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("measurement rate must lie in [0, 1]");
}

MpsParams mps_params(const RunConfig& cfg) {
  if (cfg.chi_max < 1) throw ConfigError("chi must be at least 1");
  if (!(cfg.trunc_tol >= 0.0 && cfg.trunc_tol < 1.0)) throw ConfigError("truncation tolerance must lie in [0, 1)");
  if (!(cfg.gauge > 0.0)) throw ConfigError("gauge must be positive");
  return {cfg.chi_max, cfg.trunc_tol, cfg.gauge};
}

bool use_exact(const RunConfig& cfg, std::size_t n) {
  if (cfg.engine == "exact") {
    if (n > RegionWeightVector::kMaxQubits) throw ConfigError("exact engine is limited to 20 qubits");
    return true;
  }
  if (cfg.engine == "mps") return false;
  if (cfg.engine == "auto") return n <= RegionWeightVector::kMaxQubits;
  throw ConfigError("engine must be auto, exact or mps");
}

// Prior weights for records of a given shape.
WeightProvider weights_for(const RunConfig& cfg, std::size_t n, const CircuitShape& shape, double p) {
  if (use_exact(cfg, n)) return WeightProvider::exact(evolve_exact(n, shape, p));
  WeightMPS m(n, mps_params(cfg));
  m.apply_layers(weight_schedule(shape), p);
  m.normalize();
  return WeightProvider::mps(std::move(m));
}

int cmd_sample(const RunConfig& cfg) {
  check_rate(cfg.p);
  if (cfg.n_qubits < 1) throw ConfigError("need at least one qubit");
  if (cfg.shots < 1) throw ConfigError("need at least one shot");
  const CircuitShape shape{cfg.layers, cfg.trailing_measurement};
  const auto records =
      simulate_shots(InitialStateSpec::named(cfg.state), cfg.n_qubits, shape, cfg.p, cfg.seed, cfg.shots);
  Output out(cfg);
  write_shadows(out.stream(), records);
  out.flush();
  return kOk;
}

int cmd_estimate(const RunConfig& cfg) {
  if (cfg.input.empty()) throw ConfigError("estimate needs --in");
  if (cfg.observables.empty()) throw ConfigError("estimate needs at least one --obs");
  const auto records = read_shadows(std::filesystem::path(cfg.input));
  if (records.empty()) throw ConfigError("no shadow records in " + cfg.input);
  const std::size_t n = records.front().n_qubits;
  const double p = records.front().p;
  const CircuitShape shape = record_shape(records.front());
  for (const auto& r : records) {
    if (r.n_qubits != n || r.p != p || !(record_shape(r) == shape)) {
      throw ConfigError("records must share register size, rate and circuit shape");
    }
  }
  const WeightProvider w = weights_for(cfg, n, shape, p);
  std::vector<EstimateRow> rows;
  for (const auto& text : cfg.observables) {
    const ObservableSpec obs = ObservableSpec::parse(text);
    rows.push_back({obs.label, p, estimate_observable(records, obs, w, cfg.batches)});
  }
  Output out(cfg);
  write_estimate_table(out.stream(), rows);
  out.flush();
  return kOk;
}

int cmd_weights(const RunConfig& cfg) {
  check_rate(cfg.p);
  const std::size_t n = cfg.n_qubits;
  if (n < 2) throw ConfigError("weights need at least two qubits");
  if (cfg.table != "consecutive" && cfg.table != "full") throw ConfigError("table must be consecutive or full");
  const CircuitShape shape{cfg.layers, cfg.trailing_measurement};
  Output out(cfg);
  auto& os = out.stream();
  os.precision(17);
  if (use_exact(cfg, n)) {
    SteadyStateInfo info;
    const RegionWeightVector v = cfg.steady ? evolve_steady(n, cfg.p, 1e-10, 0, &info) : evolve_exact(n, shape, cfg.p);
    if (cfg.steady) os << "# steady depth=" << info.unitary_layers << " converged=" << info.converged << '\n';
    if (cfg.table == "full") {
      write_weight_table(os, v);
    } else {
      os << "start,k,weight\n";
      for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t s = 0; s + k <= n; ++s) os << s << ',' << k << ',' << v.query_consecutive(s, k) << '\n';
      }
    }
  } else {
    if (cfg.table == "full") throw ConfigError("full tables need the exact engine");
    WeightMPS m(n, mps_params(cfg));
    if (cfg.steady) {
      MpsSteadyInfo info;
      m = evolve_steady_mps(n, cfg.p, mps_params(cfg), {{centered_start(n, n / 2), n / 2}}, 1e-8, 0, &info);
      os << "# steady depth=" << info.unitary_layers << " converged=" << info.converged << '\n';
    } else {
      m.apply_layers(weight_schedule(shape), cfg.p);
      m.normalize();
    }
    os << "# max_bond=" << m.ledger().max_bond << " discarded_total=" << m.ledger().discarded_total << '\n';
    os << "start,k,weight\n";
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t s = 0; s + k <= n; ++s) os << s << ',' << k << ',' << m.query_consecutive_weight(s, k) << '\n';
    }
  }
  out.flush();
  return kOk;
}

int cmd_scaling(const RunConfig& cfg, const std::string& curves_path) {
  SweepOptions opt;
  opt.k_min = cfg.k_min;
  opt.k_max = std::min(cfg.k_max, cfg.n_qubits);
  opt.refine = cfg.refine;
  opt.curve.average_alignments = !cfg.single_alignment;
  const SweepReport rep = sweep_and_minimize(parse_p_grid(cfg.p_grid), cfg.n_qubits, mps_params(cfg), opt);
  Output out(cfg);
  write_sweep(out.stream(), rep);
  out.stream() << "# delta_at_min=" << rep.delta_at_min << " +- " << rep.fit_at_min.delta_error() << '\n';
  out.flush();
  if (!curves_path.empty()) {
    RunConfig c2 = cfg;
    c2.output = curves_path;
    c2.append = false;
    Output curves(c2);
    write_curves(curves.stream(), rep.curves);
    curves.flush();
  }
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
  return kOk;
}

int cmd_toy(const RunConfig& cfg) {
  const ToyPhase phase = cfg.phase == "area" ? ToyPhase::Area
                         : cfg.phase == "volume" ? ToyPhase::Volume
                                                 : throw ConfigError("phase must be area or volume");
  std::vector<AppendixRow> rows;
  for (std::size_t n : parse_sizes(cfg.block_sizes, "--block-sizes")) {
    for (std::size_t m : parse_sizes(cfg.blocks, "--blocks")) {
      BlockToySpec spec{n, m, phase, phase == ToyPhase::Volume ? cfg.total_qubits : 0};
      const std::string caveat = spec.validate();
      if (!caveat.empty()) std::cerr << "warning: n=" << n << ": " << caveat << '\n';
      const ToyValue v = phase == ToyPhase::Area ? toy_area(n, m) : toy_volume(n, m, cfg.total_qubits);
      AppendixRow row{phase == ToyPhase::Area ? "toy_area" : "toy_volume",
                      "n=" + std::to_string(n) + (phase == ToyPhase::Volume ? ";N=" + std::to_string(cfg.total_qubits) : ""),
                      m, v.weight, 0.0, 0.0};
      if (cfg.shots > 0) {
        const ToyEstimate e = toy_monte_carlo(spec, toy_block_pauli(spec), cfg.shots, cfg.seed);
        row.monte_carlo = e.weight;
        row.std_error = e.std_error;
      }
      rows.push_back(row);
    }
  }
  Output out(cfg);
  write_appendix_table(out.stream(), rows);
  out.flush();
  return kOk;
}

int cmd_statmech(const RunConfig& cfg) {
  const std::size_t n = cfg.n_qubits;
  const std::size_t kmax = std::min(cfg.k_max, n);
  std::vector<AppendixRow> rows;
  std::vector<std::string> notes;
  for (double h : parse_doubles(cfg.h_list, "--field")) {
    const Eigen::VectorXd psi = tfim_ground_state(n, h);
    std::vector<std::pair<double, double>> pts;
    for (std::size_t k = 1; k <= kmax; ++k) {
      std::vector<std::size_t> support;
      for (std::size_t i = 0; i < k; ++i) support.push_back(centered_start(n, k) + i);
      const double w = statmech_pauli_weight(psi, support);
      pts.emplace_back(static_cast<double>(k), -std::log(w));
      // First-order prediction on the side of the critical point h lies on.
      double analytic = std::nan("");
      if (h > 0.0 && h < 1.0) analytic = std::pow(tfim_beta_small_h(h), -static_cast<double>(k));
      if (h > 1.0) analytic = std::pow(tfim_beta_large_h(h), -static_cast<double>(k));
      std::ostringstream params;
      params << "h_over_j=" << h << ";sites=" << n;
      rows.push_back({"tfim", params.str(), k, analytic, w, 0.0});
    }
    if (n >= 7 && std::min(kmax, n - 2) >= 5) {
      try {
        const FitResult f = fit_beta_delta(pts, 2, std::min(kmax, n - 2));
        std::ostringstream s;
        s << "# fit h_over_j=" << h << " beta=" << f.beta << " delta=" << f.delta << " window=[" << f.k_min << ','
          << f.k_max << "]";
        notes.push_back(s.str());
      } catch (const ConfigError&) {
        // Too few points for a fit; the table itself is still meaningful.
      }
    }
  }
  Output out(cfg);
  write_appendix_table(out.stream(), rows);
  for (const auto& s : notes) out.stream() << s << '\n';
  out.flush();
  return kOk;
}

int cmd_demo_ghz(const RunConfig& cfg) {
  const std::size_t n = cfg.n_qubits;
  const CircuitShape shape{cfg.layers, false};
  const auto ks = parse_sizes(cfg.ks, "--ks");
  for (std::size_t k : ks) {
    if (k < 1 || k > n) throw ConfigError("operator sizes must lie in 1..N");
  }
  std::vector<EstimateRow> rows;
  for (double p : parse_doubles(cfg.p_list, "--p")) {
    check_rate(p);
    const WeightProvider w = weights_for(cfg, n, shape, p);
    const auto records = simulate_shots(InitialStateSpec::named("ghz"), n, shape, p, cfg.seed, cfg.shots);
    for (std::size_t k : ks) {
      PauliString z(n);
      for (std::size_t q = 0; q < k; ++q) z.set(q, Pauli::Z);
      ObservableSpec obs = ObservableSpec::single(z);
      obs.label = "Z^" + std::to_string(k);
      rows.push_back({obs.label, p, estimate_observable(records, obs, w, cfg.batches)});
    }
    if (cfg.prior_shots > 0) {
      // Shadow norm check on prior samples: empirical E P_sigma^2 times w(P).
      const auto prior =
          simulate_shots(InitialStateSpec::named("mixed"), n, shape, p, cfg.seed + 1, cfg.prior_shots);
      for (std::size_t k : ks) {
        PauliString z(n);
        for (std::size_t q = 0; q < k; ++q) z.set(q, Pauli::Z);
        EstimateReport r = empirical_shadow_norm(prior, z, w);
        const double scale = w(z);
        r.value *= scale;
        r.std_error *= scale;
        rows.push_back({"norm_ratio_Z^" + std::to_string(k), p, r});
      }
    }
  }
  Output out(cfg);
  write_estimate_table(out.stream(), rows);
  out.flush();
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  Output out(cfg);
  auto& os = out.stream();
  bool ok = true;
  auto line = [&](const std::string& name, bool pass, const std::string& detail) {
    ok = ok && pass;
    os << (pass ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
  };
  const std::size_t records = std::max<std::size_t>(cfg.shots, 1);
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto rep = oracle::check_identities(n, CircuitShape{2, true}, 0.5, records, cfg.seed + n);
    std::ostringstream d;
    d << "n=" << n << " records=" << rep.records << " snapshot=" << rep.max_snapshot_error
      << " bayes=" << rep.max_bayes_error << " completeness=" << rep.max_completeness_error;
    line("oracle identities", rep.max_snapshot_error < 1e-12 && rep.max_bayes_error < 1e-12 &&
                                  rep.max_completeness_error < 1e-12 && rep.max_probability_excess < 1e-12,
         d.str());
  }
  for (std::size_t n : {2, 3, 4}) {
    const auto ch = oracle::verify_measurement_channel(n, CircuitShape{1, true}, 0.6, 20000, cfg.seed + 10 + n);
    // Count of |z| > 4 exceedances against the Gaussian tail expectation.
    const double expected = ch.offdiag_entries * 6.334e-5;
    const double allowed = expected + 4.0 * std::sqrt(expected) + 1.0;
    std::ostringstream d;
    d << "n=" << n << " offdiag_entries=" << ch.offdiag_entries << " beyond_4sigma=" << ch.offdiag_beyond_4sigma
      << " allowed=" << allowed << " max_offdiag=" << ch.max_offdiag;
    line("channel diagonal", ch.offdiag_beyond_4sigma <= allowed, d.str());
  }
  {
    // One measurement transfer then one gate transfer on the masses.
    RegionWeightVector v(2);
    v.apply_measurement(0.3);
    v.apply_unitary(0);
    v.normalize();
    const double expect = (2 * 0.3 + 0.09) / 15.0;
    std::ostringstream d;
    d << "w(ZZ)=" << v.query(3) << " expected=" << expect;
    line("two-qubit weight", std::abs(v.query(3) - expect) < 1e-12, d.str());
  }
  out.flush();
  return ok ? kOk : kVerifyFailed;
}

int default_threads() {
  if (const char* env = std::getenv("HCS_THREADS")) {
    try {
      const int t = std::stoi(env);
      if (t > 0) return t;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid HCS_THREADS='" << env << "'\n";
  }
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  RunConfig cfg;
  std::string curves_path;
  CLI::App app{"Hybrid-circuit classical shadow toolkit"};
  app.require_subcommand(1);
  app.add_option("--threads", cfg.threads, "Worker threads (default: HCS_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  auto add_out = [&](CLI::App* s) { s->add_option("-o,--out", cfg.output, "Output file (default stdout)"); };
  auto add_mps = [&](CLI::App* s) {
    s->add_option("--chi", cfg.chi_max, "MPS bond dimension cap")->capture_default_str();
    s->add_option("--trunc-tol", cfg.trunc_tol, "MPS discarded-weight tolerance")->capture_default_str();
    s->add_option("--gauge", cfg.gauge, "MPS region-size gauge (tensors hold m[A] * gauge^|A|)")
        ->capture_default_str();
  };
  auto add_shape = [&](CLI::App* s) {
    s->add_option("--n", cfg.n_qubits, "Number of qubits")->capture_default_str();
    s->add_option("--layers", cfg.layers, "Unitary layers")->capture_default_str();
    s->add_flag("--trailing-measurement", cfg.trailing_measurement, "Close with a measurement layer");
  };

  auto* sample = app.add_subcommand("sample", "Simulate shots and write shadow records");
  add_shape(sample);
  sample->add_option("--p", cfg.p, "Measurement rate")->capture_default_str();
  sample->add_option("--shots", cfg.shots, "Number of shots")->capture_default_str();
  sample->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  sample->add_option("--state", cfg.state, "Initial state: ghz, zero, plus, mixed")
      ->check(CLI::IsMember({"ghz", "zero", "plus", "mixed"}))
      ->capture_default_str();
  sample->add_flag("--append", cfg.append, "Append to the output file");
  add_out(sample);

  auto* estimate = app.add_subcommand("estimate", "Estimate Pauli observables from shadow records");
  estimate->add_option("--in", cfg.input, "Shadow record file")->required();
  estimate->add_option("--obs", cfg.observables, "Observable, e.g. ZZII or 0.5*ZZII+1*XXII")->required();
  estimate->add_option("--batches", cfg.batches, "Median-of-means batches")->capture_default_str();
  estimate->add_option("--engine", cfg.engine, "Weight engine: auto, exact, mps")->capture_default_str();
  add_mps(estimate);
  add_out(estimate);

  auto* weights = app.add_subcommand("weights", "Prior Pauli weights from the transfer-matrix dynamics");
  add_shape(weights);
  weights->add_option("--p", cfg.p, "Measurement rate")->capture_default_str();
  weights->add_flag("--steady", cfg.steady, "Deep-circuit steady state instead of a finite shape");
  weights->add_option("--engine", cfg.engine, "auto, exact, mps")->capture_default_str();
  weights->add_option("--table", cfg.table, "consecutive or full")->capture_default_str();
  add_mps(weights);
  add_out(weights);

  auto* scaling = app.add_subcommand("scaling", "Shadow-norm scaling sweep and beta fit");
  scaling->add_option("--n", cfg.n_qubits, "Number of qubits")->capture_default_str();
  scaling->add_option("--p-grid", cfg.p_grid, "start:stop:step or comma list")->capture_default_str();
  scaling->add_option("--kmin", cfg.k_min, "Fit window start")->capture_default_str();
  scaling->add_option("--kmax", cfg.k_max, "Fit window end")->capture_default_str();
  scaling->add_flag("!--no-refine", cfg.refine, "Skip refinement around the minimum");
  scaling->add_flag("--single-alignment", cfg.single_alignment, "Use one centered placement per k");
  scaling->add_option("--curves", curves_path, "Also write the norm curves here");
  add_mps(scaling);
  add_out(scaling);

  auto* toy = app.add_subcommand("toy", "Block toy models: closed forms and Monte Carlo");
  toy->add_option("--phase", cfg.phase, "area or volume")->capture_default_str();
  toy->add_option("--block-sizes", cfg.block_sizes, "Comma list of n")->capture_default_str();
  toy->add_option("--blocks", cfg.blocks, "Comma list of m")->capture_default_str();
  toy->add_option("--total", cfg.total_qubits, "Physical qubits N (volume)")->capture_default_str();
  toy->add_option("--shots", cfg.shots, "Monte-Carlo shots (0 to skip)")->capture_default_str();
  toy->add_option("--seed", cfg.seed, "Seed")->capture_default_str();
  add_out(toy);

  auto* statmech = app.add_subcommand("statmech", "Ising ground-state Pauli weights");
  statmech->add_option("--sites", cfg.n_qubits, "Chain length")->capture_default_str();
  statmech->add_option("--field", cfg.h_list, "Comma list of h/J")->capture_default_str();
  statmech->add_option("--kmax", cfg.k_max, "Largest support")->capture_default_str();
  add_out(statmech);

  auto* demo = app.add_subcommand("demo-ghz", "GHZ estimation demo");
  demo->add_option("--n", cfg.n_qubits, "Number of qubits")->capture_default_str();
  demo->add_option("--layers", cfg.layers, "Unitary layers")->capture_default_str();
  demo->add_option("--p", cfg.p_list, "Comma list of rates")->capture_default_str();
  demo->add_option("--shots", cfg.shots, "Shots per rate")->capture_default_str();
  demo->add_option("--prior-shots", cfg.prior_shots, "Prior samples for shadow-norm ratios")->capture_default_str();
  demo->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  demo->add_option("--ks", cfg.ks, "Comma list of operator sizes")->capture_default_str();
  demo->add_option("--batches", cfg.batches, "Median-of-means batches")->capture_default_str();
  demo->add_option("--engine", cfg.engine, "Weight engine")->capture_default_str();
  add_mps(demo);
  add_out(demo);

  auto* verify = app.add_subcommand("verify", "Dense-oracle cross-checks at N <= 4");
  verify->add_option("--records", cfg.shots, "Random records per size")->capture_default_str();
  verify->add_option("--seed", cfg.seed, "Seed")->capture_default_str();
  add_out(verify);

  cfg.shots = 1000;
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (cfg.subcommand == "demo-ghz" && demo->count("--shots") == 0) cfg.shots = 50000;
  if (cfg.subcommand == "toy" && toy->count("--shots") == 0) cfg.shots = 100000;
  if (cfg.subcommand == "statmech" && statmech->count("--kmax") == 0) cfg.k_max = 4;

  set_threads(cfg.threads > 0 ? cfg.threads : default_threads());

  try {
    if (cfg.subcommand == "sample") return cmd_sample(cfg);
    if (cfg.subcommand == "estimate") return cmd_estimate(cfg);
    if (cfg.subcommand == "weights") return cmd_weights(cfg);
    if (cfg.subcommand == "scaling") return cmd_scaling(cfg, curves_path);
    if (cfg.subcommand == "toy") return cmd_toy(cfg);
    if (cfg.subcommand == "statmech") return cmd_statmech(cfg);
    if (cfg.subcommand == "demo-ghz") return cmd_demo_ghz(cfg);
    if (cfg.subcommand == "verify") return cmd_verify(cfg);
  } catch (const IncompletenessError& e) {
    std::cerr << "incomplete: " << e.what() << '\n';
    return kIncomplete;
  } catch (const ContradictionError& e) {
    std::cerr << "contradiction: " << e.what() << '\n';
    return kContradiction;
  } catch (const ParseError& e) {
    std::cerr << "bad input: " << e.what() << '\n';
    return kBadInput;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace hcs::cli
