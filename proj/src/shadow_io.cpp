#include "hcs/shadow_io.hpp"

#include <fstream>

#include <json.hpp>

#include "hcs/errors.hpp"

namespace hcs {

namespace {

using nlohmann::json;

std::string basis_name(Pauli b) { return std::string(1, pauli_char(b)); }

Pauli parse_basis(const std::string& s) {
  if (s == "X") return Pauli::X;
  if (s == "Y") return Pauli::Y;
  if (s == "Z") return Pauli::Z;
  throw ConfigError("measurement basis must be X, Y or Z, got '" + s + "'");
}

}  // namespace

std::string record_to_line(const ShadowRecord& record) {
  json layers = json::array();
  for (const auto& layer : record.layers) {
    if (layer.kind == LayerKind::Measurement) {
      json events = json::array();
      for (const auto& e : layer.events) events.push_back(json::array({e.qubit, basis_name(e.basis), e.outcome}));
      layers.push_back({{"kind", "M"}, {"events", std::move(events)}});
    } else {
      json gates = json::array();
      for (const auto& g : layer.gates) {
        json images = json::array();
        for (const auto& im : g.images()) images.push_back(im.str());
        gates.push_back(std::move(images));
      }
      layers.push_back({{"kind", "U"}, {"parity", layer.parity}, {"gates", std::move(gates)}});
    }
  }
  json j = {{"version", ShadowRecord::kFormatVersion},
            {"n_qubits", record.n_qubits},
            {"p", record.p},
            {"master_seed", record.master_seed},
            {"shot_index", record.shot_index},
            {"initial_state", record.initial_state_label},
            {"layers", std::move(layers)}};
  return j.dump();
}

ShadowRecord record_from_line(const std::string& line, std::size_t line_no) {
  try {
    const json j = json::parse(line);
    const int version = j.at("version").get<int>();
    if (version != ShadowRecord::kFormatVersion) {
      throw ParseError(line_no, "unsupported record version " + std::to_string(version));
    }
    ShadowRecord r;
    r.n_qubits = j.at("n_qubits").get<std::size_t>();
    r.p = j.at("p").get<double>();
    r.master_seed = j.at("master_seed").get<std::uint64_t>();
    r.shot_index = j.at("shot_index").get<std::uint64_t>();
    r.initial_state_label = j.at("initial_state").get<std::string>();
    if (r.n_qubits == 0) throw ParseError(line_no, "n_qubits must be positive");
    for (const auto& jl : j.at("layers")) {
      CircuitLayer layer;
      const std::string kind = jl.at("kind").get<std::string>();
      if (kind == "M") {
        layer.kind = LayerKind::Measurement;
        for (const auto& je : jl.at("events")) {
          if (!je.is_array() || je.size() != 3) throw ParseError(line_no, "measurement event needs 3 fields");
          MeasurementEvent e;
          e.qubit = je[0].get<std::size_t>();
          e.basis = parse_basis(je[1].get<std::string>());
          e.outcome = je[2].get<int>();
          if (e.qubit >= r.n_qubits) throw ParseError(line_no, "measured qubit out of range");
          if (e.outcome < -1 || e.outcome > 1) throw ParseError(line_no, "outcome must be 0, 1 or -1");
          layer.events.push_back(e);
        }
      } else if (kind == "U") {
        layer.kind = LayerKind::Unitary;
        layer.parity = jl.at("parity").get<int>();
        if (layer.parity != 0 && layer.parity != 1) throw ParseError(line_no, "parity must be 0 or 1");
        for (const auto& jg : jl.at("gates")) {
          if (!jg.is_array() || jg.size() != 4) throw ParseError(line_no, "gate needs 4 images");
          std::array<SignedPauli, 4> images;
          for (int i = 0; i < 4; ++i) images[i] = SignedPauli::parse(jg[i].get<std::string>());
          layer.gates.push_back(CliffordGate2::from_images(images));
        }
        if (layer.gates.size() != CircuitLayer::bond_count(r.n_qubits, layer.parity)) {
          throw ParseError(line_no, "gate count does not match the bond layout");
        }
      } else {
        throw ParseError(line_no, "unknown layer kind '" + kind + "'");
      }
      r.layers.push_back(std::move(layer));
    }
    return r;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(line_no, e.what());
  }
}

void write_shadows(std::ostream& out, const std::vector<ShadowRecord>& records) {
  for (const auto& r : records) out << record_to_line(r) << '\n';
}

void write_shadows(const std::filesystem::path& path, const std::vector<ShadowRecord>& records, bool append) {
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  write_shadows(out, records);
  if (!out) throw ConfigError("write failed for " + path.string());
}

std::vector<ShadowRecord> read_shadows(std::istream& in) {
  std::vector<ShadowRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    out.push_back(record_from_line(line, line_no));
  }
  return out;
}

std::vector<ShadowRecord> read_shadows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  return read_shadows(in);
}

}  // namespace hcs
