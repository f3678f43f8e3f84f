#include <bit>
#include <cmath>
#include <ostream>

#include "hcs/appendix.hpp"
#include "hcs/errors.hpp"
#include "hcs/tableau.hpp"

namespace hcs {

std::string BlockToySpec::validate() const {
  if (block_size < 1 || blocks_covered < 1) throw ConfigError("toy model needs n >= 1 and m >= 1");
  if (phase == ToyPhase::Area) {
    if (block_size * blocks_covered > 64) throw ConfigError("toy register limited to 64 qubits");
    return {};
  }
  if (block_size < 2) throw ConfigError("volume toy needs n >= 2 (n = 1 leaves no syndrome qubits)");
  if (total_qubits == 0 || total_qubits % block_size != 0) {
    throw ConfigError("volume toy needs N divisible by the block size");
  }
  if (total_qubits > 64) throw ConfigError("toy register limited to 64 qubits");
  if (blocks_covered > total_qubits / block_size) throw ConfigError("support covers more blocks than exist");
  if (total_qubits / block_size < 4) return "fewer than 4 logical qubits: far from the N >> n regime";
  return {};
}

ToyValue toy_area(std::size_t n, std::size_t m) {
  if (n < 1 || m < 1) throw ConfigError("toy model needs n >= 1 and m >= 1");
  const double base = std::ldexp(1.0, static_cast<int>(n)) + 1.0;
  return {std::pow(base, -static_cast<double>(m)), std::exp(std::log(base) / n)};
}

double toy_volume_beta(double f) {
  if (!(f > 0.0 && f < 1.0)) throw ConfigError("volume-law coefficient must lie in (0, 1)");
  const double n = 1.0 / f;
  // log(4^n - 1) - log(2^(n-1) - 1), written to survive large n.
  const double num = n * std::log(4.0) + std::log1p(-std::pow(4.0, -n));
  const double den = (n - 1.0) * std::log(2.0) + std::log1p(-std::pow(2.0, 1.0 - n));
  return std::exp(f * (num - den));
}

ToyValue toy_volume(std::size_t n, std::size_t m, std::size_t total_qubits) {
  BlockToySpec spec{n, m, ToyPhase::Volume, total_qubits};
  spec.validate();
  const double four_n = std::ldexp(1.0, static_cast<int>(2 * n)) - 1.0;
  const double q = (std::ldexp(1.0, static_cast<int>(n - 1)) - 1.0) / four_n;
  const double r = (std::ldexp(1.0, static_cast<int>(n + 1)) - 1.0) / four_n;
  const double eps = 1.0 / (std::ldexp(1.0, static_cast<int>(total_qubits / n)) + 1.0);
  const double md = static_cast<double>(m);
  return {std::pow(q, md) + eps * (std::pow(r, md) - std::pow(q, md)), toy_volume_beta(1.0 / n)};
}

namespace {

int omega(std::uint64_t ax, std::uint64_t az, std::uint64_t bx, std::uint64_t bz) {
  return std::popcount((ax & bz) ^ (az & bx)) & 1;
}

std::uint64_t random_bits(Rng& rng, std::size_t n) { return n >= 64 ? rng() : rng() & ((std::uint64_t{1} << n) - 1); }

}  // namespace

std::pair<std::uint64_t, std::uint64_t> Symplectic::apply(std::uint64_t x, std::uint64_t z) const {
  std::uint64_t ox = 0, oz = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if ((x >> i) & 1u) {
      ox ^= x_img_x[i];
      oz ^= x_img_z[i];
    }
    if ((z >> i) & 1u) {
      ox ^= z_img_x[i];
      oz ^= z_img_z[i];
    }
  }
  return {ox, oz};
}

Symplectic random_symplectic(std::size_t n, Rng& rng) {
  if (n < 1 || n > 64) throw ConfigError("random symplectic supports 1..64 qubits");
  Symplectic s;
  s.n = n;
  s.x_img_x.resize(n);
  s.x_img_z.resize(n);
  s.z_img_x.resize(n);
  s.z_img_z.resize(n);
  // Projection onto the symplectic complement of the pairs chosen so far is
  // linear with equal-size fibers, so it maps uniform vectors to uniform
  // vectors of the complement.
  auto project = [&](std::size_t done, std::uint64_t& ux, std::uint64_t& uz) {
    for (std::size_t j = 0; j < done; ++j) {
      const int a = omega(ux, uz, s.z_img_x[j], s.z_img_z[j]);
      const int b = omega(ux, uz, s.x_img_x[j], s.x_img_z[j]);
      if (a) {
        ux ^= s.x_img_x[j];
        uz ^= s.x_img_z[j];
      }
      if (b) {
        ux ^= s.z_img_x[j];
        uz ^= s.z_img_z[j];
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t vx = 0, vz = 0;
    while (vx == 0 && vz == 0) {
      vx = random_bits(rng, n);
      vz = random_bits(rng, n);
      project(i, vx, vz);
    }
    std::uint64_t wx = 0, wz = 0;
    do {
      wx = random_bits(rng, n);
      wz = random_bits(rng, n);
      project(i, wx, wz);
    } while (omega(vx, vz, wx, wz) == 0);
    s.x_img_x[i] = vx;
    s.x_img_z[i] = vz;
    s.z_img_x[i] = wx;
    s.z_img_z[i] = wz;
  }
  return s;
}

StabilizerTableau random_stabilizer_state(std::size_t n, Rng& rng) {
  const Symplectic s = random_symplectic(n, rng);
  std::vector<SignedPauli> gens;
  gens.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    PauliString g(n);
    for (std::size_t q = 0; q < n; ++q) {
      g.set(q, static_cast<Pauli>(((s.z_img_x[i] >> q) & 1u) | (((s.z_img_z[i] >> q) & 1u) << 1)));
    }
    gens.emplace_back(std::move(g), coin(rng) ? 2 : 0);
  }
  return StabilizerTableau::from_generators(n, std::move(gens));
}

PauliString toy_block_pauli(const BlockToySpec& spec) {
  spec.validate();
  const std::size_t n_reg =
      spec.phase == ToyPhase::Area ? spec.block_size * spec.blocks_covered : spec.total_qubits;
  PauliString p(n_reg);
  for (std::size_t q = 0; q < spec.block_size * spec.blocks_covered; ++q) p.set(q, Pauli::Z);
  return p;
}

namespace {

SignedPauli masks_to_pauli(std::size_t n_reg, std::uint64_t x, std::uint64_t z, Rng& rng) {
  PauliString p(n_reg);
  for (std::size_t q = 0; q < n_reg; ++q) {
    p.set(q, static_cast<Pauli>(((x >> q) & 1u) | (((z >> q) & 1u) << 1)));
  }
  return SignedPauli(std::move(p), coin(rng) ? 2 : 0);
}

// Snapshot of one toy-circuit shot; generators in the Heisenberg picture.
StabilizerTableau toy_snapshot(const BlockToySpec& spec, std::size_t n_reg, Rng& rng) {
  const std::size_t n = spec.block_size;
  const std::size_t blocks = n_reg / n;
  std::vector<Symplectic> local;
  local.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) local.push_back(random_symplectic(n, rng));

  std::vector<SignedPauli> gens;
  gens.reserve(n_reg);
  // Z-basis measurements inside each block: every qubit (area) or the
  // syndrome qubits 1..n-1 (volume).
  const std::size_t first = spec.phase == ToyPhase::Area ? 0 : 1;
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t j = first; j < n; ++j) {
      const auto [x, z] = local[b].apply(0, std::uint64_t{1} << j);
      gens.push_back(masks_to_pauli(n_reg, x << (b * n), z << (b * n), rng));
    }
  }
  if (spec.phase == ToyPhase::Volume) {
    // Logical measurements after the global scrambler, pulled back through
    // each block's decoder (logical qubit = local qubit 0).
    const Symplectic global = random_symplectic(blocks, rng);
    for (std::size_t l = 0; l < blocks; ++l) {
      const auto [gx, gz] = global.apply(0, std::uint64_t{1} << l);
      std::uint64_t px = 0, pz = 0;
      for (std::size_t b = 0; b < blocks; ++b) {
        const auto [x, z] = local[b].apply((gx >> b) & 1u, (gz >> b) & 1u);
        px |= x << (b * n);
        pz |= z << (b * n);
      }
      gens.push_back(masks_to_pauli(n_reg, px, pz, rng));
    }
  }
  return StabilizerTableau::from_generators(n_reg, std::move(gens));
}

}  // namespace

ToyEstimate toy_monte_carlo(const BlockToySpec& spec, const PauliString& p, std::size_t shots, std::uint64_t seed,
                            Exec exec) {
  spec.validate();
  if (shots == 0) throw ConfigError("toy Monte Carlo needs at least one shot");
  const std::size_t n = spec.block_size;
  const std::size_t n_reg = spec.phase == ToyPhase::Area ? n * spec.blocks_covered : spec.total_qubits;
  if (p.n_qubits() != n_reg) throw ConfigError("Pauli size does not match the toy register");
  const std::uint64_t covered = (n * spec.blocks_covered >= 64) ? ~std::uint64_t{0}
                                                                 : (std::uint64_t{1} << (n * spec.blocks_covered)) - 1;
  if (p.support_mask() != covered) {
    throw ConfigError("toy Pauli must be supported on exactly the first m whole blocks");
  }
  std::vector<unsigned char> hit(shots);
  for_each_index(shots, exec, [&](std::size_t s) {
    Rng rng = make_shot_rng(seed, s);
    hit[s] = toy_snapshot(spec, n_reg, rng).trace_pauli(p) != 0;
  });
  std::size_t count = 0;
  for (unsigned char h : hit) count += h;
  ToyEstimate e;
  e.shots = shots;
  e.weight = static_cast<double>(count) / shots;
  e.std_error = std::sqrt(e.weight * (1.0 - e.weight) / shots);
  return e;
}

void write_appendix_table(std::ostream& out, const std::vector<AppendixRow>& rows) {
  out << "model,params,k_or_m,analytic,monte_carlo,std_error\n";
  const auto old = out.precision(12);
  for (const auto& r : rows) {
    out << r.model << ',' << r.params << ',' << r.k_or_m << ',' << r.analytic << ',' << r.monte_carlo << ','
        << r.std_error << '\n';
  }
  out.precision(old);
}

}  // namespace hcs
