#include "ltesim/duality.hpp"

#include <cmath>

#include "ltesim/error.hpp"
#include "ltesim/forward.hpp"
#include "ltesim/replicas.hpp"
#include "ltesim/statistics.hpp"

namespace ltesim {

namespace {

double power_over_factorial(double x, unsigned n) {
  double r = 1.0;
  for (unsigned k = 1; k <= n; ++k) r *= x / static_cast<double>(k);
  return r;
}

constexpr std::uint32_t kForwardTag = 1;
constexpr std::uint32_t kDualTag = 2;

}  // namespace

double duality_function(const PacketCounts& counts, std::span<const double> site_energy,
                        std::span<const double> particle_energy, std::span<const double> bath_temperature) {
  double f = 1.0;
  for (std::size_t v = 0; v < counts.site.size(); ++v) {
    if (counts.site[v] != 0) f *= power_over_factorial(site_energy[v], counts.site[v]);
  }
  for (std::size_t j = 0; j < counts.carried.size(); ++j) {
    if (counts.carried[j] != 0) f *= power_over_factorial(particle_energy[j], counts.carried[j]);
  }
  for (std::size_t b = 0; b < counts.bath.size(); ++b) {
    if (counts.bath[b] != 0) f *= std::pow(bath_temperature[b], static_cast<double>(counts.bath[b]));
  }
  return f;
}

DualityCheck duality_check(const DualityCheckInput& in) {
  if (in.lattice == nullptr) throw ConfigError("lattice", "missing");
  const LatticeDomain& lat = *in.lattice;
  if (in.particles == 0) throw ConfigError("M", "must be positive");
  if (in.replicas < 2) throw ConfigError("replicas", "need at least 2 replicas per side");
  if (in.site_energy.size() != lat.num_sites()) throw ConfigError("x_star", "one energy per site required");
  if (in.particle_energy.size() != in.particles) throw ConfigError("x_star", "one energy per particle required");
  if (in.bath_temperature.size() != lat.num_bath()) throw ConfigError("temperature", "bath size mismatch");

  DualRunConfig placement;
  placement.lattice = &lat;
  placement.particles = in.particles;
  placement.packets.assign(in.packets.begin(), in.packets.end());
  placement.validate();

  PacketState start;
  start.packets = placement.packets;
  start.particle_position.assign(in.particles, 0);
  const PacketCounts n_star = PacketCounts::of(start, lat);

  const ForwardModel model(lat, std::vector<double>(in.bath_temperature.begin(), in.bath_temperature.end()));

  const auto lhs = run_replicas(in.replicas, in.workers, [&](std::size_t r) {
    Rng rng = Rng::stream(in.seed, r, kForwardTag);
    SystemState s;
    s.site_energy.assign(in.site_energy.begin(), in.site_energy.end());
    s.particle_energy.assign(in.particle_energy.begin(), in.particle_energy.end());
    s.particle_position = InitialParticles{}.draw(lat, in.particles, rng);
    for (std::uint64_t t = 0; t < in.t_events; ++t) step_forward(s, model, rng);
    return duality_function(n_star, s.site_energy, s.particle_energy, in.bath_temperature);
  });

  const auto rhs = run_replicas(in.replicas, in.workers, [&](std::size_t r) {
    Rng rng = Rng::stream(in.seed, r, kDualTag);
    PacketState s;
    s.packets.assign(in.packets.begin(), in.packets.end());
    s.particle_position = InitialParticles{}.draw(lat, in.particles, rng);
    DualChain chain(lat, std::move(s));
    for (std::uint64_t t = 0; t < in.t_events; ++t) chain.step(rng);
    return duality_function(PacketCounts::of(chain.state(), lat), in.site_energy, in.particle_energy,
                            in.bath_temperature);
  });

  const Estimate l = iid_estimate(lhs);
  const Estimate r = iid_estimate(rhs);
  DualityCheck out;
  out.lhs = l.value;
  out.rhs = r.value;
  out.lhs_std_error = l.std_error;
  out.rhs_std_error = r.std_error;
  out.combined_std_error = std::hypot(l.std_error, r.std_error);
  out.replicas = in.replicas;
  return out;
}

}  // namespace ltesim
