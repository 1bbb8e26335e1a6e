#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ltesim/lattice.hpp"
#include "ltesim/rng.hpp"

namespace ltesim {

/// Site energies ξ, particle energies η and particle positions X.
struct SystemState {
  std::vector<double> site_energy;
  std::vector<double> particle_energy;
  std::vector<std::int32_t> particle_position;  ///< site indices
  std::uint64_t event_count = 0;

  std::size_t num_particles() const { return particle_energy.size(); }
  double total_energy() const;
};

struct Exchange {
  double site;
  double particle;
};

/// Splits pool into (p·pool, pool - p·pool) so that the parts add back to
/// pool exactly: the larger share is a product and the smaller one an exact
/// difference.
inline Exchange split_pool(double pool, double p) {
  if (p >= 0.5) {
    const double kept = p * pool;
    return {kept, pool - kept};
  }
  const double moved = (1.0 - p) * pool;
  return {pool - moved, moved};
}

/// Pools site and particle energy and returns (p·pool, (1-p)·pool).
inline Exchange interior_exchange(double site_e, double particle_e, double p) {
  return split_pool(site_e + particle_e, p);
}

struct BathExchange {
  double site;
  double particle;
  double discarded;  ///< energy handed to the bath
};

/// The site keeps p·(ξ + η); the particle leaves with a fresh bath draw.
inline BathExchange bath_exchange(double site_e, double particle_e, double p, double bath_draw) {
  const auto parts = split_pool(site_e + particle_e, p);
  return {parts.site, bath_draw, parts.particle};
}

/// Energy exchanged with each bath point.
struct BathFlux {
  std::vector<std::uint64_t> interactions;
  std::vector<double> injected;
  std::vector<double> discarded;

  explicit BathFlux(std::size_t bath_points = 0)
      : interactions(bath_points, 0), injected(bath_points, 0.0), discarded(bath_points, 0.0) {}
  void merge(const BathFlux& other);
};

/// Lattice plus the bath mean energy T(w/L) for every bath point.
struct ForwardModel {
  const LatticeDomain* lattice = nullptr;
  std::vector<double> bath_mean;

  ForwardModel(const LatticeDomain& lat, std::vector<double> bath_means)
      : lattice(&lat), bath_mean(std::move(bath_means)) {}
  ForwardModel(const LatticeDomain& lat, const BoundaryTemperature& temp)
      : ForwardModel(lat, bath_temperatures(temp, lat)) {}
};

enum class MoveKind : std::uint8_t { Interior, Bath };

/// One move of the particle configuration: which particle, which direction,
/// and where it led.
struct Move {
  std::uint32_t particle;
  std::uint8_t direction;
  MoveKind kind;
  std::int32_t target;  ///< neighbour code: site index, or ~bath index
};

/// Draws a uniform particle and a uniform direction.
Move draw_move(std::span<const std::int32_t> positions, const LatticeDomain& lattice, Rng& rng);

/// Applies the energy update of a move with fresh p (and bath draw).
void apply_forward_move(SystemState& state, const ForwardModel& model, const Move& move, Rng& rng,
                        BathFlux* flux = nullptr);

/// One event of the embedded jump chain.
Move step_forward(SystemState& state, const ForwardModel& model, Rng& rng, BathFlux* flux = nullptr);

/// All energies equal to `energy`, particle positions i.i.d. uniform over sites.
SystemState initial_state(const LatticeDomain& lattice, std::size_t particles, double energy, Rng& rng);

struct Observable {
  enum class Kind { SiteEnergy, ParticleEnergy, SiteCount, ParticlePosition };
  Kind kind;
  std::size_t index;  ///< site index or particle index
  std::string name;
};

struct ForwardRunConfig {
  const LatticeDomain* lattice = nullptr;
  std::vector<double> bath_mean;
  std::size_t particles = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;  ///< replica index
  std::uint64_t burn_in_events = 0;
  std::uint64_t sample_events = 1;
  std::uint64_t thinning = 1;
  std::vector<Observable> observables;
  std::size_t batches = 30;
  /// Sites whose (ξ, energies of the particles present) are logged per record.
  std::vector<std::size_t> watched_sites;
  /// Position histogram stride in events; 0 disables it.
  std::uint64_t occupation_stride = 0;
  std::optional<double> initial_energy;  ///< default: (min T + max T) / 2
};

/// Running per-site power sums split into contiguous batches.
class SiteMomentAccumulator {
 public:
  SiteMomentAccumulator() = default;
  SiteMomentAccumulator(std::size_t sites, int max_power, std::size_t batches);

  void add(std::size_t site, double value, std::size_t batch);
  void close_record(std::size_t batch) { ++batch_counts_[batch]; }

  std::size_t sites() const { return sites_; }
  int max_power() const { return max_power_; }
  std::size_t batches() const { return batches_; }
  std::uint64_t records() const;

  double mean(std::size_t site, int power) const;
  std::vector<double> batch_means(std::size_t site, int power) const;

 private:
  std::size_t slot(std::size_t site, int power, std::size_t batch) const {
    return (site * static_cast<std::size_t>(max_power_) + static_cast<std::size_t>(power - 1)) * batches_ + batch;
  }

  std::size_t sites_ = 0;
  int max_power_ = 3;
  std::size_t batches_ = 1;
  std::vector<double> sums_;
  std::vector<std::uint64_t> batch_counts_;
};

struct SiteRecord {
  double site_energy;
  std::vector<double> particle_energies;
};

struct SteadyStateSample {
  std::vector<Observable> observables;
  std::vector<std::vector<double>> series;  ///< [observable][record]
  std::size_t records = 0;
  SiteMomentAccumulator site_moments;
  std::vector<std::size_t> watched_sites;
  std::vector<std::vector<SiteRecord>> watched;  ///< [watched site][record]
  std::vector<std::uint64_t> occupation;
  std::uint64_t occupation_snapshots = 0;
  BathFlux flux;
  SystemState final_state;

  /// Time-averaged site energy over the recorded snapshots.
  std::vector<double> site_means() const;
  std::vector<double> site_variances() const;
  /// Rows of the recorded observables, one per record.
  std::vector<std::vector<double>> rows() const;
};

/// Burn-in, then sample_events events recording every `thinning` events.
SteadyStateSample simulate_ness(const ForwardRunConfig& config);

/// 200·|D_L|·M events.
std::uint64_t default_burn_in(std::size_t sites, std::size_t particles);

}  // namespace ltesim
