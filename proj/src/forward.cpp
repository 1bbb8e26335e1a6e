#include "ltesim/forward.hpp"

#include <algorithm>
#include <numeric>

#include "ltesim/error.hpp"

namespace ltesim {

double SystemState::total_energy() const {
  return std::accumulate(site_energy.begin(), site_energy.end(), 0.0) +
         std::accumulate(particle_energy.begin(), particle_energy.end(), 0.0);
}

void BathFlux::merge(const BathFlux& other) {
  if (interactions.empty()) {
    *this = other;
    return;
  }
  for (std::size_t b = 0; b < interactions.size(); ++b) {
    interactions[b] += other.interactions[b];
    injected[b] += other.injected[b];
    discarded[b] += other.discarded[b];
  }
}

Move draw_move(std::span<const std::int32_t> positions, const LatticeDomain& lattice, Rng& rng) {
  const auto dirs = static_cast<std::uint64_t>(lattice.directions());
  const std::uint64_t r = rng.index(positions.size() * dirs);
  Move m{};
  m.particle = static_cast<std::uint32_t>(r / dirs);
  m.direction = static_cast<std::uint8_t>(r % dirs);
  m.target = lattice.neighbor(static_cast<std::size_t>(positions[m.particle]), m.direction);
  m.kind = LatticeDomain::is_bath(m.target) ? MoveKind::Bath : MoveKind::Interior;
  return m;
}

void apply_forward_move(SystemState& state, const ForwardModel& model, const Move& move, Rng& rng,
                        BathFlux* flux) {
  const auto k = move.particle;
  const auto here = static_cast<std::size_t>(state.particle_position[k]);
  const double p = rng.uniform();
  if (move.kind == MoveKind::Interior) {
    const Exchange e = interior_exchange(state.site_energy[here], state.particle_energy[k], p);
    state.site_energy[here] = e.site;
    state.particle_energy[k] = e.particle;
    state.particle_position[k] = move.target;
  } else {
    const std::size_t b = LatticeDomain::bath_index(move.target);
    const double draw = rng.exponential(model.bath_mean[b]);
    const BathExchange e = bath_exchange(state.site_energy[here], state.particle_energy[k], p, draw);
    state.site_energy[here] = e.site;
    state.particle_energy[k] = e.particle;
    if (flux != nullptr) {
      ++flux->interactions[b];
      flux->injected[b] += draw;
      flux->discarded[b] += e.discarded;
    }
  }
  ++state.event_count;
}

Move step_forward(SystemState& state, const ForwardModel& model, Rng& rng, BathFlux* flux) {
  const Move m = draw_move(state.particle_position, *model.lattice, rng);
  apply_forward_move(state, model, m, rng, flux);
  return m;
}

SystemState initial_state(const LatticeDomain& lattice, std::size_t particles, double energy, Rng& rng) {
  SystemState s;
  s.site_energy.assign(lattice.num_sites(), energy);
  s.particle_energy.assign(particles, energy);
  s.particle_position.resize(particles);
  for (auto& x : s.particle_position) x = static_cast<std::int32_t>(rng.index(lattice.num_sites()));
  return s;
}

SiteMomentAccumulator::SiteMomentAccumulator(std::size_t sites, int max_power, std::size_t batches)
    : sites_(sites),
      max_power_(max_power),
      batches_(std::max<std::size_t>(batches, 1)),
      sums_(sites * static_cast<std::size_t>(max_power) * batches_, 0.0),
      batch_counts_(batches_, 0) {}

void SiteMomentAccumulator::add(std::size_t site, double value, std::size_t batch) {
  double power = value;
  for (int k = 1; k <= max_power_; ++k) {
    sums_[slot(site, k, batch)] += power;
    power *= value;
  }
}

std::uint64_t SiteMomentAccumulator::records() const {
  return std::accumulate(batch_counts_.begin(), batch_counts_.end(), std::uint64_t{0});
}

double SiteMomentAccumulator::mean(std::size_t site, int power) const {
  const auto n = records();
  if (n == 0) return 0.0;
  double total = 0.0;
  for (std::size_t b = 0; b < batches_; ++b) total += sums_[slot(site, power, b)];
  return total / static_cast<double>(n);
}

std::vector<double> SiteMomentAccumulator::batch_means(std::size_t site, int power) const {
  std::vector<double> out;
  for (std::size_t b = 0; b < batches_; ++b) {
    if (batch_counts_[b] == 0) continue;
    out.push_back(sums_[slot(site, power, b)] / static_cast<double>(batch_counts_[b]));
  }
  return out;
}

std::vector<double> SteadyStateSample::site_means() const {
  std::vector<double> out(site_moments.sites());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = site_moments.mean(v, 1);
  return out;
}

std::vector<double> SteadyStateSample::site_variances() const {
  std::vector<double> out(site_moments.sites());
  for (std::size_t v = 0; v < out.size(); ++v) {
    const double m = site_moments.mean(v, 1);
    out[v] = site_moments.max_power() >= 2 ? site_moments.mean(v, 2) - m * m : 0.0;
  }
  return out;
}

std::vector<std::vector<double>> SteadyStateSample::rows() const {
  std::vector<std::vector<double>> out(records, std::vector<double>(series.size()));
  for (std::size_t c = 0; c < series.size(); ++c) {
    for (std::size_t r = 0; r < records; ++r) out[r][c] = series[c][r];
  }
  return out;
}

std::uint64_t default_burn_in(std::size_t sites, std::size_t particles) {
  return 200ULL * sites * particles;
}

namespace {

double observe(const SystemState& s, const Observable& o) {
  switch (o.kind) {
    case Observable::Kind::SiteEnergy: return s.site_energy[o.index];
    case Observable::Kind::ParticleEnergy: return s.particle_energy[o.index];
    case Observable::Kind::ParticlePosition: return static_cast<double>(s.particle_position[o.index]);
    case Observable::Kind::SiteCount:
      return static_cast<double>(std::count(s.particle_position.begin(), s.particle_position.end(),
                                            static_cast<std::int32_t>(o.index)));
  }
  return 0.0;
}

}  // namespace

SteadyStateSample simulate_ness(const ForwardRunConfig& config) {
  if (config.lattice == nullptr) throw ConfigError("lattice", "missing");
  if (config.particles == 0) throw ConfigError("M", "must be positive");
  if (config.thinning == 0) throw ConfigError("thinning", "must be positive");
  const LatticeDomain& lat = *config.lattice;
  if (config.bath_mean.size() != lat.num_bath()) throw ConfigError("temperature", "bath size mismatch");
  for (const auto& o : config.observables) {
    const bool site_kind = o.kind == Observable::Kind::SiteEnergy || o.kind == Observable::Kind::SiteCount;
    if (o.index >= (site_kind ? lat.num_sites() : config.particles)) {
      throw ConfigError("observables", "index out of range for " + o.name);
    }
  }
  for (auto v : config.watched_sites) {
    if (v >= lat.num_sites()) throw ConfigError("watched_sites", "site index out of range");
  }

  const ForwardModel model(lat, config.bath_mean);
  Rng rng = Rng::stream(config.seed, config.stream);

  const auto [tmin, tmax] = std::minmax_element(config.bath_mean.begin(), config.bath_mean.end());
  const double e0 = config.initial_energy.value_or(0.5 * (*tmin + *tmax));
  SystemState state = initial_state(lat, config.particles, e0, rng);

  for (std::uint64_t i = 0; i < config.burn_in_events; ++i) step_forward(state, model, rng);

  SteadyStateSample out;
  out.records = static_cast<std::size_t>(config.sample_events / config.thinning);
  const std::size_t batches = std::min<std::size_t>(config.batches, std::max<std::size_t>(out.records, 1));
  out.observables = config.observables;
  out.series.assign(config.observables.size(), {});
  for (auto& s : out.series) s.reserve(out.records);
  out.site_moments = SiteMomentAccumulator(lat.num_sites(), 3, batches);
  out.watched_sites = config.watched_sites;
  out.watched.assign(config.watched_sites.size(), {});
  out.occupation.assign(lat.num_sites(), 0);
  out.flux = BathFlux(lat.num_bath());

  // Energies of the particles found at a watched site.
  std::vector<double> present;
  std::size_t record = 0;
  for (std::uint64_t i = 1; i <= config.sample_events; ++i) {
    step_forward(state, model, rng, &out.flux);
    if (config.occupation_stride != 0 && i % config.occupation_stride == 0) {
      for (auto x : state.particle_position) ++out.occupation[static_cast<std::size_t>(x)];
      ++out.occupation_snapshots;
    }
    if (i % config.thinning != 0) continue;

    const std::size_t batch = record * batches / out.records;
    for (std::size_t v = 0; v < lat.num_sites(); ++v) out.site_moments.add(v, state.site_energy[v], batch);
    out.site_moments.close_record(batch);
    for (std::size_t c = 0; c < config.observables.size(); ++c) {
      out.series[c].push_back(observe(state, config.observables[c]));
    }
    for (std::size_t w = 0; w < config.watched_sites.size(); ++w) {
      const auto site = static_cast<std::int32_t>(config.watched_sites[w]);
      present.clear();
      for (std::size_t j = 0; j < state.num_particles(); ++j) {
        if (state.particle_position[j] == site) present.push_back(state.particle_energy[j]);
      }
      out.watched[w].push_back({state.site_energy[static_cast<std::size_t>(site)], present});
    }
    ++record;
  }
  out.final_state = std::move(state);
  return out;
}

}  // namespace ltesim
