#include "ltesim/dual.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ltesim/error.hpp"
#include "ltesim/replicas.hpp"

namespace ltesim {

std::size_t PacketState::absorbed() const {
  return static_cast<std::size_t>(std::count_if(packets.begin(), packets.end(), [](const PacketLocation& p) {
    return p.kind == PacketLocation::Kind::Bath;
  }));
}

PacketCounts PacketCounts::of(const PacketState& state, const LatticeDomain& lattice) {
  PacketCounts c;
  c.site.assign(lattice.num_sites(), 0);
  c.bath.assign(lattice.num_bath(), 0);
  c.carried.assign(state.particle_position.size(), 0);
  for (const auto& p : state.packets) {
    const auto i = static_cast<std::size_t>(p.index);
    switch (p.kind) {
      case PacketLocation::Kind::Site: ++c.site[i]; break;
      case PacketLocation::Kind::Bath: ++c.bath[i]; break;
      case PacketLocation::Kind::Carried: ++c.carried[i]; break;
    }
  }
  return c;
}

unsigned PacketCounts::total() const {
  return std::accumulate(site.begin(), site.end(), 0u) + std::accumulate(bath.begin(), bath.end(), 0u) +
         std::accumulate(carried.begin(), carried.end(), 0u);
}

std::size_t split_packets_in_place(std::span<std::size_t> pooled, Rng& rng) {
  const std::size_t n = pooled.size();
  const auto stay = static_cast<std::size_t>(rng.index(n + 1));
  for (std::size_t i = 0; i < stay; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.index(n - i));
    std::swap(pooled[i], pooled[j]);
  }
  return stay;
}

Split split_packets(std::span<const std::size_t> pooled, Rng& rng) {
  std::vector<std::size_t> work(pooled.begin(), pooled.end());
  const std::size_t stay = split_packets_in_place(work, rng);
  Split s;
  s.stay.assign(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(stay));
  s.carry.assign(work.begin() + static_cast<std::ptrdiff_t>(stay), work.end());
  return s;
}

DualChain::DualChain(const LatticeDomain& lattice, PacketState state)
    : lattice_(&lattice), state_(std::move(state)) {
  at_site_.assign(lattice.num_sites(), 0);
  carried_.assign(state_.particle_position.size(), 0);
  for (std::size_t j = 0; j < state_.particle_position.size(); ++j) {
    const auto y = state_.particle_position[j];
    if (y < 0 || static_cast<std::size_t>(y) >= lattice.num_sites()) {
      throw ConfigError("particles", "particle position outside the site set");
    }
  }
  for (const auto& p : state_.packets) {
    const auto i = static_cast<std::size_t>(p.index);
    switch (p.kind) {
      case PacketLocation::Kind::Site:
        if (p.index < 0 || i >= lattice.num_sites()) throw ConfigError("packets", "site index out of range");
        ++at_site_[i];
        break;
      case PacketLocation::Kind::Bath:
        if (p.index < 0 || i >= lattice.num_bath()) throw ConfigError("packets", "bath index out of range");
        ++absorbed_;
        break;
      case PacketLocation::Kind::Carried:
        if (p.index < 0 || i >= carried_.size()) throw ConfigError("packets", "particle index out of range");
        ++carried_[i];
        break;
    }
  }
  pool_.reserve(state_.packets.size());
}

Move DualChain::step(Rng& rng) {
  const Move m = draw_move(state_.particle_position, *lattice_, rng);
  apply(m, rng);
  return m;
}

void DualChain::apply(const Move& move, Rng& rng) {
  const std::size_t j = move.particle;
  ++state_.event_count;
  if (move.kind == MoveKind::Interior) {
    const auto w = static_cast<std::size_t>(move.target);
    state_.particle_position[j] = move.target;
    if (carried_[j] + at_site_[w] != 0) pool_and_split(j, w, rng);
    return;
  }
  // Bath: drop everything carried at the bath point, stay put, then take a
  // random fraction of the packets left at the current site.
  if (carried_[j] != 0) {
    const auto b = static_cast<std::int32_t>(LatticeDomain::bath_index(move.target));
    for (auto& p : state_.packets) {
      if (p.kind == PacketLocation::Kind::Carried && static_cast<std::size_t>(p.index) == j) {
        p = {PacketLocation::Kind::Bath, b};
        ++absorbed_;
      }
    }
    carried_[j] = 0;
  }
  const auto here = static_cast<std::size_t>(state_.particle_position[j]);
  if (at_site_[here] != 0) pool_and_split(j, here, rng);
}

void DualChain::pool_and_split(std::size_t particle, std::size_t site, Rng& rng) {
  pool_.clear();
  for (std::size_t i = 0; i < state_.packets.size(); ++i) {
    const auto& p = state_.packets[i];
    const auto idx = static_cast<std::size_t>(p.index);
    if ((p.kind == PacketLocation::Kind::Carried && idx == particle) ||
        (p.kind == PacketLocation::Kind::Site && idx == site)) {
      pool_.push_back(i);
    }
  }
  const std::size_t stay = split_packets_in_place(pool_, rng);
  for (std::size_t k = 0; k < pool_.size(); ++k) {
    state_.packets[pool_[k]] = k < stay ? PacketLocation::at_site(site) : PacketLocation::carried_by(particle);
  }
  at_site_[site] = static_cast<unsigned>(stay);
  carried_[particle] = static_cast<unsigned>(pool_.size() - stay);
}

std::int32_t DualChain::projected(std::size_t packet) const {
  const auto& p = state_.packets[packet];
  switch (p.kind) {
    case PacketLocation::Kind::Site: return p.index;
    case PacketLocation::Kind::Bath: return ~p.index;
    case PacketLocation::Kind::Carried: return state_.particle_position[static_cast<std::size_t>(p.index)];
  }
  return 0;
}

std::vector<std::int32_t> InitialParticles::draw(const LatticeDomain& lattice, std::size_t particles,
                                                 Rng& rng) const {
  std::vector<std::int32_t> pos(particles);
  const std::size_t sites = lattice.num_sites();
  if (kind == Kind::Uniform) {
    for (auto& y : pos) y = static_cast<std::int32_t>(rng.index(sites));
    return pos;
  }
  if (pinned.size() < particles && sites < 2) {
    throw ConfigError("initial_particles", "no room off the pinned site");
  }
  std::vector<char> is_pinned(particles, 0);
  for (auto j : pinned) {
    if (j >= particles) throw ConfigError("initial_particles", "pinned particle index out of range");
    is_pinned[j] = 1;
  }
  for (std::size_t j = 0; j < particles; ++j) {
    if (is_pinned[j]) {
      pos[j] = static_cast<std::int32_t>(site);
    } else {
      auto v = static_cast<std::size_t>(rng.index(sites - 1));
      if (v >= site) ++v;
      pos[j] = static_cast<std::int32_t>(v);
    }
  }
  return pos;
}

void DualRunConfig::validate() const {
  if (lattice == nullptr) throw ConfigError("lattice", "missing");
  if (particles == 0) throw ConfigError("M", "must be positive");
  if (replicas == 0) throw ConfigError("replicas", "must be positive");
  for (const auto& p : packets) {
    const auto i = static_cast<std::size_t>(p.index);
    const bool ok = p.index >= 0 && ((p.kind == PacketLocation::Kind::Site && i < lattice->num_sites()) ||
                                     (p.kind == PacketLocation::Kind::Bath && i < lattice->num_bath()) ||
                                     (p.kind == PacketLocation::Kind::Carried && i < particles));
    if (!ok) throw ConfigError("packets", "placement index out of range");
  }
  if (initial.kind == InitialParticles::Kind::Pinned && initial.site >= lattice->num_sites()) {
    throw ConfigError("initial_particles", "pinned site out of range");
  }
}

namespace {

PacketState fresh_state(const DualRunConfig& config, Rng& rng) {
  PacketState s;
  s.packets = config.packets;
  s.particle_position = config.initial.draw(*config.lattice, config.particles, rng);
  return s;
}

std::vector<std::size_t> absorb(DualChain& chain, std::uint64_t step_cap, Rng& rng) {
  while (!chain.all_absorbed()) {
    if (chain.state().event_count >= step_cap) {
      throw Error(ErrorKind::StepLimitExceeded,
                  "packet chain not absorbed after " + std::to_string(step_cap) + " events");
    }
    chain.step(rng);
  }
  std::vector<std::size_t> out;
  out.reserve(chain.state().packets.size());
  for (const auto& p : chain.state().packets) out.push_back(static_cast<std::size_t>(p.index));
  return out;
}

}  // namespace

std::vector<std::size_t> run_to_absorption(const DualRunConfig& config, Rng& rng) {
  config.validate();
  DualChain chain(*config.lattice, fresh_state(config, rng));
  return absorb(chain, config.step_cap, rng);
}

MomentProductEstimate estimate_moment_product(const DualRunConfig& config,
                                              std::span<const double> bath_temperature) {
  config.validate();
  if (config.replicas < 2) throw ConfigError("replicas", "need at least 2 replicas for an error bar");
  if (bath_temperature.size() != config.lattice->num_bath()) {
    throw ConfigError("temperature", "bath size mismatch");
  }
  MomentProductEstimate out;
  out.replicas = config.replicas;
  out.hits = run_replicas(config.replicas, config.workers, [&](std::size_t r) {
    Rng rng = Rng::stream(config.seed, r);
    DualChain chain(*config.lattice, fresh_state(config, rng));
    return absorb(chain, config.step_cap, rng);
  });

  double sum = 0.0;
  double sum2 = 0.0;
  for (const auto& hit : out.hits) {
    double prod = 1.0;
    for (auto b : hit) prod *= bath_temperature[b];
    sum += prod;
    sum2 += prod * prod;
  }
  const auto n = static_cast<double>(config.replicas);
  out.estimate = sum / n;
  const double var = std::max(0.0, (sum2 - n * out.estimate * out.estimate) / (n - 1.0));
  out.std_error = std::sqrt(var / n);
  return out;
}

StickingSample pair_sticking_time_sample(const LatticeDomain& lattice, std::size_t particles,
                                         std::span<const PacketLocation> pair, Rng& rng,
                                         std::uint64_t step_cap) {
  if (pair.size() != 2) throw ConfigError("packets", "sticking times need exactly two packets");
  PacketState init;
  init.packets.assign(pair.begin(), pair.end());
  init.particle_position = InitialParticles{}.draw(lattice, particles, rng);
  DualChain chain(lattice, std::move(init));

  StickingSample out;
  std::int32_t a = chain.projected(0);
  std::int32_t b = chain.projected(1);
  bool together = a == b && !LatticeDomain::is_bath(a);
  std::uint64_t kappa = 0;
  while (!chain.all_absorbed()) {
    if (chain.state().event_count >= step_cap) {
      throw Error(ErrorKind::StepLimitExceeded,
                  "packet pair not absorbed after " + std::to_string(step_cap) + " events");
    }
    chain.step(rng);
    const std::int32_t a2 = chain.projected(0);
    const std::int32_t b2 = chain.projected(1);
    if (a2 == a && b2 == b) continue;  // no action in the collapsed time scale
    a = a2;
    b = b2;
    if (together) {
      ++kappa;
      if (a != b) {
        out.kappa.push_back(kappa);
        together = false;
      } else if (LatticeDomain::is_bath(a)) {
        ++out.censored;
        together = false;
      }
    } else if (a == b && !LatticeDomain::is_bath(a)) {
      together = true;
      kappa = 0;
    }
  }
  return out;
}

}  // namespace ltesim
