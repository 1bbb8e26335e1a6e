#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ltesim/forward.hpp"
#include "ltesim/lattice.hpp"
#include "ltesim/rng.hpp"

namespace ltesim {

/// Where a packet sits: at a site, absorbed at a bath point, or carried by a particle.
struct PacketLocation {
  enum class Kind : std::uint8_t { Site, Bath, Carried };
  Kind kind = Kind::Site;
  std::int32_t index = 0;

  static PacketLocation at_site(std::size_t v) { return {Kind::Site, static_cast<std::int32_t>(v)}; }
  static PacketLocation at_bath(std::size_t b) { return {Kind::Bath, static_cast<std::int32_t>(b)}; }
  static PacketLocation carried_by(std::size_t j) { return {Kind::Carried, static_cast<std::int32_t>(j)}; }

  friend bool operator==(const PacketLocation&, const PacketLocation&) = default;
};

struct PacketState {
  std::vector<PacketLocation> packets;
  std::vector<std::int32_t> particle_position;  ///< site indices
  std::uint64_t event_count = 0;

  std::size_t absorbed() const;
};

/// Packet counts per site, bath point and particle: the occupation numbers
/// (n_v, n̂_v, ñ_j) seen by the duality function.
struct PacketCounts {
  std::vector<unsigned> site;
  std::vector<unsigned> bath;
  std::vector<unsigned> carried;

  static PacketCounts of(const PacketState& state, const LatticeDomain& lattice);
  unsigned total() const;
};

struct Split {
  std::vector<std::size_t> stay;
  std::vector<std::size_t> carry;
};

/// q uniform on {0..n} packets stay, chosen as a uniform subset of that size;
/// the rest are carried. A given carried set of size l has probability
/// l!(n-l)!/(n+1)!.
Split split_packets(std::span<const std::size_t> pooled, Rng& rng);

/// In-place form: reorders `pooled` and returns how many leading entries stay.
std::size_t split_packets_in_place(std::span<std::size_t> pooled, Rng& rng);

/// Packet chain on a fixed lattice. Keeps per-site and per-particle packet
/// counts so that moves that touch no packets cost O(1).
class DualChain {
 public:
  DualChain(const LatticeDomain& lattice, PacketState state);

  /// Draws a uniform particle and direction and applies it.
  Move step(Rng& rng);
  /// Jump-then-mix update for a given move.
  void apply(const Move& move, Rng& rng);

  const PacketState& state() const { return state_; }
  const LatticeDomain& lattice() const { return *lattice_; }
  bool all_absorbed() const { return absorbed_ == state_.packets.size(); }
  std::size_t absorbed() const { return absorbed_; }

  /// Packet location with "carried by j" read as "at the site of j", encoded
  /// as a neighbour code (site index, or ~bath index).
  std::int32_t projected(std::size_t packet) const;

 private:
  void pool_and_split(std::size_t particle, std::size_t site, Rng& rng);

  const LatticeDomain* lattice_;
  PacketState state_;
  std::vector<unsigned> at_site_;
  std::vector<unsigned> carried_;
  std::size_t absorbed_ = 0;
  std::vector<std::size_t> pool_;
};

/// Initial particle law: i.i.d. uniform, or the listed particles pinned to
/// one site with every other particle uniform over the remaining sites.
struct InitialParticles {
  enum class Kind { Uniform, Pinned };
  Kind kind = Kind::Uniform;
  std::size_t site = 0;
  std::vector<std::size_t> pinned;

  std::vector<std::int32_t> draw(const LatticeDomain& lattice, std::size_t particles, Rng& rng) const;
};

struct DualRunConfig {
  const LatticeDomain* lattice = nullptr;
  std::size_t particles = 1;
  std::vector<PacketLocation> packets;
  InitialParticles initial;
  std::uint64_t seed = 0;
  std::size_t replicas = 1;
  std::uint64_t step_cap = 1'000'000'000ULL;
  unsigned workers = 0;

  void validate() const;
};

/// Runs the chain of one replica until every packet sits in the bath and
/// returns the bath index of each packet. Throws StepLimitExceeded.
std::vector<std::size_t> run_to_absorption(const DualRunConfig& config, Rng& rng);

struct MomentProductEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t replicas = 0;
  std::vector<std::vector<std::size_t>> hits;  ///< [replica][packet] bath index
};

/// Monte Carlo mean of the product over packets of T at the absorbing bath
/// point. Replica r uses stream r of config.seed.
MomentProductEstimate estimate_moment_product(const DualRunConfig& config,
                                              std::span<const double> bath_temperature);

struct StickingSample {
  std::vector<std::uint64_t> kappa;  ///< collapsed steps until the pair separates
  std::uint64_t censored = 0;        ///< episodes ended by joint absorption at one bath point
};

/// Follows a two-packet chain to absorption in the collapsed time scale (only
/// steps where some projected packet location changes count) and records the
/// length of every episode during which both packets share a projected
/// non-bath location.
StickingSample pair_sticking_time_sample(const LatticeDomain& lattice, std::size_t particles,
                                         std::span<const PacketLocation> pair, Rng& rng,
                                         std::uint64_t step_cap = 1'000'000'000ULL);

}  // namespace ltesim
