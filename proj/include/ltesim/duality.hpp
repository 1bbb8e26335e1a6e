#pragma once

#include <cstdint>
#include <span>

#include "ltesim/dual.hpp"
#include "ltesim/lattice.hpp"

namespace ltesim {

/// F = ∏_v ξ_v^{n_v}/n_v! · ∏_j η_j^{ñ_j}/ñ_j! · ∏_b T_b^{n̂_b}.
/// Independent of particle positions.
double duality_function(const PacketCounts& counts, std::span<const double> site_energy,
                        std::span<const double> particle_energy, std::span<const double> bath_temperature);

struct DualityCheck {
  double lhs = 0.0;  ///< mean of F(n*, x_t) over forward runs from x*
  double rhs = 0.0;  ///< mean of F(n_t, x*) over packet runs from n*
  double lhs_std_error = 0.0;
  double rhs_std_error = 0.0;
  double combined_std_error = 0.0;
  std::size_t replicas = 0;
};

struct DualityCheckInput {
  const LatticeDomain* lattice = nullptr;
  std::span<const double> bath_temperature;
  std::size_t particles = 1;
  std::span<const PacketLocation> packets;  ///< n*
  std::span<const double> site_energy;      ///< x*: ξ
  std::span<const double> particle_energy;  ///< x*: η
  std::uint64_t t_events = 0;
  std::size_t replicas = 2;
  std::uint64_t seed = 0;
  unsigned workers = 0;
};

/// Estimates both sides of the finite-time duality identity from independent
/// ensembles. Each side starts with i.i.d. uniform particle positions and runs
/// t_events embedded-chain steps.
DualityCheck duality_check(const DualityCheckInput& input);

}  // namespace ltesim
