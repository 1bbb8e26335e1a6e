#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ltesim/lattice.hpp"
#include "ltesim/rng.hpp"

namespace ltesim {

/// Discrete harmonic field on the sites with boundary values on the bath.
struct HarmonicField {
  std::vector<double> values;  ///< indexed by site
  double residual = 0.0;       ///< max |u(v) - neighbour average|
  std::uint64_t iterations = 0;
};

struct HarmonicSolverOptions {
  double tolerance = 1e-10;
  std::uint64_t max_iterations = 1'000'000;
};

/// Gauss–Seidel for u(v) = (1/2d) Σ_{w~v} ũ(w), where ũ is u on sites and the
/// bath value on bath points. Throws NoConvergence.
HarmonicField solve_discrete_harmonic(const LatticeDomain& lattice, std::span<const double> bath_values,
                                      HarmonicSolverOptions options = {});

HarmonicField solve_discrete_harmonic(const LatticeDomain& lattice, const BoundaryTemperature& temp,
                                      HarmonicSolverOptions options = {});

/// Max over sites of |u(v) - neighbour average|.
double harmonic_residual(const LatticeDomain& lattice, std::span<const double> bath_values,
                         std::span<const double> values);

/// T0 + (T1 - T0)·x.
inline double continuum_solution_1d(double t0, double t1, double x) { return t0 + (t1 - t0) * x; }

struct HittingEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t replicas = 0;
};

/// Runs independent simple symmetric walks from `start` until they step onto
/// the bath and averages the bath value found there. Replica r uses stream r.
HittingEstimate hitting_estimate_ssrw(const LatticeDomain& lattice, std::span<const double> bath_values,
                                      std::size_t start, std::size_t replicas, std::uint64_t seed,
                                      unsigned workers = 0);

}  // namespace ltesim
