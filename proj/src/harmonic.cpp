#include "ltesim/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ltesim/error.hpp"
#include "ltesim/replicas.hpp"

namespace ltesim {

namespace {

double neighbour_average(const LatticeDomain& lat, std::span<const double> bath_values,
                         std::span<const double> u, std::size_t v) {
  double sum = 0.0;
  for (int dir = 0; dir < lat.directions(); ++dir) {
    const auto n = lat.neighbor(v, dir);
    sum += LatticeDomain::is_bath(n) ? bath_values[LatticeDomain::bath_index(n)] : u[static_cast<std::size_t>(n)];
  }
  return sum / lat.directions();
}

}  // namespace

double harmonic_residual(const LatticeDomain& lattice, std::span<const double> bath_values,
                         std::span<const double> values) {
  double r = 0.0;
  for (std::size_t v = 0; v < lattice.num_sites(); ++v) {
    r = std::max(r, std::abs(values[v] - neighbour_average(lattice, bath_values, values, v)));
  }
  return r;
}

HarmonicField solve_discrete_harmonic(const LatticeDomain& lattice, std::span<const double> bath_values,
                                      HarmonicSolverOptions options) {
  if (!(options.tolerance > 0.0)) throw ConfigError("tolerance", "must be positive");
  if (bath_values.size() != lattice.num_bath()) throw ConfigError("temperature", "bath size mismatch");

  HarmonicField field;
  double mean = 0.0;
  for (double t : bath_values) mean += t;
  mean /= static_cast<double>(std::max<std::size_t>(bath_values.size(), 1));
  field.values.assign(lattice.num_sites(), mean);

  // The sweep's largest update bounds the residual only loosely, so the true
  // residual is checked whenever the update falls under the tolerance.
  while (field.iterations < options.max_iterations) {
    double change = 0.0;
    for (std::size_t v = 0; v < lattice.num_sites(); ++v) {
      const double next = neighbour_average(lattice, bath_values, field.values, v);
      change = std::max(change, std::abs(next - field.values[v]));
      field.values[v] = next;
    }
    ++field.iterations;
    if (change <= options.tolerance) {
      field.residual = harmonic_residual(lattice, bath_values, field.values);
      if (field.residual <= options.tolerance) return field;
    }
  }
  field.residual = harmonic_residual(lattice, bath_values, field.values);
  throw Error(ErrorKind::NoConvergence, "Gauss-Seidel stopped after " + std::to_string(field.iterations) +
                                            " sweeps with residual " + std::to_string(field.residual));
}

HarmonicField solve_discrete_harmonic(const LatticeDomain& lattice, const BoundaryTemperature& temp,
                                      HarmonicSolverOptions options) {
  return solve_discrete_harmonic(lattice, bath_temperatures(temp, lattice), options);
}

HittingEstimate hitting_estimate_ssrw(const LatticeDomain& lattice, std::span<const double> bath_values,
                                      std::size_t start, std::size_t replicas, std::uint64_t seed,
                                      unsigned workers) {
  if (start >= lattice.num_sites()) throw ConfigError("start", "not a site index");
  if (replicas < 2) throw ConfigError("replicas", "need at least 2 replicas for an error bar");
  const auto values = run_replicas(replicas, workers, [&](std::size_t r) {
    Rng rng = Rng::stream(seed, r);
    auto at = static_cast<std::int32_t>(start);
    while (true) {
      const auto n = lattice.neighbor(static_cast<std::size_t>(at), static_cast<int>(rng.index(
                                                                          static_cast<std::uint64_t>(lattice.directions()))));
      if (LatticeDomain::is_bath(n)) return bath_values[LatticeDomain::bath_index(n)];
      at = n;
    }
  });
  HittingEstimate out;
  out.replicas = replicas;
  double sum = 0.0;
  double sum2 = 0.0;
  for (double x : values) {
    sum += x;
    sum2 += x * x;
  }
  const auto n = static_cast<double>(replicas);
  out.estimate = sum / n;
  out.std_error = std::sqrt(std::max(0.0, (sum2 - n * out.estimate * out.estimate) / (n - 1.0)) / n);
  return out;
}

}  // namespace ltesim
