#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ltesim/lattice.hpp"

namespace ltesim {

enum class ExperimentKind {
  ForwardNess,
  DualHitting,
  Harmonic,
  DualityCheck,
  EquilibriumCheck,
  PoissonCheck,
  ConditionalLte,
  StickingTail,
};

std::string to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment_kind(const std::string& name);

struct TemperatureSpec {
  enum class Kind { Constant, Endpoints, Linear };
  Kind kind = Kind::Constant;
  double value = 1.0;
  double left = 1.0;
  double right = 1.0;
  double offset = 1.0;
  RealPoint gradient;

  BoundaryTemperature build(const DomainSpec& domain) const;
};

/// One named packet: at ⟨xL⟩, at an explicit site, carried by a particle, or at a bath point.
struct PacketSpec {
  enum class Kind { Scaled, Site, Carried, Bath };
  Kind kind = Kind::Scaled;
  RealPoint x;
  Point point;
  std::size_t particle = 0;
};

/// Packets at ⟨xL + L^θ v⟩ for each offset v.
struct MesoscopicSpec {
  RealPoint x;
  double theta = 0.5;
  std::vector<RealPoint> offsets;
};

struct SamplingSpec {
  std::optional<std::uint64_t> burn_in;
  std::uint64_t events = 1'000'000;
  std::optional<std::uint64_t> thinning;
  std::size_t batches = 30;
};

struct RunConfig {
  ExperimentKind kind = ExperimentKind::ForwardNess;
  DomainSpec domain = DomainSpec::interval(0.0, 1.0);
  double scale = 0.0;  ///< L
  TemperatureSpec temperature;
  std::optional<std::size_t> particles;
  std::optional<double> density;
  std::uint64_t seed = 0;
  std::size_t replicas = 1;
  unsigned workers = 0;
  SamplingSpec sampling;

  std::vector<Point> observe;  ///< lattice points whose site energy goes to the CSV
  std::vector<PacketSpec> packets;
  std::optional<MesoscopicSpec> mesoscopic;
  std::uint64_t step_cap = 1'000'000'000ULL;

  std::uint64_t t_events = 0;
  double initial_energy = 1.0;

  double tolerance = 1e-10;
  std::optional<RealPoint> probe;

  RealPoint site;                       ///< x in D for site-centred experiments
  std::vector<Point> count_offsets{{0}};
  std::size_t cap = 20;
  unsigned site_order = 1;
  std::vector<unsigned> particle_orders{1};
  std::size_t min_occurrences = 100;
  unsigned max_order = 3;
  std::uint64_t occupation_stride = 0;  ///< 0: |D_L|^2 · M when the experiment needs it

  std::size_t episodes = 10'000;
  unsigned max_k = 10;

  std::filesystem::path out_dir = "out";
  std::string prefix = "run";
};

/// Parses a YAML configuration file. Throws ConfigError naming the field, or
/// IoFailure when the file cannot be read.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& yaml_text);

/// Cross-field checks that need the lattice (placements inside the domain,
/// density → M). Throws ConfigError.
void validate_config(const RunConfig& config);

/// Number of particles after resolving `density`.
std::size_t resolved_particles(const RunConfig& config, const LatticeDomain& lattice);

/// Resolved configuration, defaults included, as JSON.
nlohmann::json resolved_json(const RunConfig& config);

/// FNV-1a 64 of the compact JSON dump of the resolved configuration, as hex.
std::string config_hash(const RunConfig& config);

}  // namespace ltesim
