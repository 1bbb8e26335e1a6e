// Command-line front end: `ltesim run <config>` and `ltesim validate <config>`.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ltesim/config.hpp"
#include "ltesim/error.hpp"
#include "ltesim/experiments.hpp"

namespace {

struct Overrides {
  std::optional<std::string> seed;
  std::optional<std::size_t> replicas;
  std::optional<std::string> out_dir;
  std::optional<unsigned> workers;
};

int exit_code(ltesim::ErrorKind kind) {
  switch (kind) {
    case ltesim::ErrorKind::ConfigInvalid:
      return 2;
    case ltesim::ErrorKind::IoFailure:
      return 3;
    default:
      return 4;
  }
}

void report_error(const std::string& kind, const std::string& message, const std::string& field) {
  nlohmann::json e = {{"kind", kind}, {"message", message}};
  if (!field.empty()) e["field"] = field;
  std::cerr << nlohmann::json{{"error", e}}.dump() << '\n';
}

std::uint64_t parse_seed_override(const std::string& text) {
  std::size_t used = 0;
  try {
    if (!text.empty() && text[0] == '-') {
      const long long v = std::stoll(text, &used);
      if (used == text.size()) return static_cast<std::uint64_t>(v);
    } else {
      const unsigned long long v = std::stoull(text, &used);
      if (used == text.size()) return v;
    }
  } catch (const std::exception&) {
  }
  throw ltesim::ConfigError("seed", "expected a 64-bit integer, got '" + text + "'");
}

ltesim::RunConfig load(const std::string& path, const Overrides& o) {
  auto c = ltesim::load_config(path);
  if (o.seed) c.seed = parse_seed_override(*o.seed);
  if (o.replicas) {
    if (*o.replicas == 0) throw ltesim::ConfigError("replicas", "must be positive");
    c.replicas = *o.replicas;
  }
  if (o.out_dir) c.out_dir = *o.out_dir;
  if (o.workers) c.workers = *o.workers;
  return c;
}

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "Seed override (any 64-bit integer, negative allowed)");
  cmd->add_option("--replicas", o.replicas, "Replica count override");
  cmd->add_option("--out-dir", o.out_dir, "Output directory override");
  cmd->add_option("--workers", o.workers, "Worker threads (0 = available parallelism)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice heat-conduction simulator: forward process, packet dual, harmonic profiles"};
  app.set_version_flag("--version", ltesim::tool_version());
  app.require_subcommand(1);

  std::string config_path;
  Overrides run_o;
  Overrides validate_o;

  auto* run = app.add_subcommand("run", "Run the experiment described by a YAML config");
  run->add_option("config", config_path, "Configuration file")->required();
  add_overrides(run, run_o);

  auto* validate = app.add_subcommand("validate", "Check a config and print the resolved values");
  validate->add_option("config", config_path, "Configuration file")->required();
  add_overrides(validate, validate_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    report_error("UsageError", e.what(), "");
    return 64;
  }

  try {
    if (*run) {
      const auto config = load(config_path, run_o);
      const auto outcome = ltesim::run_experiment(config);
      std::cout << nlohmann::json{{"csv", outcome.csv_path.string()},
                                  {"summary", outcome.summary_path.string()},
                                  {"config_hash", outcome.summary["config_hash"]}}
                       .dump()
                << '\n';
      return 0;
    }
    const auto config = load(config_path, validate_o);
    ltesim::validate_config(config);
    std::cout << nlohmann::json{{"diagnostics", nlohmann::json::array()},
                                {"config_hash", ltesim::config_hash(config)},
                                {"resolved", ltesim::resolved_json(config)}}
                     .dump(2)
              << '\n';
    return 0;
  } catch (const ltesim::ConfigError& e) {
    report_error(std::string(ltesim::to_string(e.kind())), e.what(), e.field());
    return exit_code(e.kind());
  } catch (const ltesim::Error& e) {
    report_error(std::string(ltesim::to_string(e.kind())), e.what(), "");
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    report_error("Internal", e.what(), "");
    return 5;
  }
}
