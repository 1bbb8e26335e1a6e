#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ltesim/config.hpp"
#include "ltesim/dual.hpp"

namespace ltesim {

/// Column header plus rows, rendered with %.17g for reals.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  CsvTable& row();
  CsvTable& cell(double value);
  CsvTable& cell(std::int64_t value);
  CsvTable& cell(std::uint64_t value);
  CsvTable& cell(const std::string& value);

  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string format_real(double value);

/// Writes to a sibling temporary file and renames it over `path`.
/// Throws IoFailure.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

struct RunOutcome {
  std::filesystem::path csv_path;
  std::filesystem::path summary_path;
  nlohmann::json summary;
};

/// Packet placement resolved against the lattice.
std::vector<PacketLocation> resolve_packets(const RunConfig& config, const LatticeDomain& lattice);

/// Runs the experiment and writes <out_dir>/<prefix>.csv and <prefix>.json.
RunOutcome run_experiment(const RunConfig& config);

/// Version string embedded in every summary.
std::string tool_version();

}  // namespace ltesim
