#pragma once

// CSV, JSON and binary snapshot writers. Failures throw IoError naming the path.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "bplab/operators.hpp"
#include "bplab/timeloop.hpp"

namespace bplab {

/// Column names of the diagnostics CSV: t,EN,E_bp,E_thm,sup_U,sup_gradU then mode_<kx>_<ky>.
std::vector<std::string> diagnostics_columns(const std::vector<std::array<int, 2>>& modes);

void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records,
                           const std::vector<std::array<int, 2>>& modes);
void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

nlohmann::json to_json(const GridSpec& grid);
nlohmann::json to_json(const CoercivityReport& report);

/// Writes <stem>.bin (little-endian float64, row-major, components back to
/// back) and <stem>.json describing grid, time and components.
void write_snapshot(const std::filesystem::path& stem, const std::vector<const Field*>& components,
                    const std::vector<std::string>& names, double time);

struct Snapshot {
  nlohmann::json sidecar;
  std::vector<double> values;
};

Snapshot read_snapshot(const std::filesystem::path& stem);

}  // namespace bplab
