#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "matterwave/analysis.hpp"
#include "matterwave/synthesis.hpp"

namespace matterwave::cli {

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr int kSchemaMajor = 1;

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

std::string read_text(const std::filesystem::path& path);
/// Writes through a temporary file in the same directory, then renames.
void write_text(const std::filesystem::path& path, const std::string& text);

/// Scan CSV: optional `# key=value` metadata lines, header `angle_mrad,counts`,
/// one row per bin.
std::string format_scan_csv(const DetectorScan& scan);
DetectorScan parse_scan_csv(const std::string& text, const std::string& source = "scan");

/// Sweep-point CSV with header `velocity_mps,s_eff_nm,s_eff_err_nm`.
std::string format_sweep_points_csv(const std::vector<SweepPoint>& points);
std::vector<SweepPoint> parse_sweep_points_csv(const std::string& text, const std::string& source = "points");

/// Single-column peak list with header `angle_mrad`.
std::vector<double> parse_peak_list_csv(const std::string& text, const std::string& source = "peaks");

/// Parses a JSON report and checks its schema_version major.
nlohmann::json parse_report(const std::string& text, const std::string& source);
/// Two-space indented JSON with a trailing newline.
std::string dump_report(const nlohmann::json& report);

}  // namespace matterwave::cli
