#include "matterwave/cli/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "matterwave/constants.hpp"
#include "matterwave/errors.hpp"

namespace matterwave::cli {

namespace {

using constants::milliradian;
using constants::nanometre;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(trim(field));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line);
}

double parse_number(const std::string& field, const std::string& location) {
  double value = 0.0;
  const char* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw DomainError(location + ": not a number: '" + field + "'");
  }
  return value;
}

std::int64_t parse_integer(const std::string& field, const std::string& location) {
  std::int64_t value = 0;
  const char* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw DomainError(location + ": not an integer: '" + field + "'");
  }
  return value;
}

// Data lines of a CSV after its mandatory header; `#` lines before the header
// are handed to `on_comment`.
template <typename OnComment, typename OnRow>
void read_csv(const std::string& text, const std::string& source, const std::string& header,
              OnComment on_comment, OnRow on_row) {
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++number;
    const std::string content = trim(line);
    if (content.empty()) continue;
    if (!header_seen) {
      if (content.front() == '#') {
        on_comment(trim(std::string_view(content).substr(1)), where(source, number));
        continue;
      }
      if (content != header) {
        throw DomainError(where(source, number) + ": expected header '" + header + "'");
      }
      header_seen = true;
      continue;
    }
    on_row(split(content, ','), where(source, number));
  }
  if (!header_seen) {
    throw DomainError(source + ": missing header '" + header + "'");
  }
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ptr);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError("error reading '" + path.string() + "'");
  }
  return buffer.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << text;
    out.flush();
    if (!out) {
      throw IoError("error writing '" + path.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot write '" + path.string() + "'");
  }
}

std::string format_scan_csv(const DetectorScan& scan) {
  std::string out;
  const ScanMetadata& m = scan.metadata;
  if (m.velocity) out += "# velocity_mps=" + format_double(*m.velocity) + "\n";
  if (m.grating) {
    out += "# period_m=" + format_double(m.grating->period()) + "\n";
    out += "# slit_width_m=" + format_double(m.grating->slit_width()) + "\n";
    out += "# num_slits=" + std::to_string(m.grating->num_slits()) + "\n";
  }
  if (m.seed) out += "# seed=" + std::to_string(*m.seed) + "\n";
  if (m.species) out += "# species=" + *m.species + "\n";
  if (m.synthetic) out += "# synthetic=true\n";
  out += "angle_mrad,counts\n";
  for (std::size_t i = 0; i < scan.bin_centers.size(); ++i) {
    out += format_double(scan.bin_centers[i] / milliradian);
    out += ',';
    out += std::to_string(scan.counts[i]);
    out += '\n';
  }
  return out;
}

DetectorScan parse_scan_csv(const std::string& text, const std::string& source) {
  DetectorScan scan;
  std::optional<double> period;
  std::optional<double> slit;
  std::optional<std::int64_t> slits;
  auto on_comment = [&](const std::string& comment, const std::string& at) {
    const auto eq = comment.find('=');
    if (eq == std::string::npos) return;  // free-form comment
    const std::string key = trim(std::string_view(comment).substr(0, eq));
    const std::string value = trim(std::string_view(comment).substr(eq + 1));
    if (key == "velocity_mps") {
      scan.metadata.velocity = parse_number(value, at);
    } else if (key == "period_m") {
      period = parse_number(value, at);
    } else if (key == "slit_width_m") {
      slit = parse_number(value, at);
    } else if (key == "num_slits") {
      slits = parse_integer(value, at);
    } else if (key == "seed") {
      scan.metadata.seed = static_cast<std::uint64_t>(parse_integer(value, at));
    } else if (key == "species") {
      scan.metadata.species = value;
    } else if (key == "synthetic") {
      scan.metadata.synthetic = value == "true";
    }
  };
  auto on_row = [&](const std::vector<std::string>& fields, const std::string& at) {
    if (fields.size() != 2) {
      throw DomainError(at + ": expected 2 columns, got " + std::to_string(fields.size()));
    }
    scan.bin_centers.push_back(parse_number(fields[0], at) * milliradian);
    scan.counts.push_back(parse_integer(fields[1], at));
  };
  read_csv(text, source, "angle_mrad,counts", on_comment, on_row);
  if (period || slit || slits) {
    if (!period || !slit || !slits) {
      throw DomainError(source + ": grating metadata needs period_m, slit_width_m and num_slits");
    }
    scan.metadata.grating = Grating(*period, *slit, static_cast<int>(*slits));
  }
  try {
    scan.validate();
  } catch (const DomainError& e) {
    throw DomainError(source + ": " + e.what());
  }
  return scan;
}

std::string format_sweep_points_csv(const std::vector<SweepPoint>& points) {
  std::string out = "velocity_mps,s_eff_nm,s_eff_err_nm\n";
  for (const auto& p : points) {
    out += format_double(p.velocity) + "," + format_double(p.s_eff / nanometre) + "," +
           format_double(p.s_eff_uncertainty / nanometre) + "\n";
  }
  return out;
}

std::vector<SweepPoint> parse_sweep_points_csv(const std::string& text, const std::string& source) {
  std::vector<SweepPoint> points;
  read_csv(
      text, source, "velocity_mps,s_eff_nm,s_eff_err_nm", [](const std::string&, const std::string&) {},
      [&](const std::vector<std::string>& fields, const std::string& at) {
        if (fields.size() != 3) {
          throw DomainError(at + ": expected 3 columns, got " + std::to_string(fields.size()));
        }
        points.push_back({parse_number(fields[0], at), parse_number(fields[1], at) * nanometre,
                          parse_number(fields[2], at) * nanometre});
      });
  return points;
}

std::vector<double> parse_peak_list_csv(const std::string& text, const std::string& source) {
  std::vector<double> peaks;
  read_csv(
      text, source, "angle_mrad", [](const std::string&, const std::string&) {},
      [&](const std::vector<std::string>& fields, const std::string& at) {
        if (fields.size() != 1) {
          throw DomainError(at + ": expected 1 column, got " + std::to_string(fields.size()));
        }
        peaks.push_back(parse_number(fields[0], at) * milliradian);
      });
  return peaks;
}

nlohmann::json parse_report(const std::string& text, const std::string& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(source + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("schema_version") || !doc["schema_version"].is_string()) {
    throw DomainError(source + ": missing schema_version");
  }
  const std::string version = doc["schema_version"].get<std::string>();
  int major = -1;
  const auto [ptr, ec] = std::from_chars(version.data(), version.data() + version.size(), major);
  if (ec != std::errc() || (ptr != version.data() + version.size() && *ptr != '.')) {
    throw DomainError(source + ": malformed schema_version '" + version + "'");
  }
  if (major != kSchemaMajor) {
    throw DomainError(source + ": unsupported schema_version '" + version + "' (expected " +
                      std::to_string(kSchemaMajor) + ".x)");
  }
  return doc;
}

std::string dump_report(const nlohmann::json& report) { return report.dump(2) + "\n"; }

}  // namespace matterwave::cli
