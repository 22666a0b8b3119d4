#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "matterwave/analysis.hpp"
#include "matterwave/constants.hpp"
#include "matterwave/diffraction.hpp"
#include "matterwave/errors.hpp"
#include "matterwave/synthesis.hpp"

namespace matterwave::cli {

/// Configuration problems: unknown keys, wrong types, violated invariants.
/// `where()` is a JSON pointer into the offending document.
class ConfigError : public DomainError {
 public:
  ConfigError(const std::string& where, const std::string& what)
      : DomainError(where.empty() ? what : where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

struct RunConfig {
  // Defaults are built the way the parser builds values (number * unit).
  Grating grating{100 * constants::nanometre, 71.2 * constants::nanometre, 200};
  DetectorConfig detector{-8 * constants::milliradian, 8 * constants::milliradian, 1601,
                          0.1 * constants::milliradian, 1e5};
  std::vector<Species> species{helium4()};
  std::vector<MixtureComponent> mixture{
      {helium4(), 1.0, {60 * constants::nanometre, 5 * constants::nanometre, 3 * constants::nanometre, 1.0}}};
  double velocity = 1000.0;  // m/s, used when a command is not given one
  FitSettings solver;
  int max_order = 7;
  AssignmentSettings assignment;
  double window_fwhm = 3.0;
  double background = 0.0;

  /// Species by name from the table; "HeN" names not in the table resolve to
  /// helium clusters.
  Species find_species(const std::string& name) const;
};

/// Parses a config document. Every key is optional; missing keys keep the
/// defaults above.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// Mixture list in the config's "mixture" format, resolved against `config`.
std::vector<MixtureComponent> parse_mixture(const nlohmann::json& doc, const RunConfig& config,
                                            const std::string& where = "/mixture");

}  // namespace matterwave::cli
