#include "matterwave/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "matterwave/cli/io.hpp"
#include "matterwave/constants.hpp"
#include "matterwave/errors.hpp"

namespace matterwave::cli {

namespace {

using nlohmann::json;

// Reads keys of one JSON object and rejects any key it was not asked about.
class Section {
 public:
  Section(const json& node, std::string where) : node_(node), where_(std::move(where)) {
    if (!node_.is_object()) {
      throw ConfigError(where_, "expected an object");
    }
  }

  void done() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.contains(key)) {
        throw ConfigError(where_ + "/" + key, "unknown key");
      }
    }
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number()) throw ConfigError(path(key), "expected a number");
    return v.get<double>();
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number_integer()) throw ConfigError(path(key), "expected an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_boolean()) throw ConfigError(path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    if (!has(key)) throw ConfigError(path(key), "required key missing");
    const json& v = node_.at(key);
    if (!v.is_string()) throw ConfigError(path(key), "expected a string");
    return v.get<std::string>();
  }

  const json& child(const std::string& key) {
    seen_.insert(key);
    return node_.at(key);
  }

  std::string path(const std::string& key) const { return where_ + "/" + key; }

 private:
  const json& node_;
  std::string where_;
  std::set<std::string> seen_;
};

// Runs `body`, re-labelling library validation errors with the JSON location.
template <typename F>
auto at(const std::string& where, F&& body) {
  try {
    return body();
  } catch (const ConfigError&) {
    throw;
  } catch (const DomainError& e) {
    throw ConfigError(where, e.what());
  }
}

Grating parse_grating(const json& node, const Grating& base) {
  Section s(node, "/grating");
  const double period = s.number("period_nm", base.period() / constants::nanometre);
  const double slit = s.number("slit_width_nm", base.slit_width() / constants::nanometre);
  const int slits = s.integer("num_slits", base.num_slits());
  s.done();
  return at("/grating", [&] { return Grating(period * constants::nanometre, slit * constants::nanometre, slits); });
}

DetectorConfig parse_detector(const json& node, const DetectorConfig& base) {
  Section s(node, "/detector");
  DetectorConfig d;
  d.angle_min = s.number("angle_min_mrad", base.angle_min / constants::milliradian) * constants::milliradian;
  d.angle_max = s.number("angle_max_mrad", base.angle_max / constants::milliradian) * constants::milliradian;
  d.num_bins = s.integer("num_bins", base.num_bins);
  d.angular_resolution_fwhm =
      s.number("fwhm_mrad", base.angular_resolution_fwhm / constants::milliradian) * constants::milliradian;
  d.exposure_scale = s.number("exposure_scale", base.exposure_scale);
  s.done();
  at("/detector", [&] { d.validate(); return 0; });
  return d;
}

std::vector<Species> parse_species(const json& node) {
  if (!node.is_array()) throw ConfigError("/species", "expected an array");
  std::vector<Species> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::string where = "/species/" + std::to_string(i);
    Section s(node[i], where);
    const std::string name = s.string("name");
    const int cluster = s.integer("cluster_size", 1);
    if (cluster < 1) throw ConfigError(s.path("cluster_size"), "must be >= 1");
    const double mass = s.number("mass_kg", cluster * constants::helium4_mass);
    if (!(mass > 0.0)) throw ConfigError(s.path("mass_kg"), "must be positive");
    s.done();
    for (const auto& existing : out) {
      if (existing.name() == name) throw ConfigError(s.path("name"), "duplicate species '" + name + "'");
    }
    out.emplace_back(name, mass, cluster);
  }
  return out;
}

void parse_solver(const json& node, RunConfig& config) {
  Section s(node, "/solver");
  FitSettings& f = config.solver;
  f.max_iterations = s.integer("max_iterations", f.max_iterations);
  f.step_tolerance = s.number("step_tolerance", f.step_tolerance);
  f.gradient_tolerance = s.number("gradient_tolerance", f.gradient_tolerance);
  f.optimality_tolerance = s.number("optimality_tolerance", f.optimality_tolerance);
  f.uncertainty_floor = s.number("uncertainty_floor", f.uncertainty_floor);
  f.include_zeroth_order = s.boolean("include_zeroth_order", f.include_zeroth_order);
  f.grid_starts = s.integer("grid_starts", f.grid_starts);
  config.max_order = s.integer("max_order", config.max_order);
  s.done();
  if (f.max_iterations < 1) throw ConfigError(s.path("max_iterations"), "must be >= 1");
  if (!(f.step_tolerance > 0.0)) throw ConfigError(s.path("step_tolerance"), "must be positive");
  if (!(f.gradient_tolerance >= 0.0)) throw ConfigError(s.path("gradient_tolerance"), "must be >= 0");
  if (!(f.optimality_tolerance > 0.0)) throw ConfigError(s.path("optimality_tolerance"), "must be positive");
  if (!(f.uncertainty_floor > 0.0)) throw ConfigError(s.path("uncertainty_floor"), "must be positive");
  if (f.grid_starts < 1) throw ConfigError(s.path("grid_starts"), "must be >= 1");
  if (config.max_order < 1) throw ConfigError(s.path("max_order"), "must be >= 1");
}

void parse_assignment(const json& node, AssignmentSettings& a) {
  Section s(node, "/assignment");
  a.max_cluster = s.integer("max_cluster", a.max_cluster);
  a.max_order = s.integer("max_order", a.max_order);
  a.tolerance = s.number("tolerance", a.tolerance);
  s.done();
  if (a.max_cluster < 1) throw ConfigError(s.path("max_cluster"), "must be >= 1");
  if (a.max_order < 1) throw ConfigError(s.path("max_order"), "must be >= 1");
  if (!(a.tolerance > 0.0)) throw ConfigError(s.path("tolerance"), "must be positive");
}

void parse_extraction(const json& node, RunConfig& config) {
  Section s(node, "/extraction");
  config.window_fwhm = s.number("window_fwhm", config.window_fwhm);
  config.background = s.number("background", config.background);
  s.done();
  if (!(config.window_fwhm > 0.0)) throw ConfigError(s.path("window_fwhm"), "must be positive");
  if (!(config.background >= 0.0)) throw ConfigError(s.path("background"), "must be >= 0");
}

}  // namespace

Species RunConfig::find_species(const std::string& name) const {
  for (const auto& s : species) {
    if (s.name() == name) return s;
  }
  if (name.size() > 2 && name.starts_with("He")) {
    const std::string digits = name.substr(2);
    if (std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); }) &&
        digits.size() <= 4 && digits[0] != '0') {
      return Species::cluster_of(helium4(), std::stoi(digits));
    }
  }
  throw DomainError("unknown species '" + name + "'");
}

std::vector<MixtureComponent> parse_mixture(const json& node, const RunConfig& config,
                                            const std::string& where) {
  if (!node.is_array()) throw ConfigError(where, "expected an array");
  std::vector<MixtureComponent> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::string item = where + "/" + std::to_string(i);
    Section s(node[i], item);
    const std::string name = s.string("species");
    const Species species = at(s.path("species"), [&] { return config.find_species(name); });
    MixtureComponent c{species, s.number("abundance", 1.0), {}};
    c.peak_params.s_eff = s.number("s_eff_nm", 60.0) * constants::nanometre;
    c.peak_params.delta = s.number("delta_nm", 0.0) * constants::nanometre;
    c.peak_params.sigma = s.number("sigma_nm", 0.0) * constants::nanometre;
    c.peak_params.amplitude = s.number("amplitude", 1.0);
    s.done();
    at(item, [&] { c.peak_params.validate(); return 0; });
    out.push_back(c);
  }
  at(where, [&] { validate_mixture(out); return 0; });
  return out;
}

RunConfig parse_config(const json& doc) {
  RunConfig config;
  Section root(doc, "");
  if (root.has("grating")) config.grating = parse_grating(root.child("grating"), config.grating);
  if (root.has("detector")) config.detector = parse_detector(root.child("detector"), config.detector);
  if (root.has("species")) config.species = parse_species(root.child("species"));
  config.velocity = root.number("velocity_mps", config.velocity);
  if (!(config.velocity > 0.0)) throw ConfigError("/velocity_mps", "must be positive");
  if (root.has("solver")) parse_solver(root.child("solver"), config);
  if (root.has("assignment")) parse_assignment(root.child("assignment"), config.assignment);
  if (root.has("extraction")) parse_extraction(root.child("extraction"), config);
  // Parsed last so that species names resolve against this file's table.
  if (root.has("mixture")) config.mixture = parse_mixture(root.child("mixture"), config);
  root.done();
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

}  // namespace matterwave::cli
