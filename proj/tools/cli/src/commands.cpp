#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "matterwave/cli/app.hpp"
#include "matterwave/cli/config.hpp"
#include "matterwave/cli/io.hpp"
#include "matterwave/constants.hpp"
#include "matterwave/errors.hpp"

namespace matterwave::cli {

namespace {

using nlohmann::json;
using constants::angstrom;
using constants::milliradian;
using constants::nanometre;

RunConfig config_from(const std::string& path) {
  return path.empty() ? RunConfig{} : load_config(path);
}

json covariance_json(const FitResult& fit) {
  json rows = json::array();
  for (const auto& row : fit.covariance) rows.push_back(row);
  return rows;
}

json fit_report(const FitResult& fit, const std::vector<OrderIntensity>& orders, const std::string& species,
                double velocity, double period) {
  json order_list = json::array();
  for (const auto& o : orders) {
    order_list.push_back({{"order", o.order},
                          {"intensity", o.intensity},
                          {"uncertainty", o.uncertainty},
                          {"overlapped", o.overlapped},
                          {"clipped", o.clipped}});
  }
  const QuantumPeakParams& p = fit.params;
  return {{"schema_version", kSchemaVersion},
          {"command", "fit"},
          {"species", species},
          {"velocity_mps", velocity},
          {"period_m", period},
          {"s_eff", p.s_eff},
          {"s_eff_nm", p.s_eff / nanometre},
          {"delta", p.delta},
          {"sigma", p.sigma},
          {"amplitude", p.amplitude},
          {"uncertainties",
           {{"s_eff", fit.uncertainty(kSEff)},
            {"delta", fit.uncertainty(kDelta)},
            {"sigma", fit.uncertainty(kSigma)},
            {"amplitude", fit.uncertainty(kAmplitude)}}},
          {"covariance", covariance_json(fit)},
          {"residual_norm", fit.residual_norm},
          {"gradient_norm", fit.gradient_norm},
          {"converged", fit.converged},
          {"iterations", fit.iterations},
          {"orders_used", fit.orders_used},
          {"orders", order_list}};
}

double number_field(const json& doc, const char* key, const std::string& source) {
  if (!doc.contains(key) || !doc[key].is_number()) {
    throw DomainError(source + ": missing numeric field '" + key + "'");
  }
  return doc[key].get<double>();
}

SweepPoint point_from_fit_report(const json& doc, std::optional<double> velocity, const std::string& source,
                                 std::ostream& err) {
  if (doc.value("command", "") != "fit") {
    throw DomainError(source + ": not a fit report");
  }
  SweepPoint p;
  p.velocity = velocity ? *velocity : number_field(doc, "velocity_mps", source);
  p.s_eff = number_field(doc, "s_eff", source);
  if (!doc.contains("uncertainties") || !doc["uncertainties"].is_object()) {
    throw DomainError(source + ": missing 'uncertainties'");
  }
  p.s_eff_uncertainty = number_field(doc["uncertainties"], "s_eff", source);
  if (!doc.value("converged", false)) {
    err << "warning: " << source << ": fit did not converge\n";
  }
  return p;
}

std::string file_name(const std::string& path) { return std::filesystem::path(path).filename().string(); }

std::string sibling_path(const std::string& output, const std::string& suffix) {
  std::filesystem::path p(output);
  p.replace_extension(suffix);
  return p.string();
}

std::vector<SweepPoint> load_sweep_points(const std::string& path) {
  const std::string text = read_text(path);
  if (std::filesystem::path(path).extension() != ".json") {
    return parse_sweep_points_csv(text, path);
  }
  const json doc = parse_report(text, path);
  if (doc.value("command", "") != "sweep" || !doc.contains("points") || !doc["points"].is_array()) {
    throw DomainError(path + ": not a sweep report");
  }
  std::vector<SweepPoint> points;
  for (const auto& item : doc["points"]) {
    points.push_back({number_field(item, "velocity_mps", path), number_field(item, "s_eff", path),
                      number_field(item, "s_eff_uncertainty", path)});
  }
  return points;
}

}  // namespace

int cmd_simulate(const SimulateOptions& options, std::ostream& err) {
  const RunConfig config = config_from(options.config);
  std::vector<MixtureComponent> mixture = config.mixture;
  if (!options.mixture.empty()) {
    json doc;
    try {
      doc = json::parse(read_text(options.mixture));
    } catch (const json::parse_error& e) {
      throw ConfigError("", options.mixture + ": " + e.what());
    }
    if (doc.is_object() && doc.contains("mixture") && doc.size() == 1) doc = doc["mixture"];
    mixture = parse_mixture(doc, config);
  }
  const double velocity = options.velocity.value_or(config.velocity);
  if (!(velocity > 0.0)) throw DomainError("--velocity must be positive");

  DetectorScan scan =
      synthesize_scan(mixture, velocity, config.grating, config.detector, options.seed, !options.no_noise);
  std::string names;
  for (const auto& c : mixture) names += (names.empty() ? "" : ",") + c.species.name();
  scan.metadata.species = names;
  write_text(options.output, format_scan_csv(scan));
  (void)err;
  return kSuccess;
}

int cmd_fit(const FitOptions& options, std::ostream& err) {
  const RunConfig config = config_from(options.config);
  const DetectorScan scan = parse_scan_csv(read_text(options.scan), options.scan);
  const double velocity = options.velocity ? *options.velocity : scan.metadata.velocity.value_or(config.velocity);
  if (!(velocity > 0.0)) throw DomainError("velocity must be positive");
  const Grating grating = scan.metadata.grating.value_or(config.grating);

  std::string species_name = options.species;
  if (species_name.empty()) {
    const std::string listed = scan.metadata.species.value_or("He");
    species_name = listed.substr(0, listed.find(','));
  }
  const Species species = config.find_species(species_name);
  const int max_order = options.max_order.value_or(config.max_order);
  if (max_order < 1) throw DomainError("--max-order must be >= 1");

  const double lambda = de_broglie_wavelength(species.mass(), velocity);
  const std::vector<OrderAngle> angles = diffraction_angles(lambda, grating, max_order);
  ExtractionSettings extraction{config.detector.angular_resolution_fwhm, config.window_fwhm, config.background};
  std::vector<OrderIntensity> orders = extract_order_intensities(scan, angles, extraction);
  std::vector<OrderIntensity> usable;
  for (const auto& o : orders) {
    if (!o.clipped) usable.push_back(o);
  }

  const FitResult fit = fit_order_intensities(usable, grating.period(), std::nullopt, config.solver);
  write_text(options.output, dump_report(fit_report(fit, orders, species.name(), velocity, grating.period())));
  if (!fit.converged) {
    err << "fit did not converge after " << fit.iterations << " iterations (report written)\n";
    return kNotConverged;
  }
  return kSuccess;
}

int cmd_sweep(const SweepOptions& options, std::ostream& err) {
  std::vector<SweepPoint> points;
  std::vector<std::string> sources;
  for (const auto& spec : options.points) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
      throw DomainError("--point expects VELOCITY:PATH, got '" + spec + "'");
    }
    double velocity = 0.0;
    try {
      std::size_t used = 0;
      velocity = std::stod(spec.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw DomainError("--point: bad velocity in '" + spec + "'");
    }
    const std::string path = spec.substr(colon + 1);
    points.push_back(point_from_fit_report(parse_report(read_text(path), path), velocity, path, err));
    sources.push_back(file_name(path));
  }
  if (!options.dir.empty()) {
    std::vector<std::filesystem::path> files;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(options.dir, ec)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    if (ec) throw IoError("cannot list directory '" + options.dir + "'");
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      const json doc = parse_report(read_text(f), f.string());
      if (doc.value("command", "") != "fit") continue;
      points.push_back(point_from_fit_report(doc, std::nullopt, f.string(), err));
      sources.push_back(f.filename().string());
    }
  }

  const SweepFit fit = velocity_sweep_regression(points);
  if (fit.slope_b > 0.0) {
    err << "warning: positive slope " << format_double(fit.slope_b)
        << "; s_eff is expected to grow with velocity\n";
  }

  json point_list = json::array();
  std::string plot = "inv_sqrt_v,s_eff,s_eff_err,model\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const SweepPoint& p = points[i];
    point_list.push_back({{"source", sources[i]},
                          {"velocity_mps", p.velocity},
                          {"s_eff", p.s_eff},
                          {"s_eff_uncertainty", p.s_eff_uncertainty},
                          {"residual", fit.residuals[i]}});
    plot += format_double(1.0 / std::sqrt(p.velocity)) + "," + format_double(p.s_eff) + "," +
            format_double(p.s_eff_uncertainty) + "," + format_double(fit.model(p.velocity)) + "\n";
  }
  const json report = {{"schema_version", kSchemaVersion},
                       {"command", "sweep"},
                       {"intercept_s", fit.intercept_s},
                       {"intercept_s_nm", fit.intercept_s / nanometre},
                       {"slope_b", fit.slope_b},
                       {"intercept_uncertainty", fit.intercept_uncertainty},
                       {"slope_uncertainty", fit.slope_uncertainty},
                       {"intercept_slope_covariance", fit.intercept_slope_covariance},
                       {"unit_weights", fit.unit_weights},
                       {"points", point_list},
                       {"residuals", fit.residuals}};
  write_text(options.output, dump_report(report));
  write_text(options.plot_csv.empty() ? sibling_path(options.output, ".plot.csv") : options.plot_csv, plot);
  if (!options.points_csv.empty()) write_text(options.points_csv, format_sweep_points_csv(points));
  return kSuccess;
}

int cmd_dimer(const DimerOptions& options, std::ostream& err) {
  const std::vector<SweepPoint> atom = load_sweep_points(options.atom);
  const std::vector<SweepPoint> dimer = load_sweep_points(options.dimer);
  const DimerResult result = dimer_mean_distance(atom, dimer);
  json per_velocity = json::array();
  for (const auto& p : result.per_velocity) {
    per_velocity.push_back({{"velocity_mps", p.velocity},
                            {"r_m", p.r},
                            {"r_angstrom", p.r / angstrom},
                            {"r_uncertainty_m", p.r_uncertainty},
                            {"negative", p.negative}});
  }
  if (result.negative_count > 0) {
    err << "warning: " << result.negative_count << " velocities give a negative size\n";
  }
  const json report = {{"schema_version", kSchemaVersion},
                       {"command", "dimer"},
                       {"r_mean_m", result.r_mean},
                       {"r_mean_angstrom", result.r_mean / angstrom},
                       {"r_uncertainty", result.r_uncertainty},
                       {"r_uncertainty_angstrom", result.r_uncertainty / angstrom},
                       {"negative_count", result.negative_count},
                       {"per_velocity", per_velocity}};
  write_text(options.output, dump_report(report));
  return kSuccess;
}

int cmd_massspec(const MassSpecOptions& options, std::ostream& err) {
  const RunConfig config = config_from(options.config);
  if (options.scan.empty() == options.peaks.empty()) {
    throw DomainError("give exactly one of --scan and --peaks");
  }
  AssignmentSettings settings = config.assignment;
  if (options.tolerance) settings.tolerance = *options.tolerance;
  if (options.max_order) settings.max_order = *options.max_order;
  if (options.max_cluster) settings.max_cluster = *options.max_cluster;

  std::vector<double> peaks;
  std::optional<double> reference;
  if (options.reference_angle_mrad) reference = *options.reference_angle_mrad * milliradian;
  if (!options.peaks.empty()) {
    peaks = parse_peak_list_csv(read_text(options.peaks), options.peaks);
  } else {
    const DetectorScan scan = parse_scan_csv(read_text(options.scan), options.scan);
    const double fwhm = config.detector.angular_resolution_fwhm;
    for (const double a : find_peaks(scan, fwhm, options.min_counts, fwhm)) {
      if (a > 0.0) peaks.push_back(a);
    }
    if (!reference && scan.metadata.velocity) {
      const Grating grating = scan.metadata.grating.value_or(config.grating);
      const double lambda = de_broglie_wavelength(constants::helium4_mass, *scan.metadata.velocity);
      reference = std::asin(lambda / grating.period());
    }
  }
  if (!reference) {
    throw DomainError("no reference angle: pass --reference-angle-mrad or a scan with velocity metadata");
  }

  const AssignmentReport result = assign_clusters(peaks, *reference, settings);
  json assignments = json::array();
  for (const auto& a : result.assigned) {
    assignments.push_back({{"peak_angle_mrad", a.peak_angle / milliradian},
                           {"cluster_size", a.cluster_size},
                           {"species", Species::cluster_of(helium4(), a.cluster_size).name()},
                           {"order", a.order},
                           {"relative_residual", a.relative_residual}});
  }
  json unassigned = json::array();
  for (const double a : result.unassigned_angles) unassigned.push_back(a / milliradian);
  if (!result.unassigned_angles.empty()) {
    err << result.unassigned_angles.size() << " peaks could not be assigned\n";
  }
  const json report = {{"schema_version", kSchemaVersion},
                       {"command", "massspec"},
                       {"reference_angle_mrad", *reference / milliradian},
                       {"tolerance", settings.tolerance},
                       {"max_cluster", settings.max_cluster},
                       {"max_order", settings.max_order},
                       {"assignments", assignments},
                       {"unassigned_count", result.unassigned_angles.size()},
                       {"unassigned_angles_mrad", unassigned}};
  write_text(options.output, dump_report(report));
  return kSuccess;
}

}  // namespace matterwave::cli
