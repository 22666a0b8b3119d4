#include "matterwave/cli/app.hpp"

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "matterwave/cli/config.hpp"
#include "matterwave/cli/io.hpp"
#include "matterwave/errors.hpp"

namespace matterwave::cli {

namespace {

const std::string kFooter = std::string("Reports carry schema_version ") + kSchemaVersion + ".\n" +
                            "Exit codes: 0 success, 1 I/O error, 2 invalid input or insufficient data, "
                            "3 fit did not converge.";

CLI::App* subcommand(CLI::App& app, const std::string& name, const std::string& description) {
  CLI::App* sub = app.add_subcommand(name, description);
  sub->footer(kFooter);
  return sub;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Matter-wave grating diffraction: simulate scans and fit order intensities.", "matterwave"};
  app.footer(kFooter);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("matterwave 1.0.0, schema_version ") + kSchemaVersion);

  SimulateOptions sim;
  CLI::App* simulate = subcommand(app, "simulate", "Synthesize a detector scan CSV.");
  simulate->add_option("--config", sim.config, "JSON run configuration");
  simulate->add_option("--mixture", sim.mixture, "JSON mixture list overriding the config");
  simulate->add_option("--velocity", sim.velocity, "Beam velocity in m/s");
  simulate->add_option("--seed", sim.seed, "Noise seed")->capture_default_str();
  simulate->add_flag("--no-noise", sim.no_noise, "Round the expected counts instead of drawing Poisson noise");
  simulate->add_option("--output,-o", sim.output, "Scan CSV to write")->required();

  FitOptions fit;
  CLI::App* fit_cmd = subcommand(app, "fit", "Extract order intensities from a scan and fit them.");
  fit_cmd->add_option("scan", fit.scan, "Scan CSV")->required();
  fit_cmd->add_option("--config", fit.config, "JSON run configuration");
  fit_cmd->add_option("--velocity", fit.velocity, "Beam velocity in m/s (default: scan metadata)");
  fit_cmd->add_option("--species", fit.species, "Species whose orders are fitted (default: first in scan)");
  fit_cmd->add_option("--max-order", fit.max_order, "Highest |n| extracted");
  fit_cmd->add_option("--output,-o", fit.output, "JSON report to write")->required();

  SweepOptions sweep;
  CLI::App* sweep_cmd = subcommand(app, "sweep", "Regress fitted s_eff against 1/sqrt(v).");
  sweep_cmd->add_option("--point", sweep.points, "VELOCITY:FIT_REPORT, repeatable");
  sweep_cmd->add_option("--dir", sweep.dir, "Directory of fit reports");
  sweep_cmd->add_option("--output,-o", sweep.output, "JSON report to write")->required();
  sweep_cmd->add_option("--plot-csv", sweep.plot_csv, "Plot CSV (default: <output>.plot.csv)");
  sweep_cmd->add_option("--points-csv", sweep.points_csv, "Also write the sweep points as CSV");

  DimerOptions dimer;
  CLI::App* dimer_cmd = subcommand(app, "dimer", "Dimer size from atom and dimer sweeps.");
  dimer_cmd->add_option("--atom", dimer.atom, "Atom sweep points (CSV or sweep report)")->required();
  dimer_cmd->add_option("--dimer", dimer.dimer, "Dimer sweep points (CSV or sweep report)")->required();
  dimer_cmd->add_option("--output,-o", dimer.output, "JSON report to write")->required();

  MassSpecOptions ms;
  CLI::App* ms_cmd = subcommand(app, "massspec", "Assign diffraction peaks to cluster sizes.");
  auto* ms_scan = ms_cmd->add_option("--scan", ms.scan, "Scan CSV");
  ms_cmd->add_option("--peaks", ms.peaks, "Peak list CSV (angle_mrad)")->excludes(ms_scan);
  ms_cmd->add_option("--config", ms.config, "JSON run configuration");
  ms_cmd->add_option("--reference-angle-mrad", ms.reference_angle_mrad, "First-order angle of the monomer");
  ms_cmd->add_option("--tolerance", ms.tolerance, "Relative assignment tolerance");
  ms_cmd->add_option("--max-order", ms.max_order, "Highest order considered");
  ms_cmd->add_option("--max-cluster", ms.max_cluster, "Largest cluster considered");
  ms_cmd->add_option("--min-counts", ms.min_counts, "Peak threshold for --scan")->capture_default_str();
  ms_cmd->add_option("--output,-o", ms.output, "JSON report to write")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInvalidInput;
  }

  try {
    if (*simulate) return cmd_simulate(sim, err);
    if (*fit_cmd) return cmd_fit(fit, err);
    if (*sweep_cmd) return cmd_sweep(sweep, err);
    if (*dimer_cmd) return cmd_dimer(dimer, err);
    if (*ms_cmd) return cmd_massspec(ms, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const InsufficientDataError& e) {
    err << "error: insufficient data: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kInvalidInput;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace matterwave::cli
