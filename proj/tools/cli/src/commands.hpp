#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace matterwave::cli {

struct SimulateOptions {
  std::string config;
  std::string mixture;
  std::optional<double> velocity;
  std::uint64_t seed = 0;
  bool no_noise = false;
  std::string output;
};

struct FitOptions {
  std::string scan;
  std::string config;
  std::optional<double> velocity;
  std::string species;
  std::optional<int> max_order;
  std::string output;
};

struct SweepOptions {
  std::vector<std::string> points;  // "velocity:path"
  std::string dir;
  std::string output;
  std::string plot_csv;
  std::string points_csv;
};

struct DimerOptions {
  std::string atom;
  std::string dimer;
  std::string output;
};

struct MassSpecOptions {
  std::string scan;
  std::string peaks;
  std::string config;
  std::optional<double> reference_angle_mrad;
  std::optional<double> tolerance;
  std::optional<int> max_order;
  std::optional<int> max_cluster;
  double min_counts = 20.0;
  std::string output;
};

int cmd_simulate(const SimulateOptions& options, std::ostream& err);
int cmd_fit(const FitOptions& options, std::ostream& err);
int cmd_sweep(const SweepOptions& options, std::ostream& err);
int cmd_dimer(const DimerOptions& options, std::ostream& err);
int cmd_massspec(const MassSpecOptions& options, std::ostream& err);

}  // namespace matterwave::cli
