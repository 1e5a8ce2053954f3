#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spf::cli {

enum class Experiment { Project, Advect2d, Advect3d, Rotate, Torus3d, Tune };

std::string_view to_string(Experiment experiment);
Experiment experiment_from_string(std::string_view name);

/// Settings for one experiment run. Every field can be set from a flat
/// `key = value` file; see `apply_setting` for the key names.
struct ExperimentConfig {
  Experiment experiment = Experiment::Project;

  int order = 4;
  std::vector<int> orders;  // project and tune sweeps
  std::vector<int> dims;    // project and tune: 2 and/or 3
  std::vector<std::string> functions;  // project: clamped, smooth, unit

  double dt = 1e-3;
  int n_steps = 100;

  /// composite, quad, tri, hex or tet; torus3d accepts a list ("hex,tet").
  std::vector<std::string> mesh;
  std::vector<int> cells;

  bool filter = true;
  /// Also run without the filter (advection experiments) for comparison.
  bool compare = true;

  double tolerance = 1e-7;
  std::optional<double> c;
  std::optional<double> gamma;
  int seeds = 1;
  bool certify = true;
  int max_filter_iterations = 5000;

  int grid_count = 9;  // tune: samples per parameter
  std::string aggregation = "sum";

  std::vector<double> slice_x;  // rotate: vertical slices
  std::vector<double> slice_y;  // rotate: horizontal slices
  int slice_points = 201;

  int snapshot_every = 0;  // 0 writes only the first and last step
  int vtk_subdivisions = 4;

  std::string output = "spfilter_out";

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

/// Defaults matching the desk-scale version of each experiment.
ExperimentConfig default_config(Experiment experiment);

/// Sets one key. Throws std::invalid_argument for unknown keys or bad values.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Reads `key = value` lines; `#` starts a comment, blank lines are skipped.
std::map<std::string, std::string> read_settings(const std::string& path);
std::map<std::string, std::string> parse_settings(std::string_view text);

/// Settings in file order of `apply_setting` keys, for echoing and re-running.
std::vector<std::pair<std::string, std::string>> config_settings(const ExperimentConfig& config);

}  // namespace spf::cli
