#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spfilter_cli/commands.hpp"
#include "spfilter_cli/config.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::string> output;
  bool no_filter = false;
  std::optional<int> order;
  std::optional<double> dt;
  std::optional<int> steps;
  std::optional<double> tol;
  std::optional<double> c;
  std::optional<double> gamma;
  std::vector<std::string> settings;
};

void add_common_options(CLI::App& sub, Overrides& o) {
  sub.add_option("--config", o.config_path, "Flat key = value configuration file")
      ->check(CLI::ExistingFile);
  sub.add_option("--output", o.output, "Output directory");
  sub.add_flag("--no-filter", o.no_filter, "Run without the filter only");
  sub.add_option("--order", o.order, "Polynomial order (a single-entry sweep for project/tune)");
  sub.add_option("--dt", o.dt, "Time step");
  sub.add_option("--steps", o.steps, "Number of time steps");
  sub.add_option("--tol", o.tol, "Filter tolerance (numerical zero)");
  sub.add_option("--c", o.c, "Line-search parameter c");
  sub.add_option("--gamma", o.gamma, "Line-search initial step gamma");
  sub.add_option("--set", o.settings, "Extra key=value setting (repeatable)");
}

spf::cli::ExperimentConfig build_config(spf::cli::Experiment experiment, const Overrides& o) {
  using namespace spf::cli;
  ExperimentConfig config = default_config(experiment);
  if (!o.config_path.empty()) {
    auto settings = read_settings(o.config_path);
    if (auto it = settings.find("experiment"); it != settings.end()) {
      if (experiment_from_string(it->second) != experiment)
        throw std::invalid_argument("config file is for experiment '" + it->second + "'");
      settings.erase(it);
    }
    for (const auto& [key, value] : settings) apply_setting(config, key, value);
  }
  for (const auto& setting : o.settings) {
    const auto eq = setting.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value: " + setting);
    const auto parsed = parse_settings(setting);
    for (const auto& [key, value] : parsed) {
      if (key == "experiment") throw std::invalid_argument("--set cannot change the experiment");
      apply_setting(config, key, value);
    }
  }
  if (o.output) config.output = *o.output;
  if (o.no_filter) config.filter = false;
  if (o.order) {
    config.order = *o.order;
    if (experiment == Experiment::Project || experiment == Experiment::Tune)
      config.orders = {*o.order};
  }
  if (o.dt) config.dt = *o.dt;
  if (o.steps) config.n_steps = *o.steps;
  if (o.tol) config.tolerance = *o.tol;
  if (o.c) config.c = *o.c;
  if (o.gamma) config.gamma = *o.gamma;
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace spf::cli;
  CLI::App app{"Structure-preserving filter experiments"};
  app.require_subcommand(1);

  Overrides overrides;
  const std::vector<std::pair<Experiment, std::string>> commands = {
      {Experiment::Project, "Projection of clamped sinusoids over an order sweep"},
      {Experiment::Advect2d, "Constant-velocity advection on a 2D periodic mesh"},
      {Experiment::Advect3d, "Constant-velocity advection on a 3D periodic mesh"},
      {Experiment::Rotate, "Solid-body rotation with slice extraction"},
      {Experiment::Torus3d, "Torus initial state advected on hex and tet meshes"},
      {Experiment::Tune, "Grid search for the line-search parameters c and gamma"},
  };
  std::optional<Experiment> chosen;
  for (const auto& [experiment, description] : commands) {
    auto* sub = app.add_subcommand(std::string(to_string(experiment)), description);
    add_common_options(*sub, overrides);
    sub->callback([&chosen, experiment = experiment] { chosen = experiment; });
  }

  CLI11_PARSE(app, argc, argv);

  std::string command_line;
  for (int i = 0; i < argc; ++i) command_line += (i ? " " : "") + std::string(argv[i]);

  try {
    const ExperimentConfig config = build_config(*chosen, overrides);
    const CommandResult result = run_experiment(config, command_line);
    for (const auto& run : result.runs) {
      std::cout << run.name << (run.filtered ? " filtered" : " unfiltered")
                << ": min lattice value " << run.min_lattice_min << ", final L2 error "
                << run.final_l2_error << ", flagged " << run.total_flagged << ", wall "
                << run.wall_time << " s\n";
    }
    std::cout << "wrote " << result.files.size() << " files to " << config.output << '\n';
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 1;
  }
  return 0;
}
