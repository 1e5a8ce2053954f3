#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <spfilter/dgsolver.hpp>
#include <spfilter/mesh.hpp>
#include <spfilter/tuner.hpp>

#include "spfilter_cli/config.hpp"

namespace spf::cli {

/// Totals for one time-dependent run.
struct RunSummary {
  std::string name;
  bool filtered = false;
  int steps = 0;
  double final_l2_error = 0.0;
  double min_lattice_min = 0.0;
  int negative_steps = 0;  // steps whose lattice min is below -tolerance
  long total_flagged = 0;
  long filter_iters = 0;
  long gd_iters = 0;
  double t_solver = 0.0;
  double t_filter = 0.0;
  double wall_time = 0.0;
  int unconverged = 0;
  std::vector<StepDiagnostics> diagnostics;
};

/// One row of the projection table.
struct ProjectionRow {
  int dim = 2;
  std::string function;
  int order = 0;
  bool filtered = false;
  double l2_error = 0.0;
  double lattice_min = 0.0;
  double dense_min = 0.0;
  int n_flagged = 0;
  long filter_iters = 0;
  long gd_iters = 0;
};

struct CommandResult {
  std::vector<std::filesystem::path> files;
  std::vector<RunSummary> runs;
  std::vector<ProjectionRow> projection;
  std::vector<std::pair<int, TuneResult>> tuning;  // keyed by dimension
};

/// Physical domain, mesh and data of a built-in experiment.
Mesh make_experiment_mesh(const std::string& mesh_kind, const std::vector<int>& cells, int dim);

/// Solver settings derived from an experiment config.
SolverConfig make_solver_config(const ExperimentConfig& config, int dim, bool filtered);

/// Value of the discrete field at a physical point (first element that
/// contains it). Throws if no element does.
double evaluate_physical(const DGSolver& solver, const DGState& state, const Point& x);

/// Columns: step, time, l2_error, n_flagged, filter_iters, gd_iters, t_solver, t_filter, lattice_min.
void write_diagnostics_csv(std::ostream& out, const std::vector<StepDiagnostics>& rows);

CommandResult cmd_project(const ExperimentConfig& config);
CommandResult cmd_advect(const ExperimentConfig& config);  // advect2d and advect3d
CommandResult cmd_rotate(const ExperimentConfig& config);
CommandResult cmd_torus3d(const ExperimentConfig& config);
CommandResult cmd_tune(const ExperimentConfig& config);

/// Dispatches on config.experiment, then writes manifest.json (config echo,
/// versions, timings and the list of produced files) into config.output.
CommandResult run_experiment(const ExperimentConfig& config, const std::string& command_line = {});

}  // namespace spf::cli
