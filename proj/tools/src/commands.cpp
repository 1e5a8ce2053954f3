#include "spfilter_cli/commands.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include <spfilter/experiments.hpp>
#include <spfilter/vtk.hpp>

namespace spf::cli {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_value(double value) {
  std::ostringstream out;
  out << value;
  return out.str();
}

std::ofstream open_output(const fs::path& path, CommandResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  result.files.push_back(path);
  return out;
}

fs::path prepare_output(const ExperimentConfig& config) {
  fs::path dir(config.output);
  fs::create_directories(dir);
  return dir;
}

Point zero_point(int dim) { return Point::Zero(dim); }

/// Box covering the field's support for each projection function.
Box projection_box(const std::string& function, int dim) {
  if (function == "unit") return make_box({0.0, 0.0}, {1.0, 1.0});
  if (function == "clamped") return symmetric_box(dim);
  Box box = symmetric_box(dim);
  box.lower.setConstant(-0.2);
  box.upper.setConstant(0.8);
  box.lower[0] = -0.8;
  box.upper[0] = 0.2;
  return box;
}

ScalarField projection_function(const std::string& function) {
  if (function == "unit") return corpus::clamped_sinusoid_unit;
  const bool clamped = function == "clamped";
  return [clamped](const Point& x) { return corpus::projection_sinusoid(x, clamped); };
}

void write_field(const fs::path& path, const DGSolver& solver, const DGState& state,
                 int subdivisions, CommandResult& result) {
  write_field_vtk(
      path.string(), solver.mesh(),
      [&](int e, const Point& reference) { return solver.evaluate(state, e, reference); }, "u",
      subdivisions);
  result.files.push_back(path);
}

struct AdvectionCase {
  std::string name;
  const Mesh* mesh = nullptr;
  VelocityField velocity;
  ScalarField initial;
  SpaceTimeField exact;
  int dim = 2;
};

using StateHook = std::function<void(const DGSolver&, const DGState&, int step)>;

RunSummary run_case(const AdvectionCase& c, const ExperimentConfig& config, bool filtered,
                    const fs::path& dir, CommandResult& result, const StateHook& hook = {}) {
  DGSolver solver(*c.mesh, c.velocity, make_solver_config(config, c.dim, filtered));
  for (const auto& warning : solver.warnings()) std::cerr << "warning: " << warning << '\n';

  const std::string tag = c.name + (filtered ? "_filtered" : "_unfiltered");
  auto on_step = [&](const DGState& state, const StepDiagnostics& row) {
    const bool boundary_step = row.step == 0 || row.step == config.n_steps;
    const bool periodic_snapshot =
        config.snapshot_every > 0 && row.step % config.snapshot_every == 0;
    if (boundary_step || periodic_snapshot) {
      write_field(dir / (tag + "_step" + std::to_string(row.step) + ".vtk"), solver, state,
                  config.vtk_subdivisions, result);
    }
    if (hook && boundary_step) hook(solver, state, row.step);
  };

  const auto start = Clock::now();
  RunResult run = solver.run(c.initial, c.exact, on_step);

  RunSummary summary;
  summary.name = c.name;
  summary.filtered = filtered;
  summary.steps = config.n_steps;
  summary.wall_time = seconds_since(start);
  summary.unconverged = run.unconverged_filters;
  summary.min_lattice_min = std::numeric_limits<double>::infinity();
  for (const auto& row : run.diagnostics) {
    summary.min_lattice_min = std::min(summary.min_lattice_min, row.lattice_min);
    if (row.lattice_min < -config.tolerance) ++summary.negative_steps;
    summary.total_flagged += row.n_flagged;
    summary.filter_iters += row.filter_iters;
    summary.gd_iters += row.gd_iters;
    summary.t_solver += row.t_solver;
    summary.t_filter += row.t_filter;
  }
  summary.final_l2_error = run.diagnostics.back().l2_error;

  auto out = open_output(dir / ("diagnostics_" + tag + ".csv"), result);
  write_diagnostics_csv(out, run.diagnostics);
  summary.diagnostics = std::move(run.diagnostics);
  return summary;
}

/// Filtered and/or unfiltered runs of one case, plus the summary table.
void run_pair(const AdvectionCase& c, const ExperimentConfig& config, const fs::path& dir,
              CommandResult& result, const StateHook& filtered_hook = {},
              const StateHook& unfiltered_hook = {}) {
  if (config.filter) result.runs.push_back(run_case(c, config, true, dir, result, filtered_hook));
  if (!config.filter || config.compare)
    result.runs.push_back(run_case(c, config, false, dir, result, unfiltered_hook));
}

/// summary.csv: one row per run. timing.csv: filter overhead per case,
/// (t_filtered_run - t_unfiltered_run) / t_unfiltered_run in percent.
void write_run_tables(const fs::path& dir, CommandResult& result) {
  auto summary = open_output(dir / "summary.csv", result);
  summary << "run,filtered,steps,final_l2_error,min_lattice_min,negative_steps,total_flagged,"
             "filter_iters,gd_iters,t_solver,t_filter,wall_time,unconverged\n";
  for (const auto& r : result.runs) {
    summary << r.name << ',' << (r.filtered ? 1 : 0) << ',' << r.steps << ',' << r.final_l2_error
            << ',' << r.min_lattice_min << ',' << r.negative_steps << ',' << r.total_flagged << ','
            << r.filter_iters << ',' << r.gd_iters << ',' << r.t_solver << ',' << r.t_filter << ','
            << r.wall_time << ',' << r.unconverged << '\n';
  }

  std::vector<std::string> names;
  for (const auto& r : result.runs)
    if (std::ranges::find(names, r.name) == names.end()) names.push_back(r.name);
  auto timing = open_output(dir / "timing.csv", result);
  timing << "run,t_filtered_run,t_unfiltered_run,percent_increase\n";
  for (const auto& name : names) {
    const RunSummary* filtered = nullptr;
    const RunSummary* unfiltered = nullptr;
    for (const auto& r : result.runs) {
      if (r.name != name) continue;
      (r.filtered ? filtered : unfiltered) = &r;
    }
    if (filtered == nullptr || unfiltered == nullptr) continue;
    timing << name << ',' << filtered->wall_time << ',' << unfiltered->wall_time << ','
           << 100.0 * (filtered->wall_time - unfiltered->wall_time) / unfiltered->wall_time
           << '\n';
  }
}

}  // namespace

Mesh make_experiment_mesh(const std::string& mesh_kind, const std::vector<int>& cells, int dim) {
  std::vector<int> counts(cells.begin(), cells.end());
  if (counts.empty()) counts.assign(dim, 1);
  if (static_cast<int>(counts.size()) == 1) counts.assign(dim, cells.front());
  if (static_cast<int>(counts.size()) != dim)
    throw std::invalid_argument("cells: expected " + std::to_string(dim) + " counts");
  const Box box = symmetric_box(dim);
  if (mesh_kind == "composite") {
    if (dim != 2) throw std::invalid_argument("composite mesh is two-dimensional");
    std::set<int> rows;
    for (int j = counts[1] / 4; j < (3 * counts[1] + 3) / 4; ++j) rows.insert(j);
    return make_composite_mesh(box, counts[0], counts[1], rows, true);
  }
  const ElementKind kind = element_kind_from_string(mesh_kind);
  if (dimension(kind) != dim)
    throw std::invalid_argument("mesh '" + mesh_kind + "' does not match dimension " +
                                std::to_string(dim));
  return make_structured_mesh(box, counts, kind, true);
}

SolverConfig make_solver_config(const ExperimentConfig& config, int dim, bool filtered) {
  SolverConfig solver;
  solver.dt = config.dt;
  solver.n_steps = config.n_steps;
  solver.order = config.order;
  solver.filter_enabled = filtered;
  solver.filter_config = default_filter_config(dim);
  solver.filter_config.tolerance = config.tolerance;
  solver.filter_config.max_iterations = config.max_filter_iterations;
  solver.filter_config.certify = config.certify;
  solver.filter_config.gd.seeds = config.seeds;
  if (config.c) solver.filter_config.gd.c = *config.c;
  if (config.gamma) solver.filter_config.gd.gamma = *config.gamma;
  return solver;
}

double evaluate_physical(const DGSolver& solver, const DGState& state, const Point& x) {
  const Mesh& mesh = solver.mesh();
  for (int e = 0; e < mesh.size(); ++e) {
    const auto& element = mesh.element(e);
    const Point reference = element.map.to_reference(x);
    const ReferenceElement ref(element.kind);
    if (ref.contains(reference, 1e-10)) return solver.evaluate(state, e, ref.clamp(reference));
  }
  throw std::out_of_range("evaluate_physical: point outside the mesh");
}

void write_diagnostics_csv(std::ostream& out, const std::vector<StepDiagnostics>& rows) {
  out << "step,time,l2_error,n_flagged,filter_iters,gd_iters,t_solver,t_filter,lattice_min\n";
  for (const auto& r : rows) {
    out << r.step << ',' << r.time << ',' << r.l2_error << ',' << r.n_flagged << ','
        << r.filter_iters << ',' << r.gd_iters << ',' << r.t_solver << ',' << r.t_filter << ','
        << r.lattice_min << '\n';
  }
}

CommandResult cmd_project(const ExperimentConfig& config) {
  config.validate();
  CommandResult result;
  const fs::path dir = prepare_output(config);

  for (int dim : config.dims) {
    const ElementKind kind = dim == 2 ? ElementKind::Quad : ElementKind::Hex;
    const int dense_points = dim == 2 ? 200 : 50;
    for (const auto& function : config.functions) {
      if (function == "unit" && dim != 2) continue;
      const Box box = projection_box(function, dim);
      const Mesh mesh = make_structured_mesh(box, std::vector<int>(dim, 1), kind, false);
      const ScalarField f = projection_function(function);
      const SpaceTimeField exact = [f](const Point& x, double) { return f(x); };

      for (int order : config.orders) {
        ExperimentConfig run_config = config;
        run_config.order = order;
        run_config.n_steps = 0;
        DGSolver solver(mesh, constant_velocity(zero_point(dim)),
                        make_solver_config(run_config, dim, true));
        const DGState unfiltered = solver.project(f);
        DGState filtered = unfiltered;
        const auto pass = solver.filter_state(filtered);

        const std::string stem = "project_" + function + "_" + std::to_string(dim) + "d_N" +
                                 std::to_string(order);
        for (bool is_filtered : {false, true}) {
          const DGState& state = is_filtered ? filtered : unfiltered;
          ProjectionRow row;
          row.dim = dim;
          row.function = function;
          row.order = order;
          row.filtered = is_filtered;
          row.l2_error = solver.l2_error(state, exact, 10);
          row.lattice_min = solver.lattice_min(state);
          row.dense_min = dense_grid_minimum(solver.element_basis(0), state.coeffs[0], dense_points);
          if (is_filtered) {
            row.n_flagged = pass.flagged;
            row.filter_iters = pass.iterations;
            row.gd_iters = pass.gd_iterations;
          }
          result.projection.push_back(row);
          write_field(dir / (stem + (is_filtered ? "_filtered.vtk" : "_unfiltered.vtk")), solver,
                      state, config.vtk_subdivisions, result);
        }
      }
    }
  }

  auto out = open_output(dir / "project_l2.csv", result);
  out << "dim,function,order,filtered,l2_error,lattice_min,dense_min,n_flagged,filter_iters,"
         "gd_iters\n";
  for (const auto& r : result.projection) {
    out << r.dim << ',' << r.function << ',' << r.order << ',' << (r.filtered ? 1 : 0) << ','
        << r.l2_error << ',' << r.lattice_min << ',' << r.dense_min << ',' << r.n_flagged << ','
        << r.filter_iters << ',' << r.gd_iters << '\n';
  }
  return result;
}

CommandResult cmd_advect(const ExperimentConfig& config) {
  config.validate();
  const int dim = config.experiment == Experiment::Advect3d ? 3 : 2;
  CommandResult result;
  const fs::path dir = prepare_output(config);
  const std::string mesh_kind = config.mesh.empty() ? (dim == 2 ? "composite" : "hex")
                                                    : config.mesh.front();
  const Mesh mesh = make_experiment_mesh(mesh_kind, config.cells, dim);
  const Point a = Point::Ones(dim);

  AdvectionCase c;
  c.name = mesh_kind;
  c.mesh = &mesh;
  c.velocity = constant_velocity(a);
  c.initial = corpus::cosine_well;
  c.exact = periodic_translate(corpus::cosine_well, a, mesh.box());
  c.dim = dim;
  run_pair(c, config, dir, result);
  write_run_tables(dir, result);
  return result;
}

CommandResult cmd_rotate(const ExperimentConfig& config) {
  config.validate();
  CommandResult result;
  const fs::path dir = prepare_output(config);
  const std::string mesh_kind = config.mesh.empty() ? "quad" : config.mesh.front();
  const Mesh mesh = make_experiment_mesh(mesh_kind, config.cells, 2);

  const Point center = zero_point(2);
  const double omega = 2.0 * std::numbers::pi;  // one revolution per unit time
  AdvectionCase c;
  c.name = "rotate";
  c.mesh = &mesh;
  c.velocity = rotation_velocity(center, omega);
  c.initial = corpus::solid_body;
  c.exact = [omega](const Point& x, double t) {
    const double angle = -omega * t;
    const double cs = std::cos(angle), sn = std::sin(angle);
    return corpus::solid_body(make_point({cs * x[0] - sn * x[1], sn * x[0] + cs * x[1]}));
  };
  c.dim = 2;

  // Slice columns: position along the line, then values at the first and last step.
  struct Slice {
    bool vertical;  // x fixed
    double at;
    std::vector<Point> points;
    Eigen::MatrixXd values;  // points x (initial, final)
  };
  auto make_slices = [&] {
    std::vector<Slice> slices;
    auto add = [&](bool vertical, double at) {
      Slice s{vertical, at, {}, Eigen::MatrixXd::Zero(config.slice_points, 2)};
      const Box& box = mesh.box();
      const int axis = vertical ? 1 : 0;
      for (int i = 0; i < config.slice_points; ++i) {
        const double t = static_cast<double>(i) / (config.slice_points - 1);
        const double along = box.lower[axis] + t * (box.upper[axis] - box.lower[axis]);
        s.points.push_back(vertical ? make_point({at, along}) : make_point({along, at}));
      }
      slices.push_back(std::move(s));
    };
    for (double x : config.slice_x) add(true, x);
    for (double y : config.slice_y) add(false, y);
    return slices;
  };
  auto hook_for = [&](std::vector<Slice>& slices) -> StateHook {
    return [&slices, steps = config.n_steps](const DGSolver& solver, const DGState& state,
                                                  int step) {
      const int column = step == 0 ? 0 : 1;
      for (auto& s : slices) {
        for (std::size_t i = 0; i < s.points.size(); ++i)
          s.values(static_cast<Eigen::Index>(i), column) =
              evaluate_physical(solver, state, s.points[i]);
        if (steps == 0) s.values.col(1) = s.values.col(0);
      }
    };
  };
  auto write_slices = [&](const std::vector<Slice>& slices, const std::string& tag) {
    const double final_time = config.n_steps * config.dt;
    for (const auto& s : slices) {
      const std::string name = std::string("slice_") + (s.vertical ? "x" : "y") +
                               format_value(s.at) + "_" + tag + ".csv";
      auto out = open_output(dir / name, result);
      out << "x,y,u_initial,u_final,u_exact_final\n";
      for (std::size_t i = 0; i < s.points.size(); ++i) {
        const auto& p = s.points[i];
        out << p[0] << ',' << p[1] << ',' << s.values(static_cast<Eigen::Index>(i), 0) << ','
            << s.values(static_cast<Eigen::Index>(i), 1) << ',' << c.exact(p, final_time) << '\n';
      }
    }
  };

  auto filtered_slices = make_slices();
  auto unfiltered_slices = make_slices();
  run_pair(c, config, dir, result, hook_for(filtered_slices), hook_for(unfiltered_slices));
  if (config.filter) write_slices(filtered_slices, "filtered");
  if (!config.filter || config.compare) write_slices(unfiltered_slices, "unfiltered");
  write_run_tables(dir, result);
  return result;
}

CommandResult cmd_torus3d(const ExperimentConfig& config) {
  config.validate();
  CommandResult result;
  const fs::path dir = prepare_output(config);
  const Point a = Point::Ones(3);
  const std::vector<std::string> kinds =
      config.mesh.empty() ? std::vector<std::string>{"hex", "tet"} : config.mesh;
  for (const auto& kind : kinds) {
    const Mesh mesh = make_experiment_mesh(kind, config.cells, 3);
    AdvectionCase c;
    c.name = kind;
    c.mesh = &mesh;
    c.velocity = constant_velocity(a);
    c.initial = corpus::torus;
    c.exact = periodic_translate(corpus::torus, a, mesh.box());
    c.dim = 3;
    run_pair(c, config, dir, result);
  }
  write_run_tables(dir, result);
  return result;
}

CommandResult cmd_tune(const ExperimentConfig& config) {
  config.validate();
  CommandResult result;
  const fs::path dir = prepare_output(config);
  for (int dim : config.dims) {
    TuneOptions options;
    options.base = default_line_search(dim);
    options.base.seeds = config.seeds;
    options.aggregation = config.aggregation == "max" ? Aggregation::Max : Aggregation::Sum;
    const auto functions = dim == 2 ? corpus::tune_functions_2d() : corpus::tune_functions_3d();
    TuneResult tuned = tune(functions, config.orders, config.grid_count, options);

    const std::string suffix = std::to_string(dim) + "d.csv";
    {
      auto out = open_output(dir / ("tune_" + suffix), result);
      write_tune_csv(out, tuned);
    }
    {
      auto out = open_output(dir / ("tune_cells_" + suffix), result);
      out << "c,gamma,niter,err\n";
      for (const auto& cell : tuned.cells)
        out << cell.c << ',' << cell.gamma << ',' << cell.niter << ',' << cell.err << '\n';
    }
    {
      auto out = open_output(dir / ("tune_selected_" + suffix), result);
      out << "c,gamma\n";
      for (const auto& [c, gamma] : tuned.selected) out << c << ',' << gamma << '\n';
    }
    result.tuning.emplace_back(dim, std::move(tuned));
  }
  return result;
}

CommandResult run_experiment(const ExperimentConfig& config, const std::string& command_line) {
  const auto wall_start = std::chrono::system_clock::now();
  const auto start = Clock::now();
  CommandResult result;
  switch (config.experiment) {
    case Experiment::Project: result = cmd_project(config); break;
    case Experiment::Advect2d:
    case Experiment::Advect3d: result = cmd_advect(config); break;
    case Experiment::Rotate: result = cmd_rotate(config); break;
    case Experiment::Torus3d: result = cmd_torus3d(config); break;
    case Experiment::Tune: result = cmd_tune(config); break;
  }
  const double elapsed = seconds_since(start);

  auto iso_time = [](std::chrono::system_clock::time_point t) {
    const std::time_t raw = std::chrono::system_clock::to_time_t(t);
    std::tm utc{};
    gmtime_r(&raw, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return std::string(buffer);
  };

  nlohmann::ordered_json manifest;
  manifest["experiment"] = std::string(to_string(config.experiment));
  manifest["command_line"] = command_line;
  nlohmann::ordered_json settings = nlohmann::ordered_json::object();
  for (const auto& [key, value] : config_settings(config)) settings[key] = value;
  manifest["config"] = settings;
  manifest["versions"] = {
      {"spfilter", SPF_VERSION},
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                    "." + std::to_string(EIGEN_MINOR_VERSION)},
      {"compiler", __VERSION__},
      {"cxx_standard", __cplusplus},
  };
  manifest["started_utc"] = iso_time(wall_start);
  manifest["wall_clock_seconds"] = elapsed;
  std::vector<std::string> files;
  for (const auto& f : result.files) files.push_back(f.filename().string());
  manifest["files"] = files;

  const fs::path dir(config.output);
  fs::create_directories(dir);
  const fs::path manifest_path = dir / "manifest.json";
  std::ofstream out(manifest_path);
  if (!out) throw std::runtime_error("cannot write " + manifest_path.string());
  out << manifest.dump(2) << '\n';
  result.files.push_back(manifest_path);

  // Plain config echo that can be passed back through --config.
  const fs::path echo_path = dir / "config.txt";
  std::ofstream echo(echo_path);
  for (const auto& [key, value] : config_settings(config)) echo << key << " = " << value << '\n';
  result.files.push_back(echo_path);
  return result;
}

}  // namespace spf::cli
