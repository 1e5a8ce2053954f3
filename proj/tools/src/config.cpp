#include "spfilter_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <type_traits>

namespace spf::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw std::invalid_argument("bad value for '" + key + "': " + text);
  return value;
}

template <class T>
std::vector<T> parse_numbers(const std::string& key, const std::string& text) {
  std::vector<T> values;
  for (const auto& item : split_list(text)) values.push_back(parse_number<T>(key, item));
  return values;
}

bool parse_bool(const std::string& key, const std::string& text) {
  std::string lower = text;
  std::ranges::transform(lower, lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "true" || lower == "1" || lower == "yes" || lower == "on") return true;
  if (lower == "false" || lower == "0" || lower == "no" || lower == "off") return false;
  throw std::invalid_argument("bad boolean for '" + key + "': " + text);
}

std::string number(double value) {
  char buffer[32];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, end);
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) out += number(values[i]);
    else if constexpr (std::is_integral_v<T>) out += std::to_string(values[i]);
    else out += values[i];
  }
  return out;
}

}  // namespace

std::string_view to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::Project: return "project";
    case Experiment::Advect2d: return "advect2d";
    case Experiment::Advect3d: return "advect3d";
    case Experiment::Rotate: return "rotate";
    case Experiment::Torus3d: return "torus3d";
    case Experiment::Tune: return "tune";
  }
  return "unknown";
}

Experiment experiment_from_string(std::string_view name) {
  for (auto e : {Experiment::Project, Experiment::Advect2d, Experiment::Advect3d,
                 Experiment::Rotate, Experiment::Torus3d, Experiment::Tune})
    if (to_string(e) == name) return e;
  throw std::invalid_argument("unknown experiment: " + std::string(name));
}

ExperimentConfig default_config(Experiment experiment) {
  ExperimentConfig config;
  config.experiment = experiment;
  switch (experiment) {
    case Experiment::Project:
      config.orders = {2, 3, 4, 5, 6, 7, 8};
      config.dims = {2};
      config.functions = {"unit", "clamped", "smooth"};
      break;
    case Experiment::Advect2d:
      config.mesh = {"composite"};
      config.cells = {4, 4};
      config.n_steps = 500;
      break;
    case Experiment::Advect3d:
      config.mesh = {"hex"};
      config.cells = {4, 4, 4};
      config.n_steps = 100;
      break;
    case Experiment::Rotate:
      config.mesh = {"quad"};
      config.cells = {8, 6};
      config.n_steps = 200;
      config.slice_x = {-0.5, 0.0};
      config.slice_y = {-0.5, 0.5};
      break;
    case Experiment::Torus3d:
      config.mesh = {"hex", "tet"};
      config.cells = {3, 3, 3};
      config.n_steps = 100;
      break;
    case Experiment::Tune:
      config.orders = {2, 4, 6, 8};
      config.dims = {2, 3};
      config.compare = false;
      break;
  }
  return config;
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
  };
  require(order >= 1, "order must be >= 1");
  require(std::ranges::all_of(orders, [](int n) { return n >= 1; }), "orders must be >= 1");
  require(std::ranges::all_of(dims, [](int d) { return d == 2 || d == 3; }), "dims must be 2 or 3");
  require(dt > 0.0, "dt must be positive");
  require(n_steps >= 0, "steps must be >= 0");
  require(std::ranges::all_of(cells, [](int n) { return n >= 1; }), "cells must be >= 1");
  require(tolerance > 0.0, "tolerance must be positive");
  require(!c || (*c > 0.0 && *c < 1.0), "c must lie in (0, 1)");
  require(!gamma || *gamma > 0.0, "gamma must be positive");
  require(seeds >= 1, "seeds must be >= 1");
  require(max_filter_iterations >= 1, "max_filter_iterations must be >= 1");
  require(grid_count >= 2, "grid_count must be >= 2");
  require(aggregation == "sum" || aggregation == "max", "aggregation must be sum or max");
  require(slice_points >= 2, "slice_points must be >= 2");
  require(snapshot_every >= 0, "snapshot_every must be >= 0");
  require(vtk_subdivisions >= 1, "vtk_subdivisions must be >= 1");
  require(!output.empty(), "output must not be empty");
  for (const auto& f : functions)
    require(f == "unit" || f == "clamped" || f == "smooth", "functions: unit, clamped or smooth");
  for (const auto& m : mesh)
    require(m == "composite" || m == "quad" || m == "tri" || m == "hex" || m == "tet",
            "mesh: composite, quad, tri, hex or tet");
}

void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value) {
  if (key == "experiment") {
    const auto experiment = experiment_from_string(value);
    if (experiment != config.experiment) config = default_config(experiment);
  } else if (key == "order") {
    config.order = parse_number<int>(key, value);
  } else if (key == "orders") {
    config.orders = parse_numbers<int>(key, value);
  } else if (key == "dims") {
    config.dims = parse_numbers<int>(key, value);
  } else if (key == "functions") {
    config.functions = split_list(value);
  } else if (key == "dt") {
    config.dt = parse_number<double>(key, value);
  } else if (key == "steps") {
    config.n_steps = parse_number<int>(key, value);
  } else if (key == "mesh") {
    config.mesh = split_list(value);
  } else if (key == "cells") {
    config.cells = parse_numbers<int>(key, value);
  } else if (key == "filter") {
    config.filter = parse_bool(key, value);
  } else if (key == "compare") {
    config.compare = parse_bool(key, value);
  } else if (key == "tolerance") {
    config.tolerance = parse_number<double>(key, value);
  } else if (key == "c") {
    config.c = parse_number<double>(key, value);
  } else if (key == "gamma") {
    config.gamma = parse_number<double>(key, value);
  } else if (key == "seeds") {
    config.seeds = parse_number<int>(key, value);
  } else if (key == "certify") {
    config.certify = parse_bool(key, value);
  } else if (key == "max_filter_iterations") {
    config.max_filter_iterations = parse_number<int>(key, value);
  } else if (key == "grid_count") {
    config.grid_count = parse_number<int>(key, value);
  } else if (key == "aggregation") {
    config.aggregation = value;
  } else if (key == "slice_x") {
    config.slice_x = parse_numbers<double>(key, value);
  } else if (key == "slice_y") {
    config.slice_y = parse_numbers<double>(key, value);
  } else if (key == "slice_points") {
    config.slice_points = parse_number<int>(key, value);
  } else if (key == "snapshot_every") {
    config.snapshot_every = parse_number<int>(key, value);
  } else if (key == "vtk_subdivisions") {
    config.vtk_subdivisions = parse_number<int>(key, value);
  } else if (key == "output") {
    config.output = value;
  } else {
    throw std::invalid_argument("unknown config key: " + key);
  }
}

std::map<std::string, std::string> parse_settings(std::string_view text) {
  std::map<std::string, std::string> settings;
  std::istringstream stream{std::string(text)};
  std::string line;
  int number_of_line = 0;
  while (std::getline(stream, line)) {
    ++number_of_line;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("line " + std::to_string(number_of_line) + ": expected key = value");
    auto key = trim(std::string_view(line).substr(0, eq));
    if (key.empty())
      throw std::invalid_argument("line " + std::to_string(number_of_line) + ": empty key");
    settings[key] = trim(std::string_view(line).substr(eq + 1));
  }
  return settings;
}

std::map<std::string, std::string> read_settings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_settings(text.str());
}

std::vector<std::pair<std::string, std::string>> config_settings(const ExperimentConfig& config) {
  std::vector<std::pair<std::string, std::string>> out = {
      {"experiment", std::string(to_string(config.experiment))},
      {"order", std::to_string(config.order)},
      {"orders", join(config.orders)},
      {"dims", join(config.dims)},
      {"functions", join(config.functions)},
      {"dt", number(config.dt)},
      {"steps", std::to_string(config.n_steps)},
      {"mesh", join(config.mesh)},
      {"cells", join(config.cells)},
      {"filter", config.filter ? "true" : "false"},
      {"compare", config.compare ? "true" : "false"},
      {"tolerance", number(config.tolerance)},
  };
  if (config.c) out.emplace_back("c", number(*config.c));
  if (config.gamma) out.emplace_back("gamma", number(*config.gamma));
  out.insert(out.end(), {
      {"seeds", std::to_string(config.seeds)},
      {"certify", config.certify ? "true" : "false"},
      {"max_filter_iterations", std::to_string(config.max_filter_iterations)},
      {"grid_count", std::to_string(config.grid_count)},
      {"aggregation", config.aggregation},
      {"slice_x", join(config.slice_x)},
      {"slice_y", join(config.slice_y)},
      {"slice_points", std::to_string(config.slice_points)},
      {"snapshot_every", std::to_string(config.snapshot_every)},
      {"vtk_subdivisions", std::to_string(config.vtk_subdivisions)},
      {"output", config.output},
  });
  return out;
}

}  // namespace spf::cli
