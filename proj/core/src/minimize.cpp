#include "spfilter/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace spf {

void LineSearchParams::validate() const {
  if (!(c > 0.0 && c < 1.0)) throw Error("line search: c must lie in (0,1)");
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error("line search: gamma must lie in (0,1)");
  if (max_gd_iters < 0) throw Error("line search: max_gd_iters must be non-negative");
  if (!(grad_tolerance >= 0.0)) throw Error("line search: grad_tolerance must be non-negative");
  if (seeds < 1) throw Error("line search: need at least one seed");
}

LineSearchParams default_line_search(int dim) {
  LineSearchParams params;
  if (dim >= 3) {
    params.c = 0.2;
    params.gamma = 0.7;
  }
  return params;
}

MinResult minimize_over_candidates(const std::function<double(double)>& objective,
                                   const std::vector<double>& candidates, double lo, double hi) {
  MinResult best;
  best.value = std::numeric_limits<double>::infinity();
  auto consider = [&](double x) {
    const double fx = objective(x);
    if (fx < best.value) {
      best.value = fx;
      best.x_star = make_point({x});
    }
  };
  consider(lo);
  consider(hi);
  for (double x : candidates) consider(std::clamp(x, lo, hi));
  best.seed_point = best.x_star;
  return best;
}

MinResult minimize_1d(const LegendreSeries& objective, double lo, double hi) {
  if (!(lo <= hi) || lo < -1.0 || hi > 1.0) throw Error("minimize_1d: interval must lie in [-1,1]");
  if (!objective.coefficients().allFinite()) throw Error("minimize_1d: non-finite coefficients");
  std::vector<double> critical;
  if (objective.degree() >= 1) critical = objective.derivative().real_roots(lo, hi);
  return minimize_over_candidates([&](double x) { return objective(x); }, critical, lo, hi);
}

namespace {

void require_finite(double value, const Point& gradient, const Point& x) {
  if (!std::isfinite(value) || !gradient.allFinite()) {
    std::string where;
    for (Eigen::Index k = 0; k < x.size(); ++k) where += (k ? ", " : "") + std::to_string(x[k]);
    throw Error("gd_backtracking: objective is not finite at (" + where + ")");
  }
}

}  // namespace

MinResult gd_backtracking(const Objective& objective, const Point& seed,
                          const LineSearchParams& params, const ReferenceElement& element) {
  params.validate();
  if (!element.contains(seed, 1e-12)) throw Error("gd_backtracking: seed outside element");

  MinResult result;
  result.seed_point = seed;
  Point x = element.clamp(seed);
  Point grad;
  double fx = objective.value_and_gradient(x, grad);
  require_finite(fx, grad, x);

  int accepted = 0;
  while (accepted < params.max_gd_iters) {
    const Point direction = element.restrict_direction(x, -grad);
    const double norm = direction.norm();
    if (norm <= params.grad_tolerance) break;
    const double slope = grad.dot(direction);
    if (!(slope < 0.0)) break;

    double step = params.gamma;
    bool found = false;
    Point trial;
    double f_trial = 0.0;
    while (step * norm >= 1e-14) {
      trial = element.clamp(x + step * direction);
      f_trial = objective.value(trial);
      if (!std::isfinite(f_trial)) require_finite(f_trial, grad, trial);
      if (f_trial <= fx + step * params.c * slope) {
        found = true;
        break;
      }
      step *= params.c;
    }
    if (!found) break;

    x = trial;
    fx = objective.value_and_gradient(x, grad);
    require_finite(fx, grad, x);
    ++accepted;
  }

  result.x_star = x;
  result.value = fx;
  result.gd_iters = accepted;
  return result;
}

MinResult global_min(const Objective& objective, const std::vector<Point>& lattice,
                     const LineSearchParams& params, const ReferenceElement& element) {
  Eigen::VectorXd values(static_cast<Eigen::Index>(lattice.size()));
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    values[static_cast<Eigen::Index>(i)] = objective.value(lattice[i]);
  }
  return global_min(objective, lattice, values, params, element);
}

MinResult global_min(const Objective& objective, const std::vector<Point>& lattice,
                     const Eigen::VectorXd& lattice_values, const LineSearchParams& params,
                     const ReferenceElement& element) {
  if (lattice.empty()) throw Error("global_min: empty lattice");
  if (static_cast<std::size_t>(lattice_values.size()) != lattice.size()) {
    throw Error("global_min: one value per lattice point expected");
  }
  const int seeds = std::min<int>(params.seeds, static_cast<int>(lattice.size()));
  std::vector<int> order(lattice.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + seeds, order.end(), [&](int a, int b) {
    return lattice_values[a] < lattice_values[b] ||
           (lattice_values[a] == lattice_values[b] && a < b);
  });
  order.resize(seeds);
  return multi_start_min(objective, lattice, lattice_values, order, params, element);
}

MinResult multi_start_min(const Objective& objective, const std::vector<Point>& lattice,
                          const Eigen::VectorXd& lattice_values, const std::vector<int>& seeds,
                          const LineSearchParams& params, const ReferenceElement& element) {
  if (lattice.empty()) throw Error("multi_start_min: empty lattice");
  if (static_cast<std::size_t>(lattice_values.size()) != lattice.size()) {
    throw Error("multi_start_min: one value per lattice point expected");
  }
  Eigen::Index arg = 0;
  lattice_values.minCoeff(&arg);

  MinResult best;
  best.x_star = lattice[arg];
  best.seed_point = best.x_star;
  best.value = lattice_values[arg];
  int total_iters = 0;
  for (int seed : seeds) {
    const MinResult local = gd_backtracking(objective, lattice[seed], params, element);
    total_iters += local.gd_iters;
    if (local.value < best.value) {
      best.x_star = local.x_star;
      best.value = local.value;
      best.seed_point = local.seed_point;
    }
  }
  best.gd_iters = total_iters;
  return best;
}

}  // namespace spf
