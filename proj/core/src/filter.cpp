#include "spfilter/filter.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>

#include "spfilter/polynomials.hpp"
#include "spfilter/quadrature.hpp"

namespace spf {

ConstraintFamily ConstraintFamily::lower_bound(double minimum) {
  ConstraintFamily family;
  family.scale = -1.0;
  family.bound = -minimum;
  return family;
}

ConstraintFamily ConstraintFamily::upper_bound(double maximum) {
  ConstraintFamily family;
  family.scale = 1.0;
  family.bound = maximum;
  return family;
}

Point ConstraintFamily::bound_gradient_at(const Point& x) const {
  if (!bound_fn) return Point::Zero(x.size());
  if (!bound_gradient_fn) throw Error("ConstraintFamily: spatially varying bound needs a gradient");
  return bound_gradient_fn(x);
}

void FilterConfig::validate() const {
  if (!(tolerance > 0.0)) throw Error("filter: tolerance must be positive");
  if (max_iterations < 0) throw Error("filter: max_iterations must be non-negative");
  if (stagnation_window < 1) throw Error("filter: stagnation_window must be positive");
  gd.validate();
}

FilterConfig default_filter_config(int dim) {
  FilterConfig config;
  config.gd = default_line_search(dim);
  return config;
}

double signed_distance(const OrthoBasis& basis, const Coeffs& v, const ConstraintFamily& family,
                       const Point& x) {
  if (!basis.element().contains(x, 1e-12)) throw Error("signed_distance: point outside element");
  const Eigen::VectorXd psi = basis.evaluate(x);
  const double lambda = 1.0 / (std::abs(family.scale) * psi.norm());
  return lambda * (family.bound_at(x) - family.scale * psi.dot(v));
}

HyperplaneProjection project_onto_hyperplane(const OrthoBasis& basis, const Coeffs& v,
                                             const ConstraintFamily& family, const Point& x_star) {
  HyperplaneProjection result{v, false};
  const Eigen::VectorXd psi = basis.evaluate(x_star);
  const double lambda = 1.0 / (std::abs(family.scale) * psi.norm());
  const double s = lambda * (family.bound_at(x_star) - family.scale * psi.dot(v));
  if (s >= 0.0) return result;
  result.v.noalias() += (s * lambda * family.scale) * psi;
  result.applied = true;
  return result;
}

SignedDistanceObjective::SignedDistanceObjective(const OrthoBasis& basis, const Coeffs& v,
                                                 const ConstraintFamily& family)
    : basis_(basis),
      v_(v),
      family_(family),
      psi_(basis.size()),
      dpsi_(basis.size(), basis.dim()) {}

double SignedDistanceObjective::value(const Point& x) const {
  basis_.evaluate(x, psi_);
  const double norm = std::abs(family_.scale) * psi_.norm();
  return (family_.bound_at(x) - family_.scale * psi_.dot(v_)) / norm;
}

double SignedDistanceObjective::value_and_gradient(const Point& x, Point& gradient) const {
  basis_.evaluate_with_gradient(x, psi_, dpsi_);
  const double k = psi_.norm();
  const double a = std::abs(family_.scale);
  const double residual = family_.bound_at(x) - family_.scale * psi_.dot(v_);
  const Point d_residual =
      family_.bound_gradient_at(x) - family_.scale * (dpsi_.transpose() * v_);
  const Point dk = (dpsi_.transpose() * psi_) / k;
  gradient = d_residual / (a * k) - (residual / (a * k * k)) * dk;
  return residual / (a * k);
}

ElementFilter::ElementFilter(std::shared_ptr<const OrthoBasis> basis,
                             std::vector<ConstraintFamily> families, FilterConfig config)
    : ElementFilter(basis, build_lattice(*basis), std::move(families), std::move(config)) {}

ElementFilter::ElementFilter(std::shared_ptr<const OrthoBasis> basis, Lattice lattice,
                             std::vector<ConstraintFamily> families, FilterConfig config)
    : basis_(std::move(basis)),
      lattice_(std::move(lattice)),
      families_(std::move(families)),
      config_(std::move(config)) {
  if (!basis_) throw Error("ElementFilter: null basis");
  if (families_.empty()) throw Error("ElementFilter: no constraint families");
  if (lattice_.points.empty()) throw Error("ElementFilter: empty lattice");
  config_.validate();
  for (const auto& family : families_) {
    if (!(family.scale != 0.0) || !std::isfinite(family.scale)) {
      throw Error("ElementFilter: constraint scale must be finite and nonzero");
    }
  }

  const auto n_points = static_cast<Eigen::Index>(lattice_.points.size());
  lattice_table_.resize(n_points, basis_->size());
  Eigen::VectorXd psi(basis_->size());
  for (Eigen::Index l = 0; l < n_points; ++l) {
    basis_->evaluate(lattice_.points[l], psi);
    lattice_table_.row(l) = psi.transpose();
  }
  lattice_norms_ = lattice_table_.rowwise().norm();

  double max_norm = lattice_norms_.maxCoeff();
  for (const Point& vertex : basis_->element().vertices()) {
    max_norm = std::max(max_norm, basis_->evaluate(vertex).norm());
  }

  if (basis_->kind() != ElementKind::Segment) build_certification_lines();

  for (const auto& family : families_) {
    Eigen::VectorXd bounds(n_points);
    for (Eigen::Index l = 0; l < n_points; ++l) bounds[l] = family.bound_at(lattice_.points[l]);
    lattice_bounds_.push_back(std::move(bounds));
    const double lambda_floor = 1.0 / (std::abs(family.scale) * max_norm);
    thresholds_.push_back(config_.tolerance * std::min(1.0, lambda_floor));
  }
}

Eigen::VectorXd ElementFilter::lattice_values(const Coeffs& v) const { return lattice_table_ * v; }

Eigen::VectorXd ElementFilter::lattice_signed_distance(const Coeffs& v, int family) const {
  const ConstraintFamily& f = families_[family];
  return ((lattice_bounds_[family] - f.scale * (lattice_table_ * v)).array() /
          (std::abs(f.scale) * lattice_norms_.array()))
      .matrix();
}

bool ElementFilter::violates(const Coeffs& v) const {
  for (int f = 0; f < static_cast<int>(families_.size()); ++f) {
    if (lattice_signed_distance(v, f).minCoeff() < -thresholds_[f]) return true;
  }
  return false;
}

void ElementFilter::build_certification_lines() {
  const QuadratureRule& rule = basis_->quadrature();
  const int q = rule.count;
  const int d = basis_->dim();
  const int m = 2 * q + 3;
  // Per direction: both endpoints, the quadrature nodes (in the coordinates
  // the rule is a tensor grid of) and the midpoints between neighbors.
  std::vector<std::vector<double>> nodes(d);
  int stride = 1;
  for (int axis = 0; axis < d; ++axis, stride *= q) {
    std::vector<double> coarse{-1.0};
    for (int i = 0; i < q; ++i) coarse.push_back(rule.collapsed[i * stride][axis]);
    coarse.push_back(1.0);
    for (std::size_t i = 0; i + 1 < coarse.size(); ++i) {
      nodes[axis].push_back(coarse[i]);
      nodes[axis].push_back(0.5 * (coarse[i] + coarse[i + 1]));
    }
    nodes[axis].push_back(1.0);
  }

  auto to_reference = [&](const Point& c) {
    return is_simplex(basis_->kind()) ? collapsed_to_reference(basis_->kind(), c) : c;
  };
  // Grid lines vary one collapsed coordinate; they are straight in
  // reference space because the collapse is affine in each coordinate.
  int others = 1;
  for (int k = 1; k < d; ++k) others *= m;
  for (int axis = 0; axis < d; ++axis) {
    for (int index = 0; index < others; ++index) {
      Point c(d);
      int rest = index;
      for (int k = 0; k < d; ++k) {
        if (k == axis) continue;
        c[k] = nodes[k][rest % m];
        rest /= m;
      }
      c[axis] = -1.0;
      const Point lo = to_reference(c);
      c[axis] = 1.0;
      const Point hi = to_reference(c);
      if ((hi - lo).norm() < 1e-12) continue;
      lines_.push_back({0.5 * (lo + hi), 0.5 * (hi - lo)});
    }
  }

  const int n = basis_->order();
  const Rule1D gauss = gauss_legendre(n + 1);
  line_fit_.resize(n + 1, n + 1);
  std::vector<double> psi1(n + 1);
  for (int k = 0; k <= n; ++k) {
    jacobi_normalized(0.0, 0.0, gauss.nodes[k], psi1);
    for (int j = 0; j <= n; ++j) line_fit_(j, k) = gauss.weights[k] * psi1[j];
  }
  line_table_.resize(static_cast<Eigen::Index>(lines_.size()) * (n + 1), basis_->size());
  Eigen::VectorXd psi(basis_->size());
  for (std::size_t l = 0; l < lines_.size(); ++l) {
    for (int k = 0; k <= n; ++k) {
      basis_->evaluate(basis_->element().clamp(lines_[l].mid + gauss.nodes[k] * lines_[l].half),
                       psi);
      line_table_.row(static_cast<Eigen::Index>(l) * (n + 1) + k) = psi.transpose();
    }
  }
}

namespace {

// Lower bound of a series over [-1,1] from |psi_k| <= sqrt((2k+1)/2).
double series_floor(const Eigen::VectorXd& c) {
  double spread = 0.0;
  for (Eigen::Index k = 1; k < c.size(); ++k) spread += std::abs(c[k]) * std::sqrt(k + 0.5);
  return c[0] * std::sqrt(0.5) - spread;
}

}  // namespace

MinResult ElementFilter::certify(const Coeffs& v, int family) const {
  const ConstraintFamily& f = families_[family];
  const ReferenceElement& element = basis_->element();
  const int n = basis_->order();
  const int d = basis_->dim();
  SignedDistanceObjective objective(*basis_, v, f);
  Eigen::VectorXd psi(basis_->size());
  auto residual = [&](const Point& x) {
    basis_->evaluate(x, psi);
    return f.bound - f.scale * psi.dot(v);
  };

  MinResult best;
  best.value = std::numeric_limits<double>::infinity();
  auto consider = [&](const Point& x) {
    const double value = objective.value(x);
    if (value < best.value) {
      best.value = value;
      best.x_star = x;
      best.seed_point = x;
    }
  };

  // Local minima of q = l - L u along every grid line. The smallest of
  // them (negative or not) seed the refinement below: a dip between two
  // grid lines shows up as a small positive minimum on both. Candidates
  // closer than `radius` to a better one are dropped so that every valley
  // gets its own seed.
  const std::size_t keep = 16 * static_cast<std::size_t>(d);
  const double radius = 2.0 / (basis_->quad_count() + 1);
  std::vector<std::pair<double, Point>> candidates;
  auto cutoff = [&] {
    return candidates.size() < keep ? std::numeric_limits<double>::infinity()
                                    : candidates.back().first;
  };
  auto offer = [&](double value, const Point& x) {
    for (const auto& [other_value, other] : candidates) {
      if (other_value <= value && (other - x).norm() < radius) return;
    }
    std::erase_if(candidates, [&](const auto& c) { return (c.second - x).norm() < radius; });
    const auto at =
        std::ranges::upper_bound(candidates, value, {}, &std::pair<double, Point>::first);
    candidates.insert(at, {value, x});
    if (candidates.size() > keep) candidates.pop_back();
  };
  const Eigen::VectorXd samples = f.bound - f.scale * (line_table_ * v).array();
  for (std::size_t l = 0; l < lines_.size(); ++l) {
    const Eigen::VectorXd c =
        line_fit_ * samples.segment(static_cast<Eigen::Index>(l) * (n + 1), n + 1);
    if (series_floor(c) >= cutoff()) continue;
    const LegendreSeries series(c);
    std::vector<double> stations = series.derivative().real_roots(-1.0, 1.0);
    stations.push_back(-1.0);
    stations.push_back(1.0);
    for (double t : stations) {
      const double value = series(t);
      if (value < cutoff()) offer(value, element.clamp(lines_[l].mid + t * lines_[l].half));
    }
  }
  if (candidates.empty()) return best;

  // Exact coordinate descent on q: one sweep from every candidate, then
  // full descent from the best two.
  const double level = is_simplex(basis_->kind()) ? (d == 2 ? 0.0 : -1.0) : 0.0;
  // On tensor elements q restricted to an axis line is already a Legendre
  // series: contract the other directions' 1D modes into the coefficients.
  const bool tensor = is_tensor_product(basis_->kind());
  std::array<std::vector<double>, 3> phi;
  for (auto& values : phi) values.resize(n + 1);
  Eigen::VectorXd line(n + 1);
  auto restrict_to_axis = [&](const Point& x, int axis) {
    for (int k = 0; k < d; ++k) {
      if (k != axis) jacobi_normalized(0.0, 0.0, x[k], phi[k]);
    }
    line.setZero();
    for (int j = 0; j < basis_->size(); ++j) {
      const auto& mode = basis_->mode(j);
      double weight = v[j];
      for (int k = 0; k < d; ++k) {
        if (k != axis) weight *= phi[k][mode[k]];
      }
      line[mode[axis]] += weight;
    }
    line *= -f.scale;
    line[0] += f.bound * std::sqrt(2.0);
    return LegendreSeries(line);
  };
  auto sweep = [&](Point& x, double& qx) {
    for (int axis = 0; axis < d; ++axis) {
      double lo = -1.0;
      double hi = 1.0;
      if (is_simplex(basis_->kind())) hi = level - (x.sum() - x[axis]);
      if (hi - lo < 1e-14) continue;
      const double centre = 0.5 * (lo + hi);
      const double half = 0.5 * (hi - lo);
      const LegendreSeries series =
          tensor ? restrict_to_axis(x, axis)
                 : LegendreSeries::fit(
                       [&](double t) {
                         Point y = x;
                         y[axis] = centre + t * half;
                         return residual(element.clamp(y));
                       },
                       n);
      const MinResult m = minimize_1d(series);
      if (m.value < qx) {
        x[axis] = centre + m.x_star[0] * half;
        x = element.clamp(x);
        qx = residual(x);
      }
    }
  };
  for (auto& [q, x] : candidates) {
    consider(x);
    q = residual(x);
    sweep(x, q);
  }
  std::ranges::sort(candidates, {}, &std::pair<double, Point>::first);
  const std::size_t refine = tensor ? candidates.size() : std::min<std::size_t>(2, candidates.size());
  for (std::size_t i = 0; i < refine; ++i) {
    auto& [q, x] = candidates[i];
    for (int pass = 0; pass < 20; ++pass) {
      const double before = q;
      sweep(x, q);
      if (before - q <= 1e-15 * (1.0 + std::abs(q))) break;
    }
  }
  for (const auto& [q, x] : candidates) consider(x);
  if (best.value >= 0.0) return best;

  // Short descent on s from the refined point.
  LineSearchParams polish = config_.gd;
  polish.max_gd_iters = std::min(polish.max_gd_iters, 50);
  const MinResult polished = gd_backtracking(objective, best.x_star, polish, element);
  best.gd_iters = polished.gd_iters;
  if (polished.value < best.value) {
    best.value = polished.value;
    best.x_star = polished.x_star;
  }
  return best;
}

MinResult ElementFilter::minimize(const Coeffs& v, int family, bool thorough) const {
  const ConstraintFamily& f = families_[family];
  SignedDistanceObjective objective(*basis_, v, f);

  if (basis_->kind() == ElementKind::Segment && f.constant_bound()) {
    // s = q / (|scale| sqrt(K)) with q = l - scale u, K = |psi|^2; its
    // critical points are the roots of R = K q' - q K' / 2.
    const int n = basis_->order();
    Eigen::VectorXd psi(basis_->size());
    Eigen::MatrixXd dpsi(basis_->size(), 1);
    auto r = [&](double t) {
      basis_->evaluate_with_gradient(make_point({t}), psi, dpsi);
      const double q = f.bound - f.scale * psi.dot(v);
      const double dq = -f.scale * dpsi.col(0).dot(v);
      return psi.squaredNorm() * dq - q * psi.dot(dpsi.col(0));
    };
    const LegendreSeries series = LegendreSeries::fit(r, 3 * n);
    const std::vector<double> roots = series.real_roots(-1.0, 1.0);
    MinResult best = minimize_over_candidates(
        [&](double t) { return objective.value(make_point({t})); }, roots, -1.0, 1.0);
    const Eigen::VectorXd s = lattice_signed_distance(v, family);
    Eigen::Index arg = 0;
    if (s.minCoeff(&arg) < best.value) {
      best.value = s[arg];
      best.x_star = lattice_.points[arg];
    }
    best.seed_point = best.x_star;
    return best;
  }

  const Eigen::VectorXd s = lattice_signed_distance(v, family);
  MinResult best = global_min(objective, lattice_.points, s, config_.gd, basis_->element());
  if (!thorough || lines_.empty() || !f.constant_bound()) return best;

  MinResult extra = certify(v, family);
  if (extra.value < best.value) {
    const int iters = best.gd_iters;
    best = extra;
    best.gd_iters += iters;
  } else {
    best.gd_iters += extra.gd_iters;
  }
  return best;
}

std::pair<Coeffs, FilterReport> ElementFilter::apply(const Coeffs& input) const {
  const auto start = std::chrono::steady_clock::now();
  if (input.size() != basis_->size()) throw Error("filter: coefficient vector has wrong length");
  if (!input.allFinite()) throw Error("filter: non-finite coefficients");

  FilterReport report;
  const int n_families = static_cast<int>(families_.size());
  Coeffs v = input;
  Coeffs best_v = input;
  double best_worst = -std::numeric_limits<double>::infinity();
  int small_steps = 0;
  bool done = false;

  for (int iteration = 0;; ++iteration) {
    int target_family = -1;
    MinResult target;
    double worst = std::numeric_limits<double>::infinity();
    bool feasible = true;
    // The quick pass descends from the worst lattice point; the certifying
    // pass only adds the line search on top of it.
    auto search = [&](bool certifying) {
      for (int f = 0; f < n_families; ++f) {
        if (certifying && !families_[f].constant_bound()) continue;
        MinResult m = certifying ? certify(v, f) : minimize(v, f, false);
        report.gd_iterations_total += m.gd_iters;
        worst = std::min(worst, m.value);
        if (m.value < -thresholds_[f]) {
          feasible = false;
          if (target_family < 0 || m.value < target.value) {
            target_family = f;
            target = std::move(m);
          }
        }
      }
    };
    search(false);
    if (feasible && config_.certify && basis_->kind() != ElementKind::Segment) search(true);

    if (worst > best_worst || feasible) {
      best_worst = worst;
      best_v = v;
    }
    if (feasible) {
      report.converged = true;
      done = true;
    } else if (iteration >= config_.max_iterations || small_steps >= config_.stagnation_window) {
      report.converged = false;
      done = true;
    }
    if (done) {
      report.final_min_s = best_worst;
      break;
    }

    HyperplaneProjection step =
        project_onto_hyperplane(*basis_, v, families_[target_family], target.x_star);
    small_steps = std::abs(target.value) < config_.stagnation_step ? small_steps + 1 : 0;
    v = std::move(step.v);
    ++report.iterations;
  }

  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {report.converged ? v : best_v, report};
}

std::pair<Coeffs, FilterReport> filter_element(const OrthoBasis& basis, const Coeffs& v,
                                               const std::vector<ConstraintFamily>& families,
                                               const FilterConfig& config) {
  const std::shared_ptr<const OrthoBasis> view(&basis, [](const OrthoBasis*) {});
  return ElementFilter(view, families, config).apply(v);
}

std::vector<int> flag_elements(const std::vector<Coeffs>& state,
                               const std::vector<const ElementFilter*>& filters) {
  if (state.size() != filters.size()) throw Error("flag_elements: one filter per element expected");
  std::vector<int> flagged;
  for (std::size_t e = 0; e < state.size(); ++e) {
    if (filters[e]->violates(state[e])) flagged.push_back(static_cast<int>(e));
  }
  return flagged;
}

}  // namespace spf
