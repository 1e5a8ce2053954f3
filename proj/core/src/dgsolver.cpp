#include "spfilter/dgsolver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "spfilter/geometry.hpp"
#include "spfilter/quadrature.hpp"

namespace spf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Quadrature on a face given its reference-space vertices. Weights sum to 1
/// (fractions of the face measure).
struct FaceRule {
  std::vector<Point> points;
  std::vector<double> weights;
};

FaceRule face_rule(const std::vector<Point>& verts, int count) {
  FaceRule rule;
  switch (verts.size()) {
    case 1:
      rule.points = {verts[0]};
      rule.weights = {1.0};
      break;
    case 2: {
      const Rule1D g = gauss_legendre(count);
      for (Eigen::Index q = 0; q < g.nodes.size(); ++q) {
        rule.points.push_back(verts[0] + 0.5 * (g.nodes[q] + 1.0) * (verts[1] - verts[0]));
        rule.weights.push_back(0.5 * g.weights[q]);
      }
      break;
    }
    case 3: {
      const QuadratureRule tri = make_quadrature(ElementKind::Tri, count);
      for (std::size_t q = 0; q < tri.points.size(); ++q) {
        const double l1 = 0.5 * (tri.points[q][0] + 1.0);
        const double l2 = 0.5 * (tri.points[q][1] + 1.0);
        rule.points.push_back((1.0 - l1 - l2) * verts[0] + l1 * verts[1] + l2 * verts[2]);
        rule.weights.push_back(0.5 * tri.weights[q]);
      }
      break;
    }
    case 4: {
      const Rule1D g = gauss_legendre(count);
      for (Eigen::Index j = 0; j < g.nodes.size(); ++j) {
        for (Eigen::Index i = 0; i < g.nodes.size(); ++i) {
          rule.points.push_back(verts[0] + 0.5 * (g.nodes[i] + 1.0) * (verts[1] - verts[0]) +
                                0.5 * (g.nodes[j] + 1.0) * (verts[3] - verts[0]));
          rule.weights.push_back(0.25 * g.weights[i] * g.weights[j]);
        }
      }
      break;
    }
    default:
      throw Error("face_rule: unsupported face");
  }
  return rule;
}

}  // namespace

VelocityField constant_velocity(const Point& a) {
  return [a](const Point&) { return a; };
}

VelocityField rotation_velocity(const Point& center, double angular_speed) {
  if (center.size() != 2) throw Error("rotation_velocity: center must be 2D");
  return [center, angular_speed](const Point& x) {
    return make_point({-angular_speed * (x[1] - center[1]), angular_speed * (x[0] - center[0])});
  };
}

SpaceTimeField periodic_translate(std::function<double(const Point&)> u0, Point a, Box box) {
  return [u0 = std::move(u0), a = std::move(a), box = std::move(box)](const Point& x, double t) {
    Point y = x - t * a;
    const Point extent = box.extent();
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      y[k] = box.lower[k] + std::fmod(std::fmod(y[k] - box.lower[k], extent[k]) + extent[k],
                                      extent[k]);
    }
    return u0(y);
  };
}

void SolverConfig::validate() const {
  if (!(dt > 0.0)) throw Error("solver: dt must be positive");
  if (n_steps < 0) throw Error("solver: n_steps must be non-negative");
  if (order < 0) throw Error("solver: order must be non-negative");
  if (error_points < 1) throw Error("solver: error_points must be positive");
  filter_config.validate();
}

DGSolver::DGSolver(const Mesh& mesh, VelocityField velocity, SolverConfig config)
    : mesh_(mesh), config_(std::move(config)) {
  config_.validate();
  if (mesh_.size() == 0) throw Error("solver: empty mesh");
  for (ElementKind kind : mesh_.kinds()) {
    auto basis = std::make_shared<const OrthoBasis>(kind, config_.order, config_.quad_count);
    bases_[kind] = basis;
    filters_[kind] = std::make_shared<const ElementFilter>(basis, config_.families,
                                                           config_.filter_config);
  }
  build_operators(velocity);
}

void DGSolver::build_operators(const VelocityField& velocity) {
  const int d = mesh_.dim();
  double max_speed = 0.0;
  operators_.resize(mesh_.size());

  for (int e = 0; e < mesh_.size(); ++e) {
    const MeshElement& el = mesh_.element(e);
    const OrthoBasis& b = *bases_.at(el.kind);
    const double det = std::abs(el.map.determinant());
    const Eigen::MatrixXd& jinv = el.map.inverse_jacobian();
    const auto& qp = b.quad_points();
    const Eigen::Index nq = static_cast<Eigen::Index>(qp.size());

    // Volume: sum_q w_q u_q grad_xi psi_i . (J^-1 a_q); |det J| cancels the mass matrix.
    Eigen::MatrixXd flux_dir(d, nq);
    for (Eigen::Index q = 0; q < nq; ++q) {
      const Point a = velocity(el.map.to_physical(qp[q]));
      max_speed = std::max(max_speed, a.norm());
      flux_dir.col(q) = b.quad_weights()[q] * (jinv * a);
    }
    Eigen::MatrixXd weighted = Eigen::MatrixXd::Zero(b.size(), nq);
    for (int k = 0; k < d; ++k) {
      weighted += b.vandermonde_gradient(k) * flux_dir.row(k).asDiagonal();
    }
    ElementOperator op;
    op.self = weighted * b.vandermonde().transpose();

    const auto& ref_vertices = b.element().vertices();
    const auto& faces = b.element().faces();
    for (int f = 0; f < mesh_.face_count(e); ++f) {
      std::vector<Point> fv;
      for (int id : faces[f]) fv.push_back(ref_vertices[id]);
      const FaceRule rule = face_rule(fv, b.quad_count());
      const Point normal = mesh_.face_normal(e, f);
      const double measure = mesh_.face_measure(e, f);
      const FaceLink& link = mesh_.face(e, f);
      const OrthoBasis* nb_basis =
          link.is_boundary() ? nullptr : bases_.at(mesh_.element(link.neighbor).kind).get();

      Eigen::MatrixXd coupling;
      if (nb_basis) coupling = Eigen::MatrixXd::Zero(b.size(), nb_basis->size());
      Eigen::VectorXd psi(b.size());
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        b.evaluate(rule.points[q], psi);
        const Point x = el.map.to_physical(rule.points[q]);
        const double an = velocity(x).dot(normal);
        const double w = rule.weights[q] * measure / det;
        if (an >= 0.0) {
          op.self.noalias() -= (w * an) * psi * psi.transpose();
        } else if (nb_basis) {
          const MeshElement& nb = mesh_.element(link.neighbor);
          const Point xi = nb_basis->element().clamp(nb.map.to_reference(x + link.shift));
          coupling.noalias() -= (w * an) * psi * nb_basis->evaluate(xi).transpose();
        }
      }
      if (nb_basis && coupling.norm() > 0.0) op.couplings.push_back({link.neighbor, coupling});
    }
    operators_[e] = std::move(op);
  }

  const double h = mesh_.min_edge_length();
  const double limit = h / (std::max(max_speed, 1e-300) * (2.0 * config_.order + 1.0));
  if (config_.dt > limit) {
    std::ostringstream msg;
    msg << "dt = " << config_.dt << " exceeds the CFL estimate " << limit;
    warnings_.push_back(msg.str());
  }
}

DGState DGSolver::project(const ScalarField& f) const {
  DGState state;
  state.coeffs.reserve(mesh_.size());
  for (int e = 0; e < mesh_.size(); ++e) {
    const MeshElement& el = mesh_.element(e);
    state.coeffs.push_back(spf::project(*bases_.at(el.kind),
                                        [&](const Point& xi) { return f(el.map.to_physical(xi)); }));
  }
  return state;
}

std::vector<Coeffs> DGSolver::rhs(const std::vector<Coeffs>& v) const {
  if (static_cast<int>(v.size()) != mesh_.size()) throw Error("rhs: one coefficient vector per element");
  std::vector<Coeffs> out(v.size());
  for (int e = 0; e < mesh_.size(); ++e) {
    const ElementOperator& op = operators_[e];
    out[e].noalias() = op.self * v[e];
    for (const auto& c : op.couplings) out[e].noalias() += c.matrix * v[c.neighbor];
  }
  return out;
}

void DGSolver::step_rk4(DGState& state, double dt) const {
  const auto& v = state.coeffs;
  const std::size_t n = v.size();
  auto axpy = [&](const std::vector<Coeffs>& k, double h) {
    std::vector<Coeffs> out(n);
    for (std::size_t e = 0; e < n; ++e) out[e] = v[e] + h * k[e];
    return out;
  };
  const auto k1 = rhs(v);
  const auto k2 = rhs(axpy(k1, 0.5 * dt));
  const auto k3 = rhs(axpy(k2, 0.5 * dt));
  const auto k4 = rhs(axpy(k3, dt));
  for (std::size_t e = 0; e < n; ++e) {
    state.coeffs[e] += (dt / 6.0) * (k1[e] + 2.0 * k2[e] + 2.0 * k3[e] + k4[e]);
  }
  state.time += dt;
}

double DGSolver::evaluate(const DGState& state, int e, const Point& reference) const {
  return eval(element_basis(e), state.coeffs[e], reference);
}

double DGSolver::lattice_min(const DGState& state) const {
  double lowest = std::numeric_limits<double>::infinity();
  for (int e = 0; e < mesh_.size(); ++e) {
    lowest = std::min(lowest,
                      filters_.at(mesh_.element(e).kind)->lattice_values(state.coeffs[e]).minCoeff());
  }
  return lowest;
}

double DGSolver::l2_error(const DGState& state, const SpaceTimeField& exact, int points) const {
  std::map<ElementKind, std::pair<QuadratureRule, Eigen::MatrixXd>> tables;
  for (const auto& [kind, basis] : bases_) {
    QuadratureRule rule = make_quadrature(kind, points);
    Eigen::MatrixXd table(rule.points.size(), basis->size());
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      table.row(static_cast<Eigen::Index>(q)) = basis->evaluate(rule.points[q]).transpose();
    }
    tables.emplace(kind, std::make_pair(std::move(rule), std::move(table)));
  }
  double sum = 0.0;
  for (int e = 0; e < mesh_.size(); ++e) {
    const MeshElement& el = mesh_.element(e);
    const auto& [rule, table] = tables.at(el.kind);
    const Eigen::VectorXd uh = table * state.coeffs[e];
    const double det = std::abs(el.map.determinant());
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double diff =
          uh[static_cast<Eigen::Index>(q)] - exact(el.map.to_physical(rule.points[q]), state.time);
      sum += rule.weights[static_cast<Eigen::Index>(q)] * det * diff * diff;
    }
  }
  return std::sqrt(sum);
}

DGSolver::FilterPass DGSolver::filter_state(DGState& state) const {
  FilterPass pass;
  for (int e = 0; e < mesh_.size(); ++e) {
    const ElementFilter& f = *filters_.at(mesh_.element(e).kind);
    if (!f.violates(state.coeffs[e])) continue;
    ++pass.flagged;
    auto [filtered, report] = f.apply(state.coeffs[e]);
    state.coeffs[e] = std::move(filtered);
    pass.iterations += report.iterations;
    pass.gd_iterations += report.gd_iterations_total;
    if (!report.converged) ++pass.unconverged;
  }
  return pass;
}

RunResult DGSolver::run(const ScalarField& initial, const SpaceTimeField& exact,
                        const StepCallback& on_step) const {
  return run(project(initial), exact, on_step);
}

RunResult DGSolver::run(DGState state, const SpaceTimeField& exact,
                        const StepCallback& on_step) const {
  if (static_cast<int>(state.coeffs.size()) != mesh_.size()) {
    throw Error("run: one coefficient vector per element expected");
  }
  RunResult result;
  auto record = [&](int step, double t_solver, const FilterPass& pass, double t_filter) {
    StepDiagnostics row;
    row.step = step;
    row.time = state.time;
    row.l2_error = exact ? l2_error(state, exact, config_.error_points)
                         : std::numeric_limits<double>::quiet_NaN();
    row.n_flagged = pass.flagged;
    row.filter_iters = pass.iterations;
    row.gd_iters = pass.gd_iterations;
    row.t_solver = t_solver;
    row.t_filter = t_filter;
    row.lattice_min = lattice_min(state);
    result.unconverged_filters += pass.unconverged;
    result.diagnostics.push_back(row);
    if (on_step) on_step(state, row);
  };

  FilterPass pass;
  auto start = Clock::now();
  if (config_.filter_enabled) pass = filter_state(state);
  record(0, 0.0, pass, seconds_since(start));

  for (int step = 1; step <= config_.n_steps; ++step) {
    start = Clock::now();
    step_rk4(state, config_.dt);
    const double t_solver = seconds_since(start);
    for (const auto& c : state.coeffs) {
      if (!c.allFinite()) throw Error("run: non-finite state at step " + std::to_string(step));
    }
    pass = FilterPass{};
    start = Clock::now();
    if (config_.filter_enabled) pass = filter_state(state);
    record(step, t_solver, pass, seconds_since(start));
  }
  result.state = std::move(state);
  return result;
}

}  // namespace spf
