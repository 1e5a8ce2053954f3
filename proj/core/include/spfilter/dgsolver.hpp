#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "spfilter/basis.hpp"
#include "spfilter/filter.hpp"
#include "spfilter/mesh.hpp"

namespace spf {

/// Velocity in physical coordinates; steady in time.
using VelocityField = std::function<Point(const Point&)>;
/// Scalar field in physical coordinates at time t.
using SpaceTimeField = std::function<double(const Point&, double)>;

VelocityField constant_velocity(const Point& a);

/// Solid-body rotation about `center`: omega * (-(y - yc), x - xc).
/// omega = 2 pi gives period 1.
VelocityField rotation_velocity(const Point& center, double angular_speed);

/// u0 translated by a t and wrapped into the periodic box.
SpaceTimeField periodic_translate(std::function<double(const Point&)> u0, Point a, Box box);

struct SolverConfig {
  double dt = 1e-3;
  int n_steps = 0;
  int order = 4;
  int quad_count = 0;  // 0 picks order + 2
  bool filter_enabled = true;
  FilterConfig filter_config;
  std::vector<ConstraintFamily> families = positivity();
  int error_points = 10;  // per direction for the L2 error

  void validate() const;
};

struct DGState {
  std::vector<Coeffs> coeffs;
  double time = 0.0;
};

struct StepDiagnostics {
  int step = 0;
  double time = 0.0;
  double l2_error = 0.0;  // NaN without an exact solution
  int n_flagged = 0;
  long filter_iters = 0;
  long gd_iters = 0;
  double t_solver = 0.0;
  double t_filter = 0.0;
  double lattice_min = 0.0;  // smallest field value over all lattice points
};

struct RunResult {
  DGState state;
  std::vector<StepDiagnostics> diagnostics;
  int unconverged_filters = 0;
};

/// Modal dG discretization of u_t + a . grad u = 0 with upwind fluxes.
///
/// Per element, M dv/dt = int u a.grad(psi_i) - oint psi_i u_hat (a.n);
/// with orthonormal reference modes under an affine map, M = |det J| I.
class DGSolver {
 public:
  DGSolver(const Mesh& mesh, VelocityField velocity, SolverConfig config);

  const Mesh& mesh() const { return mesh_; }
  const SolverConfig& config() const { return config_; }
  const OrthoBasis& basis(ElementKind kind) const { return *bases_.at(kind); }
  const OrthoBasis& element_basis(int e) const { return basis(mesh_.element(e).kind); }
  const ElementFilter& filter(ElementKind kind) const { return *filters_.at(kind); }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Element-wise projection of a physical field.
  DGState project(const ScalarField& f) const;

  std::vector<Coeffs> rhs(const std::vector<Coeffs>& v) const;
  void step_rk4(DGState& state, double dt) const;

  /// Field value on element e at a reference point.
  double evaluate(const DGState& state, int e, const Point& reference) const;
  /// Smallest value over every element's lattice.
  double lattice_min(const DGState& state) const;
  /// Global L2 error against exact(x, state.time) using `points` Gauss points per direction.
  double l2_error(const DGState& state, const SpaceTimeField& exact, int points = 10) const;

  /// Filters every flagged element in place. Returns (flagged, iterations, gd iterations, unconverged).
  struct FilterPass {
    int flagged = 0;
    long iterations = 0;
    long gd_iterations = 0;
    int unconverged = 0;
  };
  FilterPass filter_state(DGState& state) const;

  using StepCallback = std::function<void(const DGState&, const StepDiagnostics&)>;

  /// Projects the initial condition, filters it if needed, then takes
  /// config.n_steps RK4 steps, filtering after each one. Diagnostics hold
  /// one row for the initial state (step 0) and one per step.
  RunResult run(const ScalarField& initial, const SpaceTimeField& exact = {},
                const StepCallback& on_step = {}) const;
  RunResult run(DGState state, const SpaceTimeField& exact = {},
                const StepCallback& on_step = {}) const;

 private:
  struct FaceCoupling {
    int neighbor = -1;
    Eigen::MatrixXd matrix;  // P_e x P_neighbor, already divided by |det J|
  };
  struct ElementOperator {
    Eigen::MatrixXd self;  // volume term plus outflow faces
    std::vector<FaceCoupling> couplings;
  };

  void build_operators(const VelocityField& velocity);

  const Mesh& mesh_;
  SolverConfig config_;
  std::map<ElementKind, std::shared_ptr<const OrthoBasis>> bases_;
  std::map<ElementKind, std::shared_ptr<const ElementFilter>> filters_;
  std::vector<ElementOperator> operators_;
  std::vector<std::string> warnings_;
};

}  // namespace spf
