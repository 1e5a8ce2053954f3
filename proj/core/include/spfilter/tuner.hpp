#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spfilter/basis.hpp"
#include "spfilter/minimize.hpp"

namespace spf {

/// Projected field u = sum_j v_j psi_j as a descent objective.
class FieldObjective final : public Objective {
 public:
  FieldObjective(const OrthoBasis& basis, const Coeffs& v);
  double value(const Point& x) const override;
  double value_and_gradient(const Point& x, Point& gradient) const override;

 private:
  const OrthoBasis& basis_;
  const Coeffs& v_;
  mutable Eigen::VectorXd psi_;
  mutable Eigen::MatrixXd dpsi_;
};

/// A test function for the (c, gamma) search, given in reference coordinates.
struct TuneFunction {
  std::string name;
  ElementKind kind = ElementKind::Quad;
  ScalarField f;
  std::optional<double> analytic_min;
};

enum class GoldenMode { Analytic, Numeric };

/// Analytic mode returns the closed-form minimum. Numeric mode projects f at
/// order 8 and scans a uniform grid of `grid_points` per direction (0 picks
/// 400 in 2D and 100 in 3D).
double golden_minimum(const TuneFunction& function, GoldenMode mode, int grid_points = 0);

/// Minimum over a uniform grid of n points per direction of the projected
/// field (points outside a simplex are skipped).
double dense_grid_minimum(const OrthoBasis& basis, const Coeffs& v, int n);

struct TuneCase {
  std::string function;
  int order = 0;
  double golden = 0.0;
};

struct GdOutcome {
  int niter = 0;
  double found = 0.0;
};

using TuneRunner = std::function<GdOutcome(const TuneCase&, const LineSearchParams&)>;

struct TuneRecord {
  double c = 0.0;
  double gamma = 0.0;
  std::string function;
  int order = 0;
  int niter = 0;
  double err = 0.0;
};

/// Aggregate over all cases for one (c, gamma) pair.
struct TuneCell {
  double c = 0.0;
  double gamma = 0.0;
  long niter = 0;
  double err = 0.0;
};

enum class Aggregation { Sum, Max };

struct TuneResult {
  std::vector<std::pair<double, double>> selected;
  std::vector<TuneCell> cells;
  std::vector<TuneRecord> table;
};

/// Samples i / (k + 1), i = 1..k.
std::vector<double> tune_samples(int k);

/// Runs every case for all k^2 (c, gamma) pairs, aggregates niter and err per
/// pair, and selects the pairs with least niter, then least err (all ties kept).
TuneResult tune_grid(const std::vector<TuneCase>& cases, int k, const TuneRunner& runner,
                     const LineSearchParams& base = {}, Aggregation aggregation = Aggregation::Sum);

/// Selection stage alone.
std::vector<std::pair<double, double>> select_cells(const std::vector<TuneCell>& cells);

struct TuneOptions {
  int quad_count = 11;
  GoldenMode golden = GoldenMode::Analytic;  // falls back to numeric without a closed form
  Aggregation aggregation = Aggregation::Sum;
  LineSearchParams base;
};

/// Projects each function at each order, then descends on the projection
/// from its worst lattice point.
TuneResult tune(const std::vector<TuneFunction>& functions, const std::vector<int>& orders, int k,
                const TuneOptions& options = {});

/// Columns: c, gamma, function, order, niter, err.
void write_tune_csv(std::ostream& out, const TuneResult& result);

}  // namespace spf
