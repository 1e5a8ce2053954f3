#include "spfilter/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <ostream>

#include "spfilter/geometry.hpp"
#include "spfilter/polynomials.hpp"

namespace spf {

FieldObjective::FieldObjective(const OrthoBasis& basis, const Coeffs& v)
    : basis_(basis), v_(v), psi_(basis.size()), dpsi_(basis.size(), basis.dim()) {}

double FieldObjective::value(const Point& x) const {
  basis_.evaluate(x, psi_);
  return psi_.dot(v_);
}

double FieldObjective::value_and_gradient(const Point& x, Point& gradient) const {
  basis_.evaluate_with_gradient(x, psi_, dpsi_);
  gradient = dpsi_.transpose() * v_;
  return psi_.dot(v_);
}

double dense_grid_minimum(const OrthoBasis& basis, const Coeffs& v, int n) {
  if (n < 2) throw Error("dense_grid_minimum: need at least two points per direction");
  const int d = basis.dim();
  std::vector<double> ticks(n);
  for (int i = 0; i < n; ++i) ticks[i] = -1.0 + 2.0 * i / (n - 1);
  double best = std::numeric_limits<double>::infinity();

  if (is_tensor_product(basis.kind())) {
    // Sum factorization over 1D Legendre tables.
    const int m = basis.order() + 1;
    Eigen::MatrixXd table(m, n);
    std::vector<double> column(m);
    for (int i = 0; i < n; ++i) {
      jacobi_normalized(0.0, 0.0, ticks[i], column);
      for (int a = 0; a < m; ++a) table(a, i) = column[a];
    }
    if (d == 1) return (table.transpose() * v).minCoeff();
    if (d == 2) {
      const Eigen::Map<const Eigen::MatrixXd> c(v.data(), m, m);  // c(a, b)
      return (table.transpose() * c * table).minCoeff();
    }
    for (int k = 0; k < n; ++k) {
      Eigen::MatrixXd slab = Eigen::MatrixXd::Zero(m, m);
      for (int l = 0; l < m; ++l) {
        slab += table(l, k) * Eigen::Map<const Eigen::MatrixXd>(v.data() + l * m * m, m, m);
      }
      best = std::min(best, (table.transpose() * slab * table).minCoeff());
    }
    return best;
  }

  Eigen::VectorXd psi(basis.size());
  Point x(d);
  const int nk = d == 3 ? n : 1;
  for (int k = 0; k < nk; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        x[0] = ticks[i];
        x[1] = ticks[j];
        if (d == 3) x[2] = ticks[k];
        if (!basis.element().contains(x, 1e-12)) continue;
        basis.evaluate(x, psi);
        best = std::min(best, psi.dot(v));
      }
    }
  }
  return best;
}

double golden_minimum(const TuneFunction& function, GoldenMode mode, int grid_points) {
  if (mode == GoldenMode::Analytic) {
    if (!function.analytic_min) throw Error("golden_minimum: no closed-form minimum for " + function.name);
    return *function.analytic_min;
  }
  const OrthoBasis basis(function.kind, 8, 11);
  const Coeffs v = project(basis, function.f);
  if (grid_points <= 0) grid_points = dimension(function.kind) >= 3 ? 100 : 400;
  return dense_grid_minimum(basis, v, grid_points);
}

std::vector<double> tune_samples(int k) {
  if (k < 2) throw Error("tune: grid count must be at least 2");
  std::vector<double> samples(k);
  for (int i = 1; i <= k; ++i) samples[i - 1] = static_cast<double>(i) / (k + 1);
  return samples;
}

std::vector<std::pair<double, double>> select_cells(const std::vector<TuneCell>& cells) {
  std::vector<std::pair<double, double>> selected;
  if (cells.empty()) return selected;
  long least_iters = std::numeric_limits<long>::max();
  for (const auto& cell : cells) least_iters = std::min(least_iters, cell.niter);
  double least_err = std::numeric_limits<double>::infinity();
  for (const auto& cell : cells) {
    if (cell.niter == least_iters) least_err = std::min(least_err, cell.err);
  }
  for (const auto& cell : cells) {
    if (cell.niter == least_iters && cell.err == least_err) selected.emplace_back(cell.c, cell.gamma);
  }
  return selected;
}

TuneResult tune_grid(const std::vector<TuneCase>& cases, int k, const TuneRunner& runner,
                     const LineSearchParams& base, Aggregation aggregation) {
  if (cases.empty()) throw Error("tune: no cases");
  const std::vector<double> samples = tune_samples(k);
  TuneResult result;
  for (double c : samples) {
    for (double gamma : samples) {
      LineSearchParams params = base;
      params.c = c;
      params.gamma = gamma;
      TuneCell cell{c, gamma, 0, 0.0};
      for (const auto& tc : cases) {
        const GdOutcome outcome = runner(tc, params);
        const int niter = std::clamp(outcome.niter, 0, params.max_gd_iters);
        const double err = std::isfinite(outcome.found) ? std::abs(outcome.found - tc.golden)
                                                        : std::numeric_limits<double>::infinity();
        result.table.push_back({c, gamma, tc.function, tc.order, niter, err});
        if (aggregation == Aggregation::Sum) {
          cell.niter += niter;
          cell.err += err;
        } else {
          cell.niter = std::max<long>(cell.niter, niter);
          cell.err = std::max(cell.err, err);
        }
      }
      result.cells.push_back(cell);
    }
  }
  result.selected = select_cells(result.cells);
  return result;
}

TuneResult tune(const std::vector<TuneFunction>& functions, const std::vector<int>& orders, int k,
                const TuneOptions& options) {
  if (functions.empty() || orders.empty()) throw Error("tune: need functions and orders");

  struct Prepared {
    std::shared_ptr<OrthoBasis> basis;
    Lattice lattice;
    Coeffs v;
  };
  std::map<std::pair<std::string, int>, Prepared> prepared;
  std::vector<TuneCase> cases;
  for (const auto& fn : functions) {
    const GoldenMode mode = fn.analytic_min ? options.golden : GoldenMode::Numeric;
    const double golden = golden_minimum(fn, mode);
    for (int order : orders) {
      auto basis = std::make_shared<OrthoBasis>(fn.kind, order,
                                                std::max(options.quad_count, order + 1));
      Prepared p{basis, build_lattice(*basis), project(*basis, fn.f)};
      if (prepared.count({fn.name, order})) throw Error("tune: duplicate function name " + fn.name);
      prepared.emplace(std::make_pair(fn.name, order), std::move(p));
      cases.push_back({fn.name, order, golden});
    }
  }

  const TuneRunner runner = [&](const TuneCase& tc, const LineSearchParams& params) {
    const Prepared& p = prepared.at({tc.function, tc.order});
    const FieldObjective objective(*p.basis, p.v);
    const MinResult m = global_min(objective, p.lattice.points, params, p.basis->element());
    return GdOutcome{m.gd_iters, m.value};
  };
  return tune_grid(cases, k, runner, options.base, options.aggregation);
}

void write_tune_csv(std::ostream& out, const TuneResult& result) {
  out << "c,gamma,function,order,niter,err\n";
  const auto precision = out.precision(17);
  for (const auto& r : result.table) {
    out << r.c << ',' << r.gamma << ',' << r.function << ',' << r.order << ',' << r.niter << ','
        << r.err << '\n';
  }
  out.precision(precision);
}

}  // namespace spf
