#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace spf {

/// Polynomial on [-1,1] stored in orthonormal Legendre coordinates:
/// p(x) = sum_k c_k sqrt((2k+1)/2) P_k(x).
class LegendreSeries {
 public:
  LegendreSeries() = default;
  explicit LegendreSeries(Eigen::VectorXd coefficients) : coeffs_(std::move(coefficients)) {}

  /// Degree-`degree` interpolating projection of f (exact for polynomials
  /// of that degree).
  static LegendreSeries fit(const std::function<double(double)>& f, int degree);

  const Eigen::VectorXd& coefficients() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  double operator()(double x) const;
  double derivative_at(double x) const;

  LegendreSeries derivative() const;

  /// Drops trailing coefficients below rel_tol * max|c|.
  LegendreSeries trimmed(double rel_tol = 1e-14) const;

  /// Real roots in [lo, hi] from the eigenvalues of the comrade (Legendre
  /// companion) matrix, polished by Newton steps. Sorted ascending.
  std::vector<double> real_roots(double lo = -1.0, double hi = 1.0) const;

 private:
  Eigen::VectorXd coeffs_;
};

/// Comrade matrix whose eigenvalues are the roots of the series
/// (leading coefficient must be nonzero).
Eigen::MatrixXd comrade_matrix(const Eigen::VectorXd& coefficients);

}  // namespace spf
