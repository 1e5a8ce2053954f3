#include "spfilter/legendre_series.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>

#include "spfilter/element.hpp"
#include "spfilter/polynomials.hpp"
#include "spfilter/quadrature.hpp"

namespace spf {

namespace {

// x psi_n = a_{n+1} psi_{n+1} + a_n psi_{n-1}
double recurrence(int n) {
  const double dn = n;
  return dn / std::sqrt((2.0 * dn - 1.0) * (2.0 * dn + 1.0));
}

double normalization(int n) { return std::sqrt((2.0 * n + 1.0) / 2.0); }

}  // namespace

LegendreSeries LegendreSeries::fit(const std::function<double(double)>& f, int degree) {
  if (degree < 0) throw Error("LegendreSeries::fit: negative degree");
  const Rule1D rule = gauss_legendre(degree + 1);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(degree + 1);
  std::vector<double> psi(degree + 1);
  for (int q = 0; q <= degree; ++q) {
    const double fx = f(rule.nodes[q]);
    jacobi_normalized(0.0, 0.0, rule.nodes[q], psi);
    for (int k = 0; k <= degree; ++k) c[k] += rule.weights[q] * fx * psi[k];
  }
  return LegendreSeries(std::move(c));
}

double LegendreSeries::operator()(double x) const {
  if (coeffs_.size() == 0) return 0.0;
  // Clenshaw on the orthonormal recurrence.
  const int n = degree();
  double b1 = 0.0;
  double b2 = 0.0;
  for (int k = n; k >= 1; --k) {
    const double bk = coeffs_[k] + (x / recurrence(k + 1)) * b1 -
                      (recurrence(k + 1) / recurrence(k + 2)) * b2;
    b2 = b1;
    b1 = bk;
  }
  const double psi0 = std::sqrt(0.5);
  const double psi1 = normalization(1) * x;
  // p = c_0 psi_0 + b1 psi_1 - (a_1 / a_2) b2 psi_0
  return (coeffs_[0] - (recurrence(1) / recurrence(2)) * b2) * psi0 + b1 * psi1;
}

double LegendreSeries::derivative_at(double x) const {
  const int n = degree();
  if (n < 1) return 0.0;
  std::vector<double> values(n + 1);
  std::vector<double> derivs(n + 1);
  jacobi_normalized_with_derivative(0.0, 0.0, x, values, derivs);
  double s = 0.0;
  for (int k = 1; k <= n; ++k) s += coeffs_[k] * derivs[k];
  return s;
}

LegendreSeries LegendreSeries::derivative() const {
  const int n = degree();
  if (n < 1) return LegendreSeries(Eigen::VectorXd::Zero(1));
  // P_m' = sum_{k = m-1, m-3, ...} (2k+1) P_k
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  for (int m = 1; m <= n; ++m) {
    const double cm = coeffs_[m] * normalization(m);
    for (int k = m - 1; k >= 0; k -= 2) d[k] += cm * (2.0 * k + 1.0) / normalization(k);
  }
  return LegendreSeries(std::move(d));
}

LegendreSeries LegendreSeries::trimmed(double rel_tol) const {
  if (coeffs_.size() == 0) return *this;
  const double scale = coeffs_.cwiseAbs().maxCoeff();
  Eigen::Index last = coeffs_.size() - 1;
  while (last > 0 && std::abs(coeffs_[last]) <= rel_tol * scale) --last;
  return LegendreSeries(coeffs_.head(last + 1));
}

Eigen::MatrixXd comrade_matrix(const Eigen::VectorXd& c) {
  const int m = static_cast<int>(c.size()) - 1;
  if (m < 1) throw Error("comrade_matrix: degree must be at least one");
  if (c[m] == 0.0) throw Error("comrade_matrix: leading coefficient is zero");
  Eigen::MatrixXd comrade = Eigen::MatrixXd::Zero(m, m);
  for (int n = 0; n < m; ++n) {
    if (n + 1 < m) comrade(n, n + 1) = recurrence(n + 1);
    if (n > 0) comrade(n, n - 1) = recurrence(n);
  }
  const double factor = recurrence(m) / c[m];
  for (int k = 0; k < m; ++k) comrade(m - 1, k) -= factor * c[k];
  return comrade;
}

std::vector<double> LegendreSeries::real_roots(double lo, double hi) const {
  const LegendreSeries p = trimmed();
  std::vector<double> roots;
  if (p.degree() < 1) return roots;

  if (p.degree() == 1) {
    // c0 psi0 + c1 psi1 = 0
    const double x = -p.coefficients()[0] * std::sqrt(0.5) /
                     (p.coefficients()[1] * normalization(1));
    if (x >= lo && x <= hi) roots.push_back(x);
    return roots;
  }

  Eigen::EigenSolver<Eigen::MatrixXd> solver(comrade_matrix(p.coefficients()),
                                             /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw Error("real_roots: eigenvalue solver failed");
  const double slack = 1e-8;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const std::complex<double> z = solver.eigenvalues()[i];
    if (std::abs(z.imag()) > 1e-6 * (1.0 + std::abs(z.real()))) continue;
    double x = z.real();
    if (x < lo - slack || x > hi + slack) continue;
    for (int it = 0; it < 4; ++it) {
      const double slope = p.derivative_at(x);
      if (slope == 0.0) break;
      const double step = p(x) / slope;
      if (!std::isfinite(step) || std::abs(step) > 1e-3) break;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    roots.push_back(std::clamp(x, lo, hi));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace spf
