#include "spfilter/quadrature.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "spfilter/polynomials.hpp"

namespace spf {

Rule1D gauss_jacobi(int count, double alpha, double beta) {
  if (count < 1) throw Error("gauss_jacobi: need at least one node");
  if (alpha <= -1.0 || beta <= -1.0) throw Error("gauss_jacobi: alpha, beta must exceed -1");

  const double ab = alpha + beta;
  Rule1D rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);

  // Golub-Welsch on the symmetric Jacobi matrix.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(count, count);
  for (int i = 0; i < count; ++i) {
    const double h = 2.0 * i + ab;
    jacobi(i, i) = (i == 0) ? (beta - alpha) / (ab + 2.0)
                            : (beta * beta - alpha * alpha) / (h * (h + 2.0));
    if (i + 1 < count) {
      const double k = i + 1.0;
      const double hk = 2.0 * k + ab;
      const double off = 2.0 / hk *
                         std::sqrt(k * (k + alpha) * (k + beta) * (k + ab) /
                                   ((hk - 1.0) * (hk + 1.0)));
      jacobi(i, i + 1) = off;
      jacobi(i + 1, i) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  rule.nodes = solver.eigenvalues();

  // Newton polish on the degree-`count` polynomial, then Christoffel weights
  // w_i = 1 / sum_{k<count} p_k(x_i)^2 with orthonormal p_k.
  std::vector<double> values(count + 1);
  std::vector<double> derivs(count + 1);
  for (int i = 0; i < count; ++i) {
    double x = rule.nodes[i];
    for (int it = 0; it < 3; ++it) {
      jacobi_normalized_with_derivative(alpha, beta, x, values, derivs);
      if (derivs[count] == 0.0) break;
      const double step = values[count] / derivs[count];
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    rule.nodes[i] = x;
    jacobi_normalized(alpha, beta, x, std::span<double>(values.data(), count));
    double kernel = 0.0;
    for (int k = 0; k < count; ++k) kernel += values[k] * values[k];
    rule.weights[i] = 1.0 / kernel;
  }
  return rule;
}

Point collapsed_to_reference(ElementKind kind, const Point& c) {
  if (kind == ElementKind::Tri) {
    return make_point({0.5 * (1.0 + c[0]) * (1.0 - c[1]) - 1.0, c[1]});
  }
  if (kind == ElementKind::Tet) {
    const double t = c[2];
    const double s = 0.5 * (1.0 + c[1]) * (1.0 - t) - 1.0;
    const double r = 0.25 * (1.0 + c[0]) * (1.0 - c[1]) * (1.0 - t) - 1.0;
    return make_point({r, s, t});
  }
  return c;
}

Point reference_to_collapsed(ElementKind kind, const Point& x) {
  if (kind == ElementKind::Tri) {
    const double denom = 1.0 - x[1];
    const double a = (std::abs(denom) < 1e-14) ? -1.0 : 2.0 * (1.0 + x[0]) / denom - 1.0;
    return make_point({a, x[1]});
  }
  if (kind == ElementKind::Tet) {
    const double r = x[0], s = x[1], t = x[2];
    const double denom_a = -s - t;
    const double denom_b = 1.0 - t;
    const double a = (std::abs(denom_a) < 1e-14) ? -1.0 : 2.0 * (1.0 + r) / denom_a - 1.0;
    const double b = (std::abs(denom_b) < 1e-14) ? -1.0 : 2.0 * (1.0 + s) / denom_b - 1.0;
    return make_point({a, b, t});
  }
  return x;
}

QuadratureRule make_quadrature(ElementKind kind, int count) {
  if (count < 1) throw Error("make_quadrature: need at least one point per direction");
  QuadratureRule rule;
  rule.kind = kind;
  rule.count = count;
  const int d = dimension(kind);

  std::vector<Rule1D> lines;
  lines.push_back(gauss_legendre(count));
  if (is_simplex(kind)) {
    lines.push_back(gauss_jacobi(count, 1.0, 0.0));
    if (d == 3) lines.push_back(gauss_jacobi(count, 2.0, 0.0));
  } else {
    for (int k = 1; k < d; ++k) lines.push_back(lines[0]);
  }

  int total = 1;
  for (int k = 0; k < d; ++k) total *= count;
  rule.points.reserve(total);
  rule.collapsed.reserve(total);
  rule.weights.resize(total);

  // Collapsed-coordinate Jacobian factors absorbed by the Jacobi weights.
  const double simplex_scale = (kind == ElementKind::Tri) ? 0.5 : (kind == ElementKind::Tet ? 0.125 : 1.0);

  int index = 0;
  const int nk = d >= 3 ? count : 1;
  const int nj = d >= 2 ? count : 1;
  for (int k = 0; k < nk; ++k) {
    for (int j = 0; j < nj; ++j) {
      for (int i = 0; i < count; ++i) {
        Point c(d);
        double w = lines[0].weights[i];
        c[0] = lines[0].nodes[i];
        if (d >= 2) {
          c[1] = lines[1].nodes[j];
          w *= lines[1].weights[j];
        }
        if (d >= 3) {
          c[2] = lines[2].nodes[k];
          w *= lines[2].weights[k];
        }
        rule.collapsed.push_back(c);
        rule.points.push_back(collapsed_to_reference(kind, c));
        rule.weights[index++] = w * simplex_scale;
      }
    }
  }
  return rule;
}

}  // namespace spf
