#include "spfilter/barycentric.hpp"

#include <array>
#include <cmath>

namespace spf {

Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& nodes) {
  const Eigen::Index n = nodes.size();
  if (n == 0) throw Error("barycentric_weights: empty node set");
  Eigen::VectorXd w(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double prod = 1.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == j) continue;
      const double diff = nodes[j] - nodes[k];
      if (diff == 0.0) throw Error("barycentric_weights: repeated node");
      prod *= diff;
    }
    w[j] = 1.0 / prod;
  }
  return w / w.cwiseAbs().maxCoeff();
}

double barycentric_interpolate(const Eigen::VectorXd& nodes, const Eigen::VectorXd& weights,
                               std::span<const double> values, double x) {
  double num = 0.0;
  double den = 0.0;
  for (Eigen::Index j = 0; j < nodes.size(); ++j) {
    const double diff = x - nodes[j];
    if (diff == 0.0) return values[j];
    const double t = weights[j] / diff;
    num += t * values[j];
    den += t;
  }
  return num / den;
}

TensorInterpolator::TensorInterpolator(Eigen::VectorXd nodes, int dim)
    : nodes_(std::move(nodes)), weights_(barycentric_weights(nodes_)), dim_(dim) {
  if (dim < 1 || dim > 3) throw Error("TensorInterpolator: dimension must be 1, 2 or 3");
  const Eigen::Index n = nodes_.size();
  differentiation_.setZero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double diag = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dij = (weights_[j] / weights_[i]) / (nodes_[i] - nodes_[j]);
      differentiation_(i, j) = dij;
      diag -= dij;
    }
    differentiation_(i, i) = diag;
  }
}

TensorInterpolator::TensorInterpolator(const OrthoBasis& basis)
    : TensorInterpolator(gauss_legendre(basis.quad_count()).nodes, basis.dim()) {
  if (!is_tensor_product(basis.kind())) {
    throw Error("TensorInterpolator: barycentric evaluation needs a tensor-product element");
  }
}

void TensorInterpolator::lagrange_row(double x, double* l, double* dl) const {
  const Eigen::Index n = nodes_.size();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (x == nodes_[j]) {
      for (Eigen::Index k = 0; k < n; ++k) l[k] = (k == j) ? 1.0 : 0.0;
      if (dl != nullptr) {
        for (Eigen::Index k = 0; k < n; ++k) dl[k] = differentiation_(j, k);
      }
      return;
    }
  }
  double den = 0.0;
  double den_prime = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double diff = x - nodes_[j];
    const double t = weights_[j] / diff;
    l[j] = t;
    den += t;
    den_prime -= t / diff;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const double t = l[j];
    l[j] = t / den;
    if (dl != nullptr) {
      // l_j = t_j / S, t_j' = -t_j / (x - x_j), S' = sum t_k'
      const double t_prime = -t / (x - nodes_[j]);
      dl[j] = (t_prime * den - t * den_prime) / (den * den);
    }
  }
}

double TensorInterpolator::evaluate(std::span<const double> nodal, const Point& x) const {
  const int n = points_per_direction();
  std::array<std::array<double, 64>, 3> l{};
  if (n > 64) throw Error("TensorInterpolator: too many nodes per direction");
  for (int k = 0; k < dim_; ++k) lagrange_row(x[k], l[k].data(), nullptr);
  if (dim_ == 1) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += l[0][i] * nodal[i];
    return s;
  }
  if (dim_ == 2) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      double row = 0.0;
      for (int i = 0; i < n; ++i) row += l[0][i] * nodal[i + n * j];
      s += l[1][j] * row;
    }
    return s;
  }
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    double plane = 0.0;
    for (int j = 0; j < n; ++j) {
      double row = 0.0;
      for (int i = 0; i < n; ++i) row += l[0][i] * nodal[i + n * (j + n * k)];
      plane += l[1][j] * row;
    }
    s += l[2][k] * plane;
  }
  return s;
}

double TensorInterpolator::evaluate_with_gradient(std::span<const double> nodal, const Point& x,
                                                  Point& gradient) const {
  const int n = points_per_direction();
  if (n > 64) throw Error("TensorInterpolator: too many nodes per direction");
  std::array<std::array<double, 64>, 3> l{};
  std::array<std::array<double, 64>, 3> dl{};
  for (int k = 0; k < dim_; ++k) lagrange_row(x[k], l[k].data(), dl[k].data());
  gradient = Point::Zero(dim_);
  double value = 0.0;
  const int nj = dim_ >= 2 ? n : 1;
  const int nk = dim_ >= 3 ? n : 1;
  for (int k = 0; k < nk; ++k) {
    for (int j = 0; j < nj; ++j) {
      for (int i = 0; i < n; ++i) {
        const double f = nodal[i + n * (j + n * k)];
        const double lj = dim_ >= 2 ? l[1][j] : 1.0;
        const double lk = dim_ >= 3 ? l[2][k] : 1.0;
        value += f * l[0][i] * lj * lk;
        gradient[0] += f * dl[0][i] * lj * lk;
        if (dim_ >= 2) gradient[1] += f * l[0][i] * dl[1][j] * lk;
        if (dim_ >= 3) gradient[2] += f * l[0][i] * lj * dl[2][k];
      }
    }
  }
  return value;
}

double eval_nodal_barycentric(const TensorInterpolator& interp, std::span<const double> nodal,
                              const Point& x) {
  return interp.evaluate(nodal, x);
}

}  // namespace spf
