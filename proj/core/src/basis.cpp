#include "spfilter/basis.hpp"

#include <cmath>
#include <string>

#include "spfilter/polynomials.hpp"

namespace spf {

namespace {

constexpr int kMaxOrder = 24;
using Line = std::array<double, kMaxOrder + 2>;

double int_pow(double base, int exponent) {
  double r = 1.0;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

}  // namespace

int basis_size(ElementKind kind, int order) {
  const int n = order;
  switch (kind) {
    case ElementKind::Segment: return n + 1;
    case ElementKind::Quad: return (n + 1) * (n + 1);
    case ElementKind::Hex: return (n + 1) * (n + 1) * (n + 1);
    case ElementKind::Tri: return (n + 1) * (n + 2) / 2;
    case ElementKind::Tet: return (n + 1) * (n + 2) * (n + 3) / 6;
  }
  return 0;
}

OrthoBasis::OrthoBasis(ElementKind kind, int order, int quad_count)
    : element_(kind), order_(order), size_(basis_size(kind, order)) {
  if (order < 0) throw Error("OrthoBasis: order must be non-negative");
  if (order > kMaxOrder) {
    throw Error("OrthoBasis: order " + std::to_string(order) + " exceeds supported maximum " +
                std::to_string(kMaxOrder));
  }
  const int q = quad_count <= 0 ? order + 2 : quad_count;
  if (q < order + 1) {
    throw Error("OrthoBasis: " + std::to_string(q) +
                " quadrature points per direction cannot integrate degree " +
                std::to_string(2 * order) + " exactly; need Q >= " + std::to_string(order + 1));
  }
  quadrature_ = make_quadrature(kind, q);

  const int n = order;
  modes_.reserve(size_);
  switch (kind) {
    case ElementKind::Segment:
      for (int i = 0; i <= n; ++i) modes_.push_back({i, 0, 0});
      break;
    case ElementKind::Quad:
      for (int k = 0; k <= n; ++k)
        for (int i = 0; i <= n; ++i) modes_.push_back({i, k, 0});
      break;
    case ElementKind::Hex:
      for (int l = 0; l <= n; ++l)
        for (int k = 0; k <= n; ++k)
          for (int i = 0; i <= n; ++i) modes_.push_back({i, k, l});
      break;
    case ElementKind::Tri:
      for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) modes_.push_back({i, j, 0});
      break;
    case ElementKind::Tet:
      for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j)
          for (int k = 0; i + j + k <= n; ++k) modes_.push_back({i, j, k});
      break;
  }

  const int nq = static_cast<int>(quadrature_.points.size());
  const int d = dim();
  vandermonde_.resize(size_, nq);
  vandermonde_grad_.assign(d, Eigen::MatrixXd(size_, nq));
  Eigen::VectorXd values(size_);
  Eigen::MatrixXd grads(size_, d);
  for (int q_index = 0; q_index < nq; ++q_index) {
    evaluate_with_gradient(quadrature_.points[q_index], values, grads);
    vandermonde_.col(q_index) = values;
    for (int k = 0; k < d; ++k) vandermonde_grad_[k].col(q_index) = grads.col(k);
  }
}

void OrthoBasis::evaluate(const Point& x, Eigen::Ref<Eigen::VectorXd> values) const {
  Eigen::MatrixXd none;
  evaluate_impl(x, values, none, false);
}

Eigen::VectorXd OrthoBasis::evaluate(const Point& x) const {
  Eigen::VectorXd values(size_);
  evaluate(x, values);
  return values;
}

void OrthoBasis::evaluate_with_gradient(const Point& x, Eigen::Ref<Eigen::VectorXd> values,
                                        Eigen::Ref<Eigen::MatrixXd> gradients) const {
  evaluate_impl(x, values, gradients, true);
}

void OrthoBasis::evaluate_impl(const Point& x, Eigen::Ref<Eigen::VectorXd> values,
                               Eigen::Ref<Eigen::MatrixXd> gradients,
                               bool with_gradient) const {
  switch (kind()) {
    case ElementKind::Segment:
    case ElementKind::Quad:
    case ElementKind::Hex: evaluate_tensor(x, values, gradients, with_gradient); break;
    case ElementKind::Tri: evaluate_tri(x, values, gradients, with_gradient); break;
    case ElementKind::Tet: evaluate_tet(x, values, gradients, with_gradient); break;
  }
}

void OrthoBasis::evaluate_tensor(const Point& x, Eigen::Ref<Eigen::VectorXd> values,
                                 Eigen::Ref<Eigen::MatrixXd> gradients,
                                 bool with_gradient) const {
  const int d = dim();
  const int m = order_ + 1;
  std::array<Line, 3> p{};
  std::array<Line, 3> dp{};
  for (int k = 0; k < d; ++k) {
    if (with_gradient) {
      jacobi_normalized_with_derivative(0.0, 0.0, x[k], std::span<double>(p[k].data(), m),
                                        std::span<double>(dp[k].data(), m));
    } else {
      jacobi_normalized(0.0, 0.0, x[k], std::span<double>(p[k].data(), m));
    }
  }
  for (int j = 0; j < size_; ++j) {
    const auto& idx = modes_[j];
    double v = 1.0;
    for (int k = 0; k < d; ++k) v *= p[k][idx[k]];
    values[j] = v;
    if (!with_gradient) continue;
    for (int g = 0; g < d; ++g) {
      double dv = 1.0;
      for (int k = 0; k < d; ++k) dv *= (k == g) ? dp[k][idx[k]] : p[k][idx[k]];
      gradients(j, g) = dv;
    }
  }
}

void OrthoBasis::evaluate_tri(const Point& x, Eigen::Ref<Eigen::VectorXd> values,
                              Eigen::Ref<Eigen::MatrixXd> gradients, bool with_gradient) const {
  const Point c = reference_to_collapsed(ElementKind::Tri, x);
  const double a = c[0];
  const double b = c[1];
  const int n = order_;
  Line fa{}, dfa{}, gb{}, dgb{};
  jacobi_normalized_with_derivative(0.0, 0.0, a, std::span<double>(fa.data(), n + 1),
                                    std::span<double>(dfa.data(), n + 1));
  const double half_b = 0.5 * (1.0 - b);
  int j_index = 0;
  for (int i = 0; i <= n; ++i) {
    const int len = n - i + 1;
    jacobi_normalized_with_derivative(2.0 * i + 1.0, 0.0, b, std::span<double>(gb.data(), len),
                                      std::span<double>(dgb.data(), len));
    const double scale = std::pow(2.0, i + 0.5);
    const double pb = int_pow(half_b, i);
    const double pb_m1 = i > 0 ? int_pow(half_b, i - 1) : 0.0;
    for (int j = 0; j < len; ++j, ++j_index) {
      values[j_index] = scale * fa[i] * gb[j] * pb;
      if (!with_gradient) continue;
      const double dr = dfa[i] * gb[j] * pb_m1;
      double ds = dfa[i] * gb[j] * 0.5 * (1.0 + a) * pb_m1;
      double tmp = dgb[j] * pb;
      if (i > 0) tmp -= 0.5 * i * gb[j] * pb_m1;
      ds += fa[i] * tmp;
      gradients(j_index, 0) = scale * dr;
      gradients(j_index, 1) = scale * ds;
    }
  }
}

void OrthoBasis::evaluate_tet(const Point& x, Eigen::Ref<Eigen::VectorXd> values,
                              Eigen::Ref<Eigen::MatrixXd> gradients, bool with_gradient) const {
  const Point cc = reference_to_collapsed(ElementKind::Tet, x);
  const double a = cc[0];
  const double b = cc[1];
  const double c = cc[2];
  const int n = order_;
  Line fa{}, dfa{}, gb{}, dgb{}, hc{}, dhc{};
  jacobi_normalized_with_derivative(0.0, 0.0, a, std::span<double>(fa.data(), n + 1),
                                    std::span<double>(dfa.data(), n + 1));
  const double half_b = 0.5 * (1.0 - b);
  const double half_c = 0.5 * (1.0 - c);
  int index = 0;
  for (int i = 0; i <= n; ++i) {
    const int len_j = n - i + 1;
    jacobi_normalized_with_derivative(2.0 * i + 1.0, 0.0, b, std::span<double>(gb.data(), len_j),
                                      std::span<double>(dgb.data(), len_j));
    const double pb = int_pow(half_b, i);
    const double pb_m1 = i > 0 ? int_pow(half_b, i - 1) : 0.0;
    for (int j = 0; j < len_j; ++j) {
      const int len_k = n - i - j + 1;
      const int ij = i + j;
      jacobi_normalized_with_derivative(2.0 * ij + 2.0, 0.0, c,
                                        std::span<double>(hc.data(), len_k),
                                        std::span<double>(dhc.data(), len_k));
      const double scale = std::pow(2.0, 2 * i + j + 1.5);
      const double pc = int_pow(half_c, ij);
      const double pc_m1 = ij > 0 ? int_pow(half_c, ij - 1) : 0.0;
      for (int k = 0; k < len_k; ++k, ++index) {
        values[index] = scale * fa[i] * gb[j] * pb * hc[k] * pc;
        if (!with_gradient) continue;

        const double dr = dfa[i] * gb[j] * hc[k] * pb_m1 * pc_m1;

        double ds = 0.5 * (1.0 + a) * dr;
        double tmp = dgb[j] * pb;
        if (i > 0) tmp -= 0.5 * i * gb[j] * pb_m1;
        tmp *= pc_m1;
        tmp = fa[i] * tmp * hc[k];
        ds += tmp;

        double dt = 0.5 * (1.0 + a) * dr + 0.5 * (1.0 + b) * tmp;
        double tmp2 = dhc[k] * pc;
        if (ij > 0) tmp2 -= 0.5 * ij * hc[k] * pc_m1;
        tmp2 = fa[i] * gb[j] * tmp2 * pb;
        dt += tmp2;

        gradients(index, 0) = scale * dr;
        gradients(index, 1) = scale * ds;
        gradients(index, 2) = scale * dt;
      }
    }
  }
}

namespace {

void require_inside(const OrthoBasis& basis, const Point& x) {
  if (!basis.element().contains(x, 1e-12)) {
    throw Error("point lies outside the reference " + std::string(to_string(basis.kind())));
  }
}

void require_size(const OrthoBasis& basis, const Coeffs& v) {
  if (v.size() != basis.size()) {
    throw Error("coefficient vector has length " + std::to_string(v.size()) +
                ", basis has " + std::to_string(basis.size()) + " modes");
  }
}

}  // namespace

double eval(const OrthoBasis& basis, const Coeffs& v, const Point& x) {
  require_size(basis, v);
  require_inside(basis, x);
  return basis.evaluate(x).dot(v);
}

Point eval_grad(const OrthoBasis& basis, const Coeffs& v, const Point& x) {
  require_size(basis, v);
  require_inside(basis, x);
  Eigen::VectorXd values(basis.size());
  Eigen::MatrixXd grads(basis.size(), basis.dim());
  basis.evaluate_with_gradient(x, values, grads);
  return grads.transpose() * v;
}

Coeffs project(const OrthoBasis& basis, const ScalarField& f) {
  const auto& points = basis.quad_points();
  Eigen::VectorXd weighted(points.size());
  for (std::size_t q = 0; q < points.size(); ++q) {
    const double value = f(points[q]);
    if (!std::isfinite(value)) {
      throw Error("project: field is not finite at quadrature point " + std::to_string(q));
    }
    weighted[static_cast<Eigen::Index>(q)] = basis.quad_weights()[q] * value;
  }
  return basis.vandermonde() * weighted;
}

Coeffs nodal_to_modal(const OrthoBasis& basis, const Eigen::VectorXd& nodal) {
  if (nodal.size() != basis.vandermonde().cols()) {
    throw Error("nodal_to_modal: expected one value per quadrature point");
  }
  return basis.vandermonde() * basis.quad_weights().cwiseProduct(nodal);
}

Eigen::VectorXd modal_to_nodal(const OrthoBasis& basis, const Coeffs& v) {
  require_size(basis, v);
  return basis.vandermonde().transpose() * v;
}

}  // namespace spf
