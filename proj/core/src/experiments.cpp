#include "spfilter/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace spf::corpus {

using std::numbers::pi;

double f0(const Point& x) { return (x[0] + 0.6) * (x[0] + 0.6) + (x[1] - 0.2) * (x[1] - 0.2); }

double f1(const Point& x) { return -std::sin((x[0] - 0.1) + 0.5 * pi) * std::cos(x[1] - 0.2); }

double f2(const Point& x) { return (x[0] <= 0.0 && x[1] <= 0.0) ? 1.0 : 0.0; }

double f3(const Point& x) { return f0(x) + (x[2] + 0.1) * (x[2] + 0.1); }

double f4(const Point& x) { return f1(x) * std::cos(x[2] - 0.2); }

double f5(const Point& x) { return (x[0] <= 0.0 && x[1] <= 0.0 && x[2] <= 0.0) ? 1.0 : 0.0; }

std::vector<TuneFunction> tune_functions_2d() {
  return {{"f0", ElementKind::Quad, f0, 0.0},
          {"f1", ElementKind::Quad, f1, -1.0},
          {"f2", ElementKind::Quad, f2, std::nullopt}};
}

std::vector<TuneFunction> tune_functions_3d() {
  return {{"f3", ElementKind::Hex, f3, 0.0},
          {"f4", ElementKind::Hex, f4, -1.0},
          {"f5", ElementKind::Hex, f5, std::nullopt}};
}

double clamped_sinusoid_unit(const Point& x) {
  const bool inside = x[0] >= 0.0 && x[0] <= 0.5 && x[1] >= 0.4 && x[1] <= 0.85;
  if (!inside) return 0.0;
  return std::sin(2.0 * pi * x[0]) * std::sin(2.0 * pi * x[1] - 0.85 * pi);
}

double clamped_sinusoid_unit_reference(const Point& xi) {
  return clamped_sinusoid_unit(make_point({0.5 * (xi[0] + 1.0), 0.5 * (xi[1] + 1.0)}));
}

double projection_sinusoid(const Point& x, bool clamped) {
  double value = std::sin(pi * (0.2 - x[0]));
  bool inside = x[0] >= -0.8 && x[0] <= 0.2;
  for (Eigen::Index k = 1; k < x.size(); ++k) {
    value *= std::sin(pi * (x[k] + 0.2));
    inside = inside && x[k] >= -0.2 && x[k] <= 0.8;
  }
  return (!clamped || inside) ? value : 0.0;
}

double cosine_well(const Point& x) {
  double product = 1.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) product *= std::cos(0.5 * pi * x[k]);
  return 1.0 - product;
}

double torus(const Point& x) {
  const double ring = 1.0 - std::hypot(x[0], x[1]);
  return 0.2 * (ring * ring + x[2] * x[2]);
}

double solid_body(const Point& x) {
  constexpr double radius = 0.3;
  auto distance = [&](double cx, double cy) {
    return std::hypot(x[0] - cx, x[1] - cy) / radius;
  };
  const double r_cyl = distance(0.0, 0.5);
  if (r_cyl <= 1.0) {
    const bool in_slot = std::abs(x[0]) < 0.05 && x[1] < 0.7;
    return in_slot ? 0.0 : 1.0;
  }
  const double r_cone = distance(0.0, -0.5);
  if (r_cone <= 1.0) return 1.0 - r_cone;
  const double r_hump = distance(-0.6, 0.0);
  if (r_hump <= 1.0) return 0.25 * (1.0 + std::cos(pi * r_hump));
  return 0.0;
}

}  // namespace spf::corpus
