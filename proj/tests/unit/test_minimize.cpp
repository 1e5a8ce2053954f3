#include <doctest.h>

#include <random>

#include <spfilter/experiments.hpp>
#include <spfilter/filter.hpp>
#include <spfilter/legendre_series.hpp>
#include <spfilter/minimize.hpp>
#include <spfilter/tuner.hpp>

#include "support/oracle.hpp"

using namespace spf;

namespace {

double scan_min(const std::vector<double>& c, int n) {
  double best = 1e300;
  for (int i = 0; i < n; ++i)
    best = std::min(best, oracle::legendre_series(c, -1.0 + 2.0 * i / (n - 1)));
  return best;
}

}  // namespace

TEST_SUITE("minimize") {

TEST_CASE("exact 1D minima") {
  const auto psi2 = minimize_1d(LegendreSeries(Coeffs::Unit(3, 2)));
  CHECK(psi2.x_star[0] == doctest::Approx(0.0).scale(1.0));
  CHECK(psi2.value == doctest::Approx(-0.79056942).epsilon(1e-8));

  const auto psi1 = minimize_1d(LegendreSeries(Coeffs::Unit(2, 1)));
  CHECK(psi1.x_star[0] == doctest::Approx(-1.0));

  const auto constant = minimize_1d(LegendreSeries(Coeffs::Constant(1, 3.0)));
  CHECK(constant.value == doctest::Approx(3.0 / std::sqrt(2.0)));
  CHECK(std::abs(constant.x_star[0]) == doctest::Approx(1.0));

  const auto sub = minimize_1d(LegendreSeries(Coeffs::Unit(2, 1)), 0.2, 0.5);
  CHECK(sub.x_star[0] == doctest::Approx(0.2));
}

TEST_CASE("comrade roots match a known polynomial") {
  // x^2 - 1/4 in orthonormal Legendre coordinates.
  const double c2 = (2.0 / 3.0) / std::sqrt(2.5);
  const double c0 = (1.0 / 3.0 - 0.25) * std::sqrt(2.0);
  const auto roots = LegendreSeries(Eigen::Vector3d(c0, 0.0, c2)).real_roots();
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == doctest::Approx(-0.5));
  CHECK(roots[1] == doctest::Approx(0.5));
}

TEST_CASE("random degree-6 series against a dense scan") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> c(7);
    for (auto& ck : c) ck = u(rng);
    const auto found = minimize_1d(LegendreSeries(Eigen::Map<Eigen::VectorXd>(c.data(), 7)));
    CHECK(std::abs(found.value - scan_min(c, 1000000)) <= 1e-10);
  }
}

TEST_CASE("descent on a convex quadratic") {
  const FunctionObjective bowl([](const Point& x) { return x.squaredNorm(); },
                               [](const Point& x) { return Point(2.0 * x); });
  const auto result = gd_backtracking(bowl, make_point({0.5, 0.5}), default_line_search(2),
                                      ReferenceElement(ElementKind::Quad));
  CHECK(result.x_star.norm() < 1e-6);
  CHECK(result.gd_iters > 0);
}

TEST_CASE("descent respects the element boundary") {
  const FunctionObjective tilt([](const Point& x) { return x[0] + x[1]; },
                               [](const Point&) { return make_point({1.0, 1.0}); });
  const auto result = gd_backtracking(tilt, make_point({-0.5, 0.0}), default_line_search(2),
                                      ReferenceElement(ElementKind::Tri));
  CHECK(ReferenceElement(ElementKind::Tri).contains(result.x_star));
  CHECK(result.x_star[0] == doctest::Approx(-1.0));
  CHECK(result.x_star[1] == doctest::Approx(-1.0));
}

TEST_CASE("non-finite objective is an error") {
  const FunctionObjective bad([](const Point&) { return std::nan(""); },
                              [](const Point& x) { return Point(x); });
  CHECK_THROWS_AS(gd_backtracking(bad, make_point({0.1, 0.1}), default_line_search(2),
                                  ReferenceElement(ElementKind::Quad)),
                  Error);
}

TEST_CASE("positive constant stays positive under the signed-distance descent") {
  OrthoBasis b(ElementKind::Quad, 3);
  const Coeffs v = Coeffs::Unit(b.size(), 0);
  const auto lower = ConstraintFamily::lower_bound(0.0);
  const SignedDistanceObjective s(b, v, lower);
  const auto result = global_min(s, build_lattice(b).points, default_line_search(2), b.element());
  CHECK(result.value > 0.0);
}

TEST_CASE("f0 projection: descent finds (-0.6, 0.2)") {
  OrthoBasis b(ElementKind::Quad, 4);
  const Coeffs v = project(b, corpus::f0);
  const FieldObjective objective(b, v);
  const auto result = global_min(objective, build_lattice(b).points, default_line_search(2),
                                 b.element());
  CHECK(std::abs(result.value) <= 1e-7);
  CHECK(result.x_star[0] == doctest::Approx(-0.6).epsilon(1e-3));
  CHECK(result.x_star[1] == doctest::Approx(0.2).epsilon(1e-3));
}

TEST_CASE("lattice point minimum with zero gradient is returned as is") {
  OrthoBasis b(ElementKind::Quad, 2);
  const Lattice lattice = build_lattice(b);
  const Point target = lattice.points[5];
  const FunctionObjective objective(
      [&](const Point& x) { return (x - target).squaredNorm(); },
      [&](const Point& x) { return Point(2.0 * (x - target)); });
  const auto result = global_min(objective, lattice.points, default_line_search(2), b.element());
  CHECK((result.x_star - target).norm() == 0.0);
  CHECK(result.value == 0.0);
}

TEST_CASE("segment descent agrees with the exact 1D minimum") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  OrthoBasis seg(ElementKind::Segment, 5);
  for (int trial = 0; trial < 10; ++trial) {
    Coeffs v(6);
    for (int i = 0; i < 6; ++i) v[i] = u(rng);
    const double exact = minimize_1d(LegendreSeries(v)).value;
    const FieldObjective objective(seg, v);
    LineSearchParams params = default_line_search(2);
    params.seeds = 6;
    params.max_gd_iters = 2000;
    const auto lattice = build_lattice(seg);
    const auto found = global_min(objective, lattice.points, params, seg.element());
    CHECK(found.value >= exact - 1e-12);
    CHECK(std::abs(found.value - exact) <= 1e-6);
  }
}

}  // TEST_SUITE
