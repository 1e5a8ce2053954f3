#include <doctest.h>

#include <memory>
#include <random>

#include <spfilter/experiments.hpp>
#include <spfilter/filter.hpp>

#include "support/oracle.hpp"

using namespace spf;

namespace {

double dense_min_1d(const Coeffs& v, int n = 10000) {
  std::vector<double> c(v.data(), v.data() + v.size());
  double best = 1e300;
  for (int i = 0; i < n; ++i)
    best = std::min(best, oracle::legendre_series(c, -1.0 + 2.0 * i / (n - 1)));
  return best;
}

}  // namespace

TEST_SUITE("filter") {

TEST_CASE("signed distance and the hyperplane projection by hand") {
  OrthoBasis seg(ElementKind::Segment, 1);
  const Coeffs v = Coeffs::Unit(2, 1);
  const auto lower = ConstraintFamily::lower_bound(0.0);
  CHECK(signed_distance(seg, v, lower, make_point({-1.0})) ==
        doctest::Approx(-0.86602540).epsilon(1e-8));
  CHECK(signed_distance(seg, v, lower, make_point({0.0})) == doctest::Approx(0.0));

  const auto projected = project_onto_hyperplane(seg, v, lower, make_point({-1.0}));
  CHECK(projected.applied);
  CHECK(projected.v[0] == doctest::Approx(0.43301270).epsilon(1e-8));
  CHECK(projected.v[1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(std::abs(eval(seg, projected.v, make_point({-1.0}))) < 1e-14);

  const auto noop = project_onto_hyperplane(seg, v, lower, make_point({0.5}));
  CHECK_FALSE(noop.applied);
  CHECK(noop.v == v);

  // u == 0 is strictly inside u <= 1: s = lambda = 1 / ||psi(x)||.
  const auto upper = ConstraintFamily::upper_bound(1.0);
  for (double x : {-1.0, 0.3}) {
    const auto psi = oracle::legendre(1, x);
    CHECK(signed_distance(seg, Coeffs::Zero(2), upper, make_point({x})) ==
          doctest::Approx(1.0 / std::hypot(psi[0], psi[1])));
  }
}

TEST_CASE("constant basis projects a negative constant to zero") {
  OrthoBasis b(ElementKind::Segment, 0);
  const Coeffs v = Coeffs::Constant(1, -1.0);
  const auto [out, report] = filter_element(b, v, positivity());
  CHECK(std::abs(out[0]) < 1e-15);
  CHECK(report.converged);
  CHECK(report.iterations == 1);
}

TEST_CASE("feasible input is returned untouched") {
  OrthoBasis b(ElementKind::Quad, 3);
  const Coeffs v = project(b, [](const Point& x) { return 1.0 + 0.2 * x[0] * x[1]; });
  const auto [out, report] = filter_element(b, v, positivity());
  CHECK(report.iterations == 0);
  CHECK(out == v);
}

TEST_CASE("linear mode on a segment") {
  OrthoBasis seg(ElementKind::Segment, 1);
  const Coeffs v = Coeffs::Unit(2, 1);
  const auto [out, report] = filter_element(seg, v, positivity());
  CHECK(report.converged);
  CHECK(dense_min_1d(out) >= -1e-7);
  CHECK(out.norm() <= 1.0);
}

TEST_CASE("norm contraction and feasibility on random segments") {
  std::mt19937 rng(21);
  std::normal_distribution<double> g;
  OrthoBasis seg(ElementKind::Segment, 6);
  for (int trial = 0; trial < 30; ++trial) {
    Coeffs v(7);
    for (int i = 0; i < 7; ++i) v[i] = g(rng);
    const auto [out, report] = filter_element(seg, v, positivity());
    CHECK(report.converged);
    CHECK(out.norm() <= v.norm());
    CHECK(dense_min_1d(out) >= -1e-7);
  }
}

TEST_CASE("two-sided bounds") {
  OrthoBasis b(ElementKind::Quad, 4);
  const Coeffs v = project(b, [](const Point& x) { return 0.5 + 0.8 * std::sin(3 * x[0]) * x[1]; });
  const std::vector<ConstraintFamily> box = {ConstraintFamily::lower_bound(0.0),
                                             ConstraintFamily::upper_bound(1.0)};
  const auto [out, report] = filter_element(b, v, box);
  CHECK(report.converged);
  CHECK(report.iterations > 0);
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i < 101; ++i)
    for (int j = 0; j < 101; ++j) {
      const double x[2] = {-1.0 + 0.02 * i, -1.0 + 0.02 * j};
      const double u = oracle::tensor_eval(4, 2, out, x);
      lo = std::min(lo, u);
      hi = std::max(hi, u);
    }
  CHECK(lo >= -1e-6);
  CHECK(hi <= 1.0 + 1e-6);
}

TEST_CASE("iteration cap returns the best iterate unconverged") {
  OrthoBasis b(ElementKind::Quad, 5);
  const Coeffs v = project(b, [](const Point& x) { return corpus::projection_sinusoid(x, true); });
  FilterConfig config = default_filter_config(2);
  config.max_iterations = 1;
  const auto [out, report] = filter_element(b, v, positivity(), config);
  CHECK_FALSE(report.converged);
  CHECK(report.iterations == 1);
  CHECK(report.final_min_s < 0.0);
  CHECK(out.size() == v.size());
}

TEST_CASE("flag_elements") {
  auto basis = std::make_shared<const OrthoBasis>(ElementKind::Quad, 3);
  const ElementFilter filter(basis, positivity(), default_filter_config(2));
  const Coeffs positive = project(*basis, [](const Point& x) { return 2.0 + x[0]; });
  std::vector<Coeffs> state(4, positive);
  std::vector<const ElementFilter*> filters(4, &filter);
  CHECK(flag_elements(state, filters).empty());

  state[2][0] -= 3.0 * std::sqrt(4.0);  // subtract 3 from the field: min 2-1-3 < 0
  CHECK(flag_elements(state, filters) == std::vector<int>{2});

  // Discontinuous clamped sinusoid on a 2x2 split of [-1,1]^2: some element dips.
  std::vector<Coeffs> pieces;
  for (int ey = 0; ey < 2; ++ey)
    for (int ex = 0; ex < 2; ++ex)
      pieces.push_back(project(*basis, [&](const Point& xi) {
        const Point x = make_point({ex - 1.0 + (xi[0] + 1) / 2, ey - 1.0 + (xi[1] + 1) / 2});
        return corpus::projection_sinusoid(x, true);
      }));
  bool oracle_negative = false;
  for (const auto& p : pieces) oracle_negative |= oracle::tensor_dense_min(3, 2, p, 200) < -1e-7;
  REQUIRE(oracle_negative);
  CHECK_FALSE(flag_elements(pieces, filters).empty());
}

TEST_CASE("element filter lattice tables agree with direct evaluation") {
  auto basis = std::make_shared<const OrthoBasis>(ElementKind::Tri, 4);
  const ElementFilter filter(basis, positivity());
  std::mt19937 rng(2);
  std::normal_distribution<double> g;
  Coeffs v(basis->size());
  for (int i = 0; i < v.size(); ++i) v[i] = g(rng);
  const Eigen::VectorXd values = filter.lattice_values(v);
  const Eigen::VectorXd s = filter.lattice_signed_distance(v, 0);
  for (std::size_t l = 0; l < filter.lattice().points.size(); ++l) {
    const Point& x = filter.lattice().points[l];
    CHECK(values[static_cast<Eigen::Index>(l)] == doctest::Approx(eval(*basis, v, x)));
    CHECK(s[static_cast<Eigen::Index>(l)] ==
          doctest::Approx(signed_distance(*basis, v, positivity()[0], x)));
  }
}

}  // TEST_SUITE
