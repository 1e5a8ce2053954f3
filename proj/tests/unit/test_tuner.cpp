#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <spfilter/experiments.hpp>
#include <spfilter/tuner.hpp>

using namespace spf;

TEST_SUITE("tuner") {

TEST_CASE("golden minima") {
  const TuneFunction f0{"f0", ElementKind::Quad, corpus::f0, 0.0};
  CHECK(golden_minimum(f0, GoldenMode::Analytic) == 0.0);
  const TuneFunction five{"five", ElementKind::Quad, [](const Point&) { return 5.0; },
                          std::nullopt};
  CHECK(golden_minimum(five, GoldenMode::Numeric) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK_THROWS_AS(golden_minimum(five, GoldenMode::Analytic), Error);
  // The indicator's projection overshoots below zero near the jump.
  const TuneFunction f2{"f2", ElementKind::Quad, corpus::f2, std::nullopt};
  const double g2 = golden_minimum(f2, GoldenMode::Numeric);
  CHECK(g2 < 0.0);
  CHECK(g2 > -0.3);
}

TEST_CASE("sample grid") {
  const auto s = tune_samples(9);
  REQUIRE(s.size() == 9);
  CHECK(s.front() == doctest::Approx(0.1));
  CHECK(s.back() == doctest::Approx(0.9));
  CHECK(std::ranges::find_if(s, [](double v) { return std::abs(v - 0.7) < 1e-15; }) != s.end());
  CHECK(std::ranges::find_if(s, [](double v) { return std::abs(v - 0.2) < 1e-15; }) != s.end());
  CHECK_THROWS_AS(tune_samples(1), Error);
}

TEST_CASE("selection keeps every tie") {
  const std::vector<TuneCell> cells = {
      {0.1, 0.1, 5, 0.3}, {0.2, 0.1, 3, 0.2}, {0.3, 0.1, 3, 0.1},
      {0.4, 0.1, 3, 0.1}, {0.5, 0.1, 4, 0.0}, {0.6, 0.1, 3, 0.5}};
  const auto selected = select_cells(cells);
  CHECK(selected == std::vector<std::pair<double, double>>{{0.3, 0.1}, {0.4, 0.1}});
}

TEST_CASE("tune_grid aggregates per cell and selects by niter then err") {
  const std::vector<TuneCase> cases = {{"a", 2, 0.0}, {"a", 4, 0.0}, {"b", 2, 1.0}};
  // niter depends on c only, err on gamma and the case.
  const TuneRunner runner = [](const TuneCase& tc, const LineSearchParams& p) {
    const int niter = p.c < 0.35 ? 4 : 9;
    const double found = tc.golden + (p.gamma > 0.5 ? 1e-3 : 1e-6) * tc.order;
    return GdOutcome{niter, found};
  };
  for (Aggregation aggregation : {Aggregation::Sum, Aggregation::Max}) {
    const TuneResult r = tune_grid(cases, 4, runner, {}, aggregation);
    CHECK(r.table.size() == 16 * 3);
    CHECK(r.cells.size() == 16);
    std::set<std::pair<double, double>> got(r.selected.begin(), r.selected.end());
    std::set<std::pair<double, double>> expected;
    for (double c : {0.2}) for (double g : {0.2, 0.4}) expected.insert({c, g});
    CHECK(got == expected);
  }
}

TEST_CASE("tie rule on x^2 + y^2") {
  const TuneFunction bowl{"bowl", ElementKind::Quad, [](const Point& x) { return x.squaredNorm(); },
                          0.0};
  const TuneResult r = tune({bowl}, {2}, 3);
  CHECK(r.table.size() == 9);
  long least = 1L << 40;
  for (const auto& cell : r.cells) least = std::min(least, cell.niter);
  double least_err = 1e300;
  for (const auto& cell : r.cells)
    if (cell.niter == least) least_err = std::min(least_err, cell.err);
  std::size_t ties = 0;
  for (const auto& cell : r.cells) ties += cell.niter == least && cell.err == least_err;
  CHECK(r.selected.size() == ties);
}

TEST_CASE("tune table csv") {
  const TuneFunction bowl{"bowl", ElementKind::Quad, [](const Point& x) { return x.squaredNorm(); },
                          0.0};
  const TuneResult r = tune({bowl}, {2, 3}, 9);
  std::ostringstream out;
  write_tune_csv(out, r);
  const std::string text = out.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 81 * 2);
  CHECK(text.rfind("c,gamma,function,order,niter,err\n", 0) == 0);
}

}  // TEST_SUITE
