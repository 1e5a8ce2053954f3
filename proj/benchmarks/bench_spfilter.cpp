#include <random>

#include <benchmark/benchmark.h>

#include <spfilter/barycentric.hpp>
#include <spfilter/dgsolver.hpp>
#include <spfilter/experiments.hpp>
#include <spfilter/filter.hpp>
#include <spfilter/legendre_series.hpp>
#include <spfilter/minimize.hpp>

using namespace spf;

namespace {

Coeffs random_coeffs(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Coeffs v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

std::vector<Point> random_points(int dim, int count) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point> points;
  for (int i = 0; i < count; ++i) {
    Point x(dim);
    for (int k = 0; k < dim; ++k) x[k] = u(rng);
    points.push_back(x);
  }
  return points;
}

ElementKind tensor_kind(int dim) { return dim == 2 ? ElementKind::Quad : ElementKind::Hex; }

void BM_EvalModal(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const OrthoBasis basis(tensor_kind(dim), static_cast<int>(state.range(1)));
  const Coeffs v = random_coeffs(basis.size(), 2);
  const auto points = random_points(dim, 256);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(eval(basis, v, points[i++ % points.size()]));
}
BENCHMARK(BM_EvalModal)->ArgsProduct({{2, 3}, {4, 8}});

void BM_EvalBarycentric(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const OrthoBasis basis(tensor_kind(dim), static_cast<int>(state.range(1)));
  const TensorInterpolator interp(basis);
  const Eigen::VectorXd nodal = modal_to_nodal(basis, random_coeffs(basis.size(), 2));
  const std::span<const double> data(nodal.data(), static_cast<std::size_t>(nodal.size()));
  const auto points = random_points(dim, 256);
  std::size_t i = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(eval_nodal_barycentric(interp, data, points[i++ % points.size()]));
}
BENCHMARK(BM_EvalBarycentric)->ArgsProduct({{2, 3}, {4, 8}});

void BM_Minimize1d(benchmark::State& state) {
  const LegendreSeries series(random_coeffs(static_cast<int>(state.range(0)) + 1, 5));
  for (auto _ : state) benchmark::DoNotOptimize(minimize_1d(series));
}
BENCHMARK(BM_Minimize1d)->Arg(4)->Arg(8)->Arg(16);

void BM_FilterClampedSinusoid(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const OrthoBasis basis(ElementKind::Quad, order);
  const Coeffs v =
      project(basis, [](const Point& x) { return corpus::projection_sinusoid(x, true); });
  const FilterConfig config = default_filter_config(2);
  for (auto _ : state) benchmark::DoNotOptimize(filter_element(basis, v, positivity(), config));
}
BENCHMARK(BM_FilterClampedSinusoid)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_LatticeCheck(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  auto basis = std::make_shared<const OrthoBasis>(ElementKind::Hex, order);
  const ElementFilter filter(basis, positivity(), default_filter_config(3));
  const Coeffs v = random_coeffs(basis->size(), 9);
  for (auto _ : state) benchmark::DoNotOptimize(filter.violates(v));
}
BENCHMARK(BM_LatticeCheck)->Arg(2)->Arg(4)->Arg(6);

void BM_Rhs(benchmark::State& state) {
  const Mesh mesh = make_composite_mesh(symmetric_box(2), 4, 4, {1, 2});
  SolverConfig config;
  config.order = static_cast<int>(state.range(0));
  config.filter_enabled = false;
  const DGSolver solver(mesh, constant_velocity(make_point({1.0, 1.0})), config);
  const DGState u = solver.project(corpus::cosine_well);
  for (auto _ : state) benchmark::DoNotOptimize(solver.rhs(u.coeffs));
}
BENCHMARK(BM_Rhs)->Arg(2)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
