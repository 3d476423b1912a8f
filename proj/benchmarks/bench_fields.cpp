#include <benchmark/benchmark.h>

#include "twistleaf/eikonal.hpp"
#include "twistleaf/expr.hpp"
#include "twistleaf/foliation.hpp"
#include "twistleaf/nullform.hpp"

namespace {

using namespace twistleaf;

GridSpec cube(double half, int n) {
  GridSpec g;
  for (Axis& a : g.axes) a = {-half, half, n};
  return g;
}

void BM_SolveImplicit(benchmark::State& state) {
  const auto data = ImplicitData::graph(HoloExpr::parse("exp(z1) - 1", {"z1", "z2"}));
  for (auto _ : state) benchmark::DoNotOptimize(solve_implicit_point(data, {0.1, -0.2, 0.3}, 0.0, {}));
}
BENCHMARK(BM_SolveImplicit);

void BM_GridField(benchmark::State& state) {
  const auto data = ImplicitData::graph(HoloExpr::parse("z1*z2", {"z1", "z2"}));
  const GridSpec spec = cube(0.4, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(grid_field(data, spec, {}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(spec.size()));
}
BENCHMARK(BM_GridField)->Arg(9)->Arg(17)->Unit(benchmark::kMillisecond);

void BM_SolveZW(benchmark::State& state) {
  const GradientFn xi = gradient_of_potential(HoloExpr::parse("0.5*z1^2 + 0.5*z2^2 - z2", {"z1", "z2"}));
  for (auto _ : state) benchmark::DoNotOptimize(solve_xi_point(xi, {0.1, 0.2, -0.1}, {0.0, 1.0}, {}));
}
BENCHMARK(BM_SolveZW);

void BM_SignedDistance(benchmark::State& state) {
  const Profile phi = Profile::bump(0.3, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(signed_distance(phi, 0.4, 0.1));
}
BENCHMARK(BM_SignedDistance);

}  // namespace
