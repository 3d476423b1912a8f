#include <benchmark/benchmark.h>

#include <array>

#include "twistleaf/expr.hpp"
#include "twistleaf/twistor.hpp"

namespace {

using namespace twistleaf;

void BM_Parse(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(HoloExpr::parse("exp(z1)*sin(z2) + 0.5*z1^2 - z2/(1 + z1)", {"z1", "z2"}));
  }
}
BENCHMARK(BM_Parse);

void BM_EvalJet2(benchmark::State& state) {
  const HoloExpr e = HoloExpr::parse("exp(z1)*sin(z2) + 0.5*z1^2 - z2/(1 + z1)", {"z1", "z2"});
  const std::array<Complex, 2> at{Complex(0.1, 0.2), Complex(-0.3, 0.05)};
  for (auto _ : state) benchmark::DoNotOptimize(e.eval_jet2(at));
}
BENCHMARK(BM_EvalJet2);

void BM_CoordsConvenient(benchmark::State& state) {
  const ProjPoint p({Complex(0.3, 0.1), Complex(-0.2, 0.4), Complex(1.0, 0.0), Complex(0.5, -0.7)});
  for (auto _ : state) benchmark::DoNotOptimize(coords_convenient(p));
}
BENCHMARK(BM_CoordsConvenient);

}  // namespace
