#include <random>

#include <benchmark/benchmark.h>

#include "hrf/analysis.hpp"

using namespace hrf;

namespace {

HomogeneousLift quadratic() { return HomogeneousLift::from_rational(Field::Complex, {1, 0, -0.3}, {1}); }

Sl2 off_centre() {
    return transvection_representative(HyperbolicPoint::ball(Field::Complex, Vec3(0.3, -0.2, 0.4)));
}

void BM_BuildRule(benchmark::State& state) {
    const Field field = state.range(0) ? Field::Complex : Field::Real;
    for (auto _ : state) benchmark::DoNotOptimize(build_rule(field, static_cast<int>(state.range(1))));
}
BENCHMARK(BM_BuildRule)->Args({0, 16})->Args({1, 16})->Args({1, 32})->Unit(benchmark::kMillisecond);

void BM_RValue(benchmark::State& state) {
    const auto rule = build_rule(Field::Complex, static_cast<int>(state.range(0)));
    const auto F = quadratic();
    const Sl2 g = off_centre();
    for (auto _ : state) benchmark::DoNotOptimize(r_value(F, g, rule));
}
BENCHMARK(BM_RValue)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_RValueIterate(benchmark::State& state) {
    const auto rule = build_rule(Field::Complex, 16);
    const IteratedLift L(quadratic(), static_cast<int>(state.range(0)));
    const Sl2 g = off_centre();
    for (auto _ : state) benchmark::DoNotOptimize(r_value(L, g, rule));
}
BENCHMARK(BM_RValueIterate)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Gradient(benchmark::State& state) {
    const auto rule = build_rule(Field::Complex, 16);
    const auto F = quadratic();
    const Sl2 g = off_centre();
    for (auto _ : state) benchmark::DoNotOptimize(gradient_at(F, g, rule));
}
BENCHMARK(BM_Gradient)->Unit(benchmark::kMillisecond);

void BM_EscapeRate(benchmark::State& state) {
    const GreenData green(quadratic());
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n;
    const Pair p{cplx(n(rng), n(rng)), cplx(n(rng), n(rng))};
    for (auto _ : state) benchmark::DoNotOptimize(green.escape_rate(p));
}
BENCHMARK(BM_EscapeRate);

void BM_Barycenter(benchmark::State& state) {
    EntropySampling opt;
    opt.depth = static_cast<int>(state.range(0));
    const auto mu = max_entropy_measure(RationalMap(quadratic()), opt);
    for (auto _ : state) benchmark::DoNotOptimize(solve_barycenter(mu));
}
BENCHMARK(BM_Barycenter)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
