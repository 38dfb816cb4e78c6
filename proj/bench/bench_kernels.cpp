// Serial reference kernels against their OpenMP versions.
#include "ecur/criteria.hpp"
#include "ecur/finite_field.hpp"

#include <benchmark/benchmark.h>

using namespace ecur;

namespace {

const ModelPtr& curve_43a()
{
    static const ModelPtr E = WeierstrassModel::from_ainvs({0, 1, 1, 0, 0});
    return E;
}

const ModelPtr& curve_2401()
{
    static const ModelPtr E = WeierstrassModel::from_ainvs({0, 0, 0, -2401, 1});
    return E;
}

ff::ReducedCurve field_curve(benchmark::State& state)
{
    return ff::reduce_curve(*curve_43a(), Prime(static_cast<unsigned long>(state.range(0))),
                            static_cast<unsigned>(state.range(1)));
}

void BM_CountSerial(benchmark::State& state)
{
    auto C = field_curve(state);
    for (auto _ : state) benchmark::DoNotOptimize(C.count_points_serial());
}

void BM_CountParallel(benchmark::State& state)
{
    auto C = field_curve(state);
    for (auto _ : state) benchmark::DoNotOptimize(C.count_points());
}

std::vector<RationalPoint> witnesses()
{
    const auto& E = curve_2401();
    return {scalar_mul(3, RationalPoint::affine(E, 0, 1)), scalar_mul(3, RationalPoint::affine(E, -49, 1)),
            scalar_mul(2, RationalPoint::affine(E, -1, 49))};
}

void BM_IndependenceSerial(benchmark::State& state)
{
    auto pts = witnesses();
    for (auto _ : state) benchmark::DoNotOptimize(independence_mod_p_serial(pts, Prime(7ul)));
}

void BM_IndependenceParallel(benchmark::State& state)
{
    auto pts = witnesses();
    for (auto _ : state) benchmark::DoNotOptimize(independence_mod_p(pts, Prime(7ul)));
}

}  // namespace

BENCHMARK(BM_CountSerial)->Args({5, 5})->Args({3, 8})->Args({10007, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountParallel)->Args({5, 5})->Args({3, 8})->Args({10007, 1})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_IndependenceSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IndependenceParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
