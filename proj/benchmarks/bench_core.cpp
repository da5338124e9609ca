#include <benchmark/benchmark.h>

#include "ghost/correlation.hpp"
#include "ghost/objects.hpp"
#include "ghost/retrieval.hpp"

using namespace ghost;

namespace {

OpticalConfig optics() {
    OpticalConfig c;
    c.wavelength = 5.32e-7;
    return c;
}

}  // namespace

static void BM_Fft2(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    ComplexField f(Grid2D(n, n, 1.0));
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = Complex(double(i % 7), 0.0);
    for (auto _ : state) {
        fft2_inplace(f.values(), n, n);
        benchmark::DoNotOptimize(f.values().data());
    }
}
BENCHMARK(BM_Fft2)->Arg(64)->Arg(128)->Arg(256);

static void BM_Simulate(benchmark::State& state) {
    const OpticalConfig c = optics();
    const RealImage obj = letter_object(c.object_grid);
    EnsembleSpec e;
    e.count = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(simulate(obj, c, e, {}, 1, 1).buckets.data());
    state.SetItemsProcessed(state.iterations() * e.count);
}
BENCHMARK(BM_Simulate)->Arg(1 << 12)->Unit(benchmark::kMillisecond);

static void BM_Correlate(benchmark::State& state) {
    const OpticalConfig c = optics();
    EnsembleSpec e;
    e.count = state.range(0);
    const MeasurementSet ms = simulate(letter_object(c.object_grid), c, e, {}, 1, 1);
    for (auto _ : state) benchmark::DoNotOptimize(correlate(ms, 1).image.values().data());
    state.SetItemsProcessed(state.iterations() * e.count);
}
BENCHMARK(BM_Correlate)->Arg(1 << 12)->Unit(benchmark::kMillisecond);

static void BM_HioStep(benchmark::State& state) {
    const Grid2D g(64, 64, 7.4e-6);
    const RealImage obj = letter_object(g);
    const MagnitudeSpectrum target = magnitude(fft2(obj), true);
    const SupportMask support = SupportMask::centered_box(g, 19, 25);
    ComplexField it = initial_iterate(target, 1, 0);
    for (auto _ : state) {
        it = hio_step(it, target, support, 0.9);
        benchmark::DoNotOptimize(it.values().data());
    }
}
BENCHMARK(BM_HioStep);
BENCHMARK_MAIN();
