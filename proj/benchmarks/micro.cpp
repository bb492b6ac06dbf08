#include <fractex/best_basis.hpp>
#include <fractex/fbm.hpp>
#include <fractex/fractal.hpp>
#include <fractex/glcm.hpp>
#include <fractex/wavelet.hpp>

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace fractex;

GrayImage random_image(int size, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> data(static_cast<size_t>(size) * size);
    for (double& v : data) v = dist(rng);
    return GrayImage(size, size, std::move(data));
}

void BM_AnalyzeLevel(benchmark::State& state) {
    const GrayImage img = random_image(128, 11);
    const FilterPair filters = db8_filters();
    const int level = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(analyze_level(img, filters, level));
    }
}
BENCHMARK(BM_AnalyzeLevel)->Arg(1)->Arg(2)->Arg(3);

void BM_Reconstruct(benchmark::State& state) {
    const GrayImage img = random_image(128, 12);
    const FilterPair filters = db8_filters();
    const SubbandSet sub = analyze_level(img, filters, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reconstruct_level(sub, filters));
    }
}
BENCHMARK(BM_Reconstruct);

void BM_EstimateFd(benchmark::State& state) {
    const GrayImage img = synth_fbm(128, 128, 0.5, 21);
    const int dist = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_fd(img, dist));
    }
}
BENCHMARK(BM_EstimateFd)->Arg(4)->Arg(8)->Arg(16);

void BM_SynthFbm(benchmark::State& state) {
    uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(synth_fbm(128, 128, 0.5, seed++));
    }
}
BENCHMARK(BM_SynthFbm);

void BM_GlcmFeatures(benchmark::State& state) {
    const GrayImage img = random_image(128, 31);
    const int levels = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(glcm_features_mean(img, levels, 1));
    }
}
BENCHMARK(BM_GlcmFeatures)->Arg(16)->Arg(64);

void BM_BestBasisFd(benchmark::State& state) {
    const GrayImage img = synth_fbm(128, 128, 0.5, 41);
    BestBasisOptions options;
    options.max_level = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            select_best_basis(img, SelectionCriterion::kFractalDimension, options));
    }
}
BENCHMARK(BM_BestBasisFd)->Arg(1)->Arg(3);

void BM_BestBasisEnergy(benchmark::State& state) {
    const GrayImage img = synth_fbm(128, 128, 0.5, 41);
    BestBasisOptions options;
    options.max_level = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(select_best_basis(img, SelectionCriterion::kEnergy, options));
    }
}
BENCHMARK(BM_BestBasisEnergy)->Arg(1)->Arg(3);

} // namespace

BENCHMARK_MAIN();
