#include "qlti/decompose.hpp"
#include "qlti/mesh.hpp"
#include "qlti/quantize.hpp"
#include "qlti/sdm.hpp"
#include "qlti/symplectic.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace qlti;

Eigen::MatrixXcd random_complex(Eigen::Index r, Eigen::Index c,
                                std::mt19937_64& gen) {
    std::normal_distribution<double> dist;
    Eigen::MatrixXcd M(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) {
            M(i, j) = std::complex<double>(dist(gen), dist(gen));
        }
    }
    return M;
}

void bm_random_group_element(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const FrequencyGrid grid = FrequencyGrid::linspace(0.0, 1.0, 16);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(random_group_element(grid, n, seed++));
    }
}
BENCHMARK(bm_random_group_element)->Arg(2)->Arg(4)->Arg(8);

void bm_optical_decomposition(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const FrequencyGrid grid = FrequencyGrid::linspace(0.0, 1.0, 4);
    const MatrixFunction M = random_group_element(grid, n, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(optical_decomposition(M));
    }
}
BENCHMARK(bm_optical_decomposition)->Arg(2)->Arg(4)->Arg(8);

void bm_minimal_noise(benchmark::State& state) {
    const FrequencyGrid grid = FrequencyGrid::linspace(0.0, 1.0, 64);
    std::mt19937_64 gen(11);
    std::vector<Eigen::MatrixXcd> samples;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        Eigen::MatrixXcd G = 0.3 * random_complex(2, 4, gen);
        if (k == 0) {
            G = G.real().cast<std::complex<double>>();
        }
        samples.push_back(G);
    }
    const MatrixFunction G(grid, std::move(samples));
    for (auto _ : state) {
        benchmark::DoNotOptimize(minimal_noise(G));
    }
}
BENCHMARK(bm_minimal_noise);

void bm_williamson(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const FrequencyGrid grid = FrequencyGrid::linspace(0.0, 1.0, 16);
    const MatrixFunction M = random_group_element(grid, n, 23);
    const SpectralDensityMatrix S = transform_sdm(M, vacuum_sdm(grid, n));
    for (auto _ : state) {
        benchmark::DoNotOptimize(williamson(S));
    }
}
BENCHMARK(bm_williamson)->Arg(2)->Arg(4);

void bm_mesh_decompose(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    std::mt19937_64 gen(31);
    const Eigen::MatrixXcd A = random_complex(n, n, gen);
    const Eigen::MatrixXcd U =
        Eigen::HouseholderQR<Eigen::MatrixXcd>(A).householderQ();
    for (auto _ : state) {
        benchmark::DoNotOptimize(mesh_decompose(U));
    }
}
BENCHMARK(bm_mesh_decompose)->Arg(4)->Arg(8)->Arg(16);

} // namespace

BENCHMARK_MAIN();
