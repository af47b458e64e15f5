// Serial reference vs OpenMP for the two data-parallel sweeps.
//   ./ipa_bench --benchmark_filter=Envelope

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ipa/grid.hpp"
#include "ipa/kernels.hpp"

namespace {

using namespace ipa::kernels;

struct EnvelopeFixture {
    std::vector<std::vector<double>> data;
    std::vector<std::vector<bool>> flags;
    SlotTable table;
    std::size_t grid_size;

    EnvelopeFixture(std::size_t n, int slots, int alternatives) : grid_size(n) {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> u(0.0, 60.0);
        data.reserve(static_cast<std::size_t>(slots * alternatives));
        flags.reserve(data.capacity());
        table.resize(static_cast<std::size_t>(slots));
        for (int s = 0; s < slots; ++s)
            for (int a = 0; a < alternatives; ++a) {
                auto& d = data.emplace_back(n);
                auto& f = flags.emplace_back(n);
                for (std::size_t i = 0; i < n; ++i) {
                    d[i] = std::min(u(rng), 50.0);
                    f[i] = d[i] == 50.0;
                }
                table[static_cast<std::size_t>(s)].push_back({d, &f});
            }
    }
};

template <EnvelopeResult (*Sweep)(const SlotTable&, std::size_t)>
void BM_Envelope(benchmark::State& state) {
    // Fine grid (0.01 nm over 400-800 nm) so the per-wavelength loop dominates.
    const EnvelopeFixture fx(static_cast<std::size_t>(state.range(0)), 8, 4);
    for (auto _ : state) benchmark::DoNotOptimize(Sweep(fx.table, fx.grid_size));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <std::vector<double> (*Sweep)(double, int, std::span<const double>)>
void BM_Usd(benchmark::State& state) {
    const auto xs = ipa::uniform_grid(0.0, 2.0, 0.005);
    const int n_half = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(Sweep(1.0, n_half, xs));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(xs.size()));
}

}  // namespace

BENCHMARK(BM_Envelope<serial::envelope_sweep>)->Name("Envelope/serial")->Arg(401)->Arg(40001);
BENCHMARK(BM_Envelope<omp::envelope_sweep>)->Name("Envelope/omp")->Arg(401)->Arg(40001);
BENCHMARK(BM_Usd<serial::usd_sweep>)->Name("UsdSweep/serial")->Arg(2)->Arg(4);
BENCHMARK(BM_Usd<omp::usd_sweep>)->Name("UsdSweep/omp")->Arg(2)->Arg(4);

BENCHMARK_MAIN();
