#include "dmlab/kernels.hpp"
#include "dmlab/poly_eval.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace dmlab;

namespace {

struct Fixture {
    DirichletTerms terms;
    UniformGrid grid;
};

// Z_1 at T = 1e4 on a slice of its quadrature grid
const Fixture& fixture() {
    static const Fixture f = [] {
        const double T = 1e4;
        const auto tables = build_factor_tables(static_cast<std::uint64_t>(T));
        Fixture out;
        out.terms = make_terms(zhat_coeffs(1.0, T, tables));
        const auto g = make_grid(T, 2, 1.0);
        out.grid = g.geometry();
        out.grid.count = 8192;
        return out;
    }();
    return f;
}

void BM_direct_serial(benchmark::State& state) {
    const auto& f = fixture();
    for (auto _ : state) benchmark::DoNotOptimize(kernels::eval_direct_serial(f.terms, f.grid));
    state.SetItemsProcessed(state.iterations() * f.grid.count * f.terms.size());
}

void BM_recurrence(benchmark::State& state) {
    const auto& f = fixture();
    const int saved = thread_budget();
    set_thread_budget(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::eval_recurrence(f.terms, f.grid));
    set_thread_budget(saved);
    state.SetItemsProcessed(state.iterations() * f.grid.count * f.terms.size());
}

void BM_points(benchmark::State& state) {
    const auto& f = fixture();
    std::vector<double> h(f.grid.count);
    for (std::size_t j = 0; j < h.size(); ++j) h[j] = f.grid.t(j);
    const int saved = thread_budget();
    set_thread_budget(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::eval_at_points(f.terms, h));
    set_thread_budget(saved);
    state.SetItemsProcessed(state.iterations() * h.size() * f.terms.size());
}

}  // namespace

BENCHMARK(BM_direct_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_recurrence)->ArgName("threads")->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_points)->ArgName("threads")->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
