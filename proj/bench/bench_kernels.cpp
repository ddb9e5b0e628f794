// Serial vs OpenMP timings of the parallel kernels.

#include <benchmark/benchmark.h>

#include "causal/electric.hpp"
#include "causal/parallel.hpp"
#include "causal/walk.hpp"

using namespace causal;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_WalkTrials(benchmark::State& st) {
    const auto mu = mk_offspring({{1, 0.5}, {2, 0.5}});
    for (auto _ : st) {
        auto hs = run_trials(
            32,
            [&](std::size_t i) {
                LazyMap m = LazyMap::halfplane(mu, trial_seed(7, i));
                Rng rng(trial_seed(8, i));
                return run_walk(m, m.root(), 20'000, 1.0, rng).heights.back();
            },
            exec_of(st));
        benchmark::DoNotOptimize(hs);
    }
}
BENCHMARK(BM_WalkTrials)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

CsrMatrix grid_laplacian(int side) {
    CsrMatrix a;
    a.n = side * side;
    a.row_start.push_back(0);
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) {
            int deg = 0;
            auto nb = [&](int rr, int cc) {
                if (rr < 0 || cc < 0 || rr >= side || cc >= side) return;
                a.col.push_back(rr * side + cc);
                a.val.push_back(-1.0);
                ++deg;
            };
            nb(r - 1, c);
            nb(r, c - 1);
            a.col.push_back(r * side + c);
            a.val.push_back(0.0);
            const std::size_t diag = a.val.size() - 1;
            nb(r, c + 1);
            nb(r + 1, c);
            a.val[diag] = deg + 0.01;
            a.row_start.push_back(static_cast<int>(a.col.size()));
        }
    return a;
}

void BM_Spmv(benchmark::State& st) {
    CsrMatrix a = grid_laplacian(1000);
    std::vector<double> x(a.n, 1.0), y;
    for (auto _ : st) {
        spmv(a, x, y, exec_of(st));
        benchmark::DoNotOptimize(y.data());
    }
}
BENCHMARK(BM_Spmv)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ConjugateGradient(benchmark::State& st) {
    CsrMatrix a = grid_laplacian(300);
    std::vector<double> b(a.n, 0.0);
    b[0] = 1.0;
    for (auto _ : st) {
        std::vector<double> x;
        CgResult r = conjugate_gradient(a, b, x, 1e-8, 100'000, exec_of(st));
        benchmark::DoNotOptimize(r.iterations);
    }
}
BENCHMARK(BM_ConjugateGradient)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Resistance(benchmark::State& st) {
    Rng rng(11);
    PlaneTree t = sample_gw_survived(mk_offspring({{0, 0.25}, {2, 0.75}}), 16, rng);
    CausalMap m = build_causal(t);
    ResistanceNetwork net = ResistanceNetwork::from_map(m);
    net.sources = {m.root()};
    net.sinks = m.level(m.max_height());
    SolverOptions opt;
    opt.exec = exec_of(st);
    opt.dense_limit = 0;
    for (auto _ : st) benchmark::DoNotOptimize(effective_resistance(net, opt));
}
BENCHMARK(BM_Resistance)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
