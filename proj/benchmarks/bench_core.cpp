#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "ncl/dataset.hpp"
#include "ncl/dof.hpp"
#include "ncl/ensemble.hpp"
#include "ncl/gram.hpp"
#include "ncl/rff.hpp"
#include "ncl/tune.hpp"

namespace {

struct Fixture {
    ncl::RffEnsemble basis;
    Eigen::MatrixXd phi;
    ncl::GramBundle g;
    ncl::WhitenedGram wg;
    ncl::RawDataset data;

    Fixture(Eigen::Index n, Eigen::Index h, int m) {
        ncl::SynthSpec spec;
        spec.n = n;
        spec.dims = 4;
        spec.sigma = 0.3;
        spec.seed = 13;
        const ncl::SynthDataset synth = ncl::synthesize(spec);
        data = synth.dataset;
        basis = ncl::sample_rff(spec.dims, h, m, 0.5, 17);
        phi = ncl::evaluate(basis, data.features);
        g = ncl::compute_gram(phi, data.targets.col(0), m);
        wg = ncl::whiten(g);
    }
};

const Fixture& fixture(Eigen::Index n, Eigen::Index h, int m) {
    static Fixture f(n, h, m);
    return f;
}

void bm_gram(benchmark::State& state) {
    const auto& f = fixture(1000, 10, 100);  // Q = 1000
    for (auto _ : state)
        benchmark::DoNotOptimize(ncl::compute_gram(f.phi, f.data.targets.col(0), 100));
}
BENCHMARK(bm_gram)->Unit(benchmark::kMillisecond);

void bm_whiten(benchmark::State& state) {
    const auto& f = fixture(1000, 10, 100);
    for (auto _ : state) benchmark::DoNotOptimize(ncl::whiten(f.g));
}
BENCHMARK(bm_whiten)->Unit(benchmark::kMillisecond);

void bm_fit(benchmark::State& state) {
    const auto& f = fixture(1000, 10, 100);
    for (auto _ : state) benchmark::DoNotOptimize(ncl::fit(f.wg, f.g, 0.5));
}
BENCHMARK(bm_fit)->Unit(benchmark::kMicrosecond);

void bm_df_grid(benchmark::State& state) {
    const auto& f = fixture(1000, 10, 100);
    for (auto _ : state) {
        double acc = 0.0;
        for (int i = 0; i <= 20; ++i) acc += ncl::df_analytic(f.wg, f.g, i / 20.0);
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(bm_df_grid)->Unit(benchmark::kMicrosecond);

void bm_tune_sure(benchmark::State& state) {
    const auto& f = fixture(1000, 10, 100);
    for (auto _ : state) benchmark::DoNotOptimize(ncl::tune_sure(f.data, f.basis));
}
BENCHMARK(bm_tune_sure)->Unit(benchmark::kMillisecond);

void bm_tune_cv(benchmark::State& state) {
    const auto& f = fixture(1000, 10, 100);
    for (auto _ : state) benchmark::DoNotOptimize(ncl::tune_cv(f.data, f.basis, 5, 13));
}
BENCHMARK(bm_tune_cv)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
