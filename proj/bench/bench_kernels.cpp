// Serial reference loop against the OpenMP kernel for the per-sample workloads.
// Arg(0) is serial, Arg(1) is parallel.

#include "replicator/controllability.hpp"
#include "replicator/dynamics.hpp"
#include "replicator/fitness.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace replicator;

namespace {

ExecPolicy policy_of(const benchmark::State& state) {
    return state.range(0) == 0 ? ExecPolicy::serial : ExecPolicy::parallel;
}

Matrix random_matrix(Eigen::Index n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = u(rng);
    return m;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_HomomorphismResidual(benchmark::State& state) {
    std::mt19937_64 rng(7);
    const auto f = FitnessModel::linear(random_matrix(5, rng));
    const auto g = FitnessModel::linear(random_matrix(5, rng));
    const auto samples = sample_interior(5, 400, 11);
    for (auto _ : state) benchmark::DoNotOptimize(homomorphism_residual(f, g, samples, policy_of(state)));
    label(state);
}

void BM_BracketAxiomReport(benchmark::State& state) {
    std::mt19937_64 rng(8);
    const auto f = FitnessModel::linear(random_matrix(4, rng));
    const auto g = FitnessModel::linear(random_matrix(4, rng));
    const auto h = FitnessModel::constant(Vector::LinSpaced(4, 1.0, 4.0));
    const auto samples = sample_interior(4, 100, 12);
    for (auto _ : state) benchmark::DoNotOptimize(bracket_axiom_report(f, g, h, samples, 1e-6, policy_of(state)));
    label(state);
}

void BM_ControllabilityVerdict(benchmark::State& state) {
    std::mt19937_64 rng(9);
    const Vector a = Vector::LinSpaced(5, 1.0, 5.0);
    const Matrix B = Matrix::Identity(5, 5) + 0.1 * random_matrix(5, rng);
    for (auto _ : state) benchmark::DoNotOptimize(controllability_verdict(a, B, 400, 3, policy_of(state)));
    label(state);
}

}  // namespace

BENCHMARK(BM_HomomorphismResidual)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BracketAxiomReport)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ControllabilityVerdict)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
