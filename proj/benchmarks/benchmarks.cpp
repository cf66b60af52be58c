// Microbenchmarks for the hot paths: kernel evaluation, lattice sums,
// operator evaluation, moment ladders.

#include <skop/analysis.hpp>

#include <benchmark/benchmark.h>

#include <vector>

using namespace skop;

namespace {

const KernelPtr& kernel_for(int which) {
    static const std::vector<KernelPtr> kernels = {
        make_kernel(KernelSpec::fejer()),
        make_kernel(KernelSpec::bspline(3)),
        make_kernel(KernelSpec::compound_bspline(2, 0.3)),
        make_kernel(KernelSpec::sigmoidal_phi(1.5)),
        make_kernel(KernelSpec::vallee_poussin()),
    };
    return kernels[static_cast<std::size_t>(which)];
}

void BM_KernelEval(benchmark::State& state) {
    const auto& k = kernel_for(static_cast<int>(state.range(0)));
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize((*k)(x));
        x += 0.37;
        if (x > 1000.0) x = -1000.0;
    }
}
BENCHMARK(BM_KernelEval)->DenseRange(0, 4)->ArgName("kernel");

void BM_PsiMinus(benchmark::State& state) {
    const auto& k = kernel_for(static_cast<int>(state.range(0)));
    TruncationPolicy policy;
    policy.tail_tolerance_decay2 = 1e-6; // keeps brute-summed kernels affordable
    double x = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(psi_minus(*k, x, policy).value);
        x += 0.0625;
        if (x >= 1.0) x = 0.0;
    }
}
BENCHMARK(BM_PsiMinus)->DenseRange(0, 4)->ArgName("kernel")->Unit(benchmark::kMicrosecond);

void BM_KantorovichEval(benchmark::State& state) {
    const auto& k = kernel_for(static_cast<int>(state.range(0)));
    const auto f = Signal::sine();
    OperatorParams p;
    p.w = 256.0;
    p.truncation.tail_tolerance_decay2 = 1e-6;
    p.truncation.radius_cap = 100'000;
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kantorovich_eval(*k, f, t, p));
        t += 0.01;
        if (t > 3.0) t = 0.0;
    }
}
BENCHMARK(BM_KantorovichEval)->DenseRange(0, 4)->ArgName("kernel")
    ->Unit(benchmark::kMicrosecond);

void BM_MomentLadder(benchmark::State& state) {
    const auto& k = kernel_for(3); // sigmoidal: the expensive ladder
    const long long radius = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(discrete_moment(*k, 0.8, radius, 64).value);
}
BENCHMARK(BM_MomentLadder)->Arg(1000)->Arg(10'000)->ArgName("radius")
    ->Unit(benchmark::kMillisecond);

void BM_RepresentationDecompose(benchmark::State& state) {
    const auto k = make_kernel(KernelSpec::compound_bspline(2, 0.3));
    const auto f = Signal::heaviside(1.0);
    OperatorParams p;
    p.w = 57.25;
    for (auto _ : state)
        benchmark::DoNotOptimize(representation_decompose(*k, f, 1.0, p).reconstructed);
}
BENCHMARK(BM_RepresentationDecompose)->Unit(benchmark::kMicrosecond);

void BM_PartitionDefect(benchmark::State& state) {
    const auto& k = kernel_for(static_cast<int>(state.range(0)));
    double u = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(partition_sum(*k, u).value);
        u += 0.03125;
        if (u >= 1.0) u = 0.0;
    }
}
BENCHMARK(BM_PartitionDefect)->Arg(1)->Arg(3)->ArgName("kernel")
    ->Unit(benchmark::kMicrosecond);

} // namespace

int main(int argc, char** argv) {
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    return 0;
}
