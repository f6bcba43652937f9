#include <benchmark/benchmark.h>

#include <speciso/geometry.hpp>
#include <speciso/mesh.hpp>
#include <speciso/mm_decomp.hpp>
#include <speciso/spectral.hpp>

using namespace speciso;

namespace {

void BM_assemble_operators(benchmark::State& state) {
    TriangleMesh mesh = make_icosphere(int(state.range(0)));
    for (auto _ : state) {
        auto ops = assemble_operators(mesh, MassScheme::Lumped);
        benchmark::DoNotOptimize(ops.first);
    }
    state.SetLabel(std::to_string(mesh.n_vertices()) + " vertices");
}
BENCHMARK(BM_assemble_operators)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_eigensolve(benchmark::State& state) {
    TriangleMesh mesh = make_icosphere(3);
    const int k = int(state.range(0));
    for (auto _ : state) {
        SpectrumResult res = eigenvalues(mesh, k, MassScheme::Lumped);
        benchmark::DoNotOptimize(res.eigenvalues);
    }
}
BENCHMARK(BM_eigensolve)->Arg(9)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_vertex_distances(benchmark::State& state) {
    TriangleMesh mesh = make_icosphere(3);
    const auto metric = state.range(0) == 0 ? DistanceMetric::Ambient
                                            : DistanceMetric::Intrinsic;
    for (auto _ : state) {
        Eigen::MatrixXd D = vertex_distances(mesh, metric);
        benchmark::DoNotOptimize(D);
    }
    state.SetLabel(state.range(0) == 0 ? "ambient" : "intrinsic");
}
BENCHMARK(BM_vertex_distances)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_covering_number(benchmark::State& state) {
    MMSpace space = from_mesh(make_icosphere(2), DistanceMetric::Ambient);
    for (auto _ : state) {
        CoveringEstimate est = covering_number(space, 0.2);
        benchmark::DoNotOptimize(est.N);
    }
}
BENCHMARK(BM_covering_number)->Unit(benchmark::kMillisecond);

void BM_decompose(benchmark::State& state) {
    MMSpace space = from_mesh(make_icosphere(2), DistanceMetric::Ambient);
    double min_d = std::numeric_limits<double>::infinity();
    const int n = space.point_count();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            min_d = std::min(min_d, space.distances(i, j));
    const int K = int(state.range(0));
    for (auto _ : state) {
        DecompositionResult res = decompose(space, K, min_d / 8.0);
        benchmark::DoNotOptimize(res.sets);
    }
}
BENCHMARK(BM_decompose)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    return 0;
}
