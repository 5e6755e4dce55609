// Serial vs OpenMP timings for the preprocessing kernels.
#include "dynrm/baselines.hpp"
#include "dynrm/bench.hpp"
#include "dynrm/spite.hpp"

#include <benchmark/benchmark.h>

using namespace dynrm;

namespace {

struct Fixture {
    bench::Scene scene;
    robot::Environment env;
    roadmap::Roadmap rm;

    Fixture() {
        auto b = bench::gen_update_bench(1, 1);
        scene = b.scene_for(0);
        env = bench::make_environment(scene);
        rm = roadmap::prm_build(scene.robot, env, 1000, 6, scene.resolution, scene.seed);
    }
};

const Fixture& fixture() {
    static const Fixture f;
    return f;
}

Exec mode(const benchmark::State& st) { return st.range(0) ? Exec::parallel : Exec::serial; }

void label(benchmark::State& st) { st.SetLabel(std::string(to_string(mode(st)))); }

void BM_PrmBuild(benchmark::State& st) {
    const auto& f = fixture();
    for (auto _ : st)
        benchmark::DoNotOptimize(roadmap::prm_build(f.scene.robot, f.env, 1000, 6, f.scene.resolution, 3, mode(st)));
    label(st);
}

void BM_FullRevalidate(benchmark::State& st) {
    const auto& f = fixture();
    auto rm = f.rm;
    for (auto _ : st) benchmark::DoNotOptimize(roadmap::full_revalidate(rm, f.scene.robot, f.env, robot::ObstacleFilter::all(), mode(st)));
    label(st);
}

void BM_BuildEntries(benchmark::State& st) {
    const auto& f = fixture();
    for (auto _ : st) benchmark::DoNotOptimize(spite::build_entries(f.rm, f.scene.robot, 0.1, mode(st)));
    label(st);
}

void BM_SpitePreprocess(benchmark::State& st) {
    const auto& f = fixture();
    for (auto _ : st) {
        auto rm = f.rm;
        benchmark::DoNotOptimize(spite::SpiteIndex::preprocess(rm, f.scene.robot, f.env, {}, mode(st)));
    }
    label(st);
}

void BM_GridPreprocess(benchmark::State& st) {
    const auto& f = fixture();
    for (auto _ : st) {
        auto rm = f.rm;
        benchmark::DoNotOptimize(baselines::UniformGrid::preprocess(rm, f.scene.robot, f.env, {}, mode(st)));
    }
    label(st);
}

void BM_BruteUpdate(benchmark::State& st) {
    const auto& f = fixture();
    auto rm = f.rm;
    auto env = f.env;
    roadmap::full_revalidate(rm, f.scene.robot, env);
    int sign = 1;
    for (auto _ : st) {
        auto t = geom::RigidTransform::translate(geom::Vec3(sign * 0.5, 0, 0));
        benchmark::DoNotOptimize(baselines::brute_force_update(rm, f.scene.robot, env, 0, t, mode(st)));
        sign = -sign;
    }
    label(st);
}

}  // namespace

BENCHMARK(BM_PrmBuild)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FullRevalidate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildEntries)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpitePreprocess)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridPreprocess)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BruteUpdate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
