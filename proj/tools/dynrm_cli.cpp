// dynrm: roadmap building, preprocessing, benchmarks and oracle checks.

#include "dynrm/bench.hpp"

#include <CLI11.hpp>
#include <spdlog/cfg/helpers.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace dynrm;

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    return os;
}

Exec exec_of(bool parallel) { return parallel ? Exec::parallel : Exec::serial; }

int build_roadmap(const std::string& scene_path, std::size_t nodes, std::size_t k, std::uint64_t seed,
                  const std::string& out, bool parallel) {
    auto scene = bench::load_scene(scene_path);
    auto env = bench::make_environment(scene);
    auto rm = roadmap::prm_build(scene.robot, env, nodes, k, scene.resolution, seed, exec_of(parallel));
    roadmap::save(rm, out);
    std::size_t valid = 0;
    for (const auto& e : rm.all_elements()) valid += rm.is_valid(e);
    spdlog::info("{} nodes, {} edges ({} valid elements) -> {}", rm.nodes().size(), rm.edges().size(), valid, out);
    return 0;
}

int preprocess(const std::string& method, const std::string& scene_path, const std::string& roadmap_path,
               const std::string& out, bool parallel, bool exact_cells) {
    auto spec = bench::parse_method(method);
    auto scene = bench::load_scene(scene_path);
    auto env = bench::make_environment(scene);
    auto rm = roadmap::load(roadmap_path);
    if (spec.kind == bench::MethodKind::spite) {
        auto idx = spite::SpiteIndex::preprocess(rm, scene.robot, env, {}, exec_of(parallel));
        const auto& st = idx.preprocess_stats();
        std::cout << "spite: " << st.entries << " cigars, tree depth " << idx.tree().depth() << ", cigars "
                  << st.cigars_ms << " ms, tree " << st.tree_ms << " ms, labels " << st.validate_ms << " ms, total "
                  << st.total_ms << " ms\n";
    } else if (spec.kind == bench::MethodKind::grid) {
        baselines::GridParams p;
        p.cell_size = spec.cell;
        p.test = exact_cells ? baselines::CellTest::exact : baselines::CellTest::aabb;
        auto g = baselines::UniformGrid::preprocess(rm, scene.robot, env, p, exec_of(parallel));
        const auto& st = g.preprocess_stats();
        std::cout << method << ": " << g.cell_count() << " cells, " << st.listings << " listings, rasterize "
                  << st.rasterize_ms << " ms, labels " << st.validate_ms << " ms, total " << st.total_ms << " ms\n";
    } else {
        throw std::invalid_argument("preprocess takes spite or grid:<cell>");
    }
    if (!out.empty()) roadmap::save(rm, out);
    return 0;
}

int bench_updates(const std::string& gen, const std::vector<std::string>& variants,
                  const std::vector<std::string>& methods, const std::string& out, std::uint64_t seed,
                  std::size_t moves, std::size_t nodes, bool parallel, bool exact_cells) {
    if (gen != "update") throw std::invalid_argument("bench-updates supports --scene-gen update");
    auto specs = bench::parse_methods(methods);
    auto b = bench::gen_update_bench(seed, moves);
    b.prm_nodes = nodes;
    bench::ExperimentConfig cfg;
    cfg.exec = exec_of(parallel);
    cfg.grid_test = exact_cells ? baselines::CellTest::exact : baselines::CellTest::aabb;
    cfg.seed = seed;
    spdlog::info("update bench: {} variants x {} moves, {} methods", b.variants.size(), moves, specs.size());
    auto res = bench::run_update_bench(b, specs, cfg, variants);
    auto os = open_out(out);
    bench::write_csv(os, res.records);
    bench::write_update_summary(std::cout, res);
    return 0;
}

int bench_queries(const std::string& gen, std::size_t iterations, const std::vector<std::string>& methods,
                  const std::string& out, std::uint64_t seed, const planners::RrtParams& rrt, bool parallel) {
    auto specs = bench::parse_methods(methods);
    bench::QueryBench b;
    if (gen == "walls") {
        b = bench::gen_walls(seed, iterations);
    } else if (gen == "shelf") {
        b = bench::gen_shelf(seed, iterations);
    } else {
        throw std::invalid_argument("bench-queries supports --scene-gen walls|shelf");
    }
    spdlog::info("{}: roadmap {} nodes / {} edges, {} iterations", gen, b.roadmap.nodes().size(),
                 b.roadmap.edges().size(), b.schedule.size());
    bench::ExperimentConfig cfg;
    cfg.exec = exec_of(parallel);
    cfg.rrt = rrt;
    cfg.seed = seed;
    auto res = bench::run_query_bench(b, specs, cfg);
    auto os = open_out(out);
    bench::write_csv(os, res.records);
    bench::write_query_summary(std::cout, res);
    std::size_t failures = 0;
    for (const auto& s : res.summary) failures += s.audit_failures;
    if (failures) {
        spdlog::error("{} returned paths failed the validity audit", failures);
        return 2;
    }
    return 0;
}

int verify(const std::string& scene_path, const std::string& roadmap_path, std::size_t moves, std::uint64_t seed,
           double cell, bool parallel) {
    auto scene = bench::load_scene(scene_path);
    auto rm = roadmap::load(roadmap_path);
    auto mv = bench::random_moves(scene, moves, seed);
    auto rep = bench::verify_equivalence(scene, rm, mv, cell, exec_of(parallel));
    std::cout << "steps " << rep.steps << ", state mismatches " << rep.mismatches << ", missed retrievals "
              << rep.missed_retrievals << ", incidence " << (rep.incidence_ok ? "consistent" : "INCONSISTENT") << '\n';
    return rep.mismatches == 0 && rep.missed_retrievals == 0 && rep.incidence_ok ? 0 : 1;
}

int gen_scene(const std::string& gen, std::uint64_t seed, const std::string& out) {
    bench::Scene s;
    if (gen.rfind("update:", 0) == 0) {
        auto b = bench::gen_update_bench(seed);
        std::string name = gen.substr(7);
        std::size_t v = 0;
        while (v < b.variants.size() && b.variants[v].name != name) ++v;
        if (v == b.variants.size()) throw std::invalid_argument("unknown variant '" + name + "'");
        s = b.scene_for(v);
    } else if (gen == "walls") {
        s = bench::gen_walls(seed, 0).scene;
    } else if (gen == "shelf") {
        s = bench::gen_shelf(seed, 0).scene;
    } else {
        throw std::invalid_argument("gen-scene supports update:<variant>, walls, shelf");
    }
    bench::save_scene(s, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* lvl = std::getenv("DYNRM_LOG_LEVEL")) spdlog::cfg::helpers::load_levels(lvl);
    spdlog::set_pattern("[%l] %v");

    CLI::App app{"Roadmap maintenance under moving obstacles: tools and benchmarks"};
    app.require_subcommand(1);
    bool parallel = false;
    app.add_flag("--parallel", parallel, "Use OpenMP for preprocessing and roadmap construction");

    std::string scene, rm_path, out, method, gen = "update";
    std::size_t nodes = 1000, k = 6, moves = 100, verify_moves = 20, iterations = 100;
    std::uint64_t seed = 1;
    double cell = 1.0;
    bool exact_cells = false;
    std::vector<std::string> methods, variants{"all"};
    planners::RrtParams rrt;

    auto* build = app.add_subcommand("build-roadmap", "Build a PRM for a scene");
    build->add_option("--scene", scene, "Scene file")->required();
    build->add_option("--nodes", nodes, "Node count");
    build->add_option("--k", k, "Neighbours per node");
    build->add_option("--seed", seed, "Sampling seed");
    build->add_option("--out", out, "Output roadmap file")->required();

    auto* pre = app.add_subcommand("preprocess", "Preprocess a roadmap and report timings");
    pre->add_option("--method", method, "spite | grid:<cell>")->required();
    pre->add_option("--scene", scene, "Scene file")->required();
    pre->add_option("--roadmap", rm_path, "Roadmap file")->required();
    pre->add_option("--out", out, "Write the labelled roadmap here");
    pre->add_flag("--exact-cells", exact_cells, "Grid: test bodies against cells exactly");

    auto* bu = app.add_subcommand("bench-updates", "Obstacle relocation benchmark");
    bu->add_option("--scene-gen", gen, "Scene generator (update)");
    bu->add_option("--variants", variants, "Obstacle variants or 'all'")->delimiter(',');
    bu->add_option("--methods", methods, "spite, grid:<cell>, brute")->delimiter(',')->required();
    bu->add_option("--out", out, "CSV output")->required();
    bu->add_option("--seed", seed, "Scenario seed");
    bu->add_option("--moves", moves, "Moves per variant");
    bu->add_option("--nodes", nodes, "Roadmap nodes");
    bu->add_flag("--exact-cells", exact_cells, "Grid: test bodies against cells exactly");

    auto* bq = app.add_subcommand("bench-queries", "Motion-planning query benchmark");
    bq->add_option("--scene-gen", gen, "walls | shelf")->required();
    bq->add_option("--iterations", iterations, "Iterations");
    bq->add_option("--methods", methods, "spite, grid:<cell>, brute, lazy_prm, rrt")->delimiter(',')->required();
    bq->add_option("--out", out, "CSV output")->required();
    bq->add_option("--seed", seed, "Scenario seed");
    bq->add_option("--rrt-time-cap", rrt.time_cap, "RRT time cap (s)");
    bq->add_option("--rrt-max-iterations", rrt.max_iterations, "RRT iteration cap (0 = none)");
    bq->add_option("--rrt-goal-bias", rrt.goal_bias, "RRT goal bias");

    auto* ver = app.add_subcommand("verify", "Compare SPITE and grid updates against full revalidation");
    ver->add_option("--scene", scene, "Scene file")->required();
    ver->add_option("--roadmap", rm_path, "Roadmap file")->required();
    ver->add_option("--moves", verify_moves, "Random moves");
    ver->add_option("--seed", seed, "Move seed");
    ver->add_option("--grid-cell", cell, "Grid cell size");

    auto* gs = app.add_subcommand("gen-scene", "Write a generated scene file");
    gs->add_option("--scene-gen", gen, "update:<variant> | walls | shelf")->required();
    gs->add_option("--seed", seed, "Scenario seed");
    gs->add_option("--out", out, "Output scene file")->required();

    CLI11_PARSE(app, argc, argv);
    try {
        if (*build) return build_roadmap(scene, nodes, k, seed, out, parallel);
        if (*pre) return preprocess(method, scene, rm_path, out, parallel, exact_cells);
        if (*bu) return bench_updates(gen, variants, methods, out, seed, moves, nodes, parallel, exact_cells);
        if (*bq) return bench_queries(gen, iterations, methods, out, seed, rrt, parallel);
        if (*ver) return verify(scene, rm_path, verify_moves, seed, cell, parallel);
        if (*gs) return gen_scene(gen, seed, out);
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 0;
}
