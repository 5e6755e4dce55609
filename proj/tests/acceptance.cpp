// Acceptance run: one PASS/FAIL line per criterion.
#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

using namespace dynrm;
using bench::ExperimentResult;
using bench::MethodSummary;
using geom::Aabb;
using geom::Vec3;

namespace {

// Pinned thresholds.
constexpr int kOracleScenes = 50;
constexpr int kOracleMoves = 20;
constexpr std::size_t kOracleNodes = 1000;
constexpr std::size_t kOracleK = 5;
constexpr std::size_t kOracleMaxEdges = 5000;
constexpr double kOracleBudgetS = 600.0;
constexpr int kTreeCigars = 1000;
constexpr int kTreeQueries = 1000;
constexpr double kTreeBudgetS = 10.0;
constexpr int kContainmentElements = 500;
constexpr double kContainmentTol = 1e-9;
constexpr int kClouds = 1000;
constexpr double kObbFactor = 1.1;
constexpr std::size_t kUpdateMoves = 100;
constexpr double kSpiteVsBrute = 5.0;
constexpr double kPreprocessRatio = 5.0;
constexpr std::size_t kWallsIterations = 100;
constexpr std::size_t kShelfIterations = 50;
constexpr double kShelfRrtCapS = 2.0;
constexpr std::uint64_t kSeed = 1;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int n, const char* title, bool ok, const std::string& detail) {
    std::printf("criterion %2d %-28s %s  %s\n", n, title, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const MethodSummary& row(const ExperimentResult& r, const std::string& method) {
    for (const auto& s : r.summary)
        if (s.method == method) return s;
    throw std::runtime_error("missing summary row " + method);
}

std::string without_times(const std::vector<bench::TrialRecord>& records) {
    auto copy = records;
    for (auto& r : copy) r.wall_ms = 0.0;
    std::ostringstream os;
    bench::write_csv(os, copy);
    return os.str();
}

void oracle_equivalence() {
    auto t0 = Clock::now();
    std::size_t steps = 0, mismatches = 0, misses = 0, max_edges = 0;
    bool incidence_ok = true;
    for (int i = 0; i < kOracleScenes; ++i) {
        auto scene = testing::random_scene(1000 + i);
        auto env = bench::make_environment(scene);
        auto rm = roadmap::prm_build(scene.robot, env, kOracleNodes, kOracleK, scene.resolution, scene.seed);
        max_edges = std::max(max_edges, rm.edges().size());
        auto moves = bench::random_moves(scene, kOracleMoves, scene.seed + 7);
        auto rep = bench::verify_equivalence(scene, rm, moves, 1.0);
        steps += rep.steps;
        mismatches += rep.mismatches;
        misses += rep.missed_retrievals;
        incidence_ok = incidence_ok && rep.incidence_ok;
    }
    double secs = seconds_since(t0);
    report(1, "oracle equivalence",
           mismatches == 0 && incidence_ok && max_edges <= kOracleMaxEdges && secs < kOracleBudgetS &&
               steps == static_cast<std::size_t>(kOracleScenes * kOracleMoves),
           fmt("steps=%zu mismatches=%zu max_edges=%zu time=%.1fs", steps, mismatches, max_edges, secs));
    report(2, "retrieval soundness", misses == 0, fmt("missed=%zu", misses));
}

void tree_correctness() {
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> u(0, 20), d(-2, 2), rr(0, 0.5), s(0, 5);
    std::vector<spite::CigarEntry> entries;
    for (int i = 0; i < kTreeCigars; ++i) {
        Vec3 a(u(rng), u(rng), u(rng));
        entries.push_back({geom::Cigar{{a, a + Vec3(d(rng), d(rng), d(rng))}, rr(rng)},
                           roadmap::ElementId::node(static_cast<std::size_t>(i)), 0});
    }
    auto t0 = Clock::now();
    auto tree = spite::CigarTree::build(entries);
    std::size_t mismatches = 0, hits = 0;
    for (int q = 0; q < kTreeQueries; ++q) {
        Vec3 lo(u(rng) - 1, u(rng) - 1, u(rng) - 1);
        Aabb box{lo, lo + Vec3(s(rng), s(rng), s(rng))};
        auto got = tree.query(box);
        std::vector<std::uint32_t> want;
        for (std::uint32_t i = 0; i < tree.entries().size(); ++i)
            if (geom::intersect_cigar_aabb(tree.entries()[i].cigar, box)) want.push_back(i);
        if (got != want) ++mismatches;
        hits += want.size();
    }
    double secs = seconds_since(t0);
    report(3, "tree vs linear scan", mismatches == 0 && secs < kTreeBudgetS,
           fmt("queries=%d hits=%zu mismatches=%zu time=%.2fs", kTreeQueries, hits, mismatches, secs));
}

robot::RobotModel three_link_arm() {
    std::vector<geom::ConvexPolyhedron> bodies;
    std::vector<robot::Joint> joints;
    for (int i = 0; i < 3; ++i) {
        bodies.push_back(geom::ConvexPolyhedron::box(Vec3(0.5, 0.08, 0.05), geom::RigidTransform::translate({0.5, 0, 0})));
        joints.push_back({i == 1 ? Vec3::UnitY() : Vec3::UnitZ(),
                          i ? geom::RigidTransform::translate({1, 0, 0}) : geom::RigidTransform::translate({5, 5, 5})});
    }
    return robot::RobotModel::serial_chain(bodies, joints);
}

void cigar_containment() {
    auto scene = testing::random_scene(kSeed);
    auto env = bench::make_environment(scene);
    auto arm = three_link_arm();
    robot::Environment open(Aabb{Vec3::Zero(), Vec3::Constant(10)});
    std::mt19937_64 rng(kSeed);
    std::size_t violations = 0, vertices = 0;
    std::vector<std::vector<Vec3>> posed;
    for (int i = 0; i < kContainmentElements; ++i) {
        const bool use_arm = i % 2 == 1;
        const auto& r = use_arm ? arm : scene.robot;
        const auto& e = use_arm ? open : env;
        auto p = roadmap::sample_uniform(r, e, rng);
        auto q = roadmap::sample_uniform(r, e, rng);
        const bool node = i % 4 < 2;
        if (node) q = p;
        else q = robot::normalize(r, robot::lerp(r, p, q, 0.15));
        auto cg = node ? spite::cigars_for_node(r, p) : spite::cigars_for_edge(r, p, q, scene.resolution);
        auto configs = node ? std::vector<robot::Configuration>{p} : robot::interpolate(r, p, q, scene.resolution);
        for (const auto& c : configs) {
            robot::posed_vertices(r, c, posed);
            for (const auto& entry : cg)
                for (const auto& v : posed[entry.body]) {
                    ++vertices;
                    if (geom::point_segment_distance(v, entry.cigar.segment) > entry.cigar.radius + kContainmentTol)
                        ++violations;
                }
        }
    }
    report(4, "cigar containment", violations == 0,
           fmt("elements=%d vertices=%zu violations=%zu", kContainmentElements, vertices, violations));
}

void obb_quality() {
    std::mt19937_64 rng(kSeed);
    std::uniform_int_distribution<std::size_t> n(4, 200);
    std::size_t violations = 0;
    double worst = 0.0;
    for (int i = 0; i < kClouds; ++i) {
        auto pts = testing::random_cloud(rng, n(rng));
        auto box = geom::approx_min_obb(pts, 0.1);
        bool inside = std::all_of(pts.begin(), pts.end(), [&](const Vec3& p) { return box.contains(p); });
        double ref = std::min(geom::fit_obb_in_frame(pts, geom::Mat3::Identity()).volume(), geom::pca_obb(pts).volume());
        double ratio = ref > 0 ? box.volume() / ref : 0.0;
        worst = std::max(worst, ratio);
        if (!inside || ratio > kObbFactor) ++violations;
    }
    report(5, "approximate min box", violations == 0,
           fmt("clouds=%d violations=%zu worst_ratio=%.4f", kClouds, violations, worst));
}

void update_benchmark() {
    auto b = bench::gen_update_bench(kSeed, kUpdateMoves);
    bench::ExperimentConfig cfg;
    cfg.seed = kSeed;
    auto res = bench::run_update_bench(b, bench::parse_methods({"spite", "grid:1", "brute"}), cfg);
    bool ordered = true, fast = true;
    double worst_speedup = std::numeric_limits<double>::infinity();
    std::string worst_variant;
    double spite_pre = 0.0, grid_pre = 0.0;
    for (const auto& v : res.variant_names) {
        const auto& s = row(res, "spite/" + v);
        const auto& g = row(res, "grid:1/" + v);
        const auto& br = row(res, "brute/" + v);
        std::printf("  %-16s spite %.4f ms  grid:1 %.4f ms  brute %.4f ms\n", v.c_str(), s.mean_update_ms,
                    g.mean_update_ms, br.mean_update_ms);
        ordered = ordered && s.mean_update_ms < g.mean_update_ms && g.mean_update_ms < br.mean_update_ms;
        double speedup = br.mean_update_ms / s.mean_update_ms;
        if (speedup < worst_speedup) {
            worst_speedup = speedup;
            worst_variant = v;
        }
        fast = fast && speedup >= kSpiteVsBrute;
        spite_pre += s.preprocess_ms;
        grid_pre += g.preprocess_ms;
    }
    report(6, "update ordering", ordered && fast,
           fmt("ordered=%s min_speedup=%.1fx (%s)", ordered ? "yes" : "no", worst_speedup, worst_variant.c_str()));
    spite_pre /= static_cast<double>(res.variant_names.size());
    grid_pre /= static_cast<double>(res.variant_names.size());
    report(7, "preprocess ratio", spite_pre * kPreprocessRatio <= grid_pre,
           fmt("spite=%.1f ms grid:1=%.1f ms ratio=%.2f", spite_pre, grid_pre, grid_pre / spite_pre));
}

void walls_benchmark() {
    auto b = bench::gen_walls(kSeed, kWallsIterations);
    bench::ExperimentConfig cfg;
    cfg.seed = kSeed;
    auto res = bench::run_query_bench(b, bench::parse_methods({"spite", "lazy_prm", "rrt"}), cfg);
    const auto& s = row(res, "spite");
    const auto& l = row(res, "lazy_prm");
    const auto& r = row(res, "rrt");
    std::size_t audit = 0;
    for (const auto& m : res.summary) audit += m.audit_failures;
    bool ordered = s.mean_total_ms < l.mean_total_ms && l.mean_total_ms < r.mean_total_ms;
    report(8, "walls query ordering", ordered && audit == 0,
           fmt("spite=%.3f lazy=%.3f rrt=%.3f ms audit_failures=%zu success=%.0f/%.0f/%.0f%%", s.mean_total_ms,
               l.mean_total_ms, r.mean_total_ms, audit, 100 * s.success_rate(), 100 * l.success_rate(),
               100 * r.success_rate()));
}

void shelf_benchmark() {
    auto b = bench::gen_shelf(kSeed, kShelfIterations);
    bench::ExperimentConfig cfg;
    cfg.seed = kSeed;
    cfg.rrt.time_cap = kShelfRrtCapS;
    std::string coarse = "grid:" + fmt("%g", b.coarse_cell);
    auto res = bench::run_query_bench(b, bench::parse_methods({"spite", coarse, "rrt"}), cfg);
    const auto& s = row(res, "spite");
    const auto& g = row(res, coarse);
    const auto& r = row(res, "rrt");
    bool ok = s.mean_total_ms < g.mean_total_ms && r.success_rate() < 1.0;
    report(9, "shelf", ok,
           fmt("spite=%.3f %s=%.3f ms rrt_success=%.0f%% (cap %.1fs)", s.mean_total_ms, coarse.c_str(),
               g.mean_total_ms, 100 * r.success_rate(), kShelfRrtCapS));
}

void determinism() {
    // RRT is bounded by iterations here so a time cap cannot change outcomes between runs.
    bench::ExperimentConfig cfg;
    cfg.seed = kSeed;
    cfg.rrt.time_cap = 3600.0;
    cfg.rrt.max_iterations = 2000;
    auto run_updates = [&] {
        auto b = bench::gen_update_bench(kSeed, 20);
        return without_times(bench::run_update_bench(b, bench::parse_methods({"spite", "grid:1", "brute"}), cfg,
                                                     {"cube_5", "prism_20x2x2"})
                                 .records);
    };
    auto run_queries = [&] {
        auto b = bench::gen_walls(kSeed, 20);
        return without_times(
            bench::run_query_bench(b, bench::parse_methods({"spite", "grid:1", "lazy_prm", "rrt"}), cfg).records);
    };
    bool same_updates = run_updates() == run_updates();
    bool same_queries = run_queries() == run_queries();
    report(10, "determinism", same_updates && same_queries,
           fmt("update_csv=%s query_csv=%s", same_updates ? "identical" : "differs",
               same_queries ? "identical" : "differs"));
}

}  // namespace

int main() {
    const std::vector<std::function<void()>> steps{oracle_equivalence, tree_correctness, cigar_containment,
                                                   obb_quality,        update_benchmark, walls_benchmark,
                                                   shelf_benchmark,    determinism};
    for (const auto& step : steps) {
        try {
            step();
        } catch (const std::exception& e) {
            std::printf("error: %s\n", e.what());
            ++failures;
        }
    }
    std::printf("%d criteria failed\n", failures);
    return failures ? 1 : 0;
}
