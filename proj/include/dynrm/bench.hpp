#pragma once

#include "dynrm/baselines.hpp"
#include "dynrm/planners.hpp"
#include "dynrm/roadmap.hpp"
#include "dynrm/spite.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dynrm::bench {

using geom::Aabb;
using geom::RigidTransform;
using geom::Vec3;
using roadmap::Roadmap;
using robot::Configuration;
using robot::Environment;
using robot::Obstacle;
using robot::ObstacleId;
using robot::RobotModel;

struct Scene {
    std::string name;
    Aabb bounds;
    RobotModel robot;
    std::vector<Obstacle> obstacles;
    double resolution = 0.25;
    std::uint64_t seed = 0;
};

Environment make_environment(const Scene& s);

std::string scene_to_json_text(const Scene& s);
/// Throws roadmap::ParseError with the offending field or line.
Scene scene_from_json_text(const std::string& text);
void save_scene(const Scene& s, const std::filesystem::path& p);
Scene load_scene(const std::filesystem::path& p);

/// Relative motion o -> t ∘ o of one obstacle.
struct Move {
    ObstacleId obstacle = 0;
    RigidTransform t;
};

// Update benchmark -------------------------------------------------------------

struct UpdateVariant {
    std::string name;
    Vec3 size;                  // full side lengths
    std::vector<Vec3> centers;  // initial placement followed by one entry per move
};

struct UpdateBench {
    Scene scene;  // robot and bounds; obstacles come from the variants
    std::vector<UpdateVariant> variants;
    std::size_t prm_nodes = 1000;
    std::size_t prm_k = 6;

    static constexpr ObstacleId kObstacle = 0;
    /// Scene with the variant's obstacle at its initial placement.
    Scene scene_for(std::size_t variant) const;
    /// Relative moves taking the obstacle through the variant's placements.
    std::vector<Move> moves_for(std::size_t variant) const;
};

/// 32-unit cube, free-flying prism robot, nine obstacle shapes with `moves` random placements each.
UpdateBench gen_update_bench(std::uint64_t seed, std::size_t moves = 100);

// Query benchmarks ------------------------------------------------------------

struct QueryIteration {
    std::vector<Move> moves;
    Configuration s;
    Configuration t;
};

struct QueryBench {
    Scene scene;
    Roadmap roadmap;
    std::vector<QueryIteration> schedule;
    std::size_t attach_k = 8;
    /// Cell size treated as the coarse grid for this scene.
    double coarse_cell = 1.0;
    /// Per iteration, the binary placement of each movable obstacle after that iteration's moves.
    std::vector<std::vector<bool>> placements;
};

/// Three walls with two passage slots each; a plug closes one slot per wall and flips with
/// probability 1/2 per iteration. Translational cube robot on a lattice roadmap.
QueryBench gen_walls(std::uint64_t seed, std::size_t iterations = 100);

/// Five-joint arm in front of a two-story shelf; two objects each sit on the top or bottom
/// story with probability 1/2 per iteration. Fixed start and goal inside the upper story.
QueryBench gen_shelf(std::uint64_t seed, std::size_t iterations = 100, std::size_t prm_nodes = 1000);

// Experiments -------------------------------------------------------------------

enum class MethodKind { spite, grid, brute, lazy_prm, rrt };

struct MethodSpec {
    MethodKind kind = MethodKind::spite;
    double cell = 1.0;  // grid only
    std::string name;

    bool is_updater() const { return kind == MethodKind::spite || kind == MethodKind::grid || kind == MethodKind::brute; }
};

/// "spite", "brute", "lazy_prm", "rrt", "grid:<cell>". Throws std::invalid_argument.
MethodSpec parse_method(const std::string& text);
std::vector<MethodSpec> parse_methods(const std::vector<std::string>& names);

struct ExperimentConfig {
    Exec exec = Exec::serial;  // preprocessing only; updates and queries stay serial
    planners::RrtParams rrt;
    planners::LazyParams lazy;
    baselines::CellTest grid_test = baselines::CellTest::aabb;
    double spite_epsilon = 0.1;
    std::uint64_t seed = 1;
};

struct TrialRecord {
    std::string method;
    std::string phase;  // preprocess | update | query
    std::size_t iteration = 0;
    double wall_ms = 0.0;
    std::uint64_t cd_calls = 0;
    std::string status;
};

struct MethodSummary {
    std::string method;
    double preprocess_ms = 0.0;
    double mean_update_ms = 0.0;
    double mean_query_ms = 0.0;
    double mean_total_ms = 0.0;
    std::size_t iterations = 0;
    std::size_t successes = 0;
    std::size_t audit_failures = 0;

    double success_rate() const { return iterations ? static_cast<double>(successes) / iterations : 0.0; }
};

struct ExperimentResult {
    std::vector<TrialRecord> records;
    std::vector<MethodSummary> summary;
    /// Update bench only: summary rows grouped by variant.
    std::vector<std::string> variant_names;
};

ExperimentResult run_update_bench(const UpdateBench& b, const std::vector<MethodSpec>& methods,
                                  const ExperimentConfig& cfg = {}, std::vector<std::string> variants = {});

ExperimentResult run_query_bench(const QueryBench& b, const std::vector<MethodSpec>& methods,
                                 const ExperimentConfig& cfg = {});

inline constexpr const char* kCsvHeader = "method,phase,iteration,wall_ms,cd_calls,status";

void write_csv(std::ostream& os, const std::vector<TrialRecord>& records);
void write_update_summary(std::ostream& os, const ExperimentResult& r);
void write_query_summary(std::ostream& os, const ExperimentResult& r);

// Oracle equivalence --------------------------------------------------------

struct VerifyReport {
    std::size_t steps = 0;
    std::size_t mismatches = 0;       // elements whose state differs from the oracle
    std::size_t missed_retrievals = 0;  // newly blocked elements absent from the candidates
    bool incidence_ok = true;
};

/// Replays `moves` with SPITE, the grid, and brute force side by side and compares every
/// post-update state against a from-scratch revalidation.
VerifyReport verify_equivalence(const Scene& scene, const Roadmap& rm, const std::vector<Move>& moves,
                                double grid_cell, Exec exec = Exec::serial);

/// Seeded random axis-aligned translations of the non-static obstacles inside the bounds.
std::vector<Move> random_moves(const Scene& scene, std::size_t count, std::uint64_t seed);

}  // namespace dynrm::bench
