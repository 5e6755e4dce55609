#include "support.hpp"

#include <doctest.h>

using namespace dynrm;
using namespace dynrm::baselines;
using dynrm::testing::box_obstacle;
using dynrm::testing::cube_robot;
using geom::Vec3;
using roadmap::ElementId;

namespace {

const Aabb kRoom{Vec3::Zero(), Vec3::Constant(10)};

Configuration at(double x, double y = 0, double z = 0) { return Configuration(Eigen::Vector3d(x, y, z)); }

roadmap::Roadmap two_node(const RobotModel& r) {
    roadmap::Roadmap rm(3, 0.25);
    rm.add_node(at(2, 5, 5));
    rm.add_node(at(8, 5, 5));
    rm.add_edge(0, 1, robot::intermediate_steps(r, rm.node(0).q, rm.node(1).q, 0.25), 6.0);
    return rm;
}

std::size_t cells_listing(const UniformGrid& g, const ElementId& e) {
    std::size_t n = 0;
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
        const auto& l = g.cell(c);
        n += std::count(l.begin(), l.end(), e);
    }
    return n;
}

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("grid geometry") {
    auto r = cube_robot(0.2, kRoom);
    Environment env(kRoom);
    roadmap::Roadmap rm(3, 0.25);
    rm.add_node(at(3.3, 4.6, 5.5));
    auto g = UniformGrid::preprocess(rm, r, env, {1.0});
    CHECK(g.dims() == std::array<int, 3>{10, 10, 10});
    auto n = cells_listing(g, ElementId::node(0));
    CHECK(n >= 1);
    CHECK(n <= 8);

    auto whole = UniformGrid::preprocess(rm, r, env, {10.0});
    CHECK(whole.cell_count() == 1);

    CHECK_THROWS_AS(UniformGrid::preprocess(rm, r, env, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(UniformGrid::preprocess(rm, r, env, {-1.0}), std::invalid_argument);
}

TEST_CASE("grid coverage") {
    auto scene = dynrm::testing::random_scene(5);
    auto env = bench::make_environment(scene);
    auto rm = roadmap::prm_build(scene.robot, Environment(scene.bounds), 200, 6, scene.resolution, 5);
    for (double cell : {10.0, 2.5, 1.0, 0.7}) {
        auto g = UniformGrid::preprocess(rm, scene.robot, env, {cell});
        for (int a = 0; a < 3; ++a)
            CHECK(g.dims()[static_cast<std::size_t>(a)] * cell >= scene.bounds.extent()[a] - 1e-9);
        for (const auto& e : rm.all_elements()) CHECK(cells_listing(g, e) >= 1);
        if (cell == 10.0)
            CHECK(g.cell(0).size() == rm.element_count());
    }
    std::size_t prev = 0;
    for (double cell : {4.0, 2.0, 1.0, 0.5}) {
        auto g = UniformGrid::preprocess(rm, scene.robot, env, {cell});
        CHECK(g.preprocess_stats().listings > prev);
        prev = g.preprocess_stats().listings;
    }
}

TEST_CASE("two-node updates agree across methods") {
    auto r = cube_robot(0.25, kRoom);
    for (auto test : {CellTest::aabb, CellTest::exact}) {
        Environment env_s(kRoom), env_g(kRoom), env_b(kRoom);
        for (auto* e : {&env_s, &env_g, &env_b}) e->add_obstacle(box_obstacle(0, Vec3::Constant(0.5), {5, 8, 5}));
        auto rm_s = two_node(r), rm_g = two_node(r), rm_b = two_node(r);
        auto sp = spite::SpiteIndex::preprocess(rm_s, r, env_s);
        auto g = UniformGrid::preprocess(rm_g, r, env_g, {1.0, test});
        roadmap::full_revalidate(rm_b, r, env_b);
        for (Vec3 d : {Vec3(0, -3, 0), Vec3(0, 3, 0), Vec3(0, -3.2, 0.3)}) {
            auto t = RigidTransform::translate(d);
            auto a = sp.update(rm_s, r, env_s, 0, t);
            auto b = g.update(rm_g, r, env_g, 0, t);
            auto c = brute_force_update(rm_b, r, env_b, 0, t);
            CHECK(a.newly_invalid == b.newly_invalid);
            CHECK(a.newly_valid == b.newly_valid);
            CHECK(a.newly_invalid == c.newly_invalid);
            CHECK(a.newly_valid == c.newly_valid);
            CHECK(rm_s == rm_g);
            CHECK(rm_s == rm_b);
        }
        CHECK(rm_g.state(ElementId::edge(0)).hits == std::vector<robot::ObstacleId>{0});
    }
}

TEST_CASE("obstacle leaving the grid") {
    auto r = cube_robot(0.25, kRoom);
    Environment env(kRoom);
    env.add_obstacle(box_obstacle(0, Vec3::Constant(0.5), {50, 50, 50}));
    auto rm = two_node(r);
    auto g = UniformGrid::preprocess(rm, r, env);
    CHECK(g.update(rm, r, env, 0, RigidTransform::translate({20, 0, 0})).empty());
    CHECK(g.retrieve(Aabb{Vec3::Constant(60), Vec3::Constant(61)}).empty());
}

TEST_CASE("brute force accounting") {
    auto scene = dynrm::testing::random_scene(6);
    auto env = bench::make_environment(scene);
    auto rm = roadmap::prm_build(scene.robot, Environment(scene.bounds), 200, 6, scene.resolution, 6);
    roadmap::full_revalidate(rm, scene.robot, env);
    std::uint64_t expected = rm.nodes().size();
    for (const auto& e : rm.edges()) expected += static_cast<std::uint64_t>(e.steps) + 1;

    auto none = brute_force_update(rm, scene.robot, env, 0, RigidTransform::identity());
    CHECK(none.empty());
    CHECK(none.cd.config_checks == expected);
    for (const auto& m : bench::random_moves(scene, 10, 6)) {
        auto rep = brute_force_update(rm, scene.robot, env, m.obstacle, m.t);
        CHECK(rep.cd.config_checks == expected);
        CHECK(rep.candidates.size() == rm.element_count());
    }
}

TEST_CASE("updaters agree on random scenes") {
    for (std::uint64_t seed = 40; seed < 50; ++seed) {
        auto scene = dynrm::testing::random_scene(seed);
        auto rm = roadmap::prm_build(scene.robot, Environment(scene.bounds), 150, 6, scene.resolution, seed);
        auto rep = bench::verify_equivalence(scene, rm, bench::random_moves(scene, 10, seed), 1.0);
        CHECK(rep.steps == 10);
        CHECK(rep.mismatches == 0);
        CHECK(rep.missed_retrievals == 0);
        CHECK(rep.incidence_ok);
    }
}

TEST_CASE("exact cell test matches the oracle") {
    auto scene = dynrm::testing::random_scene(77);
    auto env = bench::make_environment(scene);
    auto base = roadmap::prm_build(scene.robot, Environment(scene.bounds), 200, 6, scene.resolution, 77);
    auto rm_a = base, rm_e = base;
    auto env_a = env, env_e = env;
    auto ga = UniformGrid::preprocess(rm_a, scene.robot, env_a, {1.0, CellTest::aabb});
    auto ge = UniformGrid::preprocess(rm_e, scene.robot, env_e, {1.0, CellTest::exact});
    CHECK(ge.preprocess_stats().listings <= ga.preprocess_stats().listings);
    for (const auto& m : bench::random_moves(scene, 15, 77)) {
        ga.update(rm_a, scene.robot, env_a, m.obstacle, m.t);
        ge.update(rm_e, scene.robot, env_e, m.obstacle, m.t);
        auto oracle = rm_a;
        roadmap::full_revalidate(oracle, scene.robot, env_a);
        CHECK(rm_a == oracle);
        CHECK(rm_e == oracle);
    }
}

}  // TEST_SUITE
