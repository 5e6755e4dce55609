#include "support.hpp"

#include <doctest.h>

using namespace dynrm;

TEST_SUITE("parallel") {

TEST_CASE("parallel kernels reproduce the serial reference") {
    auto scene = dynrm::testing::random_scene(61, 4);
    auto env = bench::make_environment(scene);
    auto serial = roadmap::prm_build(scene.robot, env, 400, 6, scene.resolution, 61, Exec::serial);
    auto parallel = roadmap::prm_build(scene.robot, env, 400, 6, scene.resolution, 61, Exec::parallel);
    CHECK(serial == parallel);

    auto a = serial, b = serial;
    auto ra = roadmap::full_revalidate(a, scene.robot, env, robot::ObstacleFilter::all(), Exec::serial);
    auto rb = roadmap::full_revalidate(b, scene.robot, env, robot::ObstacleFilter::all(), Exec::parallel);
    CHECK(a == b);
    CHECK(ra.newly_invalid == rb.newly_invalid);
    CHECK(ra.cd.config_checks == rb.cd.config_checks);

    auto ea = spite::build_entries(serial, scene.robot, 0.1, Exec::serial);
    auto eb = spite::build_entries(serial, scene.robot, 0.1, Exec::parallel);
    REQUIRE(ea.size() == eb.size());
    for (std::size_t i = 0; i < ea.size(); ++i) {
        CHECK(ea[i].element == eb[i].element);
        CHECK(ea[i].cigar.segment.a == eb[i].cigar.segment.a);
        CHECK(ea[i].cigar.segment.b == eb[i].cigar.segment.b);
        CHECK(ea[i].cigar.radius == eb[i].cigar.radius);
    }

    auto sa = serial, sb = serial;
    auto ia = spite::SpiteIndex::preprocess(sa, scene.robot, env, {}, Exec::serial);
    auto ib = spite::SpiteIndex::preprocess(sb, scene.robot, env, {}, Exec::parallel);
    CHECK(sa == sb);
    CHECK(ia.incidence().map() == ib.incidence().map());

    for (auto test : {baselines::CellTest::aabb, baselines::CellTest::exact}) {
        auto ga = serial, gb = serial;
        auto xa = baselines::UniformGrid::preprocess(ga, scene.robot, env, {1.0, test}, Exec::serial);
        auto xb = baselines::UniformGrid::preprocess(gb, scene.robot, env, {1.0, test}, Exec::parallel);
        CHECK(ga == gb);
        REQUIRE(xa.cell_count() == xb.cell_count());
        for (std::size_t c = 0; c < xa.cell_count(); ++c) CHECK(xa.cell(c) == xb.cell(c));
    }

    auto moves = bench::random_moves(scene, 8, 61);
    auto ba = serial, bb = serial;
    auto env_a = env, env_b = env;
    roadmap::full_revalidate(ba, scene.robot, env_a);
    roadmap::full_revalidate(bb, scene.robot, env_b);
    for (const auto& m : moves) {
        baselines::brute_force_update(ba, scene.robot, env_a, m.obstacle, m.t, Exec::serial);
        baselines::brute_force_update(bb, scene.robot, env_b, m.obstacle, m.t, Exec::parallel);
        CHECK(ba == bb);
    }
}

}  // TEST_SUITE
