#include "support.hpp"

#include <doctest.h>

#include <filesystem>

using namespace dynrm;
using namespace dynrm::roadmap;
using dynrm::testing::box_obstacle;
using dynrm::testing::cube_robot;
using geom::Aabb;
using geom::RigidTransform;
using geom::Vec3;

namespace {

const Aabb kRoom{Vec3::Zero(), Vec3::Constant(10)};

Configuration at(double x, double y = 0, double z = 0) { return Configuration(Eigen::Vector3d(x, y, z)); }

/// 0 - 1 = 2 - 3 on a line, with 1 = 2 the only link between the halves.
Roadmap bridge_graph(const RobotModel& r) {
    Roadmap rm(3, 0.25);
    for (int i = 0; i < 4; ++i) rm.add_node(at(1 + i, 1, 1));
    for (std::size_t i = 0; i < 3; ++i)
        rm.add_edge(i, i + 1, robot::intermediate_steps(r, rm.node(i).q, rm.node(i + 1).q, 0.25), 1.0);
    return rm;
}

}  // namespace

TEST_SUITE("roadmap") {

TEST_CASE("lattice counts") {
    auto r = cube_robot(0.1, kRoom);
    Environment env(kRoom);
    auto rm = lattice_build(r, env, Aabb{Vec3::Zero(), Vec3::Constant(1)}, 0.25, 0.25);
    CHECK(rm.nodes().size() == 125);
    CHECK(rm.edges().size() == 3 * 4 * 25);
    auto one = lattice_build(r, env, Aabb{Vec3::Zero(), Vec3::Constant(1)}, 2.0, 0.25);
    CHECK(one.nodes().size() == 1);
    CHECK(one.edges().empty());
}

TEST_CASE("prm construction") {
    auto r = cube_robot(0.2, kRoom);
    Environment env(kRoom);
    auto single = prm_build(r, env, 1, 6, 0.25, 1);
    CHECK(single.nodes().size() == 1);
    CHECK(single.edges().empty());

    auto rm = prm_build(r, env, 1000, 6, 0.25, 1);
    CHECK(rm.nodes().size() == 1000);
    CHECK(rm.edges().size() >= 1000);
    CHECK(rm.edges().size() <= 6000);
    for (const auto& e : rm.all_elements()) CHECK(rm.is_valid(e));
    CHECK(rm.coherent());
    for (const auto& e : rm.edges()) {
        CHECK(e.u < rm.nodes().size());
        CHECK(e.v < rm.nodes().size());
        CHECK(e.steps == robot::intermediate_steps(r, rm.node(e.u).q, rm.node(e.v).q, 0.25));
    }
    CHECK(prm_build(r, env, 300, 6, 0.25, 9) == prm_build(r, env, 300, 6, 0.25, 9));
}

TEST_CASE("hit lists drive labels") {
    auto r = cube_robot(0.2, kRoom);
    auto rm = bridge_graph(r);
    auto e = ElementId::edge(1);
    CHECK(rm.add_hit(e, 3));
    CHECK_FALSE(rm.add_hit(e, 1));
    CHECK(rm.state(e).hits == std::vector<ObstacleId>{1, 3});
    CHECK_FALSE(rm.remove_hit(e, 3));
    CHECK(rm.remove_hit(e, 1));
    CHECK(rm.is_valid(e));
    CHECK(rm.set_static_ok(e, false));
    CHECK_FALSE(rm.is_valid(e));
    CHECK(rm.coherent());
    CHECK_FALSE(rm.add_edge(1, 2, 4, 1.0));
    CHECK_FALSE(rm.add_edge(2, 2, 0, 0.0));
}

TEST_CASE("full revalidation") {
    auto scene = dynrm::testing::random_scene(4);
    auto env = bench::make_environment(scene);
    auto rm = prm_build(scene.robot, Environment(scene.bounds), 200, 6, scene.resolution, 4);
    auto first = full_revalidate(rm, scene.robot, env);
    CHECK_FALSE(first.newly_invalid.empty());
    CHECK(rm.coherent());
    auto second = full_revalidate(rm, scene.robot, env);
    CHECK(second.empty());
    CHECK(second.cd.config_checks == first.cd.config_checks);

    for (auto id : env.obstacle_ids()) env.set_obstacle_pose(id, RigidTransform::translate(Vec3::Constant(100)));
    full_revalidate(rm, scene.robot, env);
    for (const auto& e : rm.all_elements()) CHECK(rm.is_valid(e));
}

TEST_CASE("filtered revalidation keeps other hits") {
    auto r = cube_robot(0.2, kRoom);
    Environment env(kRoom);
    env.add_obstacle(box_obstacle(0, Vec3::Constant(0.3), {2, 1, 1}));
    env.add_obstacle(box_obstacle(1, Vec3::Constant(0.3), {2, 1, 1}));
    auto rm = bridge_graph(r);
    full_revalidate(rm, r, env);
    CHECK(rm.state(ElementId::node(1)).hits == std::vector<ObstacleId>{0, 1});
    env.set_obstacle_pose(1, RigidTransform::translate(Vec3::Constant(8)));
    full_revalidate(rm, r, env, ObstacleFilter::only(1));
    CHECK(rm.state(ElementId::node(1)).hits == std::vector<ObstacleId>{0});
}

TEST_CASE("shortest paths") {
    auto r = cube_robot(0.2, kRoom);
    auto rm = bridge_graph(r);
    CHECK(shortest_path(rm, r, 2, 2, ValidityMode::respect_labels) == Path{2});
    CHECK(shortest_path(rm, r, 0, 1, ValidityMode::respect_labels) == Path{0, 1});
    CHECK(shortest_path(rm, r, 0, 3, ValidityMode::respect_labels) == Path{0, 1, 2, 3});
    rm.add_hit(ElementId::edge(1), 0);
    CHECK_FALSE(shortest_path(rm, r, 0, 3, ValidityMode::respect_labels));
    CHECK(shortest_path(rm, r, 0, 3, ValidityMode::ignore_labels) == Path{0, 1, 2, 3});
    Exclusions ex{std::vector<bool>(4, false), std::vector<bool>(3, false)};
    ex.nodes[2] = true;
    CHECK_FALSE(shortest_path(rm, r, 0, 3, ValidityMode::ignore_labels, &ex));
}

TEST_CASE("query attachment leaves no residue") {
    auto r = cube_robot(0.2, kRoom);
    Environment env(kRoom);
    auto rm = prm_build(r, env, 100, 6, 0.25, 2);
    const auto before = rm;
    auto h = attach_query(rm, r, env, rm.node(5).q, at(7, 7, 7), 6, true);
    REQUIRE(h);
    CHECK(rm.nodes().size() == before.nodes().size() + 2);
    bool zero_length = false;
    for (const auto& [nb, e] : rm.adjacent(h->s)) zero_length |= nb == 5 && rm.edge(e).length == 0.0;
    CHECK(zero_length);
    detach_query(rm, *h);
    CHECK(rm == before);
    for (std::size_t i = 0; i < rm.nodes().size(); ++i) CHECK(rm.adjacent(i).size() == before.adjacent(i).size());
}

TEST_CASE("save and load") {
    auto dir = std::filesystem::temp_directory_path();
    auto r = cube_robot(0.2, kRoom);
    Environment env(kRoom);
    env.add_obstacle(box_obstacle(0, Vec3::Constant(1.5), {5, 5, 5}));
    auto rm = prm_build(r, env, 1000, 6, 0.25, 3);
    save(rm, dir / "dynrm_rt.json");
    auto back = load(dir / "dynrm_rt.json");
    CHECK(back == rm);
    CHECK(back.edges().size() == rm.edges().size());

    Roadmap empty(3, 0.5);
    CHECK(from_json_text(to_json_text(empty)) == empty);

    CHECK_THROWS_AS(from_json_text("{\"format\": 3"), ParseError);
    CHECK_THROWS_AS(from_json_text("{}"), ParseError);
    auto text = to_json_text(bridge_graph(r));
    auto pos = text.find("\"u\"");
    REQUIRE(pos != std::string::npos);
    CHECK_THROWS_AS(from_json_text(text.substr(0, pos) + "\"u\": 99, \"x\"" + text.substr(pos + 3)), ParseError);
}

}  // TEST_SUITE
