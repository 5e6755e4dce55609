#include "support.hpp"

#include <doctest.h>

#include <numbers>

using namespace dynrm;
using namespace dynrm::spite;
using dynrm::testing::box_obstacle;
using dynrm::testing::cube_robot;
using geom::Cigar;
using geom::ConvexPolyhedron;
using geom::Vec3;
using roadmap::ElementId;

namespace {

const Aabb kRoom{Vec3::Zero(), Vec3::Constant(10)};

Configuration at(double x, double y = 0, double z = 0) { return Configuration(Eigen::Vector3d(x, y, z)); }

/// Every posed vertex of body b over the intermediates lies in its cigar.
bool contains_sweep(const RobotModel& r, const std::vector<Configuration>& configs, const std::vector<CigarEntry>& cg) {
    std::vector<std::vector<Vec3>> posed;
    for (const auto& c : configs) {
        robot::posed_vertices(r, c, posed);
        for (const auto& e : cg)
            for (const auto& v : posed[e.body])
                if (geom::point_segment_distance(v, e.cigar.segment) > e.cigar.radius + 1e-9) return false;
    }
    return true;
}

std::vector<CigarEntry> random_entries(std::mt19937_64& rng, std::size_t n, double side) {
    std::uniform_real_distribution<double> u(0, side), d(-1.5, 1.5), rr(0.0, 0.5);
    std::vector<CigarEntry> out;
    for (std::size_t i = 0; i < n; ++i) {
        Vec3 a(u(rng), u(rng), u(rng));
        out.push_back({Cigar{{a, a + Vec3(d(rng), d(rng), d(rng))}, rr(rng)}, ElementId::node(i), 0});
    }
    return out;
}

Aabb random_box(std::mt19937_64& rng, double side) {
    std::uniform_real_distribution<double> u(-1, side + 1), s(0.0, side / 4);
    Vec3 lo(u(rng), u(rng), u(rng));
    return {lo, lo + Vec3(s(rng), s(rng), s(rng))};
}

RobotModel planar_arm() {
    std::vector<ConvexPolyhedron> bodies;
    std::vector<robot::Joint> joints;
    for (int i = 0; i < 3; ++i) {
        bodies.push_back(ConvexPolyhedron::box(Vec3(0.5, 0.05, 0.05), RigidTransform::translate({0.5, 0, 0})));
        joints.push_back({Vec3::UnitZ(), i ? RigidTransform::translate({1, 0, 0}) : RigidTransform::identity()});
    }
    return RobotModel::serial_chain(bodies, joints);
}

}  // namespace

TEST_SUITE("spite") {

TEST_CASE("node cigars") {
    auto r = cube_robot(0.5, kRoom);
    auto c = cigars_for_node(r, at(1, 2, 3));
    REQUIRE(c.size() == 1);
    CHECK(contains_sweep(r, {at(1, 2, 3)}, c));

    auto arm = planar_arm();
    Configuration q(3);
    q << 0.3, -0.7, 1.1;
    auto three = cigars_for_node(arm, q);
    CHECK(three.size() == 3);
    CHECK(contains_sweep(arm, {q}, three));

    auto flat = RobotModel::free_flyer({ConvexPolyhedron::box(Vec3(1, 1, 1e-7))}, kRoom);
    auto fc = cigars_for_node(flat, at(0, 0, 0));
    CHECK(contains_sweep(flat, {at(0, 0, 0)}, fc));
    CHECK(fc[0].cigar.radius < 1.5);
}

TEST_CASE("edge cigars") {
    auto r = cube_robot(0.5, kRoom);
    auto same = cigars_for_edge(r, at(1, 2, 3), at(1, 2, 3), 0.25);
    auto node = cigars_for_node(r, at(1, 2, 3));
    REQUIRE(same.size() == node.size());
    CHECK(same[0].cigar.segment.a == node[0].cigar.segment.a);
    CHECK(same[0].cigar.radius == node[0].cigar.radius);

    auto sweep = cigars_for_edge(r, at(0), at(10), 0.25);
    REQUIRE(sweep.size() == 1);
    const auto& cg = sweep[0].cigar;
    double half = 0.5 * (cg.segment.b - cg.segment.a).norm();
    CHECK(half + cg.radius >= 5.5 - 1e-9);
    CHECK(half <= 5.5 + 1e-9);
    CHECK(cg.radius == doctest::Approx(std::sqrt(0.5)).epsilon(0.05));
    CHECK(contains_sweep(r, robot::interpolate(r, at(0), at(10), 0.01), sweep));

    auto arm = planar_arm();
    Configuration p(3), q(3);
    p << 0.0, 0.2, -0.4;
    q << 1.2, -0.9, 0.8;
    auto cg3 = cigars_for_edge(arm, p, q, 0.25);
    CHECK(cg3.size() == 3);
    CHECK(contains_sweep(arm, robot::interpolate(arm, p, q, 0.25), cg3));
}

TEST_CASE("containment over random elements") {
    std::mt19937_64 rng(21);
    auto scene = dynrm::testing::random_scene(21);
    auto env = bench::make_environment(scene);
    for (int i = 0; i < 40; ++i) {
        auto p = roadmap::sample_uniform(scene.robot, env, rng);
        auto q = roadmap::sample_uniform(scene.robot, env, rng);
        q.head<3>() = p.head<3>() + (q.head<3>() - p.head<3>()) * 0.2;
        auto cg = cigars_for_edge(scene.robot, p, q, scene.resolution);
        CHECK(contains_sweep(scene.robot, robot::interpolate(scene.robot, p, q, scene.resolution), cg));
    }
}

TEST_CASE("tree structure") {
    auto empty = CigarTree::build({});
    CHECK(empty.empty());
    CHECK(empty.query({Vec3::Zero(), Vec3::Constant(100)}).empty());
    CHECK(empty.check_invariants());

    std::mt19937_64 rng(8);
    auto few = CigarTree::build(random_entries(rng, 8, 10), 8);
    CHECK(few.nodes().size() == 1);
    CHECK(few.nodes()[0].leaf);

    auto big = CigarTree::build(random_entries(rng, 10000, 30), 8);
    CHECK(big.entries().size() == 10000);
    CHECK(big.depth() <= 64);
    CHECK(big.check_invariants());
    for (const auto& n : big.nodes())
        if (n.leaf) CHECK(n.count >= 1);
    CHECK_THROWS_AS(CigarTree::build(random_entries(rng, 3, 1), 0), std::invalid_argument);
}

TEST_CASE("tree query matches linear scan") {
    std::mt19937_64 rng(9);
    auto tree = CigarTree::build(random_entries(rng, 1000, 20), 4);
    CHECK(tree.query({Vec3::Constant(100), Vec3::Constant(101)}).empty());
    for (std::uint32_t i = 0; i < 50; ++i) {
        auto hits = tree.query(geom::aabb_of(tree.entries()[i].cigar));
        CHECK(std::binary_search(hits.begin(), hits.end(), i));
    }
    for (int k = 0; k < 100; ++k) {
        auto box = random_box(rng, 20);
        std::vector<std::uint32_t> scan;
        for (std::uint32_t i = 0; i < tree.entries().size(); ++i)
            if (geom::intersect_cigar_aabb(tree.entries()[i].cigar, box)) scan.push_back(i);
        CHECK(tree.query(box) == scan);
    }
}

TEST_CASE("preprocessing labels match the oracle") {
    auto scene = dynrm::testing::random_scene(12, 4);
    auto env = bench::make_environment(scene);
    auto rm = roadmap::prm_build(scene.robot, Environment(scene.bounds), 300, 6, scene.resolution, 12);
    auto oracle = rm;
    roadmap::full_revalidate(oracle, scene.robot, env);
    auto idx = SpiteIndex::preprocess(rm, scene.robot, env);
    CHECK(rm == oracle);
    CHECK(idx.incidence().matches(rm));
    CHECK(idx.tree().entries().size() == rm.element_count());
    CHECK(idx.tree().check_invariants());

    roadmap::Roadmap none(6, 0.25);
    auto empty = SpiteIndex::preprocess(none, scene.robot, env);
    CHECK(empty.tree().empty());
}

TEST_CASE("two-node update") {
    auto r = cube_robot(0.25, kRoom);
    Environment env(kRoom);
    env.add_obstacle(box_obstacle(0, Vec3::Constant(0.5), {5, 8, 5}));
    roadmap::Roadmap rm(3, 0.25);
    rm.add_node(at(2, 5, 5));
    rm.add_node(at(8, 5, 5));
    rm.add_edge(0, 1, robot::intermediate_steps(r, rm.node(0).q, rm.node(1).q, 0.25), 6.0);
    auto idx = SpiteIndex::preprocess(rm, r, env);
    for (const auto& e : rm.all_elements()) CHECK(rm.is_valid(e));

    auto far = idx.update(rm, r, env, 0, RigidTransform::translate({0, 30, 0}));
    CHECK(far.empty());
    CHECK(idx.incidence().of(0).empty());
    idx.update(rm, r, env, 0, RigidTransform::translate({0, -30, 0}));

    auto onto = idx.update(rm, r, env, 0, RigidTransform::translate({0, -3, 0}));
    CHECK(onto.newly_invalid == std::vector<ElementId>{ElementId::edge(0)});
    CHECK(onto.newly_valid.empty());
    CHECK(rm.is_valid(ElementId::node(0)));
    CHECK(rm.is_valid(ElementId::node(1)));
    CHECK(idx.incidence().of(0) == std::set<ElementId>{ElementId::edge(0)});

    auto back = idx.update(rm, r, env, 0, RigidTransform::translate({0, 3, 0}));
    CHECK(back.newly_valid == std::vector<ElementId>{ElementId::edge(0)});
    CHECK(back.newly_invalid.empty());
    CHECK(rm.state(ElementId::edge(0)).hits.empty());
    CHECK(idx.incidence().of(0).empty());
    CHECK_THROWS_AS(idx.update(rm, r, env, 5, RigidTransform::identity()), robot::UnknownObstacle);
}

TEST_CASE("updates track the oracle") {
    auto scene = dynrm::testing::random_scene(31, 3);
    auto env = bench::make_environment(scene);
    auto rm = roadmap::prm_build(scene.robot, Environment(scene.bounds), 300, 6, scene.resolution, 31);
    auto idx = SpiteIndex::preprocess(rm, scene.robot, env);
    for (const auto& m : bench::random_moves(scene, 30, 31)) {
        idx.update(rm, scene.robot, env, m.obstacle, m.t);
        auto oracle = rm;
        roadmap::full_revalidate(oracle, scene.robot, env);
        REQUIRE(rm == oracle);
        REQUIRE(idx.incidence().matches(rm));
        REQUIRE(rm.coherent());
    }
}

}  // TEST_SUITE
