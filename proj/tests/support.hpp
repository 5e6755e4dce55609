#pragma once

#include "dynrm/bench.hpp"

#include <random>

namespace dynrm::testing {

using geom::Aabb;
using geom::ConvexPolyhedron;
using geom::RigidTransform;
using geom::Vec3;
using robot::Obstacle;
using robot::RobotModel;

inline Obstacle box_obstacle(robot::ObstacleId id, const Vec3& half, const Vec3& center, bool is_static = false) {
    Obstacle o;
    o.id = id;
    o.name = "box_" + std::to_string(id);
    o.bodies = {ConvexPolyhedron::box(half)};
    o.pose = RigidTransform::translate(center);
    o.is_static = is_static;
    return o;
}

inline RobotModel cube_robot(double half, const Aabb& reach) {
    return RobotModel::free_flyer({ConvexPolyhedron::box(Vec3::Constant(half))}, reach);
}

inline Vec3 uniform_point(const Aabb& b, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return b.min + (b.max - b.min).cwiseProduct(Vec3(u(rng), u(rng), u(rng)));
}

/// Free-flying prism in a box with a few random axis-aligned obstacles.
inline bench::Scene random_scene(std::uint64_t seed, int obstacles = 3, double side = 10.0) {
    std::mt19937_64 rng(seed);
    bench::Scene s;
    s.name = "random_" + std::to_string(seed);
    s.seed = seed;
    s.resolution = 0.25;
    s.bounds = Aabb{Vec3::Zero(), Vec3::Constant(side)};
    s.robot = RobotModel::free_flyer({ConvexPolyhedron::box(Vec3(0.4, 0.2, 0.1))}, s.bounds,
                                     {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()});
    std::uniform_real_distribution<double> size(0.3, 1.5);
    for (int i = 0; i < obstacles; ++i) {
        Vec3 half(size(rng), size(rng), size(rng));
        Aabb room{s.bounds.min + half, s.bounds.max - half};
        s.obstacles.push_back(box_obstacle(i, half, uniform_point(room, rng)));
    }
    return s;
}

inline std::vector<Vec3> random_cloud(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    Vec3 scale(u(rng), u(rng), u(rng));
    Vec3 axis(g(rng), g(rng), g(rng));
    auto rot = RigidTransform::rotate(axis.normalized(), u(rng));
    Vec3 shift(g(rng), g(rng), g(rng));
    std::vector<Vec3> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(rot.apply(Vec3(g(rng), g(rng), g(rng)).cwiseProduct(scale)) + shift);
    return pts;
}

}  // namespace dynrm::testing
