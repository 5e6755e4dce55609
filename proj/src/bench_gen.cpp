#include "dynrm/bench.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace dynrm::bench {

namespace {

using geom::ConvexPolyhedron;

Obstacle box_obstacle(ObstacleId id, std::string name, const Vec3& size, const Vec3& center, bool is_static = false) {
    Obstacle o;
    o.id = id;
    o.name = std::move(name);
    o.bodies.push_back(ConvexPolyhedron::box(0.5 * size));
    o.pose = RigidTransform::translate(center);
    o.is_static = is_static;
    return o;
}

/// Box body spanning [lo, hi] in the owner's frame.
ConvexPolyhedron span_box(const Vec3& lo, const Vec3& hi) {
    return ConvexPolyhedron::box(0.5 * (hi - lo), RigidTransform::translate(0.5 * (hi + lo)));
}

std::string fmt_size(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

Vec3 uniform_in(const Aabb& box, std::mt19937_64& rng) {
    Vec3 out;
    for (int k = 0; k < 3; ++k) out[k] = std::uniform_real_distribution<double>(box.min[k], box.max[k])(rng);
    return out;
}

}  // namespace

// Update benchmark -------------------------------------------------------------

Scene UpdateBench::scene_for(std::size_t variant) const {
    const auto& v = variants.at(variant);
    Scene s = scene;
    s.name = scene.name + "/" + v.name;
    s.obstacles = {box_obstacle(kObstacle, v.name, v.size, v.centers.front())};
    return s;
}

std::vector<Move> UpdateBench::moves_for(std::size_t variant) const {
    const auto& v = variants.at(variant);
    std::vector<Move> out;
    for (std::size_t i = 1; i < v.centers.size(); ++i)
        out.push_back({kObstacle, RigidTransform::translate(v.centers[i] - v.centers[i - 1])});
    return out;
}

UpdateBench gen_update_bench(std::uint64_t seed, std::size_t moves) {
    UpdateBench b;
    const Aabb bounds{Vec3::Constant(-16.0), Vec3::Constant(16.0)};
    b.scene.name = "update";
    b.scene.bounds = bounds;
    b.scene.resolution = 0.25;
    b.scene.seed = seed;
    b.scene.robot = RobotModel::free_flyer({ConvexPolyhedron::box(Vec3(0.25, 0.125, 0.125))}, bounds,
                                           {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()});

    const std::vector<Vec3> shapes{{2, 2, 2},    {5, 5, 5},   {20, 20, 20}, {20, 20, 1}, {20, 1, 1},
                                   {20, 20, 2},  {20, 2, 2},  {20, 5, 5},   {20, 20, 5}};
    std::mt19937_64 rng(seed);
    for (const auto& size : shapes) {
        UpdateVariant v;
        v.size = size;
        v.name = (size.x() == size.y() && size.y() == size.z())
                     ? "cube_" + fmt_size(size.x())
                     : "prism_" + fmt_size(size.x()) + "x" + fmt_size(size.y()) + "x" + fmt_size(size.z());
        // Centers keep the whole obstacle inside the bounds.
        const Aabb centers{bounds.min + 0.5 * size, bounds.max - 0.5 * size};
        for (std::size_t i = 0; i <= moves; ++i) v.centers.push_back(uniform_in(centers, rng));
        b.variants.push_back(std::move(v));
    }
    return b;
}

// Walls ----------------------------------------------------------------------

namespace {

constexpr double kLength = 12.0;
constexpr double kWallX[3] = {3.0, 6.0, 9.0};
constexpr double kWallHalfThickness = 0.75;
constexpr double kSlotY[2] = {0.75, 2.25};  // slot centres; slots are 1 x 1
constexpr double kSlotZ = 1.0;
constexpr double kRobotHalf = 0.125;
constexpr ObstacleId kWallFrame = 10;

bool path_exists(Roadmap rm, const RobotModel& r, const Environment& env, std::size_t a, std::size_t b) {
    roadmap::full_revalidate(rm, r, env);
    return roadmap::shortest_path(rm, r, a, b, roadmap::ValidityMode::respect_labels).has_value();
}

}  // namespace

QueryBench gen_walls(std::uint64_t seed, std::size_t iterations) {
    QueryBench b;
    Scene& s = b.scene;
    s.name = "walls";
    s.seed = seed;
    s.resolution = 0.25;
    s.bounds = Aabb{Vec3(0, 0, 0), Vec3(kLength, 3, 2.5)};
    const Aabb reach{s.bounds.min + Vec3::Constant(kRobotHalf), s.bounds.max - Vec3::Constant(kRobotHalf)};
    s.robot = RobotModel::free_flyer({ConvexPolyhedron::box(Vec3::Constant(kRobotHalf))}, reach);

    // Fixed wall parts: everything except the two slots.
    Obstacle frame;
    frame.id = kWallFrame;
    frame.name = "wall_frame";
    frame.is_static = true;
    for (double x : kWallX) {
        double x0 = x - kWallHalfThickness, x1 = x + kWallHalfThickness;
        frame.bodies.push_back(span_box({x0, 0.0, 0.0}, {x1, 3.0, 0.5}));
        frame.bodies.push_back(span_box({x0, 0.0, 1.5}, {x1, 3.0, 2.5}));
        frame.bodies.push_back(span_box({x0, 0.0, 0.5}, {x1, 0.25, 1.5}));
        frame.bodies.push_back(span_box({x0, 1.25, 0.5}, {x1, 1.75, 1.5}));
        frame.bodies.push_back(span_box({x0, 2.75, 0.5}, {x1, 3.0, 1.5}));
    }
    s.obstacles.push_back(frame);

    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    std::vector<bool> plug_high(3);
    for (int w = 0; w < 3; ++w) {
        plug_high[static_cast<std::size_t>(w)] = coin(rng);
        Vec3 c(kWallX[w], kSlotY[plug_high[static_cast<std::size_t>(w)] ? 1 : 0], kSlotZ);
        s.obstacles.push_back(box_obstacle(w, "plug_" + std::to_string(w), Vec3(2 * kWallHalfThickness, 1.0, 1.0), c));
    }

    // Lattice over the robot's reach, minus nodes that touch the fixed wall parts.
    Environment frame_only(s.bounds);
    frame_only.add_obstacle(frame);
    Roadmap full = roadmap::lattice_build(s.robot, frame_only, reach, 0.25, s.resolution);
    std::vector<bool> keep(full.nodes().size());
    for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = full.is_valid(roadmap::ElementId::node(i));
    b.roadmap = roadmap::induced_subgraph(full, keep);
    b.attach_k = 8;
    b.coarse_cell = 2.0;

    // Every plug assignment must leave a path from the left end to the right end.
    {
        std::size_t left = 0, right = 0;
        for (std::size_t i = 0; i < b.roadmap.nodes().size(); ++i) {
            if (b.roadmap.node(i).q.x() < b.roadmap.node(left).q.x()) left = i;
            if (b.roadmap.node(i).q.x() > b.roadmap.node(right).q.x()) right = i;
        }
        Environment env = make_environment(s);
        for (int mask = 0; mask < 8; ++mask) {
            for (int w = 0; w < 3; ++w)
                env.set_obstacle_pose(w, RigidTransform::translate(Vec3(kWallX[w], kSlotY[(mask >> w) & 1], kSlotZ)));
            if (!path_exists(b.roadmap, s.robot, env, left, right))
                throw std::logic_error("walls lattice disconnected for plug assignment " + std::to_string(mask));
        }
    }

    // Start and goal stay clear of the outer walls.
    const double gap = kWallHalfThickness + 2 * kRobotHalf;
    const Aabb start_box{reach.min, Vec3(kWallX[0] - gap, reach.max.y(), reach.max.z())};
    const Aabb goal_box{Vec3(kWallX[2] + gap, reach.min.y(), reach.min.z()), reach.max};
    for (std::size_t it = 0; it < iterations; ++it) {
        QueryIteration q;
        for (int w = 0; w < 3; ++w) {
            if (!coin(rng)) continue;
            const auto i = static_cast<std::size_t>(w);
            q.moves.push_back({w, RigidTransform::translate(Vec3(0, plug_high[i] ? -1.5 : 1.5, 0))});
            plug_high[i] = !plug_high[i];
        }
        q.s = uniform_in(start_box, rng);
        q.t = uniform_in(goal_box, rng);
        b.schedule.push_back(std::move(q));
        b.placements.push_back(plug_high);
    }
    return b;
}

// Shelf ------------------------------------------------------------------------

namespace {

constexpr ObstacleId kCan = 0;
constexpr ObstacleId kBox = 1;
constexpr ObstacleId kShelf = 10;
constexpr ObstacleId kFloor = 11;
constexpr double kStoryDrop = 0.33;  // top-story object -> bottom-story object

RobotModel five_joint_arm() {
    const double pi = std::numbers::pi;
    std::vector<ConvexPolyhedron> bodies{
        ConvexPolyhedron::box(Vec3(0.06, 0.06, 0.15), RigidTransform::translate(Vec3(0, 0, 0.17))),
        ConvexPolyhedron::box(Vec3(0.22, 0.05, 0.05), RigidTransform::translate(Vec3(0.22, 0, 0))),
        ConvexPolyhedron::box(Vec3(0.20, 0.04, 0.04), RigidTransform::translate(Vec3(0.20, 0, 0))),
        ConvexPolyhedron::box(Vec3(0.06, 0.035, 0.035), RigidTransform::translate(Vec3(0.06, 0, 0))),
        ConvexPolyhedron::box(Vec3(0.05, 0.05, 0.02), RigidTransform::translate(Vec3(0.05, 0, 0))),
    };
    std::vector<robot::Joint> joints{
        {Vec3::UnitZ(), RigidTransform::identity()},
        {Vec3::UnitY(), RigidTransform::translate(Vec3(0, 0, 0.35))},
        {Vec3::UnitY(), RigidTransform::translate(Vec3(0.44, 0, 0))},
        {Vec3::UnitY(), RigidTransform::translate(Vec3(0.40, 0, 0))},
        {Vec3::UnitX(), RigidTransform::translate(Vec3(0.12, 0, 0))},
    };
    return RobotModel::serial_chain(std::move(bodies), std::move(joints), std::pair{-pi, pi});
}

Obstacle shelf_frame() {
    Obstacle o;
    o.id = kShelf;
    o.name = "shelf";
    o.is_static = true;
    const double x0 = 0.45, x1 = 0.85, y = 0.45, t = 0.03;
    for (double z : {0.07, 0.40, 0.73}) o.bodies.push_back(span_box({x0, -y - t, z}, {x1 + t, y + t, z + t}));
    o.bodies.push_back(span_box({x1, -y, 0.0}, {x1 + t, y, 0.76}));       // back
    o.bodies.push_back(span_box({x0, -y - t, 0.0}, {x1, -y, 0.76}));     // sides
    o.bodies.push_back(span_box({x0, y, 0.0}, {x1, y + t, 0.76}));
    return o;
}

/// Gripper centre of the last body.
Vec3 tool_point(const RobotModel& r, const Configuration& q) { return robot::body_poses(r, q).back().translation; }

/// Collision-free configuration with some joint clearance whose tool point is close to `target`;
/// seeded random search followed by coordinate descent.
Configuration reach_for(const RobotModel& r, const Environment& env, const Vec3& target, std::mt19937_64& rng) {
    auto free = [&](const Configuration& q) {
        return robot::static_config_ok(r, q) && robot::check_config(r, env, q).valid;
    };
    // Demand some joint-space clearance so planners can leave the pose.
    auto clear = [&](const Configuration& q) {
        if (!free(q)) return false;
        for (Eigen::Index d = 0; d < q.size(); ++d)
            for (double sgn : {-1.0, 1.0}) {
                Configuration p = q;
                p[d] += sgn * 0.05;
                if (!free(p)) return false;
            }
        return true;
    };
    auto cost = [&](const Configuration& q) {
        return clear(q) ? (tool_point(r, q) - target).norm() : std::numeric_limits<double>::infinity();
    };
    Configuration best;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 20000; ++i) {
        Configuration q = roadmap::sample_uniform(r, env, rng);
        double c = cost(q);
        if (c < best_cost) {
            best_cost = c;
            best = q;
        }
    }
    if (!std::isfinite(best_cost)) throw std::logic_error("shelf: no free configuration found");
    for (double step = 0.2; step > 1e-4; step *= 0.5) {
        bool improved = true;
        while (improved) {
            improved = false;
            for (Eigen::Index d = 0; d < best.size(); ++d)
                for (double sgn : {-1.0, 1.0}) {
                    Configuration q = best;
                    q[d] += sgn * step;
                    double c = cost(q);
                    if (c < best_cost) {
                        best_cost = c;
                        best = q;
                        improved = true;
                    }
                }
        }
    }
    return best;
}

void place(Environment& env, bool can_top, bool box_top, const Obstacle& can, const Obstacle& box) {
    auto at = [](const Obstacle& o, bool top) {
        return top ? o.pose : RigidTransform::translate(Vec3(0, 0, -kStoryDrop)) * o.pose;
    };
    env.set_obstacle_pose(kCan, at(can, can_top));
    env.set_obstacle_pose(kBox, at(box, box_top));
}

}  // namespace

QueryBench gen_shelf(std::uint64_t seed, std::size_t iterations, std::size_t prm_nodes) {
    QueryBench b;
    Scene& s = b.scene;
    s.name = "shelf";
    s.seed = seed;
    s.resolution = 0.05;
    s.bounds = Aabb{Vec3(-1.2, -1.2, -0.1), Vec3(1.2, 1.2, 1.5)};
    s.robot = five_joint_arm();

    Obstacle floor = box_obstacle(kFloor, "floor", Vec3(2.4, 2.4, 0.1), Vec3(0, 0, -0.05), true);
    // Objects start on the top story; the bottom placement is kStoryDrop lower.
    Obstacle can = box_obstacle(kCan, "can", Vec3(0.08, 0.08, 0.2), Vec3(0.68, 0.03, 0.43 + 0.1));
    Obstacle box = box_obstacle(kBox, "box", Vec3(0.16, 0.16, 0.1), Vec3(0.60, -0.13, 0.43 + 0.05));
    s.obstacles = {can, box, shelf_frame(), floor};

    std::mt19937_64 rng(seed);
    Environment env = make_environment(s);
    b.attach_k = 8;
    b.coarse_cell = 0.4;

    // Start and goal: tool at the back corners of the upper story, reachable with both objects up.
    Configuration start = reach_for(s.robot, env, Vec3(0.72, -0.33, 0.56), rng);
    // The goal mirrors the start across the xz plane when that pose is free.
    Configuration goal = start;
    goal[0] = -start[0];
    goal[4] = -start[4];
    if (!robot::static_config_ok(s.robot, goal) || !robot::check_config(s.robot, env, goal).valid)
        goal = reach_for(s.robot, env, Vec3(0.72, 0.33, 0.56), rng);

    Roadmap rm = roadmap::prm_build(s.robot, env, prm_nodes, 6, s.resolution, rng());
    auto add_node_linked = [&](const Configuration& q) {
        std::size_t idx = rm.add_node(q, robot::static_config_ok(s.robot, q));
        std::vector<std::pair<double, std::size_t>> d;
        for (std::size_t j = 0; j < idx; ++j) d.emplace_back(robot::config_distance(s.robot, q, rm.node(j).q), j);
        std::size_t kk = std::min<std::size_t>(6, d.size());
        std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(kk), d.end());
        for (std::size_t m = 0; m < kk; ++m) {
            const auto& other = rm.node(d[m].second).q;
            rm.add_edge(idx, d[m].second, robot::intermediate_steps(s.robot, q, other, s.resolution), d[m].first,
                        robot::static_edge_ok(s.robot, q, other, s.resolution));
        }
        return idx;
    };
    std::size_t s_node = add_node_linked(start);
    std::size_t t_node = add_node_linked(goal);

    // Thread planner paths through every object placement so the roadmap covers all four. Both
    // legs are planned outward from the shelf poses to a retracted pose in front of the shelf.
    Configuration home = reach_for(s.robot, env, Vec3(0.3, 0.0, 0.56), rng);
    std::size_t home_node = add_node_linked(home);
    planners::RrtParams rp;
    rp.resolution = s.resolution;
    rp.time_cap = 600.0;
    rp.max_iterations = 100000;
    auto thread = [&](std::size_t from, std::size_t to, int mask) {
        rp.seed = rng();
        auto res = planners::rrt_query(s.robot, env, rm.node(from).q, rm.node(to).q, rp);
        if (res.status != planners::QueryStatus::success)
            throw std::logic_error("shelf: no path for placement " + std::to_string(mask));
        std::size_t prev = from;
        for (std::size_t i = 1; i < res.path.size(); ++i) {
            std::size_t cur = i + 1 == res.path.size() ? to : add_node_linked(res.path[i]);
            const auto& a = rm.node(prev).q;
            const auto& c = rm.node(cur).q;
            if (!rm.find_edge(prev, cur))
                rm.add_edge(prev, cur, robot::intermediate_steps(s.robot, a, c, s.resolution),
                            robot::config_distance(s.robot, a, c), robot::static_edge_ok(s.robot, a, c, s.resolution));
            prev = cur;
        }
    };
    for (int mask = 0; mask < 4; ++mask) {
        place(env, mask & 1, mask & 2, can, box);
        thread(s_node, home_node, mask);
        thread(t_node, home_node, mask);
    }
    for (int mask = 0; mask < 4; ++mask) {
        place(env, mask & 1, mask & 2, can, box);
        if (!path_exists(rm, s.robot, env, s_node, t_node))
            throw std::logic_error("shelf roadmap misses placement " + std::to_string(mask));
    }
    b.roadmap = std::move(rm);

    std::bernoulli_distribution coin(0.5);
    bool can_top = true, box_top = true;
    for (std::size_t it = 0; it < iterations; ++it) {
        QueryIteration q;
        bool c = coin(rng), x = coin(rng);
        if (c != can_top) q.moves.push_back({kCan, RigidTransform::translate(Vec3(0, 0, c ? kStoryDrop : -kStoryDrop))});
        if (x != box_top) q.moves.push_back({kBox, RigidTransform::translate(Vec3(0, 0, x ? kStoryDrop : -kStoryDrop))});
        can_top = c;
        box_top = x;
        q.s = start;
        q.t = goal;
        b.schedule.push_back(std::move(q));
        b.placements.push_back({can_top, box_top});
    }
    return b;
}

}  // namespace dynrm::bench
