#include "dynrm/robot.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dynrm::robot {

namespace {

void require_dims(const RobotModel& r, const Configuration& c) {
    if (static_cast<std::size_t>(c.size()) != r.dof()) {
        throw DimensionMismatch("configuration has " + std::to_string(c.size()) + " values, robot has " +
                                std::to_string(r.dof()) + " DOFs");
    }
}

double dof_delta(const DofSpec& d, double from, double to) {
    return d.wraps() ? wrap_angle(to - from) : to - from;
}

}  // namespace

// ---------------------------------------------------------------------------

RobotModel RobotModel::free_flyer(std::vector<ConvexPolyhedron> bodies, const Aabb& position_range,
                                  std::vector<Vec3> rotation_axes) {
    RobotModel r;
    r.kind = RobotKind::free_flyer;
    r.bodies = std::move(bodies);
    for (int k = 0; k < 3; ++k) {
        r.dofs.push_back({DofKind::translational, std::pair{position_range.min[k], position_range.max[k]}, 1.0});
    }
    for (auto& a : rotation_axes) a.normalize();
    r.rotation_axes = std::move(rotation_axes);
    for (std::size_t i = 0; i < r.rotation_axes.size(); ++i) r.dofs.push_back({DofKind::angular, {}, 1.0});
    r.assign_reach_weights();
    r.validate();
    return r;
}

RobotModel RobotModel::serial_chain(std::vector<ConvexPolyhedron> bodies, std::vector<Joint> joints,
                                    std::optional<std::pair<double, double>> joint_range) {
    RobotModel r;
    r.kind = RobotKind::serial_chain;
    r.bodies = std::move(bodies);
    for (auto& j : joints) j.axis.normalize();
    r.joints = std::move(joints);
    for (std::size_t i = 0; i < r.joints.size(); ++i) r.dofs.push_back({DofKind::angular, joint_range, 1.0});
    r.assign_reach_weights();
    r.validate();
    return r;
}

void RobotModel::validate() const {
    if (bodies.empty()) throw std::invalid_argument("robot needs at least one body");
    for (const auto& b : bodies)
        if (b.vertices.empty()) throw std::invalid_argument("robot body without vertices");
    for (const auto& d : dofs) {
        if (!(d.weight > 0.0)) throw std::invalid_argument("DOF weight must be positive");
        if (d.range && !(d.range->first < d.range->second)) {
            // Degenerate translational ranges (a fixed coordinate) are allowed.
            if (!(d.kind == DofKind::translational && d.range->first == d.range->second))
                throw std::invalid_argument("DOF range must satisfy lo < hi");
        }
    }
    if (kind == RobotKind::free_flyer) {
        if (dofs.size() != 3 + rotation_axes.size() || rotation_axes.size() > 3)
            throw std::invalid_argument("free flyer needs 3 translational and 0-3 angular DOFs");
        for (int k = 0; k < 3; ++k)
            if (dofs[k].kind != DofKind::translational)
                throw std::invalid_argument("free flyer DOFs 0-2 must be translational");
    } else {
        if (joints.size() != bodies.size()) throw std::invalid_argument("serial chain needs one body per joint");
        if (dofs.size() != joints.size()) throw std::invalid_argument("serial chain needs one DOF per joint");
        for (const auto& d : dofs)
            if (d.kind != DofKind::angular) throw std::invalid_argument("serial chain joints are angular");
    }
}

void RobotModel::assign_reach_weights() {
    if (kind == RobotKind::free_flyer) {
        double reach = 0.0;
        for (const auto& b : bodies)
            for (const auto& v : b.vertices) reach = std::max(reach, b.pose.apply(v).norm());
        for (std::size_t i = 3; i < dofs.size(); ++i) dofs[i].weight = reach > 0.0 ? reach : 1.0;
        return;
    }
    Configuration zero = Configuration::Zero(static_cast<Eigen::Index>(joints.size()));
    auto poses = body_poses(*this, zero);
    // Joint j rotates about the origin of link frame j.
    for (std::size_t j = 0; j < joints.size(); ++j) {
        Vec3 centre = poses[j].translation;
        double reach = 0.0;
        for (std::size_t b = j; b < bodies.size(); ++b)
            for (const auto& v : bodies[b].vertices)
                reach = std::max(reach, (poses[b].apply(v) - centre).norm());
        dofs[j].weight = reach > 0.0 ? reach : 1.0;
    }
}

// ---------------------------------------------------------------------------

void Environment::add_obstacle(Obstacle o) {
    if (index_.contains(o.id)) throw std::invalid_argument("duplicate obstacle id " + std::to_string(o.id));
    if (o.bodies.empty()) throw std::invalid_argument("obstacle " + std::to_string(o.id) + " has no bodies");
    index_.emplace(o.id, obstacles_.size());
    obstacles_.push_back(std::move(o));
    world_.emplace_back();
    world_box_.emplace_back();
    refresh(obstacles_.size() - 1);
}

std::size_t Environment::slot(ObstacleId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw UnknownObstacle(id);
    return it->second;
}

const Obstacle& Environment::obstacle(ObstacleId id) const { return obstacles_[slot(id)]; }

std::vector<ObstacleId> Environment::obstacle_ids() const {
    std::vector<ObstacleId> ids;
    for (const auto& o : obstacles_) ids.push_back(o.id);
    return ids;
}

void Environment::move_obstacle(ObstacleId id, const RigidTransform& t) {
    std::size_t i = slot(id);
    obstacles_[i].pose = t * obstacles_[i].pose;
    refresh(i);
}

void Environment::set_obstacle_pose(ObstacleId id, const RigidTransform& pose) {
    std::size_t i = slot(id);
    obstacles_[i].pose = pose;
    refresh(i);
}

const std::vector<WorldBody>& Environment::world_bodies(ObstacleId id) const { return world_[slot(id)]; }
const Aabb& Environment::obstacle_aabb(ObstacleId id) const { return world_box_[slot(id)]; }

std::vector<ObstacleId> Environment::out_of_bounds() const {
    std::vector<ObstacleId> out;
    for (std::size_t i = 0; i < obstacles_.size(); ++i)
        if (!bounds_.contains(world_box_[i])) out.push_back(obstacles_[i].id);
    return out;
}

void Environment::refresh(std::size_t i) {
    const Obstacle& o = obstacles_[i];
    auto& bodies = world_[i];
    bodies.resize(o.bodies.size());
    Aabb total = Aabb::empty();
    for (std::size_t b = 0; b < o.bodies.size(); ++b) {
        RigidTransform t = o.pose * o.bodies[b].pose;
        auto& wb = bodies[b];
        wb.vertices.clear();
        for (const auto& v : o.bodies[b].vertices) wb.vertices.push_back(t.apply(v));
        wb.box = Aabb::of_points(wb.vertices);
        total.expand(wb.box);
    }
    world_box_[i] = total;
}

ObstacleFilter::ObstacleFilter(std::vector<ObstacleId> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    ids_ = std::move(ids);
}

bool ObstacleFilter::accepts(ObstacleId id) const {
    return !ids_ || std::binary_search(ids_->begin(), ids_->end(), id);
}

// ---------------------------------------------------------------------------

std::vector<RigidTransform> body_poses(const RobotModel& r, const Configuration& c) {
    require_dims(r, c);
    std::vector<RigidTransform> out;
    out.reserve(r.bodies.size());
    if (r.kind == RobotKind::free_flyer) {
        RigidTransform base = RigidTransform::translate(Vec3(c[0], c[1], c[2]));
        for (std::size_t k = 0; k < r.rotation_axes.size(); ++k)
            base.rotation = base.rotation * Eigen::AngleAxisd(c[3 + static_cast<Eigen::Index>(k)], r.rotation_axes[k]).toRotationMatrix();
        for (const auto& b : r.bodies) out.push_back(base * b.pose);
        return out;
    }
    RigidTransform frame;
    for (std::size_t j = 0; j < r.joints.size(); ++j) {
        const auto& jt = r.joints[j];
        frame = frame * jt.origin;
        frame.rotation = frame.rotation * Eigen::AngleAxisd(c[static_cast<Eigen::Index>(j)], jt.axis).toRotationMatrix();
        out.push_back(frame * r.bodies[j].pose);
    }
    return out;
}

std::vector<ConvexPolyhedron> forward_kinematics(const RobotModel& r, const Configuration& c) {
    auto poses = body_poses(r, c);
    std::vector<ConvexPolyhedron> out;
    out.reserve(poses.size());
    for (std::size_t b = 0; b < poses.size(); ++b) out.push_back({r.bodies[b].vertices, poses[b]});
    return out;
}

void posed_vertices(const RobotModel& r, const Configuration& c, std::vector<std::vector<Vec3>>& out) {
    auto poses = body_poses(r, c);
    out.resize(poses.size());
    for (std::size_t b = 0; b < poses.size(); ++b) {
        const auto& verts = r.bodies[b].vertices;
        out[b].resize(verts.size());
        for (std::size_t i = 0; i < verts.size(); ++i) out[b][i] = poses[b].apply(verts[i]);
    }
}

// ---------------------------------------------------------------------------

double wrap_angle(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = a - two_pi * std::floor((a + std::numbers::pi) / two_pi);
    if (w >= std::numbers::pi) w -= two_pi;
    return w;
}

double config_distance(const RobotModel& r, const Configuration& p, const Configuration& q) {
    require_dims(r, p);
    require_dims(r, q);
    double sum = 0.0;
    for (std::size_t i = 0; i < r.dof(); ++i) {
        auto k = static_cast<Eigen::Index>(i);
        double d = r.dofs[i].weight * dof_delta(r.dofs[i], p[k], q[k]);
        sum += d * d;
    }
    return std::sqrt(sum);
}

Configuration lerp(const RobotModel& r, const Configuration& p, const Configuration& q, double t) {
    require_dims(r, p);
    require_dims(r, q);
    Configuration out(p.size());
    for (std::size_t i = 0; i < r.dof(); ++i) {
        auto k = static_cast<Eigen::Index>(i);
        const auto& d = r.dofs[i];
        if (t >= 1.0) {
            out[k] = q[k];
        } else if (d.wraps()) {
            out[k] = wrap_angle(p[k] + t * dof_delta(d, p[k], q[k]));
        } else {
            out[k] = p[k] + t * (q[k] - p[k]);
        }
    }
    return out;
}

int intermediate_steps(const RobotModel& r, const Configuration& p, const Configuration& q, double resolution) {
    if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
    double d = config_distance(r, p, q);
    return static_cast<int>(std::ceil(d / resolution));
}

std::vector<Configuration> interpolate(const RobotModel& r, const Configuration& p, const Configuration& q,
                                       double resolution) {
    int n = intermediate_steps(r, p, q, resolution);
    std::vector<Configuration> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    out.push_back(p);
    for (int i = 1; i <= n; ++i) out.push_back(lerp(r, p, q, static_cast<double>(i) / n));
    return out;
}

Configuration normalize(const RobotModel& r, Configuration c) {
    require_dims(r, c);
    for (std::size_t i = 0; i < r.dof(); ++i)
        if (r.dofs[i].wraps()) c[static_cast<Eigen::Index>(i)] = wrap_angle(c[static_cast<Eigen::Index>(i)]);
    return c;
}

// ---------------------------------------------------------------------------

namespace {

struct Scratch {
    std::vector<std::vector<Vec3>> verts;
    std::vector<Aabb> boxes;
};

Scratch& scratch() {
    thread_local Scratch s;
    return s;
}

void pose_into(const RobotModel& r, const Configuration& c, Scratch& s) {
    posed_vertices(r, c, s.verts);
    s.boxes.resize(s.verts.size());
    for (std::size_t b = 0; b < s.verts.size(); ++b) s.boxes[b] = Aabb::of_points(s.verts[b]);
}

// Adds to `hits` (kept sorted) every filtered obstacle touching the posed robot,
// skipping obstacles already present.
void collide_posed(const Scratch& s, const Environment& env, const ObstacleFilter& filter,
                   std::vector<ObstacleId>& hits, CdStats* stats) {
    Aabb robot_box = Aabb::empty();
    for (const auto& b : s.boxes) robot_box.expand(b);
    robot_box = robot_box.inflated(geom::kContactTolerance);
    const auto& obstacles = env.obstacles();
    for (const auto& o : obstacles) {
        if (!filter.accepts(o.id)) continue;
        if (std::binary_search(hits.begin(), hits.end(), o.id)) continue;
        if (!robot_box.intersects(env.obstacle_aabb(o.id))) continue;
        bool hit = false;
        for (const auto& wb : env.world_bodies(o.id)) {
            for (std::size_t b = 0; b < s.verts.size() && !hit; ++b) {
                if (!s.boxes[b].inflated(geom::kContactTolerance).intersects(wb.box)) continue;
                if (stats) ++stats->body_tests;
                hit = geom::intersect_hulls(s.verts[b], wb.vertices);
            }
            if (hit) break;
        }
        if (hit) hits.insert(std::upper_bound(hits.begin(), hits.end(), o.id), o.id);
    }
}

}  // namespace

CheckResult check_config(const RobotModel& r, const Environment& env, const Configuration& c,
                         const ObstacleFilter& filter, CdStats* stats) {
    auto& s = scratch();
    pose_into(r, c, s);
    if (stats) ++stats->config_checks;
    CheckResult out;
    collide_posed(s, env, filter, out.colliding, stats);
    out.valid = out.colliding.empty();
    return out;
}

CheckResult check_edge_strided(const RobotModel& r, const Environment& env, const Configuration& p,
                               const Configuration& q, double resolution, int stride,
                               const ObstacleFilter& filter, CdStats* stats) {
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");
    int n = intermediate_steps(r, p, q, resolution);
    auto& s = scratch();
    CheckResult out;
    auto visit = [&](int i) {
        Configuration c = (i == 0) ? p : lerp(r, p, q, static_cast<double>(i) / n);
        pose_into(r, c, s);
        if (stats) ++stats->config_checks;
        collide_posed(s, env, filter, out.colliding, stats);
    };
    for (int i = 0; i < n; i += stride) visit(i);
    visit(n);
    out.valid = out.colliding.empty();
    return out;
}

CheckResult check_edge(const RobotModel& r, const Environment& env, const Configuration& p,
                       const Configuration& q, double resolution, const ObstacleFilter& filter,
                       CdStats* stats) {
    return check_edge_strided(r, env, p, q, resolution, 1, filter, stats);
}

bool static_config_ok(const RobotModel& r, const Configuration& c) {
    require_dims(r, c);
    for (std::size_t i = 0; i < r.dof(); ++i) {
        const auto& d = r.dofs[i];
        double v = c[static_cast<Eigen::Index>(i)];
        if (!std::isfinite(v)) return false;
        if (d.range && (v < d.range->first || v > d.range->second)) return false;
    }
    if (r.kind != RobotKind::serial_chain) return true;
    std::vector<std::vector<Vec3>> verts;
    posed_vertices(r, c, verts);
    for (std::size_t a = 0; a < verts.size(); ++a)
        for (std::size_t b = a + 2; b < verts.size(); ++b)
            if (geom::intersect_hulls(verts[a], verts[b])) return false;
    return true;
}

bool static_edge_ok(const RobotModel& r, const Configuration& p, const Configuration& q, double resolution) {
    int n = intermediate_steps(r, p, q, resolution);
    for (int i = 0; i <= n; ++i) {
        Configuration c = (i == 0) ? p : lerp(r, p, q, static_cast<double>(i) / n);
        if (!static_config_ok(r, c)) return false;
    }
    return true;
}

}  // namespace dynrm::robot
