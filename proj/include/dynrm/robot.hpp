#pragma once

#include "dynrm/geom.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace dynrm::robot {

using geom::Aabb;
using geom::ConvexPolyhedron;
using geom::RigidTransform;
using geom::Vec3;

using Configuration = Eigen::VectorXd;
using ObstacleId = int;

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnknownObstacle : public std::out_of_range {
public:
    explicit UnknownObstacle(ObstacleId id)
        : std::out_of_range("unknown obstacle id " + std::to_string(id)), id_(id) {}
    ObstacleId id() const { return id_; }

private:
    ObstacleId id_;
};

enum class DofKind { translational, angular };

struct DofSpec {
    DofKind kind = DofKind::translational;
    /// Closed range; unset means unbounded. Unbounded angular DOFs wrap on [-pi, pi).
    std::optional<std::pair<double, double>> range;
    double weight = 1.0;

    bool wraps() const { return kind == DofKind::angular && !range; }
    bool operator==(const DofSpec&) const = default;
};

struct Joint {
    Vec3 axis = Vec3::UnitZ();
    /// Pose of this joint's frame relative to the previous link frame, before rotation.
    RigidTransform origin;
    bool operator==(const Joint&) const = default;
};

enum class RobotKind { free_flyer, serial_chain };

struct RobotModel {
    RobotKind kind = RobotKind::free_flyer;
    /// Bodies in their link frames. For serial chains body j rides on joint j.
    std::vector<ConvexPolyhedron> bodies;
    std::vector<Joint> joints;
    /// Free flyer rotation axes, applied left to right after the translation.
    std::vector<Vec3> rotation_axes;
    std::vector<DofSpec> dofs;

    /// Free flyer with three translational DOFs over `position_range` and one
    /// angular DOF per entry in `rotation_axes`.
    static RobotModel free_flyer(std::vector<ConvexPolyhedron> bodies, const Aabb& position_range,
                                 std::vector<Vec3> rotation_axes = {});
    /// Revolute chain; `joint_range` unset means unbounded (wrapping) joints.
    static RobotModel serial_chain(std::vector<ConvexPolyhedron> bodies, std::vector<Joint> joints,
                                   std::optional<std::pair<double, double>> joint_range = {});

    std::size_t dof() const { return dofs.size(); }
    /// Throws std::invalid_argument on a malformed model.
    void validate() const;
    /// Angular weight = max distance from the rotation centre to any distal body vertex.
    void assign_reach_weights();

    bool operator==(const RobotModel&) const = default;
};

struct Obstacle {
    ObstacleId id = 0;
    std::string name;
    std::vector<ConvexPolyhedron> bodies;
    RigidTransform pose;
    /// Never moved by the experiment schedules; still subject to collision checks.
    bool is_static = false;
};

/// Posed obstacle geometry cached per obstacle.
struct WorldBody {
    std::vector<Vec3> vertices;
    Aabb box;
};

class Environment {
public:
    Environment() = default;
    explicit Environment(const Aabb& bounds) : bounds_(bounds) {}

    const Aabb& bounds() const { return bounds_; }
    void set_bounds(const Aabb& b) { bounds_ = b; }

    /// Throws std::invalid_argument on a duplicate id.
    void add_obstacle(Obstacle o);
    bool has_obstacle(ObstacleId id) const { return index_.contains(id); }
    const Obstacle& obstacle(ObstacleId id) const;
    const std::vector<Obstacle>& obstacles() const { return obstacles_; }
    std::vector<ObstacleId> obstacle_ids() const;

    /// o -> t ∘ o.
    void move_obstacle(ObstacleId id, const RigidTransform& t);
    void set_obstacle_pose(ObstacleId id, const RigidTransform& pose);

    const std::vector<WorldBody>& world_bodies(ObstacleId id) const;
    const Aabb& obstacle_aabb(ObstacleId id) const;

    /// Obstacles whose AABB leaves the bounds.
    std::vector<ObstacleId> out_of_bounds() const;

private:
    std::size_t slot(ObstacleId id) const;
    void refresh(std::size_t i);

    Aabb bounds_;
    std::vector<Obstacle> obstacles_;
    std::vector<std::vector<WorldBody>> world_;
    std::vector<Aabb> world_box_;
    std::unordered_map<ObstacleId, std::size_t> index_;
};

class ObstacleFilter {
public:
    static ObstacleFilter all() { return {}; }
    static ObstacleFilter only(ObstacleId id) { return ObstacleFilter(std::vector<ObstacleId>{id}); }
    static ObstacleFilter of(std::vector<ObstacleId> ids) { return ObstacleFilter(std::move(ids)); }

    bool accepts(ObstacleId id) const;
    bool is_all() const { return !ids_; }

private:
    ObstacleFilter() = default;
    explicit ObstacleFilter(std::vector<ObstacleId> ids);
    std::optional<std::vector<ObstacleId>> ids_;
};

struct CheckResult {
    bool valid = true;
    /// Sorted ascending.
    std::vector<ObstacleId> colliding;
    bool operator==(const CheckResult&) const = default;
};

/// Instrumentation for the narrow phase.
struct CdStats {
    /// Configuration-vs-obstacle-set checks (one per intermediate).
    std::uint64_t config_checks = 0;
    /// Whole-element (node or edge) checks issued by updaters.
    std::uint64_t element_checks = 0;
    /// Exact body-pair tests that reached GJK.
    std::uint64_t body_tests = 0;

    CdStats& operator+=(const CdStats& o) {
        config_checks += o.config_checks;
        element_checks += o.element_checks;
        body_tests += o.body_tests;
        return *this;
    }
};

// Kinematics ---------------------------------------------------------------

/// World pose of every body.
std::vector<RigidTransform> body_poses(const RobotModel& r, const Configuration& c);
std::vector<ConvexPolyhedron> forward_kinematics(const RobotModel& r, const Configuration& c);

/// World vertices of every body, reusing `out`'s storage.
void posed_vertices(const RobotModel& r, const Configuration& c, std::vector<std::vector<Vec3>>& out);

// Metric and local planner --------------------------------------------------

double wrap_angle(double a);
double config_distance(const RobotModel& r, const Configuration& p, const Configuration& q);
/// Configuration at parameter t in [0,1] of the straight (shortest-arc) motion p -> q.
Configuration lerp(const RobotModel& r, const Configuration& p, const Configuration& q, double t);
/// N such that the motion is split into N steps of length <= resolution.
int intermediate_steps(const RobotModel& r, const Configuration& p, const Configuration& q, double resolution);
std::vector<Configuration> interpolate(const RobotModel& r, const Configuration& p, const Configuration& q,
                                       double resolution);

/// Maps angular wrapping DOFs into [-pi, pi).
Configuration normalize(const RobotModel& r, Configuration c);

// Collision checking ---------------------------------------------------------

CheckResult check_config(const RobotModel& r, const Environment& env, const Configuration& c,
                         const ObstacleFilter& filter = ObstacleFilter::all(), CdStats* stats = nullptr);

CheckResult check_edge(const RobotModel& r, const Environment& env, const Configuration& p,
                       const Configuration& q, double resolution,
                       const ObstacleFilter& filter = ObstacleFilter::all(), CdStats* stats = nullptr);

/// Checks intermediates 0, stride, 2*stride, ..., N of the edge; stride 1 is the full check.
CheckResult check_edge_strided(const RobotModel& r, const Environment& env, const Configuration& p,
                               const Configuration& q, double resolution, int stride,
                               const ObstacleFilter& filter = ObstacleFilter::all(),
                               CdStats* stats = nullptr);

/// Joint limits and self-collision between non-adjacent links; independent of obstacles.
bool static_config_ok(const RobotModel& r, const Configuration& c);
bool static_edge_ok(const RobotModel& r, const Configuration& p, const Configuration& q, double resolution);

}  // namespace dynrm::robot
