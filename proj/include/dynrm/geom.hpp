#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

namespace dynrm::geom {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Distance below which two closed sets are reported as touching.
inline constexpr double kContactTolerance = 1e-9;

class DegenerateInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Proper rigid motion x -> R x + T.
struct RigidTransform {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    static RigidTransform identity() { return {}; }
    static RigidTransform translate(const Vec3& t) { return {Mat3::Identity(), t}; }
    static RigidTransform rotate(const Vec3& axis, double angle);

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
    RigidTransform inverse() const;
    /// (*this) ∘ other: apply `other` first.
    RigidTransform operator*(const RigidTransform& other) const;

    bool is_proper(double tol = 1e-9) const;
    bool operator==(const RigidTransform&) const = default;
};

struct Aabb {
    Vec3 min = Vec3::Zero();
    Vec3 max = Vec3::Zero();

    static Aabb empty();
    static Aabb of_points(std::span<const Vec3> pts);

    bool is_empty() const { return (min.array() > max.array()).any(); }
    bool intersects(const Aabb& o) const {
        return (min.array() <= o.max.array()).all() && (o.min.array() <= max.array()).all();
    }
    bool contains(const Aabb& o) const {
        return (min.array() <= o.min.array()).all() && (o.max.array() <= max.array()).all();
    }
    bool contains(const Vec3& p) const {
        return (min.array() <= p.array()).all() && (p.array() <= max.array()).all();
    }
    void expand(const Vec3& p) {
        min = min.cwiseMin(p);
        max = max.cwiseMax(p);
    }
    void expand(const Aabb& o) {
        min = min.cwiseMin(o.min);
        max = max.cwiseMax(o.max);
    }
    Aabb inflated(double r) const { return {min.array() - r, max.array() + r}; }
    Vec3 center() const { return 0.5 * (min + max); }
    Vec3 extent() const { return max - min; }
    double volume() const { return is_empty() ? 0.0 : extent().prod(); }
    bool operator==(const Aabb&) const = default;
};

/// Convex hull of `vertices` placed by `pose`. Vertices are stored in the local frame.
struct ConvexPolyhedron {
    std::vector<Vec3> vertices;
    RigidTransform pose;

    /// Axis-aligned box with the given half extents, centered at the local origin.
    static ConvexPolyhedron box(const Vec3& half_extents, const RigidTransform& pose = {});
    /// Drops points that are not extreme points of the set.
    static ConvexPolyhedron from_points(std::vector<Vec3> pts, const RigidTransform& pose = {});

    std::vector<Vec3> world_vertices() const;
    bool operator==(const ConvexPolyhedron&) const = default;
};

struct Obb {
    Vec3 center = Vec3::Zero();
    std::array<Vec3, 3> axes{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
    /// Sorted descending.
    Vec3 half_extents = Vec3::Zero();

    double volume() const { return 8.0 * half_extents.prod(); }
    std::array<Vec3, 8> corners() const;
    bool contains(const Vec3& p, double tol = 1e-9) const;
};

struct Segment {
    Vec3 a = Vec3::Zero();
    Vec3 b = Vec3::Zero();
};

/// Capsule: Minkowski sum of a segment and a ball of `radius`.
struct Cigar {
    Segment segment;
    double radius = 0.0;

    double volume() const;
    bool contains(const Vec3& p, double tol = 1e-9) const;
};

ConvexPolyhedron apply_transform(const RigidTransform& t, const ConvexPolyhedron& p);

Aabb aabb_of(const ConvexPolyhedron& p);
Aabb aabb_of(const Cigar& c);
Aabb aabb_of(const Obb& b);

/// Closest distance between the convex hulls of two point sets (GJK).
/// Stops early once the answer relative to `threshold` is decided; the returned
/// value is then a bound on the correct side of the threshold.
double hull_distance(std::span<const Vec3> a, std::span<const Vec3> b,
                     double threshold = -1.0);

bool intersect_convex_convex(const ConvexPolyhedron& a, const ConvexPolyhedron& b);
/// Same predicate on vertex sets that are already in the world frame.
bool intersect_hulls(std::span<const Vec3> a, std::span<const Vec3> b);

double point_segment_distance(const Vec3& p, const Segment& s);
double segment_segment_distance(const Segment& s1, const Segment& s2);
double segment_aabb_distance(const Segment& s, const Aabb& b);

bool intersect_cigar_aabb(const Cigar& c, const Aabb& b);
bool intersect_cigar_convex(const Cigar& c, const ConvexPolyhedron& p);
bool intersect_cigar_hull(const Cigar& c, std::span<const Vec3> world_vertices);
bool intersect_cigar_cigar(const Cigar& a, const Cigar& b);

/// (1+epsilon)-style approximate minimum-volume oriented box.
/// Throws DegenerateInput on an empty cloud or non-positive epsilon.
Obb approx_min_obb(std::span<const Vec3> points, double epsilon = 0.1);

/// Box fitted in the principal-component frame of the cloud.
Obb pca_obb(std::span<const Vec3> points);
/// Box fitted in a given orthonormal frame.
Obb fit_obb_in_frame(std::span<const Vec3> points, const Mat3& frame);

/// Smallest capsule along the box's longest axis that contains the box.
Cigar enclosing_cigar_of_obb(const Obb& b);

}  // namespace dynrm::geom
