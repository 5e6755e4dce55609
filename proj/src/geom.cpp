#include "dynrm/geom.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dynrm::geom {

RigidTransform RigidTransform::rotate(const Vec3& axis, double angle) {
    return {Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix(), Vec3::Zero()};
}

RigidTransform RigidTransform::inverse() const {
    Mat3 rt = rotation.transpose();
    return {rt, -(rt * translation)};
}

RigidTransform RigidTransform::operator*(const RigidTransform& other) const {
    return {rotation * other.rotation, rotation * other.translation + translation};
}

bool RigidTransform::is_proper(double tol) const {
    if (!rotation.allFinite() || !translation.allFinite()) return false;
    Mat3 err = rotation.transpose() * rotation - Mat3::Identity();
    return err.cwiseAbs().maxCoeff() <= tol && std::abs(rotation.determinant() - 1.0) <= tol;
}

Aabb Aabb::empty() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {Vec3::Constant(inf), Vec3::Constant(-inf)};
}

Aabb Aabb::of_points(std::span<const Vec3> pts) {
    Aabb box = empty();
    for (const auto& p : pts) box.expand(p);
    return box;
}

ConvexPolyhedron ConvexPolyhedron::box(const Vec3& h, const RigidTransform& pose) {
    ConvexPolyhedron p;
    p.pose = pose;
    p.vertices.reserve(8);
    for (int i = 0; i < 8; ++i) {
        p.vertices.emplace_back((i & 1) ? h.x() : -h.x(), (i & 2) ? h.y() : -h.y(),
                                (i & 4) ? h.z() : -h.z());
    }
    return p;
}

ConvexPolyhedron ConvexPolyhedron::from_points(std::vector<Vec3> pts, const RigidTransform& pose) {
    if (pts.empty()) throw DegenerateInput("convex polyhedron needs at least one vertex");
    std::sort(pts.begin(), pts.end(), [](const Vec3& a, const Vec3& b) {
        return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    double scale = 0.0;
    for (const auto& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
    const double tol = 1e-12 * std::max(scale, 1.0);

    // A point is redundant iff it lies in the hull of the remaining points.
    std::vector<Vec3> kept = pts;
    for (std::size_t i = 0; i < kept.size() && kept.size() > 1;) {
        std::vector<Vec3> others;
        others.reserve(kept.size() - 1);
        for (std::size_t j = 0; j < kept.size(); ++j)
            if (j != i) others.push_back(kept[j]);
        Vec3 probe[1] = {kept[i]};
        if (hull_distance(probe, others) <= tol) {
            kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
    return {std::move(kept), pose};
}

std::vector<Vec3> ConvexPolyhedron::world_vertices() const {
    std::vector<Vec3> out;
    out.reserve(vertices.size());
    for (const auto& v : vertices) out.push_back(pose.apply(v));
    return out;
}

std::array<Vec3, 8> Obb::corners() const {
    std::array<Vec3, 8> out;
    for (int i = 0; i < 8; ++i) {
        out[i] = center + ((i & 1) ? 1.0 : -1.0) * half_extents[0] * axes[0] +
                 ((i & 2) ? 1.0 : -1.0) * half_extents[1] * axes[1] +
                 ((i & 4) ? 1.0 : -1.0) * half_extents[2] * axes[2];
    }
    return out;
}

bool Obb::contains(const Vec3& p, double tol) const {
    Vec3 d = p - center;
    for (int k = 0; k < 3; ++k)
        if (std::abs(d.dot(axes[k])) > half_extents[k] + tol) return false;
    return true;
}

double Cigar::volume() const {
    const double len = (segment.b - segment.a).norm();
    return std::numbers::pi * radius * radius * len + 4.0 / 3.0 * std::numbers::pi * radius * radius * radius;
}

bool Cigar::contains(const Vec3& p, double tol) const {
    return point_segment_distance(p, segment) <= radius + tol;
}

ConvexPolyhedron apply_transform(const RigidTransform& t, const ConvexPolyhedron& p) {
    return {p.vertices, t * p.pose};
}

Aabb aabb_of(const ConvexPolyhedron& p) {
    Aabb box = Aabb::empty();
    for (const auto& v : p.vertices) box.expand(p.pose.apply(v));
    return box;
}

Aabb aabb_of(const Cigar& c) {
    Aabb box{c.segment.a.cwiseMin(c.segment.b), c.segment.a.cwiseMax(c.segment.b)};
    return box.inflated(c.radius);
}

Aabb aabb_of(const Obb& b) {
    Vec3 r = Vec3::Zero();
    for (int k = 0; k < 3; ++k) r += b.half_extents[k] * b.axes[k].cwiseAbs();
    return {b.center - r, b.center + r};
}

// ---------------------------------------------------------------------------
// GJK on the Minkowski difference A - B.

namespace {

struct Simplex {
    std::array<Vec3, 4> pts;
    int size = 0;
};

Vec3 closest_on_segment(Simplex& s) {
    const Vec3& a = s.pts[0];
    const Vec3& b = s.pts[1];
    Vec3 ab = b - a;
    double denom = ab.squaredNorm();
    double t = denom > 0.0 ? std::clamp(-a.dot(ab) / denom, 0.0, 1.0) : 0.0;
    if (t <= 0.0) {
        s.size = 1;
        return a;
    }
    if (t >= 1.0) {
        s.pts[0] = b;
        s.size = 1;
        return b;
    }
    return a + t * ab;
}

// Closest point of triangle (a,b,c) to the origin; shrinks the simplex to the supporting feature.
Vec3 closest_on_triangle(Simplex& s) {
    const Vec3 a = s.pts[0], b = s.pts[1], c = s.pts[2];
    Vec3 ab = b - a, ac = c - a;
    Vec3 ap = -a;
    double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0 && d2 <= 0) {
        s.size = 1;
        return a;
    }
    Vec3 bp = -b;
    double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0 && d4 <= d3) {
        s.pts[0] = b;
        s.size = 1;
        return b;
    }
    double vc = d1 * d4 - d3 * d2;
    if (vc <= 0 && d1 >= 0 && d3 <= 0) {
        double v = d1 / (d1 - d3);
        s.size = 2;
        return a + v * ab;
    }
    Vec3 cp = -c;
    double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0 && d5 <= d6) {
        s.pts[0] = c;
        s.size = 1;
        return c;
    }
    double vb = d5 * d2 - d1 * d6;
    if (vb <= 0 && d2 >= 0 && d6 <= 0) {
        double w = d2 / (d2 - d6);
        s.pts[1] = c;
        s.size = 2;
        return a + w * ac;
    }
    double va = d3 * d6 - d5 * d4;
    if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
        double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        s.pts[0] = b;
        s.pts[1] = c;
        s.size = 2;
        return b + w * (c - b);
    }
    double sum = va + vb + vc;
    if (!(sum > 0.0)) {
        // Collinear triangle: best of its edges.
        Vec3 best;
        double best_d = std::numeric_limits<double>::infinity();
        Simplex best_s;
        for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
            Simplex e;
            e.pts[0] = s.pts[i];
            e.pts[1] = s.pts[j];
            e.size = 2;
            Vec3 p = closest_on_segment(e);
            if (p.squaredNorm() < best_d) {
                best_d = p.squaredNorm();
                best = p;
                best_s = e;
            }
        }
        s = best_s;
        return best;
    }
    double v = vb / sum, w = vc / sum;
    return a + v * ab + w * ac;
}

// Returns true when the origin is enclosed (distance zero).
bool closest_on_tetrahedron(Simplex& s, Vec3& out) {
    static constexpr int faces[4][4] = {{0, 1, 2, 3}, {0, 1, 3, 2}, {0, 2, 3, 1}, {1, 2, 3, 0}};
    bool any_outside = false;
    double best_d = std::numeric_limits<double>::infinity();
    Simplex best_s;
    Vec3 best = Vec3::Zero();
    for (const auto& f : faces) {
        const Vec3& a = s.pts[f[0]];
        const Vec3& b = s.pts[f[1]];
        const Vec3& c = s.pts[f[2]];
        const Vec3& d = s.pts[f[3]];
        Vec3 n = (b - a).cross(c - a);
        double so = -a.dot(n);
        double sd = (d - a).dot(n);
        // Degenerate (flat) tetrahedra treat every face as a candidate.
        bool outside = (sd * sd <= 1e-24 * n.squaredNorm() * (d - a).squaredNorm()) || so * sd < 0;
        if (!outside) continue;
        any_outside = true;
        Simplex tri;
        tri.pts[0] = a;
        tri.pts[1] = b;
        tri.pts[2] = c;
        tri.size = 3;
        Vec3 p = closest_on_triangle(tri);
        if (p.squaredNorm() < best_d) {
            best_d = p.squaredNorm();
            best = p;
            best_s = tri;
        }
    }
    if (!any_outside) return true;
    s = best_s;
    out = best;
    return false;
}

struct MinkowskiSupport {
    std::span<const Vec3> a, b;
    Vec3 operator()(const Vec3& d) const {
        std::size_t ia = 0, ib = 0;
        double ba = a[0].dot(d), bb = -b[0].dot(d);
        for (std::size_t i = 1; i < a.size(); ++i) {
            double v = a[i].dot(d);
            if (v > ba) {
                ba = v;
                ia = i;
            }
        }
        for (std::size_t i = 1; i < b.size(); ++i) {
            double v = -b[i].dot(d);
            if (v > bb) {
                bb = v;
                ib = i;
            }
        }
        return a[ia] - b[ib];
    }
};

}  // namespace

double hull_distance(std::span<const Vec3> a, std::span<const Vec3> b, double threshold) {
    if (a.empty() || b.empty()) throw DegenerateInput("hull_distance on empty vertex set");
    MinkowskiSupport support{a, b};
    Simplex s;
    Vec3 v = a[0] - b[0];
    s.pts[0] = v;
    s.size = 1;
    const bool early = threshold >= 0.0;
    for (int iter = 0; iter < 128; ++iter) {
        double vv = v.squaredNorm();
        if (vv <= 1e-30) return 0.0;
        Vec3 w = support(-v);
        double vw = v.dot(w);
        if (early && vw > 0.0 && vw * vw > threshold * threshold * vv) {
            return vw / std::sqrt(vv);
        }
        if (vv - vw <= 1e-13 * vv) break;
        bool dup = false;
        for (int i = 0; i < s.size; ++i)
            if (s.pts[i] == w) dup = true;
        if (dup) break;
        s.pts[s.size++] = w;
        Vec3 nv;
        switch (s.size) {
            case 1: nv = w; break;
            case 2: nv = closest_on_segment(s); break;
            case 3: nv = closest_on_triangle(s); break;
            default:
                if (closest_on_tetrahedron(s, nv)) return 0.0;
                break;
        }
        if (nv.squaredNorm() >= vv) break;  // no progress; numerical floor
        v = nv;
        if (early && v.squaredNorm() <= threshold * threshold) return v.norm();
    }
    return v.norm();
}

bool intersect_hulls(std::span<const Vec3> a, std::span<const Vec3> b) {
    return hull_distance(a, b, kContactTolerance) <= kContactTolerance;
}

bool intersect_convex_convex(const ConvexPolyhedron& a, const ConvexPolyhedron& b) {
    auto wa = a.world_vertices();
    auto wb = b.world_vertices();
    if (!Aabb::of_points(wa).inflated(kContactTolerance).intersects(Aabb::of_points(wb))) return false;
    return intersect_hulls(wa, wb);
}

// ---------------------------------------------------------------------------

double point_segment_distance(const Vec3& p, const Segment& s) {
    Vec3 ab = s.b - s.a;
    double denom = ab.squaredNorm();
    double t = denom > 0.0 ? std::clamp((p - s.a).dot(ab) / denom, 0.0, 1.0) : 0.0;
    return (s.a + t * ab - p).norm();
}

double segment_segment_distance(const Segment& s1, const Segment& s2) {
    // Clamped closest points of two segments (Ericson, RTCD 5.1.9).
    Vec3 d1 = s1.b - s1.a, d2 = s2.b - s2.a, r = s1.a - s2.a;
    double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
    constexpr double eps = 1e-300;
    double s = 0.0, t = 0.0;
    if (a <= eps && e <= eps) return r.norm();
    if (a <= eps) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        double c = d1.dot(r);
        if (e <= eps) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            double b = d1.dot(d2);
            double denom = a * e - b * b;
            s = denom > 1e-14 * a * e ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return ((s1.a + s * d1) - (s2.a + t * d2)).norm();
}

namespace {

// Squared distance from the segment to the box: convex and piecewise quadratic in the
// segment parameter, with breakpoints where the segment crosses a slab plane.
double segment_aabb_distance_sq(const Segment& s, const Aabb& box) {
    Vec3 d = s.b - s.a;
    std::array<double, 8> ts;
    int nt = 0;
    ts[nt++] = 0.0;
    ts[nt++] = 1.0;
    for (int k = 0; k < 3; ++k) {
        if (d[k] == 0.0) continue;
        for (double plane : {box.min[k], box.max[k]}) {
            double t = (plane - s.a[k]) / d[k];
            if (t > 0.0 && t < 1.0) ts[nt++] = t;
        }
    }
    std::sort(ts.begin(), ts.begin() + nt);

    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i + 1 < nt; ++i) {
        double t0 = ts[i], t1 = ts[i + 1];
        double tm = 0.5 * (t0 + t1);
        // g_k(t) = c0 + c1 t on this piece (or zero inside the slab); f = sum g_k^2.
        double qa = 0.0, qb = 0.0, qc = 0.0;
        for (int k = 0; k < 3; ++k) {
            double x = s.a[k] + tm * d[k];
            double c0, c1;
            if (x < box.min[k]) {
                c0 = box.min[k] - s.a[k];
                c1 = -d[k];
            } else if (x > box.max[k]) {
                c0 = s.a[k] - box.max[k];
                c1 = d[k];
            } else {
                continue;
            }
            qa += c1 * c1;
            qb += 2.0 * c0 * c1;
            qc += c0 * c0;
        }
        auto f = [&](double t) { return std::max(0.0, (qa * t + qb) * t + qc); };
        best = std::min({best, f(t0), f(t1)});
        if (qa > 0.0) {
            double ts_ = std::clamp(-qb / (2.0 * qa), t0, t1);
            best = std::min(best, f(ts_));
        }
    }
    if (nt == 2 && best == std::numeric_limits<double>::infinity()) best = 0.0;
    return best;
}

}  // namespace

double segment_aabb_distance(const Segment& s, const Aabb& b) {
    return std::sqrt(segment_aabb_distance_sq(s, b));
}

bool intersect_cigar_aabb(const Cigar& c, const Aabb& b) {
    if (!aabb_of(c).intersects(b)) return false;
    return segment_aabb_distance_sq(c.segment, b) <= c.radius * c.radius;
}

bool intersect_cigar_hull(const Cigar& c, std::span<const Vec3> world_vertices) {
    const Vec3 seg[2] = {c.segment.a, c.segment.b};
    const double reach = c.radius + kContactTolerance;
    return hull_distance(seg, world_vertices, reach) <= reach;
}

bool intersect_cigar_convex(const Cigar& c, const ConvexPolyhedron& p) {
    auto w = p.world_vertices();
    if (!aabb_of(c).inflated(kContactTolerance).intersects(Aabb::of_points(w))) return false;
    return intersect_cigar_hull(c, w);
}

bool intersect_cigar_cigar(const Cigar& a, const Cigar& b) {
    return segment_segment_distance(a.segment, b.segment) <= a.radius + b.radius;
}

// ---------------------------------------------------------------------------
// Oriented boxes.

Obb fit_obb_in_frame(std::span<const Vec3> points, const Mat3& frame) {
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (const auto& p : points) {
        Vec3 q = frame.transpose() * p;
        lo = lo.cwiseMin(q);
        hi = hi.cwiseMax(q);
    }
    Vec3 half = 0.5 * (hi - lo);
    Vec3 mid = 0.5 * (hi + lo);
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int i, int j) { return half[i] > half[j]; });
    Obb box;
    box.center = frame * mid;
    for (int k = 0; k < 3; ++k) {
        box.axes[k] = frame.col(order[k]);
        box.half_extents[k] = half[order[k]];
    }
    return box;
}

namespace {

Mat3 covariance(std::span<const Vec3> points) {
    Vec3 mean = Vec3::Zero();
    for (const auto& p : points) mean += p;
    mean /= static_cast<double>(points.size());
    Mat3 c = Mat3::Zero();
    for (const auto& p : points) {
        Vec3 d = p - mean;
        c += d * d.transpose();
    }
    return c;
}

Mat3 orthonormal_frame_from(const Vec3& primary, const Mat3& cov) {
    Vec3 u = primary.normalized();
    Mat3 proj = Mat3::Identity() - u * u.transpose();
    Eigen::SelfAdjointEigenSolver<Mat3> es(proj * cov * proj);
    Vec3 v = es.eigenvectors().col(2);
    v -= v.dot(u) * u;
    if (v.squaredNorm() < 1e-20) v = u.unitOrthogonal();
    v.normalize();
    Mat3 f;
    f.col(0) = u;
    f.col(1) = v;
    f.col(2) = u.cross(v);
    return f;
}

double extent_volume(std::span<const Vec3> pts, const Mat3& frame) {
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (const auto& p : pts) {
        Vec3 q = frame.transpose() * p;
        lo = lo.cwiseMin(q);
        hi = hi.cwiseMax(q);
    }
    return (hi - lo).prod();
}

// Extreme points along a fixed spread of directions; a cheap stand-in for the hull
// used to score candidate frames. Final boxes are always fitted on the full cloud.
std::vector<Vec3> extreme_subset(std::span<const Vec3> pts) {
    constexpr int kDirs = 40;
    if (pts.size() <= 2 * kDirs) return {pts.begin(), pts.end()};
    std::vector<std::size_t> picked;
    picked.reserve(2 * kDirs);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < kDirs; ++i) {
        // Fibonacci half-sphere suffices: each direction contributes max and min.
        double z = 1.0 - (i + 0.5) / kDirs;
        double rxy = std::sqrt(std::max(0.0, 1.0 - z * z));
        Vec3 d(rxy * std::cos(golden * i), rxy * std::sin(golden * i), z);
        std::size_t imax = 0, imin = 0;
        double vmax = pts[0].dot(d), vmin = vmax;
        for (std::size_t j = 1; j < pts.size(); ++j) {
            double v = pts[j].dot(d);
            if (v > vmax) {
                vmax = v;
                imax = j;
            }
            if (v < vmin) {
                vmin = v;
                imin = j;
            }
        }
        picked.push_back(imax);
        picked.push_back(imin);
    }
    std::sort(picked.begin(), picked.end());
    picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
    std::vector<Vec3> out;
    out.reserve(picked.size());
    for (auto i : picked) out.push_back(pts[i]);
    return out;
}

// Pattern search over rotations about the current frame's own axes.
Mat3 refine_frame(std::span<const Vec3> pts, Mat3 frame, double min_step) {
    double best = extent_volume(pts, frame);
    double step = std::numbers::pi / 4.0;
    int evals = 0;
    while (step >= min_step && evals < 400) {
        bool improved = false;
        for (int k = 0; k < 3; ++k) {
            for (double sgn : {1.0, -1.0}) {
                Mat3 cand = frame * Eigen::AngleAxisd(sgn * step, Vec3::Unit(k)).toRotationMatrix();
                double v = extent_volume(pts, cand);
                ++evals;
                if (v < best * (1.0 - 1e-12)) {
                    best = v;
                    frame = cand;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return frame;
}

}  // namespace

Obb pca_obb(std::span<const Vec3> points) {
    if (points.empty()) throw DegenerateInput("pca_obb on empty point cloud");
    Eigen::SelfAdjointEigenSolver<Mat3> es(covariance(points));
    Mat3 frame = es.eigenvectors();
    if (frame.determinant() < 0) frame.col(2) = -frame.col(2);
    return fit_obb_in_frame(points, frame);
}

Obb approx_min_obb(std::span<const Vec3> points, double epsilon) {
    if (points.empty()) throw DegenerateInput("approx_min_obb on empty point cloud");
    if (!(epsilon > 0.0)) throw DegenerateInput("approx_min_obb needs epsilon > 0");
    if (points.size() == 1) return fit_obb_in_frame(points, Mat3::Identity());

    const Mat3 cov = covariance(points);
    std::vector<Mat3> seeds;
    seeds.push_back(Mat3::Identity());
    {
        Eigen::SelfAdjointEigenSolver<Mat3> es(cov);
        Mat3 f = es.eigenvectors();
        if (f.determinant() < 0) f.col(2) = -f.col(2);
        seeds.push_back(f);
    }
    {
        // Approximate diameter by two farthest-point sweeps.
        auto farthest = [&](const Vec3& from) {
            std::size_t best = 0;
            double bd = -1.0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                double d = (points[i] - from).squaredNorm();
                if (d > bd) {
                    bd = d;
                    best = i;
                }
            }
            return points[best];
        };
        Vec3 p1 = farthest(points[0]);
        Vec3 p2 = farthest(p1);
        if ((p2 - p1).squaredNorm() > 0.0) seeds.push_back(orthonormal_frame_from(p2 - p1, cov));
    }

    const auto subset = extreme_subset(points);
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t i = 0; i < seeds.size(); ++i) ranked.emplace_back(extent_volume(subset, seeds[i]), i);
    std::sort(ranked.begin(), ranked.end());

    const double min_step = epsilon / 8.0;
    Obb best = fit_obb_in_frame(points, seeds[ranked[0].second]);
    for (std::size_t r = 0; r < std::min<std::size_t>(2, ranked.size()); ++r) {
        Mat3 f = refine_frame(subset, seeds[ranked[r].second], min_step);
        Obb cand = fit_obb_in_frame(points, f);
        if (cand.volume() < best.volume()) best = cand;
    }
    // Refinement scores a subset; never return worse than any full-cloud seed fit.
    for (const auto& s : seeds) {
        Obb cand = fit_obb_in_frame(points, s);
        if (cand.volume() < best.volume()) best = cand;
    }
    return best;
}

Cigar enclosing_cigar_of_obb(const Obb& box) {
    const double a = box.half_extents[0];
    const double s = box.half_extents[1] * box.half_extents[1] + box.half_extents[2] * box.half_extents[2];
    auto radius = [&](double h) {
        double over = std::max(a - h, 0.0);
        return std::sqrt(over * over + s);
    };
    auto volume = [&](double h) {
        double r = radius(h);
        return std::numbers::pi * r * r * 2.0 * h + 4.0 / 3.0 * std::numbers::pi * r * r * r;
    };

    double best_h = a;
    double best_v = volume(a);
    if (a > 0.0) {
        constexpr int kSamples = 64;
        int best_i = kSamples;
        for (int i = 0; i < kSamples; ++i) {
            double h = a * i / kSamples;
            double v = volume(h);
            if (v < best_v) {
                best_v = v;
                best_h = h;
                best_i = i;
            }
        }
        // Golden-section polish within the bracketing grid cells.
        double lo = a * std::max(best_i - 1, 0) / kSamples;
        double hi = a * std::min(best_i + 1, kSamples) / kSamples;
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        double f1 = volume(x1), f2 = volume(x2);
        for (int it = 0; it < 60; ++it) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = volume(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = volume(x2);
            }
        }
        double h = 0.5 * (lo + hi);
        if (volume(h) < best_v) {
            best_v = volume(h);
            best_h = h;
        }
    }
    Cigar c;
    c.segment.a = box.center - best_h * box.axes[0];
    c.segment.b = box.center + best_h * box.axes[0];
    c.radius = radius(best_h);
    return c;
}

}  // namespace dynrm::geom
