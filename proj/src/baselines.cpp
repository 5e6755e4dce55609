#include "dynrm/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace dynrm::baselines {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::array<geom::Vec3, 8> box_corners(const Aabb& b) {
    std::array<geom::Vec3, 8> out;
    for (int m = 0; m < 8; ++m)
        out[static_cast<std::size_t>(m)] = geom::Vec3((m & 1) ? b.max.x() : b.min.x(), (m & 2) ? b.max.y() : b.min.y(),
                                                      (m & 4) ? b.max.z() : b.min.z());
    return out;
}

}  // namespace

std::size_t UniformGrid::flat_index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * static_cast<std::size_t>(dims_[1]) + static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(dims_[0]) +
           static_cast<std::size_t>(i);
}

int UniformGrid::clamp_index(double x, int axis) const {
    double f = std::floor((x - origin_[axis]) / cell_size_);
    if (!(f >= 0.0)) return 0;  // also catches NaN
    if (f >= dims_[static_cast<std::size_t>(axis)]) return dims_[static_cast<std::size_t>(axis)] - 1;
    return static_cast<int>(f);
}

UniformGrid::Range UniformGrid::index_range(const Aabb& box) const {
    Range r;
    for (int a = 0; a < 3; ++a) {
        r.lo[static_cast<std::size_t>(a)] = clamp_index(box.min[a], a);
        r.hi[static_cast<std::size_t>(a)] = clamp_index(box.max[a], a);
    }
    return r;
}

Aabb UniformGrid::cell_box(int i, int j, int k, const Aabb& reach) const {
    const std::array<int, 3> idx{i, j, k};
    Aabb b;
    for (int a = 0; a < 3; ++a) {
        const auto n = static_cast<std::size_t>(a);
        b.min[a] = origin_[a] + idx[n] * cell_size_;
        b.max[a] = origin_[a] + (idx[n] + 1) * cell_size_;
        // Boundary cells own everything beyond the grid.
        if (idx[n] == 0) b.min[a] = std::min(b.min[a], reach.min[a]);
        if (idx[n] == dims_[n] - 1) b.max[a] = std::max(b.max[a], reach.max[a]);
    }
    return b;
}

std::vector<std::size_t> UniformGrid::cells_overlapping(const Aabb& box) const {
    std::vector<std::size_t> out;
    if (box.is_empty()) return out;
    auto rg = index_range(box);
    for (int k = rg.lo[2]; k <= rg.hi[2]; ++k)
        for (int j = rg.lo[1]; j <= rg.hi[1]; ++j)
            for (int i = rg.lo[0]; i <= rg.hi[0]; ++i) out.push_back(flat_index(i, j, k));
    return out;
}

std::vector<std::uint32_t> UniformGrid::cells_of_element(const Roadmap& rm, const RobotModel& r, const ElementId& e,
                                                         CellTest test, std::vector<std::uint32_t>& stamp,
                                                         std::uint32_t tag, std::size_t& tests) const {
    std::vector<Configuration> configs;
    if (e.kind == roadmap::ElementKind::node) {
        configs.push_back(rm.node(e.index).q);
    } else {
        const auto& ed = rm.edge(e.index);
        configs = robot::interpolate(r, rm.node(ed.u).q, rm.node(ed.v).q, rm.resolution());
    }
    std::vector<std::uint32_t> out;
    std::vector<std::vector<geom::Vec3>> verts;
    for (const auto& c : configs) {
        robot::posed_vertices(r, c, verts);
        for (const auto& body : verts) {
            Aabb bb = Aabb::of_points(body);
            auto rg = index_range(bb);
            for (int k = rg.lo[2]; k <= rg.hi[2]; ++k)
                for (int j = rg.lo[1]; j <= rg.hi[1]; ++j)
                    for (int i = rg.lo[0]; i <= rg.hi[0]; ++i) {
                        auto flat = flat_index(i, j, k);
                        if (stamp[flat] == tag) continue;
                        if (test == CellTest::exact) {
                            ++tests;
                            auto corners = box_corners(cell_box(i, j, k, bb));
                            if (!geom::intersect_hulls(body, corners)) continue;
                        }
                        stamp[flat] = tag;
                        out.push_back(static_cast<std::uint32_t>(flat));
                    }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

UniformGrid UniformGrid::preprocess(Roadmap& rm, const RobotModel& r, const Environment& env,
                                    const GridParams& params, Exec exec) {
    if (!(params.cell_size > 0.0)) throw std::invalid_argument("grid cell size must be positive");
    UniformGrid g;
    auto t0 = Clock::now();
    g.cell_size_ = params.cell_size;
    const Aabb& bounds = env.bounds();
    g.origin_ = bounds.min;
    for (int a = 0; a < 3; ++a) {
        double cells = std::ceil(bounds.extent()[a] / params.cell_size - 1e-9);
        if (cells > 1e7) throw std::invalid_argument("grid too fine for the environment");
        g.dims_[static_cast<std::size_t>(a)] = std::max(1, static_cast<int>(cells));
    }
    const std::size_t ncells = static_cast<std::size_t>(g.dims_[0]) * static_cast<std::size_t>(g.dims_[1]) *
                               static_cast<std::size_t>(g.dims_[2]);
    g.cell_lists_.assign(ncells, {});
    g.elements_ = rm.all_elements();
    g.n_nodes_ = rm.nodes().size();

    std::vector<std::vector<std::uint32_t>> per(g.elements_.size());
    std::vector<std::size_t> tests(g.elements_.size(), 0);
    if (exec == Exec::serial) {
        std::vector<std::uint32_t> stamp(ncells, 0);
        for (std::size_t i = 0; i < g.elements_.size(); ++i)
            per[i] = g.cells_of_element(rm, r, g.elements_[i], params.test, stamp, static_cast<std::uint32_t>(i + 1),
                                        tests[i]);
    } else {
#pragma omp parallel
        {
            std::vector<std::uint32_t> stamp(ncells, 0);
            const auto count = static_cast<std::ptrdiff_t>(g.elements_.size());
#pragma omp for schedule(dynamic, 8)
            for (std::ptrdiff_t i = 0; i < count; ++i) {
                auto u = static_cast<std::size_t>(i);
                per[u] = g.cells_of_element(rm, r, g.elements_[u], params.test, stamp,
                                            static_cast<std::uint32_t>(u + 1), tests[u]);
            }
        }
    }
    for (std::size_t i = 0; i < per.size(); ++i) {
        g.stats_.cell_tests += tests[i];
        g.stats_.listings += per[i].size();
        for (auto c : per[i]) g.cell_lists_[c].push_back(g.elements_[i]);
    }
    g.seen_.assign(g.elements_.size(), 0);
    g.stats_.rasterize_ms = ms_since(t0);

    auto t1 = Clock::now();
    g.incidence_ = spite::label_by_insertion(
        rm, r, env, [&](const Aabb& box) { return g.retrieve(box); }, &g.stats_.cd);
    g.stats_.validate_ms = ms_since(t1);
    g.stats_.total_ms = ms_since(t0);
    return g;
}

std::vector<ElementId> UniformGrid::retrieve(const Aabb& box) const {
    std::vector<ElementId> out;
    if (box.is_empty() || elements_.empty()) return out;
    if (++epoch_ == 0) {
        std::fill(seen_.begin(), seen_.end(), 0);
        epoch_ = 1;
    }
    auto slot = [&](const ElementId& e) {
        return e.kind == roadmap::ElementKind::node ? e.index : n_nodes_ + e.index;
    };
    auto rg = index_range(box);
    for (int k = rg.lo[2]; k <= rg.hi[2]; ++k)
        for (int j = rg.lo[1]; j <= rg.hi[1]; ++j)
            for (int i = rg.lo[0]; i <= rg.hi[0]; ++i)
                for (const auto& e : cell_lists_[flat_index(i, j, k)]) {
                    auto s = slot(e);
                    if (seen_[s] == epoch_) continue;
                    seen_[s] = epoch_;
                    out.push_back(e);
                }
    std::sort(out.begin(), out.end());
    return out;
}

ChangeReport UniformGrid::update(Roadmap& rm, const RobotModel& r, Environment& env, ObstacleId o,
                                 const RigidTransform& t) {
    auto t0 = Clock::now();
    env.move_obstacle(o, t);
    auto inv = retrieve(env.obstacle_aabb(o).inflated(geom::kContactTolerance));
    ChangeReport report = incidence_.reconcile(rm, r, env, o, inv);
    report.wall_ms = ms_since(t0);
    return report;
}

ChangeReport brute_force_update(Roadmap& rm, const RobotModel& r, Environment& env, ObstacleId o,
                                const RigidTransform& t, Exec exec) {
    auto t0 = Clock::now();
    env.move_obstacle(o, t);
    ChangeReport report = roadmap::full_revalidate(rm, r, env, robot::ObstacleFilter::only(o), exec);
    report.wall_ms = ms_since(t0);
    return report;
}

}  // namespace dynrm::baselines
