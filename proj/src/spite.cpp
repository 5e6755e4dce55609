#include "dynrm/spite.hpp"

#include <algorithm>
#include <chrono>

namespace dynrm::spite {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

constexpr std::size_t kMaxDepth = 64;

}  // namespace

Cigar bounding_cigar(std::span<const geom::Vec3> cloud, double epsilon) {
    Cigar c = geom::enclosing_cigar_of_obb(geom::approx_min_obb(cloud, epsilon));
    double worst = 0.0;
    for (const auto& p : cloud) worst = std::max(worst, geom::point_segment_distance(p, c.segment));
    c.radius = std::max(c.radius, worst);
    return c;
}

std::vector<CigarEntry> cigars_for_node(const RobotModel& r, const Configuration& c, double epsilon,
                                        ElementId element) {
    std::vector<std::vector<geom::Vec3>> verts;
    robot::posed_vertices(r, c, verts);
    std::vector<CigarEntry> out;
    out.reserve(verts.size());
    for (std::size_t b = 0; b < verts.size(); ++b)
        out.push_back({bounding_cigar(verts[b], epsilon), element, static_cast<std::uint32_t>(b)});
    return out;
}

std::vector<CigarEntry> cigars_for_edge(const RobotModel& r, const Configuration& p, const Configuration& q,
                                        double resolution, double epsilon, ElementId element) {
    const int n = robot::intermediate_steps(r, p, q, resolution);
    const std::size_t nb = r.bodies.size();
    std::vector<std::vector<geom::Vec3>> clouds(nb);
    for (std::size_t b = 0; b < nb; ++b) clouds[b].reserve(r.bodies[b].vertices.size() * static_cast<std::size_t>(n + 1));
    std::vector<std::vector<geom::Vec3>> verts;
    for (int i = 0; i <= n; ++i) {
        Configuration c = (i == 0) ? p : robot::lerp(r, p, q, static_cast<double>(i) / n);
        robot::posed_vertices(r, c, verts);
        for (std::size_t b = 0; b < nb; ++b) clouds[b].insert(clouds[b].end(), verts[b].begin(), verts[b].end());
    }
    std::vector<CigarEntry> out;
    out.reserve(nb);
    for (std::size_t b = 0; b < nb; ++b)
        out.push_back({bounding_cigar(clouds[b], epsilon), element, static_cast<std::uint32_t>(b)});
    return out;
}

std::vector<CigarEntry> build_entries(const Roadmap& rm, const RobotModel& r, double epsilon, Exec exec) {
    const auto elements = rm.all_elements();
    std::vector<std::vector<CigarEntry>> per(elements.size());
    parallel_for(exec, elements.size(), [&](std::size_t i) {
        const auto& e = elements[i];
        if (e.kind == roadmap::ElementKind::node) {
            per[i] = cigars_for_node(r, rm.node(e.index).q, epsilon, e);
        } else {
            const auto& ed = rm.edge(e.index);
            per[i] = cigars_for_edge(r, rm.node(ed.u).q, rm.node(ed.v).q, rm.resolution(), epsilon, e);
        }
    });
    std::vector<CigarEntry> out;
    out.reserve(elements.size() * r.bodies.size());
    for (auto& v : per) out.insert(out.end(), v.begin(), v.end());
    return out;
}

// ---------------------------------------------------------------------------

CigarTree CigarTree::build(std::vector<CigarEntry> entries, std::size_t leaf_capacity) {
    if (leaf_capacity < 1) throw std::invalid_argument("leaf capacity must be >= 1");
    CigarTree t;
    t.leaf_capacity_ = leaf_capacity;
    if (entries.empty()) return t;
    std::vector<Aabb> boxes;
    boxes.reserve(entries.size());
    for (const auto& e : entries) boxes.push_back(geom::aabb_of(e.cigar));
    std::vector<std::uint32_t> ids(entries.size());
    for (std::uint32_t i = 0; i < ids.size(); ++i) ids[i] = i;
    t.entries_.reserve(entries.size());
    t.entry_boxes_.reserve(entries.size());
    t.build_node(ids, 0, entries, boxes);
    return t;
}

std::int32_t CigarTree::build_node(std::vector<std::uint32_t>& ids, std::size_t depth,
                                   std::vector<CigarEntry>& source, std::vector<Aabb>& boxes) {
    const auto self = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    Aabb box = Aabb::empty();
    for (auto i : ids) box.expand(boxes[i]);
    nodes_[static_cast<std::size_t>(self)].box = box;

    auto make_leaf = [&] {
        auto& n = nodes_[static_cast<std::size_t>(self)];
        n.leaf = true;
        n.first = static_cast<std::uint32_t>(entries_.size());
        n.count = static_cast<std::uint32_t>(ids.size());
        for (auto i : ids) {
            entries_.push_back(source[i]);
            entry_boxes_.push_back(boxes[i]);
        }
    };
    if (ids.size() <= leaf_capacity_ || depth >= kMaxDepth) {
        make_leaf();
        return self;
    }

    int axis = 0;
    geom::Vec3 ext = box.extent();
    if (ext.y() > ext[axis]) axis = 1;
    if (ext.z() > ext[axis]) axis = 2;
    const double mid = 0.5 * (box.min[axis] + box.max[axis]);

    std::array<std::vector<std::uint32_t>, 3> parts;
    for (auto i : ids) {
        if (boxes[i].max[axis] < mid) {
            parts[0].push_back(i);
        } else if (boxes[i].min[axis] > mid) {
            parts[1].push_back(i);
        } else {
            parts[2].push_back(i);
        }
    }
    if (parts[0].empty() && parts[1].empty()) {
        make_leaf();  // nothing separates along this plane
        return self;
    }
    nodes_[static_cast<std::size_t>(self)].leaf = false;
    ids.clear();
    ids.shrink_to_fit();
    for (std::size_t c = 0; c < 3; ++c) {
        if (parts[c].empty()) continue;
        std::int32_t child = build_node(parts[c], depth + 1, source, boxes);
        nodes_[static_cast<std::size_t>(self)].child[c] = child;
    }
    return self;
}

std::vector<std::uint32_t> CigarTree::query(const Aabb& q) const {
    std::vector<std::uint32_t> out;
    if (nodes_.empty()) return out;
    std::vector<std::int32_t> stack{0};
    while (!stack.empty()) {
        const Node& n = nodes_[static_cast<std::size_t>(stack.back())];
        stack.pop_back();
        if (!n.box.intersects(q)) continue;
        if (n.leaf) {
            for (std::uint32_t i = n.first; i < n.first + n.count; ++i) {
                if (entry_boxes_[i].intersects(q) && geom::intersect_cigar_aabb(entries_[i].cigar, q))
                    out.push_back(i);
            }
            continue;
        }
        for (auto c : n.child)
            if (c >= 0) stack.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t CigarTree::depth() const {
    if (nodes_.empty()) return 0;
    std::size_t best = 0;
    std::vector<std::pair<std::int32_t, std::size_t>> stack{{0, 1}};
    while (!stack.empty()) {
        auto [i, d] = stack.back();
        stack.pop_back();
        best = std::max(best, d);
        for (auto c : nodes_[static_cast<std::size_t>(i)].child)
            if (c >= 0) stack.emplace_back(c, d + 1);
    }
    return best;
}

bool CigarTree::check_invariants() const {
    if (nodes_.empty()) return entries_.empty();
    std::vector<int> seen(entries_.size(), 0);
    std::vector<std::int32_t> stack{0};
    while (!stack.empty()) {
        const Node& n = nodes_[static_cast<std::size_t>(stack.back())];
        stack.pop_back();
        if (n.leaf) {
            if (n.first + n.count > entries_.size()) return false;
            for (std::uint32_t i = n.first; i < n.first + n.count; ++i) {
                ++seen[i];
                if (!n.box.contains(geom::aabb_of(entries_[i].cigar))) return false;
            }
            continue;
        }
        int children = 0;
        for (auto c : n.child) {
            if (c < 0) continue;
            ++children;
            if (!n.box.contains(nodes_[static_cast<std::size_t>(c)].box)) return false;
            stack.push_back(c);
        }
        if (children == 0 || children > 3) return false;
    }
    return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

// ---------------------------------------------------------------------------

ObstacleIncidence ObstacleIncidence::from_roadmap(const Roadmap& rm) {
    ObstacleIncidence inc;
    for (const auto& e : rm.all_elements())
        for (ObstacleId o : rm.state(e).hits) inc.map_[o].insert(e);
    return inc;
}

const std::set<ElementId>& ObstacleIncidence::of(ObstacleId o) const {
    static const std::set<ElementId> none;
    auto it = map_.find(o);
    return it == map_.end() ? none : it->second;
}

bool ObstacleIncidence::matches(const Roadmap& rm) const {
    auto truth = from_roadmap(rm);
    auto strip = [](const std::map<ObstacleId, std::set<ElementId>>& m) {
        std::map<ObstacleId, std::set<ElementId>> out;
        for (const auto& [k, v] : m)
            if (!v.empty()) out.emplace(k, v);
        return out;
    };
    return strip(truth.map_) == strip(map_);
}

ChangeReport ObstacleIncidence::reconcile(Roadmap& rm, const RobotModel& r, const Environment& env, ObstacleId o,
                                          const std::vector<ElementId>& retrieved) {
    ChangeReport report;
    const auto only = robot::ObstacleFilter::only(o);
    auto& blocked_by_o = map_[o];
    const std::vector<ElementId> previously(blocked_by_o.begin(), blocked_by_o.end());

    std::set_union(retrieved.begin(), retrieved.end(), previously.begin(), previously.end(),
                   std::back_inserter(report.candidates));

    // Results of step one, reused when an element is also in the revalidation set.
    std::vector<std::pair<ElementId, bool>> checked;
    checked.reserve(retrieved.size());

    for (const auto& c : retrieved) {
        bool blocked = !roadmap::check_element(rm, r, env, c, only, &report.cd).valid;
        checked.emplace_back(c, blocked);
        if (!blocked) continue;
        bool was_valid = rm.is_valid(c);
        rm.add_hit(c, o);
        blocked_by_o.insert(c);
        if (was_valid && !rm.is_valid(c)) report.newly_invalid.push_back(c);
    }
    for (const auto& c : previously) {
        auto it = std::lower_bound(checked.begin(), checked.end(), c,
                                   [](const auto& a, const ElementId& b) { return a.first < b; });
        bool blocked = (it != checked.end() && it->first == c)
                           ? it->second
                           : !roadmap::check_element(rm, r, env, c, only, &report.cd).valid;
        if (blocked) continue;
        bool was_valid = rm.is_valid(c);
        rm.remove_hit(c, o);
        blocked_by_o.erase(c);
        if (!was_valid && rm.is_valid(c)) report.newly_valid.push_back(c);
    }
    if (blocked_by_o.empty()) map_.erase(o);
    std::sort(report.newly_valid.begin(), report.newly_valid.end());
    return report;
}

// ---------------------------------------------------------------------------

SpiteIndex SpiteIndex::preprocess(Roadmap& rm, const RobotModel& r, const Environment& env,
                                  const SpiteParams& params, Exec exec) {
    SpiteIndex idx;
    auto t0 = Clock::now();
    auto entries = build_entries(rm, r, params.epsilon, exec);
    idx.stats_.cigars_ms = ms_since(t0);
    idx.stats_.entries = entries.size();

    auto t1 = Clock::now();
    idx.tree_ = CigarTree::build(std::move(entries), params.leaf_capacity);
    idx.stats_.tree_ms = ms_since(t1);

    auto t2 = Clock::now();
    idx.incidence_ = label_by_insertion(
        rm, r, env, [&](const Aabb& box) { return idx.retrieve(box); }, &idx.stats_.cd);
    idx.stats_.validate_ms = ms_since(t2);
    idx.stats_.total_ms = ms_since(t0);
    return idx;
}

std::vector<ElementId> SpiteIndex::retrieve(const Aabb& box) const {
    std::vector<ElementId> out;
    for (auto i : tree_.query(box)) out.push_back(tree_.entries()[i].element);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ChangeReport SpiteIndex::update(Roadmap& rm, const RobotModel& r, Environment& env, ObstacleId o,
                                const RigidTransform& t) {
    auto t0 = Clock::now();
    env.move_obstacle(o, t);
    auto inv = retrieve(env.obstacle_aabb(o).inflated(geom::kContactTolerance));
    ChangeReport report = incidence_.reconcile(rm, r, env, o, inv);
    report.wall_ms = ms_since(t0);
    return report;
}

}  // namespace dynrm::spite
