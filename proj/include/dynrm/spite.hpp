#pragma once

#include "dynrm/geom.hpp"
#include "dynrm/parallel.hpp"
#include "dynrm/roadmap.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace dynrm::spite {

using geom::Aabb;
using geom::Cigar;
using geom::RigidTransform;
using roadmap::ChangeReport;
using roadmap::ElementId;
using roadmap::Roadmap;
using robot::Configuration;
using robot::Environment;
using robot::ObstacleId;
using robot::RobotModel;

/// Swept-volume bound of one robot body over one roadmap element.
struct CigarEntry {
    Cigar cigar;
    ElementId element;
    std::uint32_t body = 0;
};

/// One cigar per body around that body's vertices at configuration c.
std::vector<CigarEntry> cigars_for_node(const RobotModel& r, const Configuration& c, double epsilon = 0.1,
                                        ElementId element = {});

/// One cigar per body around that body's vertices at every intermediate of p -> q.
std::vector<CigarEntry> cigars_for_edge(const RobotModel& r, const Configuration& p, const Configuration& q,
                                        double resolution, double epsilon = 0.1, ElementId element = {});

/// Smallest cigar found for a point cloud: approximate min-volume box, capsule around it,
/// radius grown if rounding left any point outside.
Cigar bounding_cigar(std::span<const geom::Vec3> cloud, double epsilon);

/// Ternary AABB tree over cigars. Each internal node splits its box at the midpoint of
/// the longest axis into entries strictly below, strictly above, and straddling the plane.
class CigarTree {
public:
    struct Node {
        Aabb box = Aabb::empty();
        std::array<std::int32_t, 3> child{-1, -1, -1};  // low, high, straddling
        std::uint32_t first = 0;                         // leaf entry range
        std::uint32_t count = 0;
        bool leaf = true;
    };

    CigarTree() = default;
    static CigarTree build(std::vector<CigarEntry> entries, std::size_t leaf_capacity = 8);

    /// Indices (into entries()) of cigars intersecting q, ascending.
    std::vector<std::uint32_t> query(const Aabb& q) const;

    const std::vector<CigarEntry>& entries() const { return entries_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    std::size_t leaf_capacity() const { return leaf_capacity_; }
    std::size_t depth() const;
    bool empty() const { return entries_.empty(); }

    /// Box containment, arity, and exactly-once reachability of every entry.
    bool check_invariants() const;

private:
    std::int32_t build_node(std::vector<std::uint32_t>& ids, std::size_t depth,
                            std::vector<CigarEntry>& source, std::vector<Aabb>& boxes);

    std::vector<Node> nodes_;
    std::vector<CigarEntry> entries_;
    std::vector<Aabb> entry_boxes_;
    std::size_t leaf_capacity_ = 8;
};

/// obstacle id -> elements it currently blocks. The exact inverse of the roadmap's hit lists.
class ObstacleIncidence {
public:
    static ObstacleIncidence from_roadmap(const Roadmap& rm);

    const std::set<ElementId>& of(ObstacleId o) const;
    bool matches(const Roadmap& rm) const;
    const std::map<ObstacleId, std::set<ElementId>>& map() const { return map_; }

    /// Re-checks `retrieved` (elements possibly blocked at o's current pose) and every element
    /// o blocked before, against o only. Updates labels, hit lists and this map.
    /// `retrieved` must be sorted and unique.
    ChangeReport reconcile(Roadmap& rm, const RobotModel& r, const Environment& env, ObstacleId o,
                           const std::vector<ElementId>& retrieved);

private:
    std::map<ObstacleId, std::set<ElementId>> map_;
};

struct SpiteParams {
    double epsilon = 0.1;
    std::size_t leaf_capacity = 8;
};

struct PreprocessStats {
    double cigars_ms = 0.0;
    double tree_ms = 0.0;
    double validate_ms = 0.0;
    double total_ms = 0.0;
    std::size_t entries = 0;
    robot::CdStats cd;
};

class SpiteIndex {
public:
    /// Builds cigars and tree, then labels every element exactly against all obstacles.
    static SpiteIndex preprocess(Roadmap& rm, const RobotModel& r, const Environment& env,
                                 const SpiteParams& params = {}, Exec exec = Exec::serial);

    /// Applies o -> t ∘ o and repairs labels. Throws robot::UnknownObstacle.
    ChangeReport update(Roadmap& rm, const RobotModel& r, Environment& env, ObstacleId o, const RigidTransform& t);

    /// Elements owning a cigar that meets the box, sorted and unique.
    std::vector<ElementId> retrieve(const Aabb& box) const;

    const CigarTree& tree() const { return tree_; }
    const ObstacleIncidence& incidence() const { return incidence_; }
    const PreprocessStats& preprocess_stats() const { return stats_; }

private:
    CigarTree tree_;
    ObstacleIncidence incidence_;
    PreprocessStats stats_;
};

/// Entries for every element of the roadmap, in element order.
std::vector<CigarEntry> build_entries(const Roadmap& rm, const RobotModel& r, double epsilon,
                                      Exec exec = Exec::serial);

/// Clears hit lists, then labels the roadmap by inserting each obstacle through `retrieve`.
/// Equivalent to an exact check against all obstacles when `retrieve` has no false negatives.
template <class Retrieve>
ObstacleIncidence label_by_insertion(Roadmap& rm, const RobotModel& r, const Environment& env,
                                     Retrieve&& retrieve, robot::CdStats* stats = nullptr) {
    for (const auto& e : rm.all_elements()) rm.set_hits(e, {});
    ObstacleIncidence inc;
    for (ObstacleId o : env.obstacle_ids()) {
        auto rep = inc.reconcile(rm, r, env, o, retrieve(env.obstacle_aabb(o).inflated(geom::kContactTolerance)));
        if (stats) *stats += rep.cd;
    }
    return inc;
}

}  // namespace dynrm::spite
