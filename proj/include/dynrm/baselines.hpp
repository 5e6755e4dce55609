#pragma once

#include "dynrm/spite.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace dynrm::baselines {

using geom::Aabb;
using geom::RigidTransform;
using roadmap::ChangeReport;
using roadmap::ElementId;
using roadmap::Roadmap;
using robot::Configuration;
using robot::Environment;
using robot::ObstacleId;
using robot::RobotModel;

enum class CellTest {
    aabb,   // list an element in every cell its per-intermediate body AABBs overlap
    exact,  // additionally require the posed body to meet the cell
};

struct GridParams {
    double cell_size = 1.0;
    CellTest test = CellTest::aabb;
};

struct GridStats {
    double rasterize_ms = 0.0;
    double validate_ms = 0.0;
    double total_ms = 0.0;
    std::size_t listings = 0;  // total (cell, element) pairs
    std::size_t cell_tests = 0;
    robot::CdStats cd;
};

/// Workspace partition into cubes anchored at the environment's minimum corner. Indices outside
/// the grid clamp to the boundary cells, so boundary cells own everything beyond the bounds.
class UniformGrid {
public:
    static UniformGrid preprocess(Roadmap& rm, const RobotModel& r, const Environment& env,
                                  const GridParams& params = {}, Exec exec = Exec::serial);

    ChangeReport update(Roadmap& rm, const RobotModel& r, Environment& env, ObstacleId o, const RigidTransform& t);

    /// Union of the cell lists over cells meeting the box, sorted and unique.
    std::vector<ElementId> retrieve(const Aabb& box) const;

    double cell_size() const { return cell_size_; }
    const geom::Vec3& origin() const { return origin_; }
    const std::array<int, 3>& dims() const { return dims_; }
    std::size_t cell_count() const { return cell_lists_.size(); }
    std::size_t flat_index(int i, int j, int k) const;
    /// Cells (flat indices) whose clamped index range meets the box.
    std::vector<std::size_t> cells_overlapping(const Aabb& box) const;
    const std::vector<ElementId>& cell(std::size_t flat) const { return cell_lists_.at(flat); }
    const spite::ObstacleIncidence& incidence() const { return incidence_; }
    const GridStats& preprocess_stats() const { return stats_; }

private:
    struct Range {
        std::array<int, 3> lo, hi;
    };
    Range index_range(const Aabb& box) const;
    int clamp_index(double x, int axis) const;
    Aabb cell_box(int i, int j, int k, const Aabb& reach) const;
    std::vector<std::uint32_t> cells_of_element(const Roadmap& rm, const RobotModel& r, const ElementId& e,
                                                CellTest test, std::vector<std::uint32_t>& stamp,
                                                std::uint32_t tag, std::size_t& tests) const;

    double cell_size_ = 1.0;
    geom::Vec3 origin_ = geom::Vec3::Zero();
    std::array<int, 3> dims_{1, 1, 1};
    std::vector<std::vector<ElementId>> cell_lists_;
    std::vector<ElementId> elements_;  // nodes first, then edges
    std::size_t n_nodes_ = 0;
    mutable std::vector<std::uint32_t> seen_;
    mutable std::uint32_t epoch_ = 0;
    spite::ObstacleIncidence incidence_;
    GridStats stats_;
};

/// Moves the obstacle and re-checks every element against it.
ChangeReport brute_force_update(Roadmap& rm, const RobotModel& r, Environment& env, ObstacleId o,
                                const RigidTransform& t, Exec exec = Exec::serial);

}  // namespace dynrm::baselines
