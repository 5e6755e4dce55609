#pragma once

#include "dynrm/roadmap.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace dynrm::planners {

using robot::CdStats;
using robot::Configuration;
using robot::Environment;
using robot::RobotModel;
using roadmap::Roadmap;

enum class QueryStatus { success, no_path, timeout, invalid_query };

std::string_view to_string(QueryStatus s);

struct QueryStats {
    CdStats cd;
    double wall_ms = 0.0;
    std::size_t iterations = 0;
};

struct QueryResult {
    QueryStatus status = QueryStatus::no_path;
    /// Starts at s and ends at t on success; a single configuration when s == t.
    std::vector<Configuration> path;
    QueryStats stats;
};

/// Shortest path over elements currently labelled valid. Only the attachment edges are checked.
QueryResult roadmap_query(Roadmap& rm, const RobotModel& r, const Environment& env, const Configuration& s,
                          const Configuration& t, std::size_t k);

/// One edge validation step of a lazy query, in the order performed.
struct LazyEdgeCheck {
    std::size_t edge = 0;
    int stride = 1;
    bool passed = false;
};

struct LazyTrace {
    std::vector<std::size_t> rejected_nodes;
    std::vector<LazyEdgeCheck> edge_checks;
    std::size_t searches = 0;
};

struct LazyParams {
    std::vector<int> strides{27, 16, 1};
};

/// LazyPRM: labels ignored, path vertices validated first, then path edges by increasingly fine
/// strides. Failing elements are excluded for this query only.
QueryResult lazy_prm_query(Roadmap& rm, const RobotModel& r, const Environment& env, const Configuration& s,
                           const Configuration& t, std::size_t k, const LazyParams& params = {},
                           LazyTrace* trace = nullptr);

struct RrtParams {
    double min_extension = 0.1;
    double max_extension = 4.0;
    double goal_bias = 0.05;
    double time_cap = 60.0;  // seconds
    /// Growth iterations before giving up with timeout; 0 = time cap only.
    std::size_t max_iterations = 0;
    double resolution = 0.25;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Single-query RRT from s. Succeeds once a tree node within `resolution` of t has a valid edge to it.
QueryResult rrt_query(const RobotModel& r, const Environment& env, const Configuration& s, const Configuration& t,
                      const RrtParams& params = {});

/// Independent full-resolution check of a returned path against the current environment.
bool audit_path(const RobotModel& r, const Environment& env, const std::vector<Configuration>& path,
                double resolution);

}  // namespace dynrm::planners
