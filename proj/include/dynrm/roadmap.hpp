#pragma once

#include "dynrm/parallel.hpp"
#include "dynrm/robot.hpp"

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace dynrm::roadmap {

using robot::CdStats;
using robot::Configuration;
using robot::Environment;
using robot::ObstacleFilter;
using robot::ObstacleId;
using robot::RobotModel;

enum class Label : std::uint8_t { valid, invalid };

struct ValidityState {
    Label label = Label::valid;
    /// Obstacles currently intersecting the element's swept volume, sorted ascending.
    std::vector<ObstacleId> hits;
    bool operator==(const ValidityState&) const = default;
};

struct Node {
    Configuration q;
    ValidityState state;
    /// Joint limits / self-collision, computed once at build time.
    bool static_ok = true;
    bool operator==(const Node&) const = default;
};

struct Edge {
    std::size_t u = 0;
    std::size_t v = 0;
    ValidityState state;
    /// Number of interpolation steps N; the edge has N+1 intermediates.
    int steps = 0;
    double length = 0.0;
    bool static_ok = true;
    bool operator==(const Edge&) const = default;
};

enum class ElementKind : std::uint8_t { node, edge };

struct ElementId {
    ElementKind kind = ElementKind::node;
    std::uint32_t index = 0;

    static ElementId node(std::size_t i) { return {ElementKind::node, static_cast<std::uint32_t>(i)}; }
    static ElementId edge(std::size_t i) { return {ElementKind::edge, static_cast<std::uint32_t>(i)}; }
    auto operator<=>(const ElementId&) const = default;
};

std::string to_string(const ElementId& e);

/// Label flips produced by an update or revalidation.
struct ChangeReport {
    std::vector<ElementId> newly_invalid;
    std::vector<ElementId> newly_valid;
    /// Elements retrieved for exact re-checking (invC ∪ revC), sorted. Brute force lists everything.
    std::vector<ElementId> candidates;
    CdStats cd;
    double wall_ms = 0.0;

    bool empty() const { return newly_invalid.empty() && newly_valid.empty(); }
};

class Roadmap {
public:
    Roadmap() = default;
    Roadmap(std::size_t dof, double resolution);

    std::size_t dof() const { return dof_; }
    double resolution() const { return resolution_; }

    std::size_t add_node(Configuration q, bool static_ok = true);
    /// Adds the undirected edge {u, v}; returns nullopt if it already exists or u == v.
    std::optional<std::size_t> add_edge(std::size_t u, std::size_t v, int steps, double length,
                                        bool static_ok = true);
    std::optional<std::size_t> find_edge(std::size_t u, std::size_t v) const;

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Node& node(std::size_t i) const { return nodes_.at(i); }
    const Edge& edge(std::size_t i) const { return edges_.at(i); }
    /// (neighbor node, edge index) pairs.
    const std::vector<std::pair<std::size_t, std::size_t>>& adjacent(std::size_t i) const { return adj_.at(i); }

    std::size_t element_count() const { return nodes_.size() + edges_.size(); }
    std::vector<ElementId> all_elements() const;
    bool contains(const ElementId& e) const;

    const ValidityState& state(const ElementId& e) const;
    bool static_ok(const ElementId& e) const;
    bool is_valid(const ElementId& e) const { return state(e).label == Label::valid; }

    /// Returns true if the label flipped.
    bool add_hit(const ElementId& e, ObstacleId o);
    bool remove_hit(const ElementId& e, ObstacleId o);
    bool set_hits(const ElementId& e, std::vector<ObstacleId> hits);
    bool set_static_ok(const ElementId& e, bool ok);

    /// Drops nodes/edges appended after the given counts.
    void truncate(std::size_t n_nodes, std::size_t n_edges);

    /// label == valid ⇔ static_ok ∧ hits empty, for every element.
    bool coherent() const;

    bool operator==(const Roadmap& o) const {
        return dof_ == o.dof_ && resolution_ == o.resolution_ && nodes_ == o.nodes_ && edges_ == o.edges_;
    }

private:
    ValidityState& mut_state(const ElementId& e);
    bool relabel(const ElementId& e);
    static std::uint64_t key(std::size_t u, std::size_t v);

    std::size_t dof_ = 0;
    double resolution_ = 0.25;
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj_;
    std::unordered_map<std::uint64_t, std::size_t> edge_index_;
};

/// Exact check of one element against the filtered obstacles.
robot::CheckResult check_element(const Roadmap& rm, const RobotModel& r, const Environment& env,
                                 const ElementId& e, const ObstacleFilter& filter, CdStats* stats = nullptr);

/// Samples uniformly inside each DOF range (unbounded DOFs use the environment bounds or [-pi, pi)).
Configuration sample_uniform(const RobotModel& r, const Environment& env, std::mt19937_64& rng);

Roadmap prm_build(const RobotModel& r, const Environment& env, std::size_t n_nodes, std::size_t k,
                  double resolution, std::uint64_t seed, Exec exec = Exec::serial);

/// Axis-aligned lattice of translational configurations (angular DOFs at zero), 6-connected.
Roadmap lattice_build(const RobotModel& r, const Environment& env, const geom::Aabb& bounds, double spacing,
                      double resolution, Exec exec = Exec::serial);

/// Subgraph on the nodes where keep[i] is true; edges kept iff both endpoints are.
Roadmap induced_subgraph(const Roadmap& rm, const std::vector<bool>& keep);

/// Recomputes every element from scratch against the filtered obstacles. The reference oracle.
ChangeReport full_revalidate(Roadmap& rm, const RobotModel& r, const Environment& env,
                             const ObstacleFilter& filter = ObstacleFilter::all(), Exec exec = Exec::serial);

enum class ValidityMode { respect_labels, ignore_labels };

/// Per-query exclusions used by lazy search.
struct Exclusions {
    std::vector<bool> nodes;
    std::vector<bool> edges;
};

using Path = std::vector<std::size_t>;

/// A* over edge lengths with the configuration metric as heuristic.
std::optional<Path> shortest_path(const Roadmap& rm, const RobotModel& r, std::size_t s, std::size_t t,
                                  ValidityMode mode, const Exclusions* excluded = nullptr);

struct QueryHandles {
    std::size_t s = 0;
    std::size_t t = 0;
    std::size_t base_nodes = 0;
    std::size_t base_edges = 0;
};

/// Adds s and t as nodes wired to their k nearest roadmap nodes. With `validate`, the new
/// elements are checked exactly; otherwise they are left labelled valid for lazy search.
/// Returns nullopt (after removing anything added) when s or t has no usable connection.
std::optional<QueryHandles> attach_query(Roadmap& rm, const RobotModel& r, const Environment& env,
                                         const Configuration& s, const Configuration& t, std::size_t k,
                                         bool validate, CdStats* stats = nullptr);
void detach_query(Roadmap& rm, const QueryHandles& h);

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void save(const Roadmap& rm, const std::filesystem::path& path);
Roadmap load(const std::filesystem::path& path);
std::string to_json_text(const Roadmap& rm);
Roadmap from_json_text(const std::string& text);

}  // namespace dynrm::roadmap
