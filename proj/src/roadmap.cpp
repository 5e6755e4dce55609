#include "dynrm/roadmap.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <queue>
#include <sstream>

namespace dynrm::roadmap {

std::string to_string(const ElementId& e) {
    return (e.kind == ElementKind::node ? "node:" : "edge:") + std::to_string(e.index);
}

Roadmap::Roadmap(std::size_t dof, double resolution) : dof_(dof), resolution_(resolution) {
    if (!(resolution > 0.0)) throw std::invalid_argument("roadmap resolution must be positive");
}

std::size_t Roadmap::add_node(Configuration q, bool static_ok) {
    if (static_cast<std::size_t>(q.size()) != dof_) throw robot::DimensionMismatch("node dimension mismatch");
    Node n;
    n.q = std::move(q);
    n.static_ok = static_ok;
    n.state.label = static_ok ? Label::valid : Label::invalid;
    nodes_.push_back(std::move(n));
    adj_.emplace_back();
    return nodes_.size() - 1;
}

std::uint64_t Roadmap::key(std::size_t u, std::size_t v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint64_t>(v);
}

std::optional<std::size_t> Roadmap::add_edge(std::size_t u, std::size_t v, int steps, double length,
                                             bool static_ok) {
    if (u >= nodes_.size() || v >= nodes_.size()) throw std::out_of_range("edge endpoint out of range");
    if (u == v || edge_index_.contains(key(u, v))) return std::nullopt;
    Edge e;
    e.u = u;
    e.v = v;
    e.steps = steps;
    e.length = length;
    e.static_ok = static_ok;
    e.state.label = static_ok ? Label::valid : Label::invalid;
    std::size_t idx = edges_.size();
    edges_.push_back(std::move(e));
    edge_index_.emplace(key(u, v), idx);
    adj_[u].emplace_back(v, idx);
    adj_[v].emplace_back(u, idx);
    return idx;
}

std::optional<std::size_t> Roadmap::find_edge(std::size_t u, std::size_t v) const {
    auto it = edge_index_.find(key(u, v));
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
}

std::vector<ElementId> Roadmap::all_elements() const {
    std::vector<ElementId> out;
    out.reserve(element_count());
    for (std::size_t i = 0; i < nodes_.size(); ++i) out.push_back(ElementId::node(i));
    for (std::size_t i = 0; i < edges_.size(); ++i) out.push_back(ElementId::edge(i));
    return out;
}

bool Roadmap::contains(const ElementId& e) const {
    return e.kind == ElementKind::node ? e.index < nodes_.size() : e.index < edges_.size();
}

const ValidityState& Roadmap::state(const ElementId& e) const {
    return e.kind == ElementKind::node ? nodes_.at(e.index).state : edges_.at(e.index).state;
}

ValidityState& Roadmap::mut_state(const ElementId& e) {
    return e.kind == ElementKind::node ? nodes_.at(e.index).state : edges_.at(e.index).state;
}

bool Roadmap::static_ok(const ElementId& e) const {
    return e.kind == ElementKind::node ? nodes_.at(e.index).static_ok : edges_.at(e.index).static_ok;
}

bool Roadmap::set_static_ok(const ElementId& e, bool ok) {
    (e.kind == ElementKind::node ? nodes_.at(e.index).static_ok : edges_.at(e.index).static_ok) = ok;
    return relabel(e);
}

bool Roadmap::relabel(const ElementId& e) {
    auto& st = mut_state(e);
    Label next = (static_ok(e) && st.hits.empty()) ? Label::valid : Label::invalid;
    bool flipped = next != st.label;
    st.label = next;
    return flipped;
}

bool Roadmap::add_hit(const ElementId& e, ObstacleId o) {
    auto& hits = mut_state(e).hits;
    auto it = std::lower_bound(hits.begin(), hits.end(), o);
    if (it == hits.end() || *it != o) hits.insert(it, o);
    return relabel(e);
}

bool Roadmap::remove_hit(const ElementId& e, ObstacleId o) {
    auto& hits = mut_state(e).hits;
    auto it = std::lower_bound(hits.begin(), hits.end(), o);
    if (it != hits.end() && *it == o) hits.erase(it);
    return relabel(e);
}

bool Roadmap::set_hits(const ElementId& e, std::vector<ObstacleId> hits) {
    std::sort(hits.begin(), hits.end());
    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
    mut_state(e).hits = std::move(hits);
    return relabel(e);
}

void Roadmap::truncate(std::size_t n_nodes, std::size_t n_edges) {
    while (edges_.size() > n_edges) {
        const Edge& e = edges_.back();
        edge_index_.erase(key(e.u, e.v));
        adj_[e.u].pop_back();
        adj_[e.v].pop_back();
        edges_.pop_back();
    }
    nodes_.resize(std::min(nodes_.size(), n_nodes));
    adj_.resize(nodes_.size());
}

bool Roadmap::coherent() const {
    auto ok = [](const ValidityState& s, bool st) {
        bool sorted = std::is_sorted(s.hits.begin(), s.hits.end()) &&
                      std::adjacent_find(s.hits.begin(), s.hits.end()) == s.hits.end();
        return sorted && ((s.label == Label::valid) == (st && s.hits.empty()));
    };
    for (const auto& n : nodes_)
        if (!ok(n.state, n.static_ok)) return false;
    for (const auto& e : edges_)
        if (!ok(e.state, e.static_ok)) return false;
    return true;
}

// ---------------------------------------------------------------------------

robot::CheckResult check_element(const Roadmap& rm, const RobotModel& r, const Environment& env,
                                 const ElementId& e, const ObstacleFilter& filter, CdStats* stats) {
    if (stats) ++stats->element_checks;
    if (e.kind == ElementKind::node) return robot::check_config(r, env, rm.node(e.index).q, filter, stats);
    const Edge& ed = rm.edge(e.index);
    return robot::check_edge(r, env, rm.node(ed.u).q, rm.node(ed.v).q, rm.resolution(), filter, stats);
}

Configuration sample_uniform(const RobotModel& r, const Environment& env, std::mt19937_64& rng) {
    Configuration c(static_cast<Eigen::Index>(r.dof()));
    for (std::size_t i = 0; i < r.dof(); ++i) {
        const auto& d = r.dofs[i];
        double lo, hi;
        if (d.range) {
            lo = d.range->first;
            hi = d.range->second;
        } else if (d.kind == robot::DofKind::angular) {
            lo = -std::numbers::pi;
            hi = std::numbers::pi;
        } else {
            lo = env.bounds().min[static_cast<Eigen::Index>(std::min<std::size_t>(i, 2))];
            hi = env.bounds().max[static_cast<Eigen::Index>(std::min<std::size_t>(i, 2))];
        }
        std::uniform_real_distribution<double> u(lo, hi);
        c[static_cast<Eigen::Index>(i)] = lo == hi ? lo : u(rng);
    }
    return c;
}

namespace {

void initial_validation(Roadmap& rm, const RobotModel& r, const Environment& env, Exec exec) {
    full_revalidate(rm, r, env, ObstacleFilter::all(), exec);
}

}  // namespace

Roadmap prm_build(const RobotModel& r, const Environment& env, std::size_t n_nodes, std::size_t k,
                  double resolution, std::uint64_t seed, Exec exec) {
    if (n_nodes < 1) throw std::invalid_argument("prm_build needs n_nodes >= 1");
    if (k < 1) throw std::invalid_argument("prm_build needs k >= 1");
    std::mt19937_64 rng(seed);
    std::vector<Configuration> samples;
    samples.reserve(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) samples.push_back(sample_uniform(r, env, rng));

    // k nearest neighbours of every sample; ties broken by index.
    std::vector<std::vector<std::size_t>> near(n_nodes);
    parallel_for(exec, n_nodes, [&](std::size_t i) {
        std::vector<std::pair<double, std::size_t>> d;
        d.reserve(n_nodes - 1);
        for (std::size_t j = 0; j < n_nodes; ++j)
            if (j != i) d.emplace_back(robot::config_distance(r, samples[i], samples[j]), j);
        std::size_t kk = std::min(k, d.size());
        std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(kk), d.end());
        for (std::size_t m = 0; m < kk; ++m) near[i].push_back(d[m].second);
    });

    std::vector<char> node_ok(n_nodes);
    parallel_for(exec, n_nodes, [&](std::size_t i) { node_ok[i] = robot::static_config_ok(r, samples[i]); });

    Roadmap rm(r.dof(), resolution);
    for (std::size_t i = 0; i < n_nodes; ++i) rm.add_node(samples[i], node_ok[i] != 0);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        for (std::size_t j : near[i]) {
            double len = robot::config_distance(r, samples[i], samples[j]);
            rm.add_edge(i, j, robot::intermediate_steps(r, samples[i], samples[j], resolution), len);
        }
    }
    // Static flags of edges are evaluated once here.
    std::vector<char> edge_ok(rm.edges().size());
    parallel_for(exec, rm.edges().size(), [&](std::size_t e) {
        const auto& ed = rm.edge(e);
        edge_ok[e] = robot::static_edge_ok(r, rm.node(ed.u).q, rm.node(ed.v).q, resolution);
    });
    for (std::size_t e = 0; e < edge_ok.size(); ++e) rm.set_static_ok(ElementId::edge(e), edge_ok[e] != 0);
    initial_validation(rm, r, env, exec);
    return rm;
}

Roadmap lattice_build(const RobotModel& r, const Environment& env, const geom::Aabb& bounds, double spacing,
                      double resolution, Exec exec) {
    if (!(spacing > 0.0)) throw std::invalid_argument("lattice spacing must be positive");
    std::array<long, 3> count{};
    for (int k = 0; k < 3; ++k) {
        double ext = std::max(0.0, bounds.max[k] - bounds.min[k]);
        count[static_cast<std::size_t>(k)] = static_cast<long>(std::floor(ext / spacing + 1e-9)) + 1;
    }
    Roadmap rm(r.dof(), resolution);
    auto index = [&](long i, long j, long l) { return static_cast<std::size_t>((i * count[1] + j) * count[2] + l); };
    for (long i = 0; i < count[0]; ++i)
        for (long j = 0; j < count[1]; ++j)
            for (long l = 0; l < count[2]; ++l) {
                Configuration q = Configuration::Zero(static_cast<Eigen::Index>(r.dof()));
                q[0] = bounds.min.x() + static_cast<double>(i) * spacing;
                q[1] = bounds.min.y() + static_cast<double>(j) * spacing;
                q[2] = bounds.min.z() + static_cast<double>(l) * spacing;
                rm.add_node(q, robot::static_config_ok(r, q));
            }
    for (long i = 0; i < count[0]; ++i)
        for (long j = 0; j < count[1]; ++j)
            for (long l = 0; l < count[2]; ++l) {
                std::size_t a = index(i, j, l);
                auto link = [&](std::size_t b) {
                    const auto& p = rm.node(a).q;
                    const auto& q = rm.node(b).q;
                    rm.add_edge(a, b, robot::intermediate_steps(r, p, q, resolution), robot::config_distance(r, p, q),
                                rm.node(a).static_ok && rm.node(b).static_ok);
                };
                if (i + 1 < count[0]) link(index(i + 1, j, l));
                if (j + 1 < count[1]) link(index(i, j + 1, l));
                if (l + 1 < count[2]) link(index(i, j, l + 1));
            }
    initial_validation(rm, r, env, exec);
    return rm;
}

Roadmap induced_subgraph(const Roadmap& rm, const std::vector<bool>& keep) {
    if (keep.size() != rm.nodes().size()) throw std::invalid_argument("keep mask size mismatch");
    Roadmap out(rm.dof(), rm.resolution());
    std::vector<std::size_t> remap(rm.nodes().size(), SIZE_MAX);
    for (std::size_t i = 0; i < rm.nodes().size(); ++i) {
        if (!keep[i]) continue;
        const auto& n = rm.node(i);
        remap[i] = out.add_node(n.q, n.static_ok);
        out.set_hits(ElementId::node(remap[i]), n.state.hits);
    }
    for (const auto& e : rm.edges()) {
        if (remap[e.u] == SIZE_MAX || remap[e.v] == SIZE_MAX) continue;
        auto idx = out.add_edge(remap[e.u], remap[e.v], e.steps, e.length, e.static_ok);
        if (idx) out.set_hits(ElementId::edge(*idx), e.state.hits);
    }
    return out;
}

ChangeReport full_revalidate(Roadmap& rm, const RobotModel& r, const Environment& env,
                             const ObstacleFilter& filter, Exec exec) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto elements = rm.all_elements();
    std::vector<robot::CheckResult> results(elements.size());
    std::vector<CdStats> stats(elements.size());
    parallel_for(exec, elements.size(), [&](std::size_t i) {
        results[i] = check_element(rm, r, env, elements[i], filter, &stats[i]);
    });

    ChangeReport report;
    report.candidates = elements;
    for (std::size_t i = 0; i < elements.size(); ++i) {
        report.cd += stats[i];
        const auto& e = elements[i];
        std::vector<ObstacleId> next;
        for (ObstacleId o : rm.state(e).hits)
            if (!filter.accepts(o)) next.push_back(o);
        next.insert(next.end(), results[i].colliding.begin(), results[i].colliding.end());
        bool was_valid = rm.is_valid(e);
        if (rm.set_hits(e, std::move(next))) {
            (was_valid ? report.newly_invalid : report.newly_valid).push_back(e);
        }
    }
    report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

// ---------------------------------------------------------------------------

std::optional<Path> shortest_path(const Roadmap& rm, const RobotModel& r, std::size_t s, std::size_t t,
                                  ValidityMode mode, const Exclusions* excluded) {
    const std::size_t n = rm.nodes().size();
    if (s >= n || t >= n) throw std::out_of_range("shortest_path endpoint out of range");
    auto node_usable = [&](std::size_t i) {
        if (excluded && !excluded->nodes.empty() && excluded->nodes[i]) return false;
        return mode == ValidityMode::ignore_labels || rm.node(i).state.label == Label::valid;
    };
    auto edge_usable = [&](std::size_t e) {
        if (excluded && !excluded->edges.empty() && excluded->edges[e]) return false;
        return mode == ValidityMode::ignore_labels || rm.edge(e).state.label == Label::valid;
    };
    if (!node_usable(s) || !node_usable(t)) return std::nullopt;
    if (s == t) return Path{s};

    const auto& goal = rm.node(t).q;
    std::vector<double> g(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> parent(n, SIZE_MAX);
    std::vector<bool> closed(n, false);
    using Item = std::tuple<double, double, std::size_t>;  // f, g, node
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    g[s] = 0.0;
    open.emplace(robot::config_distance(r, rm.node(s).q, goal), 0.0, s);
    while (!open.empty()) {
        auto [f, gc, u] = open.top();
        open.pop();
        if (closed[u]) continue;
        closed[u] = true;
        if (u == t) break;
        for (auto [v, e] : rm.adjacent(u)) {
            if (closed[v] || !edge_usable(e) || !node_usable(v)) continue;
            double ng = gc + rm.edge(e).length;
            if (ng < g[v]) {
                g[v] = ng;
                parent[v] = u;
                open.emplace(ng + robot::config_distance(r, rm.node(v).q, goal), ng, v);
            }
        }
    }
    if (!closed[t]) return std::nullopt;
    Path path;
    for (std::size_t v = t; v != SIZE_MAX; v = parent[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;
}

std::optional<QueryHandles> attach_query(Roadmap& rm, const RobotModel& r, const Environment& env,
                                         const Configuration& s, const Configuration& t, std::size_t k,
                                         bool validate, CdStats* stats) {
    QueryHandles h;
    h.base_nodes = rm.nodes().size();
    h.base_edges = rm.edges().size();
    if (h.base_nodes == 0) return std::nullopt;

    auto nearest = [&](const Configuration& q) {
        std::vector<std::pair<double, std::size_t>> d;
        d.reserve(h.base_nodes);
        for (std::size_t i = 0; i < h.base_nodes; ++i) d.emplace_back(robot::config_distance(r, q, rm.node(i).q), i);
        std::size_t kk = std::min(k, d.size());
        std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(kk), d.end());
        d.resize(kk);
        return d;
    };

    auto attach = [&](const Configuration& q) -> std::pair<std::size_t, bool> {
        bool node_ok = robot::static_config_ok(r, q);
        std::size_t idx = rm.add_node(q, node_ok);
        if (validate) {
            auto res = robot::check_config(r, env, q, ObstacleFilter::all(), stats);
            rm.set_hits(ElementId::node(idx), res.colliding);
        }
        bool any = false;
        for (auto [dist, j] : nearest(q)) {
            const auto& other = rm.node(j).q;
            int steps = robot::intermediate_steps(r, q, other, rm.resolution());
            bool st_ok = !validate || robot::static_edge_ok(r, q, other, rm.resolution());
            auto e = rm.add_edge(idx, j, steps, dist, st_ok);
            if (!e) continue;
            if (validate) {
                auto res = robot::check_edge(r, env, q, other, rm.resolution(), ObstacleFilter::all(), stats);
                rm.set_hits(ElementId::edge(*e), res.colliding);
                any = any || (rm.is_valid(ElementId::edge(*e)) && rm.is_valid(ElementId::node(j)));
            } else {
                any = true;
            }
        }
        return {idx, any};
    };

    auto [si, s_ok] = attach(s);
    auto [ti, t_ok] = attach(t);
    h.s = si;
    h.t = ti;
    if (!s_ok || !t_ok) {
        detach_query(rm, h);
        return std::nullopt;
    }
    return h;
}

void detach_query(Roadmap& rm, const QueryHandles& h) { rm.truncate(h.base_nodes, h.base_edges); }

// ---------------------------------------------------------------------------
// Text format.

namespace {

using nlohmann::json;

constexpr const char* kFormat = "dynrm-roadmap";
constexpr int kVersion = 1;

json state_json(const ValidityState& s) { return s.hits; }

[[noreturn]] void field_error(const std::string& where, const std::string& what) {
    throw ParseError("roadmap: field '" + where + "': " + what);
}

const json& require(const json& obj, const char* name, const std::string& where) {
    if (!obj.is_object()) field_error(where, "expected an object");
    auto it = obj.find(name);
    if (it == obj.end()) field_error(where + "." + name, "missing");
    return *it;
}

double as_number(const json& j, const std::string& where) {
    if (!j.is_number()) field_error(where, "expected a number");
    return j.get<double>();
}

std::size_t as_index(const json& j, const std::string& where) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        field_error(where, "expected a non-negative integer");
    return j.get<std::size_t>();
}

bool as_bool(const json& j, const std::string& where) {
    if (!j.is_boolean()) field_error(where, "expected true/false");
    return j.get<bool>();
}

std::vector<ObstacleId> as_hits(const json& j, const std::string& where) {
    if (!j.is_array()) field_error(where, "expected an array of obstacle ids");
    std::vector<ObstacleId> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number_integer()) field_error(where + "[" + std::to_string(i) + "]", "expected an integer");
        out.push_back(j[i].get<ObstacleId>());
    }
    return out;
}

Label as_label(const json& j, const std::string& where) {
    if (j == "valid") return Label::valid;
    if (j == "invalid") return Label::invalid;
    field_error(where, "expected \"valid\" or \"invalid\"");
}

}  // namespace

std::string to_json_text(const Roadmap& rm) {
    json out;
    out["format"] = kFormat;
    out["version"] = kVersion;
    out["dof"] = rm.dof();
    out["resolution"] = rm.resolution();
    json nodes = json::array();
    for (const auto& n : rm.nodes()) {
        nodes.push_back({{"q", std::vector<double>(n.q.data(), n.q.data() + n.q.size())},
                         {"static_ok", n.static_ok},
                         {"label", n.state.label == Label::valid ? "valid" : "invalid"},
                         {"hits", state_json(n.state)}});
    }
    json edges = json::array();
    for (const auto& e : rm.edges()) {
        edges.push_back({{"u", e.u},
                         {"v", e.v},
                         {"steps", e.steps},
                         {"length", e.length},
                         {"static_ok", e.static_ok},
                         {"label", e.state.label == Label::valid ? "valid" : "invalid"},
                         {"hits", state_json(e.state)}});
    }
    out["nodes"] = std::move(nodes);
    out["edges"] = std::move(edges);
    return out.dump(1);
}

Roadmap from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1 + static_cast<std::size_t>(
                                   std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(
                                                                               std::min(e.byte, text.size())),
                                              '\n'));
        throw ParseError("roadmap: line " + std::to_string(line) + ": " + e.what());
    }
    if (require(doc, "format", "") != kFormat) field_error("format", "expected \"dynrm-roadmap\"");
    const json& ver = require(doc, "version", "");
    if (!ver.is_number_integer() || ver.get<int>() != kVersion)
        field_error("version", "unsupported version (expected " + std::to_string(kVersion) + ")");
    std::size_t dof = as_index(require(doc, "dof", ""), "dof");
    double res = as_number(require(doc, "resolution", ""), "resolution");
    if (!(res > 0.0)) field_error("resolution", "must be positive");
    Roadmap rm(dof, res);

    const json& nodes = require(doc, "nodes", "");
    if (!nodes.is_array()) field_error("nodes", "expected an array");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::string where = "nodes[" + std::to_string(i) + "]";
        const json& q = require(nodes[i], "q", where);
        if (!q.is_array() || q.size() != dof) field_error(where + ".q", "expected " + std::to_string(dof) + " numbers");
        Configuration c(static_cast<Eigen::Index>(dof));
        for (std::size_t k = 0; k < dof; ++k) c[static_cast<Eigen::Index>(k)] = as_number(q[k], where + ".q");
        std::size_t idx = rm.add_node(c, as_bool(require(nodes[i], "static_ok", where), where + ".static_ok"));
        rm.set_hits(ElementId::node(idx), as_hits(require(nodes[i], "hits", where), where + ".hits"));
        if (as_label(require(nodes[i], "label", where), where + ".label") != rm.node(idx).state.label)
            field_error(where + ".label", "inconsistent with hits/static_ok");
    }
    const json& edges = require(doc, "edges", "");
    if (!edges.is_array()) field_error("edges", "expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        std::string where = "edges[" + std::to_string(i) + "]";
        const json& e = edges[i];
        std::size_t u = as_index(require(e, "u", where), where + ".u");
        std::size_t v = as_index(require(e, "v", where), where + ".v");
        if (u >= rm.nodes().size() || v >= rm.nodes().size()) field_error(where, "endpoint out of range");
        const json& steps = require(e, "steps", where);
        if (!steps.is_number_integer() || steps.get<int>() < 0) field_error(where + ".steps", "expected integer >= 0");
        auto idx = rm.add_edge(u, v, steps.get<int>(), as_number(require(e, "length", where), where + ".length"),
                               as_bool(require(e, "static_ok", where), where + ".static_ok"));
        if (!idx) field_error(where, "duplicate or self-loop edge");
        rm.set_hits(ElementId::edge(*idx), as_hits(require(e, "hits", where), where + ".hits"));
        if (as_label(require(e, "label", where), where + ".label") != rm.edge(*idx).state.label)
            field_error(where + ".label", "inconsistent with hits/static_ok");
    }
    return rm;
}

void save(const Roadmap& rm, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << to_json_text(rm) << '\n';
}

Roadmap load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

}  // namespace dynrm::roadmap
