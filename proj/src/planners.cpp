#include "dynrm/planners.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <random>
#include <stdexcept>

namespace dynrm::planners {

namespace {

using Clock = std::chrono::steady_clock;
using roadmap::ElementId;
using robot::ObstacleFilter;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool config_free(const RobotModel& r, const Environment& env, const Configuration& c, CdStats& cd) {
    if (!robot::static_config_ok(r, c)) return false;
    return robot::check_config(r, env, c, ObstacleFilter::all(), &cd).valid;
}

std::vector<Configuration> to_configs(const Roadmap& rm, const roadmap::Path& p) {
    std::vector<Configuration> out;
    out.reserve(p.size());
    for (auto i : p) out.push_back(rm.node(i).q);
    return out;
}

bool same_config(const RobotModel& r, const Configuration& a, const Configuration& b) {
    return robot::config_distance(r, a, b) == 0.0;
}

}  // namespace

std::string_view to_string(QueryStatus s) {
    switch (s) {
        case QueryStatus::success: return "success";
        case QueryStatus::no_path: return "no_path";
        case QueryStatus::timeout: return "timeout";
        case QueryStatus::invalid_query: return "invalid_query";
    }
    return "unknown";
}

QueryResult roadmap_query(Roadmap& rm, const RobotModel& r, const Environment& env, const Configuration& s,
                          const Configuration& t, std::size_t k) {
    auto t0 = Clock::now();
    QueryResult res;
    auto finish = [&](QueryStatus st) {
        res.status = st;
        res.stats.wall_ms = ms_since(t0);
        return res;
    };
    if (!config_free(r, env, s, res.stats.cd) || !config_free(r, env, t, res.stats.cd))
        return finish(QueryStatus::invalid_query);
    if (same_config(r, s, t)) {
        res.path = {s};
        return finish(QueryStatus::success);
    }
    auto h = roadmap::attach_query(rm, r, env, s, t, k, true, &res.stats.cd);
    if (!h) return finish(QueryStatus::no_path);
    auto p = roadmap::shortest_path(rm, r, h->s, h->t, roadmap::ValidityMode::respect_labels);
    res.stats.iterations = 1;
    if (p) res.path = to_configs(rm, *p);
    roadmap::detach_query(rm, *h);
    return finish(p ? QueryStatus::success : QueryStatus::no_path);
}

QueryResult lazy_prm_query(Roadmap& rm, const RobotModel& r, const Environment& env, const Configuration& s,
                           const Configuration& t, std::size_t k, const LazyParams& params, LazyTrace* trace) {
    auto t0 = Clock::now();
    QueryResult res;
    auto finish = [&](QueryStatus st) {
        res.status = st;
        res.stats.wall_ms = ms_since(t0);
        return res;
    };
    if (params.strides.empty() || params.strides.back() != 1)
        throw std::invalid_argument("lazy strides must end with a full pass (stride 1)");
    if (!config_free(r, env, s, res.stats.cd) || !config_free(r, env, t, res.stats.cd))
        return finish(QueryStatus::invalid_query);
    if (same_config(r, s, t)) {
        res.path = {s};
        return finish(QueryStatus::success);
    }
    auto h = roadmap::attach_query(rm, r, env, s, t, k, false, nullptr);
    if (!h) return finish(QueryStatus::no_path);

    const std::size_t nn = rm.nodes().size();
    const std::size_t ne = rm.edges().size();
    roadmap::Exclusions ex{std::vector<bool>(nn, false), std::vector<bool>(ne, false)};
    // Per-query caches: node verdicts and the number of stride passes each edge has cleared.
    enum : std::int8_t { unknown = -1, bad = 0, good = 1 };
    std::vector<std::int8_t> node_state(nn, unknown);
    node_state[h->s] = good;
    node_state[h->t] = good;
    std::vector<std::size_t> passes_cleared(ne, 0);

    auto edge_between = [&](std::size_t a, std::size_t b) { return *rm.find_edge(a, b); };

    std::optional<roadmap::Path> found;
    while (true) {
        auto p = roadmap::shortest_path(rm, r, h->s, h->t, roadmap::ValidityMode::ignore_labels, &ex);
        ++res.stats.iterations;
        if (trace) ++trace->searches;
        if (!p) break;

        bool nodes_ok = true;
        for (auto i : *p) {
            if (node_state[i] == unknown) {
                bool ok = rm.node(i).static_ok && robot::check_config(r, env, rm.node(i).q, ObstacleFilter::all(),
                                                                      &res.stats.cd).valid;
                node_state[i] = ok ? good : bad;
            }
            if (node_state[i] == bad) {
                ex.nodes[i] = true;
                nodes_ok = false;
                if (trace) trace->rejected_nodes.push_back(i);
            }
        }
        if (!nodes_ok) continue;

        bool edges_ok = true;
        for (std::size_t pass = 0; pass < params.strides.size() && edges_ok; ++pass) {
            const int stride = params.strides[pass];
            for (std::size_t m = 0; m + 1 < p->size() && edges_ok; ++m) {
                auto e = edge_between((*p)[m], (*p)[m + 1]);
                if (passes_cleared[e] > pass) continue;
                const auto& ed = rm.edge(e);
                const auto& qa = rm.node(ed.u).q;
                const auto& qb = rm.node(ed.v).q;
                // Edges shorter than the stride get the full check right away.
                int eff = ed.steps >= stride ? stride : 1;
                bool ok = robot::check_edge_strided(r, env, qa, qb, rm.resolution(), eff, ObstacleFilter::all(),
                                                    &res.stats.cd)
                              .valid;
                if (ok && eff == 1) {
                    bool attached = e >= h->base_edges;
                    ok = attached ? robot::static_edge_ok(r, qa, qb, rm.resolution()) : ed.static_ok;
                }
                if (trace) trace->edge_checks.push_back({e, eff, ok});
                if (!ok) {
                    ex.edges[e] = true;
                    edges_ok = false;
                    break;
                }
                passes_cleared[e] = eff == 1 ? params.strides.size() : pass + 1;
            }
        }
        if (edges_ok) {
            found = std::move(p);
            break;
        }
    }
    if (found) res.path = to_configs(rm, *found);
    roadmap::detach_query(rm, *h);
    return finish(found ? QueryStatus::success : QueryStatus::no_path);
}

void RrtParams::validate() const {
    if (!(min_extension > 0.0) || !(min_extension <= max_extension))
        throw std::invalid_argument("rrt: need 0 < min_extension <= max_extension");
    if (!(goal_bias >= 0.0 && goal_bias <= 1.0)) throw std::invalid_argument("rrt: goal_bias must be in [0, 1]");
    if (!(time_cap > 0.0)) throw std::invalid_argument("rrt: time_cap must be positive");
    if (!(resolution > 0.0)) throw std::invalid_argument("rrt: resolution must be positive");
}

QueryResult rrt_query(const RobotModel& r, const Environment& env, const Configuration& s, const Configuration& t,
                      const RrtParams& params) {
    params.validate();
    auto t0 = Clock::now();
    QueryResult res;
    auto finish = [&](QueryStatus st) {
        res.status = st;
        res.stats.wall_ms = ms_since(t0);
        return res;
    };
    if (!config_free(r, env, s, res.stats.cd) || !config_free(r, env, t, res.stats.cd))
        return finish(QueryStatus::invalid_query);
    if (same_config(r, s, t)) {
        res.path = {s};
        return finish(QueryStatus::success);
    }

    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<Configuration> tree{s};
    std::vector<std::size_t> parent{0};

    auto edge_free = [&](const Configuration& a, const Configuration& b) {
        return robot::check_edge(r, env, a, b, params.resolution, ObstacleFilter::all(), &res.stats.cd).valid &&
               robot::static_edge_ok(r, a, b, params.resolution);
    };
    auto connect_goal = [&](std::size_t i) {
        return robot::config_distance(r, tree[i], t) <= params.resolution && edge_free(tree[i], t);
    };
    auto trace_back = [&](std::size_t i) {
        std::vector<Configuration> path{t};
        while (true) {
            path.push_back(tree[i]);
            if (i == 0) break;
            i = parent[i];
        }
        std::reverse(path.begin(), path.end());
        return path;
    };

    if (connect_goal(0)) {
        res.path = trace_back(0);
        return finish(QueryStatus::success);
    }
    const double cap_ms = params.time_cap * 1000.0;
    while (true) {
        if (params.max_iterations && res.stats.iterations >= params.max_iterations) break;
        if (ms_since(t0) >= cap_ms) break;
        ++res.stats.iterations;

        Configuration x = coin(rng) < params.goal_bias ? t : roadmap::sample_uniform(r, env, rng);
        std::size_t near = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < tree.size(); ++i) {
            double d = robot::config_distance(r, tree[i], x);
            if (d < best) {
                best = d;
                near = i;
            }
        }
        if (best < params.min_extension) continue;
        double step = std::min(best, params.max_extension);
        Configuration y = robot::normalize(r, robot::lerp(r, tree[near], x, step / best));
        if (!config_free(r, env, y, res.stats.cd) || !edge_free(tree[near], y)) continue;
        tree.push_back(std::move(y));
        parent.push_back(near);
        if (connect_goal(tree.size() - 1)) {
            res.path = trace_back(tree.size() - 1);
            return finish(QueryStatus::success);
        }
    }
    return finish(QueryStatus::timeout);
}

bool audit_path(const RobotModel& r, const Environment& env, const std::vector<Configuration>& path,
                double resolution) {
    if (path.empty()) return false;
    for (const auto& c : path) {
        if (!robot::static_config_ok(r, c)) return false;
        if (!robot::check_config(r, env, c).valid) return false;
    }
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (!robot::check_edge(r, env, path[i], path[i + 1], resolution).valid) return false;
        if (!robot::static_edge_ok(r, path[i], path[i + 1], resolution)) return false;
    }
    return true;
}

}  // namespace dynrm::planners
