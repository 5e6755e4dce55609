#include "dynrm/bench.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace dynrm::bench {

namespace {

using roadmap::ElementId;

/// One updater instance bound to its own roadmap copy.
class Updater {
public:
    Updater(const MethodSpec& m, const ExperimentConfig& cfg) : spec_(m), cfg_(cfg) {}

    /// Returns (wall ms, CD calls).
    std::pair<double, std::uint64_t> preprocess(Roadmap& rm, const RobotModel& r, const Environment& env) {
        switch (spec_.kind) {
            case MethodKind::spite: {
                spite::SpiteParams p;
                p.epsilon = cfg_.spite_epsilon;
                spite_ = spite::SpiteIndex::preprocess(rm, r, env, p, cfg_.exec);
                const auto& st = spite_.preprocess_stats();
                return {st.total_ms, st.cd.config_checks};
            }
            case MethodKind::grid: {
                baselines::GridParams p;
                p.cell_size = spec_.cell;
                p.test = cfg_.grid_test;
                grid_ = baselines::UniformGrid::preprocess(rm, r, env, p, cfg_.exec);
                const auto& st = grid_.preprocess_stats();
                return {st.total_ms, st.cd.config_checks};
            }
            case MethodKind::brute: {
                auto rep = roadmap::full_revalidate(rm, r, env, robot::ObstacleFilter::all(), cfg_.exec);
                return {rep.wall_ms, rep.cd.config_checks};
            }
            default: throw std::logic_error("not an updater");
        }
    }

    roadmap::ChangeReport update(Roadmap& rm, const RobotModel& r, Environment& env, const Move& m) {
        switch (spec_.kind) {
            case MethodKind::spite: return spite_.update(rm, r, env, m.obstacle, m.t);
            case MethodKind::grid: return grid_.update(rm, r, env, m.obstacle, m.t);
            case MethodKind::brute: return baselines::brute_force_update(rm, r, env, m.obstacle, m.t);
            default: throw std::logic_error("not an updater");
        }
    }

private:
    MethodSpec spec_;
    ExperimentConfig cfg_;
    spite::SpiteIndex spite_;
    baselines::UniformGrid grid_;
};

std::string fixed3(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << v;
    return os.str();
}

}  // namespace

MethodSpec parse_method(const std::string& text) {
    MethodSpec m;
    m.name = text;
    if (text == "spite") {
        m.kind = MethodKind::spite;
    } else if (text == "brute") {
        m.kind = MethodKind::brute;
    } else if (text == "lazy_prm") {
        m.kind = MethodKind::lazy_prm;
    } else if (text == "rrt") {
        m.kind = MethodKind::rrt;
    } else if (text.rfind("grid:", 0) == 0) {
        m.kind = MethodKind::grid;
        std::size_t used = 0;
        try {
            m.cell = std::stod(text.substr(5), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != text.size() - 5 || !(m.cell > 0.0))
            throw std::invalid_argument("bad grid cell size in method '" + text + "'");
    } else {
        throw std::invalid_argument("unknown method '" + text + "' (expected spite, grid:<cell>, brute, lazy_prm, rrt)");
    }
    return m;
}

std::vector<MethodSpec> parse_methods(const std::vector<std::string>& names) {
    std::vector<MethodSpec> out;
    for (const auto& n : names) out.push_back(parse_method(n));
    if (out.empty()) throw std::invalid_argument("no methods given");
    return out;
}

ExperimentResult run_update_bench(const UpdateBench& b, const std::vector<MethodSpec>& methods,
                                  const ExperimentConfig& cfg, std::vector<std::string> variants) {
    for (const auto& m : methods)
        if (!m.is_updater()) throw std::invalid_argument("method '" + m.name + "' is not an updater");
    std::vector<std::size_t> chosen;
    if (variants.empty() || (variants.size() == 1 && variants[0] == "all")) {
        for (std::size_t v = 0; v < b.variants.size(); ++v) chosen.push_back(v);
    } else {
        for (const auto& name : variants) {
            auto it = std::find_if(b.variants.begin(), b.variants.end(),
                                   [&](const UpdateVariant& v) { return v.name == name; });
            if (it == b.variants.end()) throw std::invalid_argument("unknown variant '" + name + "'");
            chosen.push_back(static_cast<std::size_t>(it - b.variants.begin()));
        }
    }

    const Environment empty(b.scene.bounds);
    const Roadmap base =
        roadmap::prm_build(b.scene.robot, empty, b.prm_nodes, b.prm_k, b.scene.resolution, b.scene.seed, cfg.exec);

    ExperimentResult out;
    for (auto v : chosen) {
        const Scene scene = b.scene_for(v);
        const auto moves = b.moves_for(v);
        out.variant_names.push_back(b.variants[v].name);
        for (const auto& m : methods) {
            const std::string label = m.name + "/" + b.variants[v].name;
            Environment env = make_environment(scene);
            Roadmap rm = base;
            Updater up(m, cfg);
            auto [pre_ms, pre_cd] = up.preprocess(rm, scene.robot, env);
            out.records.push_back({label, "preprocess", 0, pre_ms, pre_cd, "ok"});
            MethodSummary sum;
            sum.method = label;
            sum.preprocess_ms = pre_ms;
            for (std::size_t i = 0; i < moves.size(); ++i) {
                auto rep = up.update(rm, scene.robot, env, moves[i]);
                out.records.push_back({label, "update", i, rep.wall_ms, rep.cd.config_checks, "ok"});
                sum.mean_update_ms += rep.wall_ms;
            }
            sum.iterations = moves.size();
            if (!moves.empty()) sum.mean_update_ms /= static_cast<double>(moves.size());
            sum.mean_total_ms = sum.mean_update_ms;
            out.summary.push_back(sum);
        }
    }
    return out;
}

ExperimentResult run_query_bench(const QueryBench& b, const std::vector<MethodSpec>& methods,
                                 const ExperimentConfig& cfg) {
    const RobotModel& r = b.scene.robot;
    ExperimentResult out;
    for (const auto& m : methods) {
        Environment env = make_environment(b.scene);
        Roadmap rm = b.roadmap;
        MethodSummary sum;
        sum.method = m.name;
        std::optional<Updater> up;
        if (m.is_updater()) {
            up.emplace(m, cfg);
            auto [pre_ms, pre_cd] = up->preprocess(rm, r, env);
            out.records.push_back({m.name, "preprocess", 0, pre_ms, pre_cd, "ok"});
            sum.preprocess_ms = pre_ms;
        }
        for (std::size_t it = 0; it < b.schedule.size(); ++it) {
            const auto& step = b.schedule[it];
            double update_ms = 0.0;
            if (up) {
                std::uint64_t cd = 0;
                for (const auto& mv : step.moves) {
                    auto rep = up->update(rm, r, env, mv);
                    update_ms += rep.wall_ms;
                    cd += rep.cd.config_checks;
                }
                out.records.push_back({m.name, "update", it, update_ms, cd, "ok"});
            } else {
                for (const auto& mv : step.moves) env.move_obstacle(mv.obstacle, mv.t);
            }

            planners::QueryResult res;
            switch (m.kind) {
                case MethodKind::lazy_prm:
                    res = planners::lazy_prm_query(rm, r, env, step.s, step.t, b.attach_k, cfg.lazy);
                    break;
                case MethodKind::rrt: {
                    auto p = cfg.rrt;
                    p.resolution = b.scene.resolution;
                    p.seed = cfg.seed * 1000003ULL + it;
                    res = planners::rrt_query(r, env, step.s, step.t, p);
                    break;
                }
                default: res = planners::roadmap_query(rm, r, env, step.s, step.t, b.attach_k);
            }
            std::string status(planners::to_string(res.status));
            if (res.status == planners::QueryStatus::success) {
                if (planners::audit_path(r, env, res.path, b.scene.resolution)) {
                    ++sum.successes;
                } else {
                    ++sum.audit_failures;
                    status = "audit_failed";
                }
            }
            out.records.push_back({m.name, "query", it, res.stats.wall_ms, res.stats.cd.config_checks, status});
            sum.mean_update_ms += update_ms;
            sum.mean_query_ms += res.stats.wall_ms;
        }
        sum.iterations = b.schedule.size();
        if (sum.iterations) {
            sum.mean_update_ms /= static_cast<double>(sum.iterations);
            sum.mean_query_ms /= static_cast<double>(sum.iterations);
        }
        sum.mean_total_ms = sum.mean_update_ms + sum.mean_query_ms;
        out.summary.push_back(sum);
    }
    return out;
}

void write_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
    os << kCsvHeader << '\n';
    for (const auto& r : records)
        os << r.method << ',' << r.phase << ',' << r.iteration << ',' << fixed3(r.wall_ms) << ',' << r.cd_calls << ','
           << r.status << '\n';
}

void write_update_summary(std::ostream& os, const ExperimentResult& r) {
    // method names without the variant suffix, in first-seen order
    std::vector<std::string> methods;
    std::map<std::pair<std::string, std::string>, const MethodSummary*> cell;
    for (const auto& s : r.summary) {
        auto slash = s.method.rfind('/');
        std::string m = s.method.substr(0, slash), v = s.method.substr(slash + 1);
        if (std::find(methods.begin(), methods.end(), m) == methods.end()) methods.push_back(m);
        cell[{v, m}] = &s;
    }
    os << std::left << std::setw(18) << "obstacle";
    for (const auto& m : methods) os << std::right << std::setw(16) << (m + " upd ms");
    os << '\n';
    for (const auto& v : r.variant_names) {
        os << std::left << std::setw(18) << v;
        for (const auto& m : methods) {
            auto it = cell.find({v, m});
            os << std::right << std::setw(16) << (it == cell.end() ? "-" : fixed3(it->second->mean_update_ms));
        }
        os << '\n';
    }
    os << std::left << std::setw(18) << "pre-processing";
    for (const auto& m : methods) {
        double total = 0.0;
        std::size_t n = 0;
        for (const auto& [key, s] : cell)
            if (key.second == m) {
                total += s->preprocess_ms;
                ++n;
            }
        os << std::right << std::setw(16) << (n ? fixed3(total / static_cast<double>(n)) : "-");
    }
    os << '\n';
}

void write_query_summary(std::ostream& os, const ExperimentResult& r) {
    os << std::left << std::setw(12) << "method" << std::right << std::setw(12) << "Update ms" << std::setw(12)
       << "Query ms" << std::setw(12) << "Total ms" << std::setw(20) << "Pre-processing ms" << std::setw(10) << "success"
       << '\n';
    for (const auto& s : r.summary) {
        os << std::left << std::setw(12) << s.method << std::right << std::setw(12) << fixed3(s.mean_update_ms)
           << std::setw(12) << fixed3(s.mean_query_ms) << std::setw(12) << fixed3(s.mean_total_ms) << std::setw(20)
           << fixed3(s.preprocess_ms) << std::setw(9) << fixed3(100.0 * s.success_rate()).substr(0, 5) << "%" << '\n';
    }
}

// ---------------------------------------------------------------------------

std::vector<Move> random_moves(const Scene& scene, std::size_t count, std::uint64_t seed) {
    Environment env = make_environment(scene);
    std::vector<ObstacleId> movable;
    for (const auto& o : scene.obstacles)
        if (!o.is_static) movable.push_back(o.id);
    std::vector<Move> out;
    if (movable.empty()) return out;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        ObstacleId id = movable[std::uniform_int_distribution<std::size_t>(0, movable.size() - 1)(rng)];
        const Aabb box = env.obstacle_aabb(id);
        const Vec3 half = 0.5 * box.extent();
        Vec3 target;
        for (int k = 0; k < 3; ++k) {
            double lo = scene.bounds.min[k] + half[k], hi = scene.bounds.max[k] - half[k];
            target[k] = lo < hi ? std::uniform_real_distribution<double>(lo, hi)(rng) : 0.5 * (lo + hi);
        }
        Move m{id, RigidTransform::translate(target - box.center())};
        env.move_obstacle(id, m.t);
        out.push_back(m);
    }
    return out;
}

VerifyReport verify_equivalence(const Scene& scene, const Roadmap& rm, const std::vector<Move>& moves,
                                double grid_cell, Exec exec) {
    const RobotModel& r = scene.robot;
    Environment env_s = make_environment(scene), env_g = env_s, env_b = env_s, env_o = env_s;
    Roadmap rm_s = rm, rm_g = rm, rm_b = rm, rm_o = rm;
    auto spite = spite::SpiteIndex::preprocess(rm_s, r, env_s, {}, exec);
    baselines::GridParams gp;
    gp.cell_size = grid_cell;
    auto grid = baselines::UniformGrid::preprocess(rm_g, r, env_g, gp, exec);
    roadmap::full_revalidate(rm_b, r, env_b, robot::ObstacleFilter::all(), exec);
    roadmap::full_revalidate(rm_o, r, env_o, robot::ObstacleFilter::all(), exec);

    VerifyReport rep;
    auto compare = [&] {
        for (const auto& e : rm_o.all_elements()) {
            const auto& truth = rm_o.state(e);
            if (rm_s.state(e) != truth) ++rep.mismatches;
            if (rm_g.state(e) != truth) ++rep.mismatches;
            if (rm_b.state(e) != truth) ++rep.mismatches;
        }
        rep.incidence_ok = rep.incidence_ok && spite.incidence().matches(rm_s) && grid.incidence().matches(rm_g);
    };
    compare();
    for (const auto& m : moves) {
        std::vector<ElementId> blocked_before;
        for (const auto& e : rm_o.all_elements()) {
            const auto& h = rm_o.state(e).hits;
            if (std::binary_search(h.begin(), h.end(), m.obstacle)) blocked_before.push_back(e);
        }
        auto rs = spite.update(rm_s, r, env_s, m.obstacle, m.t);
        auto rg = grid.update(rm_g, r, env_g, m.obstacle, m.t);
        baselines::brute_force_update(rm_b, r, env_b, m.obstacle, m.t);
        env_o.move_obstacle(m.obstacle, m.t);
        roadmap::full_revalidate(rm_o, r, env_o, robot::ObstacleFilter::all(), exec);
        ++rep.steps;
        compare();
        for (const auto& e : rm_o.all_elements()) {
            const auto& h = rm_o.state(e).hits;
            if (!std::binary_search(h.begin(), h.end(), m.obstacle)) continue;
            if (std::binary_search(blocked_before.begin(), blocked_before.end(), e)) continue;
            if (!std::binary_search(rs.candidates.begin(), rs.candidates.end(), e)) ++rep.missed_retrievals;
            if (!std::binary_search(rg.candidates.begin(), rg.candidates.end(), e)) ++rep.missed_retrievals;
        }
    }
    return rep;
}

}  // namespace dynrm::bench
