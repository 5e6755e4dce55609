#include "dynrm/bench.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace dynrm::bench {

namespace {

using nlohmann::json;
using roadmap::ParseError;

constexpr const char* kFormat = "dynrm-scene";
constexpr int kVersion = 1;

[[noreturn]] void field_error(const std::string& where, const std::string& what) {
    throw ParseError("scene: field '" + where + "': " + what);
}

const json& require(const json& obj, const char* name, const std::string& where) {
    if (!obj.is_object()) field_error(where, "expected an object");
    auto it = obj.find(name);
    if (it == obj.end()) field_error(where.empty() ? name : where + "." + name, "missing");
    return *it;
}

std::string join(const std::string& where, const char* name) { return where.empty() ? name : where + "." + name; }

double number(const json& j, const std::string& where) {
    if (!j.is_number()) field_error(where, "expected a number");
    return j.get<double>();
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) field_error(where, "expected [x, y, z]");
    return {number(j[0], where + "[0]"), number(j[1], where + "[1]"), number(j[2], where + "[2]")};
}

json pose_json(const RigidTransform& t) {
    json rot = json::array();
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) rot.push_back(t.rotation(i, k));
    return {{"rotation", rot}, {"translation", vec_json(t.translation)}};
}

RigidTransform pose_from(const json& j, const std::string& where) {
    RigidTransform t;
    const auto& rot = require(j, "rotation", where);
    if (!rot.is_array() || rot.size() != 9) field_error(where + ".rotation", "expected 9 numbers (row major)");
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            t.rotation(i, k) = number(rot[static_cast<std::size_t>(3 * i + k)], where + ".rotation");
    t.translation = vec_from(require(j, "translation", where), where + ".translation");
    if (!t.is_proper()) field_error(where + ".rotation", "not a proper rotation");
    return t;
}

json body_json(const geom::ConvexPolyhedron& p) {
    json verts = json::array();
    for (const auto& v : p.vertices) verts.push_back(vec_json(v));
    return {{"vertices", verts}, {"pose", pose_json(p.pose)}};
}

geom::ConvexPolyhedron body_from(const json& j, const std::string& where) {
    geom::ConvexPolyhedron p;
    const auto& verts = require(j, "vertices", where);
    if (!verts.is_array() || verts.empty()) field_error(where + ".vertices", "expected a non-empty array");
    for (std::size_t i = 0; i < verts.size(); ++i)
        p.vertices.push_back(vec_from(verts[i], where + ".vertices[" + std::to_string(i) + "]"));
    p.pose = pose_from(require(j, "pose", where), where + ".pose");
    return p;
}

json bodies_json(const std::vector<geom::ConvexPolyhedron>& bodies) {
    json out = json::array();
    for (const auto& b : bodies) out.push_back(body_json(b));
    return out;
}

std::vector<geom::ConvexPolyhedron> bodies_from(const json& j, const std::string& where) {
    if (!j.is_array()) field_error(where, "expected an array");
    std::vector<geom::ConvexPolyhedron> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(body_from(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

json robot_json(const RobotModel& r) {
    json j;
    j["kind"] = r.kind == robot::RobotKind::free_flyer ? "free_flyer" : "serial_chain";
    j["bodies"] = bodies_json(r.bodies);
    json joints = json::array();
    for (const auto& jt : r.joints) joints.push_back({{"axis", vec_json(jt.axis)}, {"origin", pose_json(jt.origin)}});
    j["joints"] = joints;
    json axes = json::array();
    for (const auto& a : r.rotation_axes) axes.push_back(vec_json(a));
    j["rotation_axes"] = axes;
    json dofs = json::array();
    for (const auto& d : r.dofs) {
        json dj;
        dj["kind"] = d.kind == robot::DofKind::angular ? "angular" : "translational";
        dj["range"] = d.range ? json::array({d.range->first, d.range->second}) : json(nullptr);
        dj["weight"] = d.weight;
        dofs.push_back(dj);
    }
    j["dofs"] = dofs;
    return j;
}

RobotModel robot_from(const json& j, const std::string& where) {
    RobotModel r;
    const auto& kind = require(j, "kind", where);
    if (kind == "free_flyer") {
        r.kind = robot::RobotKind::free_flyer;
    } else if (kind == "serial_chain") {
        r.kind = robot::RobotKind::serial_chain;
    } else {
        field_error(where + ".kind", "expected \"free_flyer\" or \"serial_chain\"");
    }
    r.bodies = bodies_from(require(j, "bodies", where), where + ".bodies");
    const auto& joints = require(j, "joints", where);
    if (!joints.is_array()) field_error(where + ".joints", "expected an array");
    for (std::size_t i = 0; i < joints.size(); ++i) {
        std::string w = where + ".joints[" + std::to_string(i) + "]";
        r.joints.push_back({vec_from(require(joints[i], "axis", w), w + ".axis"),
                            pose_from(require(joints[i], "origin", w), w + ".origin")});
    }
    const auto& axes = require(j, "rotation_axes", where);
    if (!axes.is_array()) field_error(where + ".rotation_axes", "expected an array");
    for (std::size_t i = 0; i < axes.size(); ++i)
        r.rotation_axes.push_back(vec_from(axes[i], where + ".rotation_axes[" + std::to_string(i) + "]"));
    const auto& dofs = require(j, "dofs", where);
    if (!dofs.is_array()) field_error(where + ".dofs", "expected an array");
    for (std::size_t i = 0; i < dofs.size(); ++i) {
        std::string w = where + ".dofs[" + std::to_string(i) + "]";
        robot::DofSpec d;
        const auto& k = require(dofs[i], "kind", w);
        if (k == "angular") {
            d.kind = robot::DofKind::angular;
        } else if (k == "translational") {
            d.kind = robot::DofKind::translational;
        } else {
            field_error(w + ".kind", "expected \"angular\" or \"translational\"");
        }
        const auto& range = require(dofs[i], "range", w);
        if (!range.is_null()) {
            if (!range.is_array() || range.size() != 2) field_error(w + ".range", "expected [lo, hi] or null");
            d.range = std::pair{number(range[0], w + ".range[0]"), number(range[1], w + ".range[1]")};
        }
        d.weight = number(require(dofs[i], "weight", w), w + ".weight");
        r.dofs.push_back(d);
    }
    try {
        r.validate();
    } catch (const std::invalid_argument& e) {
        field_error(where, e.what());
    }
    return r;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

Environment make_environment(const Scene& s) {
    Environment env(s.bounds);
    for (const auto& o : s.obstacles) env.add_obstacle(o);
    return env;
}

std::string scene_to_json_text(const Scene& s) {
    json j;
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["name"] = s.name;
    j["seed"] = s.seed;
    j["resolution"] = s.resolution;
    j["bounds"] = {{"min", vec_json(s.bounds.min)}, {"max", vec_json(s.bounds.max)}};
    j["robot"] = robot_json(s.robot);
    json obs = json::array();
    for (const auto& o : s.obstacles)
        obs.push_back({{"id", o.id},
                       {"name", o.name},
                       {"static", o.is_static},
                       {"pose", pose_json(o.pose)},
                       {"bodies", bodies_json(o.bodies)}});
    j["obstacles"] = obs;
    return j.dump(1) + "\n";
}

Scene scene_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("scene: syntax error at line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
    }
    if (require(j, "format", "") != kFormat) field_error("format", std::string("expected \"") + kFormat + "\"");
    const auto& ver = require(j, "version", "");
    if (!ver.is_number_integer() || ver.get<int>() != kVersion)
        field_error("version", "unsupported version (expected " + std::to_string(kVersion) + ")");

    Scene s;
    const auto& name = require(j, "name", "");
    if (!name.is_string()) field_error("name", "expected a string");
    s.name = name.get<std::string>();
    const auto& seed = require(j, "seed", "");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
        field_error("seed", "expected a non-negative integer");
    s.seed = seed.get<std::uint64_t>();
    s.resolution = number(require(j, "resolution", ""), "resolution");
    if (!(s.resolution > 0.0)) field_error("resolution", "must be positive");
    const auto& b = require(j, "bounds", "");
    s.bounds.min = vec_from(require(b, "min", "bounds"), "bounds.min");
    s.bounds.max = vec_from(require(b, "max", "bounds"), "bounds.max");
    if (s.bounds.is_empty()) field_error("bounds", "min must not exceed max");
    s.robot = robot_from(require(j, "robot", ""), "robot");

    const auto& obs = require(j, "obstacles", "");
    if (!obs.is_array()) field_error("obstacles", "expected an array");
    for (std::size_t i = 0; i < obs.size(); ++i) {
        std::string w = "obstacles[" + std::to_string(i) + "]";
        Obstacle o;
        const auto& id = require(obs[i], "id", w);
        if (!id.is_number_integer()) field_error(join(w, "id"), "expected an integer");
        o.id = id.get<ObstacleId>();
        const auto& nm = require(obs[i], "name", w);
        if (!nm.is_string()) field_error(join(w, "name"), "expected a string");
        o.name = nm.get<std::string>();
        const auto& st = require(obs[i], "static", w);
        if (!st.is_boolean()) field_error(join(w, "static"), "expected true or false");
        o.is_static = st.get<bool>();
        o.pose = pose_from(require(obs[i], "pose", w), join(w, "pose"));
        o.bodies = bodies_from(require(obs[i], "bodies", w), join(w, "bodies"));
        if (o.bodies.empty()) field_error(join(w, "bodies"), "obstacle needs at least one body");
        for (const auto& prev : s.obstacles)
            if (prev.id == o.id) field_error(join(w, "id"), "duplicate obstacle id " + std::to_string(o.id));
        s.obstacles.push_back(std::move(o));
    }
    return s;
}

void save_scene(const Scene& s, const std::filesystem::path& p) {
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    os << scene_to_json_text(s);
}

Scene load_scene(const std::filesystem::path& p) {
    std::ifstream is(p);
    if (!is) throw std::runtime_error("cannot read " + p.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return scene_from_json_text(ss.str());
}

}  // namespace dynrm::bench
