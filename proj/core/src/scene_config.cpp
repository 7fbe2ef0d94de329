#include "lazy_newton/scene_config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

namespace lazy_newton {
namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

// Cursor into the document that carries its JSON-pointer style location.
class Node {
  public:
    Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

    [[noreturn]] void fail(const std::string& message) const {
        throw ConfigError("config error at " + (path_.empty() ? std::string("/") : path_) + ": " + message);
    }

    const json& value() const { return value_; }

    void expect_object(std::initializer_list<const char*> allowed) const {
        if (!value_.is_object()) {
            fail("expected an object");
        }
        for (const auto& [key, _] : value_.items()) {
            const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; });
            if (!known) {
                child_path(key).fail("unknown key");
            }
        }
    }

    bool has(const char* key) const { return value_.contains(key); }

    Node operator[](const char* key) const {
        if (!value_.contains(key)) {
            fail(std::string("missing required key '") + key + "'");
        }
        return {value_.at(key), path_ + "/" + key};
    }

    Node at(std::size_t i) const { return {value_.at(i), path_ + "/" + std::to_string(i)}; }

    double number() const {
        if (!value_.is_number()) {
            fail("expected a number");
        }
        const double v = value_.get<double>();
        if (!std::isfinite(v)) {
            fail("expected a finite number");
        }
        return v;
    }

    int integer() const {
        if (!value_.is_number_integer()) {
            fail("expected an integer");
        }
        return value_.get<int>();
    }

    std::string string() const {
        if (!value_.is_string()) {
            fail("expected a string");
        }
        return value_.get<std::string>();
    }

    std::size_t array_size() const {
        if (!value_.is_array()) {
            fail("expected an array");
        }
        return value_.size();
    }

    Vec3 vec3() const {
        if (!value_.is_array() || value_.size() != 3) {
            fail("expected an array of 3 numbers");
        }
        return {at(0).number(), at(1).number(), at(2).number()};
    }

  private:
    Node child_path(const std::string& key) const { return {value_, path_ + "/" + key}; }

    const json& value_;
    std::string path_;
};

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

TrajectorySpec parse_trajectory(const Node& n) {
    if (!n.value().is_object()) {
        n.fail("expected an object");
    }
    const std::string type = n["type"].string();
    if (type == "static") {
        n.expect_object({"type", "position"});
        return StaticPath{n["position"].vec3()};
    }
    if (type == "uniform_velocity") {
        n.expect_object({"type", "position", "velocity"});
        return UniformVelocityPath{n["position"].vec3(), n["velocity"].vec3()};
    }
    if (type == "uniform_acceleration") {
        n.expect_object({"type", "position", "velocity", "acceleration"});
        return UniformAccelerationPath{n["position"].vec3(), n["velocity"].vec3(), n["acceleration"].vec3()};
    }
    if (type == "circular_orbit") {
        n.expect_object({"type", "center", "radius", "angular_frequency", "phase", "normal"});
        CircularOrbitPath p;
        p.center = n["center"].vec3();
        p.radius = n["radius"].number();
        p.angular_frequency = n["angular_frequency"].number();
        p.phase = n.has("phase") ? n["phase"].number() : 0.0;
        p.normal = n.has("normal") ? n["normal"].vec3() : Vec3{0, 0, 1};
        return p;
    }
    if (type == "piecewise_static") {
        n.expect_object({"type", "epochs"});
        const Node epochs = n["epochs"];
        PiecewiseStaticPath p;
        for (std::size_t i = 0; i < epochs.array_size(); ++i) {
            const Node e = epochs.at(i);
            e.expect_object({"time", "position"});
            p.epochs.push_back({e["time"].number(), e["position"].vec3()});
        }
        return p;
    }
    if (type == "sampled") {
        n.expect_object({"type", "times", "positions"});
        const Node times = n["times"];
        const Node positions = n["positions"];
        SampledPath p;
        for (std::size_t i = 0; i < times.array_size(); ++i) {
            p.times.push_back(times.at(i).number());
        }
        for (std::size_t i = 0; i < positions.array_size(); ++i) {
            p.positions.push_back(positions.at(i).vec3());
        }
        return p;
    }
    n["type"].fail("unknown trajectory type '" + type + "'");
}

json trajectory_json(const Trajectory& traj) {
    return std::visit(
        overloaded{
            [](const StaticPath& p) { return json{{"type", "static"}, {"position", vec_json(p.position)}}; },
            [](const UniformVelocityPath& p) {
                return json{{"type", "uniform_velocity"},
                            {"position", vec_json(p.position)},
                            {"velocity", vec_json(p.velocity)}};
            },
            [](const UniformAccelerationPath& p) {
                return json{{"type", "uniform_acceleration"},
                            {"position", vec_json(p.position)},
                            {"velocity", vec_json(p.velocity)},
                            {"acceleration", vec_json(p.acceleration)}};
            },
            [](const CircularOrbitPath& p) {
                return json{{"type", "circular_orbit"},     {"center", vec_json(p.center)},
                            {"radius", p.radius},           {"angular_frequency", p.angular_frequency},
                            {"phase", p.phase},             {"normal", vec_json(p.normal)}};
            },
            [](const PiecewiseStaticPath& p) {
                json epochs = json::array();
                for (const auto& e : p.epochs) {
                    epochs.push_back({{"time", e.time}, {"position", vec_json(e.position)}});
                }
                return json{{"type", "piecewise_static"}, {"epochs", epochs}};
            },
            [](const SampledPath& p) {
                json positions = json::array();
                for (const auto& x : p.positions) {
                    positions.push_back(vec_json(x));
                }
                return json{{"type", "sampled"}, {"times", p.times}, {"positions", positions}};
            },
        },
        traj.spec());
}

AmbientField parse_ambient(const Node& n) {
    if (!n.value().is_object()) {
        n.fail("expected an object");
    }
    const std::string type = n["type"].string();
    if (type == "zero") {
        n.expect_object({"type"});
        return ZeroField{};
    }
    if (type == "uniform") {
        n.expect_object({"type", "g"});
        return UniformField{n["g"].vec3()};
    }
    if (type == "point_mass") {
        n.expect_object({"type", "position", "mass_kg"});
        return PointMassField{n["position"].vec3(), n["mass_kg"].number()};
    }
    n["type"].fail("unknown ambient field type '" + type + "'");
}

json ambient_json(const AmbientField& field) {
    return std::visit(overloaded{
                          [](const ZeroField&) { return json{{"type", "zero"}}; },
                          [](const UniformField& f) { return json{{"type", "uniform"}, {"g", vec_json(f.g)}}; },
                          [](const PointMassField& f) {
                              return json{{"type", "point_mass"}, {"position", vec_json(f.position)}, {"mass_kg", f.mass}};
                          },
                      },
                      field);
}

QuadratureSpec parse_quadrature(const Node& n) {
    if (!n.value().is_object()) {
        n.fail("expected an object");
    }
    const std::string scheme = n["scheme"].string();
    if (scheme == "gauss_legendre") {
        n.expect_object({"scheme", "order", "max_segment_tau"});
        GaussLegendreScheme gl;
        if (n.has("order")) {
            gl.order = n["order"].integer();
        }
        if (n.has("max_segment_tau")) {
            gl.max_segment_tau = n["max_segment_tau"].number();
        }
        return gl;
    }
    if (scheme == "adaptive_simpson") {
        n.expect_object({"scheme", "rel_tol"});
        AdaptiveSimpsonScheme as;
        if (n.has("rel_tol")) {
            as.rel_tol = n["rel_tol"].number();
        }
        return as;
    }
    n["scheme"].fail("unknown quadrature scheme '" + scheme + "'");
}

json quadrature_json(const QuadratureSpec& q) {
    return std::visit(overloaded{
                          [](const GaussLegendreScheme& gl) {
                              return json{{"scheme", "gauss_legendre"},
                                          {"order", gl.order},
                                          {"max_segment_tau", gl.max_segment_tau}};
                          },
                          [](const AdaptiveSimpsonScheme& as) {
                              return json{{"scheme", "adaptive_simpson"}, {"rel_tol", as.rel_tol}};
                          },
                      },
                      q);
}

// Re-raises library validation failures with the location of the offending node.
template <class F>
auto located(const Node& n, F&& build) {
    try {
        return build();
    } catch (const ConfigError&) {
        throw;
    } catch (const PreconditionError& e) {
        n.fail(e.what());
    }
}

json parse_text(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config error: malformed JSON: ") + e.what());
    }
}

}  // namespace

SceneConfig scene_config_from_json(const json& doc) {
    const Node root(doc, "");
    root.expect_object({"schema_version", "sources", "ambient", "tau_g_s", "quadrature", "t_max_factor", "softening_m"});
    if (root.has("schema_version") && root["schema_version"].integer() != 1) {
        root["schema_version"].fail("unsupported schema version");
    }
    SceneConfig config;
    const Node sources = root["sources"];
    for (std::size_t i = 0; i < sources.array_size(); ++i) {
        const Node s = sources.at(i);
        s.expect_object({"mass_kg", "trajectory"});
        const double mass = s["mass_kg"].number();
        if (!(mass > 0.0)) {
            s["mass_kg"].fail("mass must be > 0");
        }
        const Node tn = s["trajectory"];
        config.sources.push_back({mass, located(tn, [&] { return Trajectory{parse_trajectory(tn)}; })});
    }
    if (root.has("ambient")) {
        const Node an = root["ambient"];
        config.ambient = parse_ambient(an);
        located(an, [&] {
            validate(config.ambient);
            return 0;
        });
    }
    config.kernel.tau_g = root["tau_g_s"].number();
    if (root.has("quadrature")) {
        config.kernel.quadrature = parse_quadrature(root["quadrature"]);
    }
    if (root.has("t_max_factor")) {
        config.kernel.t_max_factor = root["t_max_factor"].number();
    }
    if (root.has("softening_m")) {
        config.kernel.softening = root["softening_m"].number();
    }
    located(root, [&] {
        config.kernel.validate();
        return 0;
    });
    return config;
}

SceneConfig parse_scene_config(std::string_view text) { return scene_config_from_json(parse_text(text)); }

json to_json(const SceneConfig& config) {
    json sources = json::array();
    for (const auto& s : config.sources) {
        sources.push_back({{"mass_kg", s.mass}, {"trajectory", trajectory_json(s.trajectory)}});
    }
    return json{{"schema_version", 1},
                {"sources", sources},
                {"ambient", ambient_json(config.ambient)},
                {"tau_g_s", config.kernel.tau_g},
                {"quadrature", quadrature_json(config.kernel.quadrature)},
                {"t_max_factor", config.kernel.t_max_factor},
                {"softening_m", config.kernel.softening}};
}

GridSpec grid_spec_from_json(const json& doc) {
    const Node root(doc, "");
    root.expect_object({"schema_version", "origin", "axes", "times"});
    GridSpec grid;
    grid.origin = root.has("origin") ? root["origin"].vec3() : Vec3{};
    if (root.has("axes")) {
        const Node axes = root["axes"];
        if (axes.array_size() > 3) {
            axes.fail("at most 3 axes are supported");
        }
        for (std::size_t i = 0; i < axes.array_size(); ++i) {
            const Node a = axes.at(i);
            a.expect_object({"direction", "extent", "count"});
            GridAxis axis{a["direction"].vec3(), a["extent"].number(), a["count"].integer()};
            if (!(norm(axis.direction) > 0.0)) {
                a["direction"].fail("direction must be non-zero");
            }
            if (!(axis.extent > 0.0)) {
                a["extent"].fail("extent must be > 0");
            }
            if (axis.count < 1) {
                a["count"].fail("count must be >= 1");
            }
            grid.axes.push_back(axis);
        }
    }
    const Node times = root["times"];
    if (times.value().is_array()) {
        for (std::size_t i = 0; i < times.array_size(); ++i) {
            grid.times.push_back(times.at(i).number());
        }
    } else {
        times.expect_object({"t0", "t1", "steps"});
        const double t0 = times["t0"].number();
        const double t1 = times["t1"].number();
        const int steps = times["steps"].integer();
        if (steps < 1) {
            times["steps"].fail("steps must be >= 1");
        }
        for (int i = 0; i < steps; ++i) {
            grid.times.push_back(steps == 1 ? t0 : t0 + (t1 - t0) * i / (steps - 1));
        }
    }
    if (grid.times.empty()) {
        times.fail("at least one time is required");
    }
    return grid;
}

GridSpec parse_grid_spec(std::string_view text) { return grid_spec_from_json(parse_text(text)); }

json to_json(const GridSpec& grid) {
    json axes = json::array();
    for (const auto& a : grid.axes) {
        axes.push_back({{"direction", vec_json(a.direction)}, {"extent", a.extent}, {"count", a.count}});
    }
    return json{{"schema_version", 1}, {"origin", vec_json(grid.origin)}, {"axes", axes}, {"times", grid.times}};
}

std::vector<Vec3> grid_points(const GridSpec& grid) {
    std::vector<Vec3> points{grid.origin};
    for (const auto& axis : grid.axes) {
        const Vec3 unit = axis.direction / norm(axis.direction);
        std::vector<Vec3> next;
        next.reserve(points.size() * static_cast<std::size_t>(axis.count));
        for (const Vec3& p : points) {
            for (int i = 0; i < axis.count; ++i) {
                const double frac = axis.count == 1 ? 0.0 : static_cast<double>(i) / (axis.count - 1);
                next.push_back(p + unit * (axis.extent * frac));
            }
        }
        points = std::move(next);
    }
    return points;
}

}  // namespace lazy_newton
