// lazy-newton: scenario runner and field-map generator.
//
//   lazy-newton scenario <static|orbit|jump|boost|estimate> [flags] [--out FILE]
//   lazy-newton field --config FILE --grid FILE --format csv|json [--out FILE]
//
// Exit status: 0 success, 2 precondition or regime violation, 1 numeric failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lazy_newton/constants.hpp"
#include "lazy_newton/errors.hpp"
#include "lazy_newton/field_map.hpp"
#include "lazy_newton/report_io.hpp"
#include "lazy_newton/scenarios.hpp"
#include "lazy_newton/scene_config.hpp"

namespace ln = lazy_newton;

namespace {

constexpr int kExitNumeric = 1;
constexpr int kExitPrecondition = 2;

std::vector<double> split_numbers(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) {
            throw ln::PreconditionError(std::string(what) + ": cannot parse number '" + item + "'");
        }
        out.push_back(v);
    }
    return out;
}

ln::Vec3 parse_vec3(const std::string& text, const char* what) {
    const auto v = split_numbers(text, what);
    if (v.size() != 3) {
        throw ln::PreconditionError(std::string(what) + ": expected x,y,z");
    }
    return {v[0], v[1], v[2]};
}

// "t0:t1:steps" (inclusive, evenly spaced) or a comma-separated list.
std::vector<double> parse_times(const std::string& text) {
    if (text.find(':') == std::string::npos) {
        return split_numbers(text, "--times");
    }
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        parts.push_back(item);
    }
    if (parts.size() != 3) {
        throw ln::PreconditionError("--times: expected t0:t1:steps");
    }
    const double t0 = split_numbers(parts[0], "--times").at(0);
    const double t1 = split_numbers(parts[1], "--times").at(0);
    const double steps_real = split_numbers(parts[2], "--times").at(0);
    const int steps = static_cast<int>(steps_real);
    if (steps < 1 || steps != steps_real) {
        throw ln::PreconditionError("--times: steps must be a positive integer");
    }
    std::vector<double> times;
    for (int i = 0; i < steps; ++i) {
        times.push_back(steps == 1 ? t0 : t0 + (t1 - t0) * i / (steps - 1));
    }
    return times;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ln::PreconditionError("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <class Writer>
void emit(const std::string& out_path, Writer&& write) {
    if (out_path.empty() || out_path == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw ln::PreconditionError("cannot write " + out_path);
    }
    write(out);
}

void emit_report(const ln::ScenarioReport& report, const std::string& out_path) {
    emit(out_path, [&](std::ostream& os) { os << ln::to_json(report).dump(2) << '\n'; });
}

struct KernelFlags {
    std::string scheme = "gauss_legendre";
    int order = 32;
    double rel_tol = 1e-12;
    double t_max_factor = 40.0;

    void attach(CLI::App* app) {
        app->add_option("--scheme", scheme, "Quadrature scheme")
            ->check(CLI::IsMember({"gauss_legendre", "adaptive_simpson"}));
        app->add_option("--order", order, "Gauss-Legendre points per segment");
        app->add_option("--rel-tol", rel_tol, "Adaptive Simpson relative tolerance");
        app->add_option("--t-max-factor", t_max_factor, "Kernel truncation in units of tau_g");
    }

    ln::ScenarioSettings settings() const {
        ln::ScenarioSettings s;
        if (scheme == "adaptive_simpson") {
            s.quadrature = ln::AdaptiveSimpsonScheme{rel_tol};
        } else {
            s.quadrature = ln::GaussLegendreScheme{order};
        }
        s.t_max_factor = t_max_factor;
        return s;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Delayed (lazy) Newtonian gravity simulator"};
    app.require_subcommand(1);

    const double default_tau = ln::estimate_tau_g(ln::kDefaultNuclearDensity);
    std::string out_path;

    auto* scenario = app.add_subcommand("scenario", "Run a canned scenario and emit a JSON report");
    scenario->require_subcommand(1);

    // static
    double g_mag = 9.81;
    double tau_g = default_tau;
    double mass = 1.0;
    std::string distances = "1";
    KernelFlags static_kernel;
    auto* cmd_static = scenario->add_subcommand("static", "Supported source in uniform gravity");
    cmd_static->add_option("--g", g_mag, "Gravitational acceleration magnitude [m/s^2]");
    cmd_static->add_option("--tau-g", tau_g, "Delay time [s]");
    cmd_static->add_option("--mass", mass, "Source mass [kg]");
    cmd_static->add_option("--d", distances, "Probe sphere radii, comma separated [m]");
    cmd_static->add_option("--out", out_path, "Report file (default stdout)");
    static_kernel.attach(cmd_static);

    // orbit
    double radius = 1.0;
    double omega = 10.0;
    double probe_radius = 1.0;
    KernelFlags orbit_kernel;
    auto* cmd_orbit = scenario->add_subcommand("orbit", "Source revolving on a circle");
    cmd_orbit->add_option("--R", radius, "Orbit radius [m]");
    cmd_orbit->add_option("--omega", omega, "Angular frequency [rad/s]");
    cmd_orbit->add_option("--tau-g", tau_g, "Delay time [s]");
    cmd_orbit->add_option("--mass", mass, "Source mass [kg]");
    cmd_orbit->add_option("--probe-radius", probe_radius, "Shift-fit probe sphere radius [m]");
    cmd_orbit->add_option("--out", out_path, "Report file (default stdout)");
    orbit_kernel.attach(cmd_orbit);

    // jump
    std::string jump_a = "0,0,0.01";
    std::string jump_probe = "0,0.1,0";
    std::string jump_times = "1e-5:4e-2:50";
    KernelFlags jump_kernel;
    auto* cmd_jump = scenario->add_subcommand("jump", "Sudden relocation of a static source at t = 0");
    cmd_jump->add_option("--a", jump_a, "Displacement x,y,z [m]");
    cmd_jump->add_option("--tau-g", tau_g, "Delay time [s]");
    cmd_jump->add_option("--mass", mass, "Source mass [kg]");
    cmd_jump->add_option("--probe", jump_probe, "Field point x,y,z [m]");
    cmd_jump->add_option("--times", jump_times, "t0:t1:steps or comma list [s]");
    cmd_jump->add_option("--out", out_path, "Report file (default stdout)");
    jump_kernel.attach(cmd_jump);

    // boost
    std::string boost_v = "1000,0,0";
    std::string boost_probe = "0,1,0";
    KernelFlags boost_kernel;
    auto* cmd_boost = scenario->add_subcommand("boost", "Naive vs framed kernel under a Galilean boost");
    cmd_boost->add_option("--v", boost_v, "Boost velocity x,y,z [m/s]");
    cmd_boost->add_option("--tau-g", tau_g, "Delay time [s]");
    cmd_boost->add_option("--mass", mass, "Source mass [kg]");
    cmd_boost->add_option("--probe", boost_probe, "Field point x,y,z [m]");
    cmd_boost->add_option("--out", out_path, "Report file (default stdout)");
    boost_kernel.attach(cmd_boost);

    // estimate
    double rho = ln::kDefaultNuclearDensity;
    auto* cmd_estimate = scenario->add_subcommand("estimate", "Order-of-magnitude delay time from a mass density");
    cmd_estimate->add_option("--rho", rho, "Mass density [kg/m^3]");
    cmd_estimate->add_option("--out", out_path, "Report file (default stdout)");

    // field
    std::string config_path;
    std::string grid_path;
    std::string format = "csv";
    auto* field = app.add_subcommand("field", "Evaluate potential and field on a grid");
    field->add_option("--config", config_path, "Scene config JSON")->required();
    field->add_option("--grid", grid_path, "Grid definition JSON")->required();
    field->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    field->add_option("--out", out_path, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitPrecondition;
    }

    try {
        if (*cmd_static) {
            emit_report(ln::static_shift_scenario(g_mag, tau_g, mass, split_numbers(distances, "--d"),
                                                  static_kernel.settings()),
                        out_path);
        } else if (*cmd_orbit) {
            auto settings = orbit_kernel.settings();
            settings.probe_radius = probe_radius;
            emit_report(ln::orbit_scenario(radius, omega, tau_g, mass, settings), out_path);
        } else if (*cmd_jump) {
            emit_report(ln::jump_scenario(parse_vec3(jump_a, "--a"), tau_g, mass, parse_vec3(jump_probe, "--probe"),
                                          parse_times(jump_times), jump_kernel.settings()),
                        out_path);
        } else if (*cmd_boost) {
            emit_report(ln::boost_demo(parse_vec3(boost_v, "--v"), tau_g, mass, parse_vec3(boost_probe, "--probe"),
                                       boost_kernel.settings()),
                        out_path);
        } else if (*cmd_estimate) {
            emit_report(ln::estimate_scenario(rho), out_path);
        } else if (*field) {
            const ln::SceneConfig config = ln::parse_scene_config(read_file(config_path));
            const ln::GridSpec grid = ln::parse_grid_spec(read_file(grid_path));
            const char* env = std::getenv("LAZY_NEWTON_THREADS");
            const unsigned threads =
                ln::resolve_thread_count(env ? std::optional<std::string_view>(env) : std::nullopt);
            const ln::FieldMapResult result = ln::field_map(config, grid, threads);
            emit(out_path, [&](std::ostream& os) {
                if (format == "json") {
                    ln::write_field_json(os, result);
                } else {
                    ln::write_field_csv(os, result);
                }
            });
            if (result.singular_rows > 0) {
                std::cerr << "lazy-newton: " << result.singular_rows
                          << " row(s) within the softening length of a source path were written as nan\n";
                return kExitNumeric;
            }
        }
    } catch (const ln::PreconditionError& e) {
        std::cerr << "lazy-newton: " << e.what() << '\n';
        return kExitPrecondition;
    } catch (const std::exception& e) {
        std::cerr << "lazy-newton: " << e.what() << '\n';
        return kExitNumeric;
    }
    return 0;
}
