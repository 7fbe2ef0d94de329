#include "lazy_newton/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "lazy_newton/constants.hpp"
#include "lazy_newton/errors.hpp"

namespace lazy_newton {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string tagged(const std::string& quantity, double value) {
    std::ostringstream os;
    os.precision(6);
    os << quantity << "[" << value << "]";
    return os.str();
}

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw PreconditionError(message);
    }
}

void require_positive(double v, const char* name) {
    require(v > 0.0 && std::isfinite(v), std::string(name) + " must be > 0");
}

void require_non_negative(double v, const char* name) {
    require(v >= 0.0 && std::isfinite(v), std::string(name) + " must be >= 0");
}

void record(QuadratureDiagnostics& diag, const Evaluation& e) {
    diag.nodes += e.nodes;
    diag.segments = std::max(diag.segments, e.segments);
    ++diag.evaluations;
}

// Sample the framed potential anomaly on a probe sphere about the source's
// position at t = 0 and fit the apparent shift.
ShiftFit fit_on_sphere(const Source& source, const AmbientField& field, double radius, const KernelParams& kernel,
                       QuadratureDiagnostics& diag) {
    const Vec3 nominal = source.trajectory.position(0.0);
    std::vector<PotentialSample> samples;
    for (const Vec3& p : probe_sphere(nominal, radius)) {
        const Evaluation e = evaluate(source, field, p, 0.0, kernel);
        record(diag, e);
        samples.push_back({p, e.anomaly});
    }
    ShiftFit fit = fit_apparent_shift_anomaly(samples, source.mass, nominal);
    if (!fit.converged) {
        throw NumericError("shift fit did not converge within 50 Gauss-Newton iterations");
    }
    return fit;
}

// Unit vector orthogonal to r.
Vec3 perpendicular_unit(const Vec3& r) {
    const Vec3 ref = std::abs(r.x) <= std::abs(r.y) ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    const Vec3 p = cross(r, ref);
    return p / norm(p);
}

}  // namespace

double ScenarioReport::max_rel_deviation() const {
    double worst = 0.0;
    for (const auto& c : comparisons) {
        worst = std::max(worst, c.rel_deviation);
    }
    return worst;
}

const NamedValue* ScenarioReport::output(const std::string& name) const {
    const auto it = std::find_if(outputs.begin(), outputs.end(), [&](const NamedValue& v) { return v.name == name; });
    return it == outputs.end() ? nullptr : &*it;
}

const Comparison* ScenarioReport::comparison(const std::string& quantity) const {
    const auto it = std::find_if(comparisons.begin(), comparisons.end(),
                                 [&](const Comparison& c) { return c.quantity == quantity; });
    return it == comparisons.end() ? nullptr : &*it;
}

Comparison make_comparison(std::string quantity, std::string formula, double predicted, double simulated) {
    Comparison c{std::move(quantity), std::move(formula), predicted, simulated, 0.0, 0.0};
    c.abs_deviation = std::abs(simulated - predicted);
    c.rel_deviation = c.abs_deviation / std::max(std::abs(predicted), ScenarioReport::kRelDeviationFloor);
    return c;
}

double estimate_tau_g(double rho_nucl) {
    require_positive(rho_nucl, "estimate: rho_nucl");
    return 1.0 / std::sqrt(kGravitationalConstant * rho_nucl);
}

ScenarioReport estimate_scenario(double rho_nucl) {
    const auto start = Clock::now();
    ScenarioReport report;
    report.scenario = "estimate";
    report.inputs = {{"rho_nucl_kg_m3", {rho_nucl}}};
    const double tau = estimate_tau_g(rho_nucl);
    report.outputs = {{"tau_g_s", {tau}}, {"collapse_rate_per_s", {1.0 / tau}}, {"log10_tau_g_s", {std::log10(tau)}}};
    report.notes.push_back("tau_g = 1/sqrt(G rho_nucl); order-of-magnitude estimate only");
    report.wall_time_s = seconds_since(start);
    return report;
}

ScenarioReport static_shift_scenario(double g_mag, double tau_g, double mass, std::span<const double> probe_distances,
                                     const ScenarioSettings& settings) {
    const auto start = Clock::now();
    require_non_negative(g_mag, "static: g");
    require_non_negative(tau_g, "static: tau_g");
    require_positive(mass, "static: mass");
    require(!probe_distances.empty(), "static: at least one probe distance is required");
    const double predicted = g_mag * tau_g * tau_g;
    for (double d : probe_distances) {
        require_positive(d, "static: probe distance");
        if (d < 1e3 * predicted) {
            std::ostringstream msg;
            msg << "static: probe distance " << d << " m must be >= 1e3 * g * tau_g^2 = " << 1e3 * predicted << " m";
            throw PreconditionError(msg.str());
        }
    }

    const Source source{mass, Trajectory{StaticPath{}}};
    const AmbientField field = UniformField{{0.0, 0.0, -g_mag}};
    const KernelParams kernel = settings.kernel(tau_g);

    ScenarioReport report;
    report.scenario = "static";
    report.inputs = {{"g_m_s2", {g_mag}},
                     {"tau_g_s", {tau_g}},
                     {"mass_kg", {mass}},
                     {"probe_distances_m", {probe_distances.begin(), probe_distances.end()}}};
    NamedValue fitted{"fitted_shift_m", {}};
    NamedValue rms{"fit_residual_rms_J_kg", {}};
    for (double d : probe_distances) {
        ShiftFit fit = fit_on_sphere(source, field, d, kernel, report.diagnostics);
        report.comparisons.push_back(
            make_comparison(tagged("upward_shift_m", d), "delta_G = g * tau_G^2", predicted, fit.delta.z));
        fitted.values.push_back(fit.delta.z);
        rms.values.push_back(fit.residual_rms);
        report.fits.push_back(std::move(fit));
    }
    constexpr double kPositioningSensitivity = 0.5e-6;
    report.outputs = {{"predicted_shift_m", {predicted}},
                      fitted,
                      rms,
                      {"positioning_sensitivity_m", {kPositioningSensitivity}},
                      {"shift_over_sensitivity", {predicted / kPositioningSensitivity}}};
    report.notes.push_back("static source in uniform gravity -g z; shift fitted on 10-point probe spheres");
    report.notes.push_back("positioning_sensitivity_m: source/test-mass placement uncertainty of recent Cavendish-type experiments");
    report.wall_time_s = seconds_since(start);
    return report;
}

ScenarioReport orbit_scenario(double radius, double omega, double tau_g, double mass,
                              const ScenarioSettings& settings) {
    const auto start = Clock::now();
    require_positive(radius, "orbit: R");
    require(std::isfinite(omega), "orbit: omega must be finite");
    require_non_negative(tau_g, "orbit: tau_g");
    require_positive(mass, "orbit: mass");
    const double product = std::abs(omega) * tau_g;
    if (product > 0.1) {
        std::ostringstream msg;
        msg << "orbit: regime violation, omega * tau_g = " << product << " exceeds 0.1 (slow-revolution limit)";
        throw PreconditionError(msg.str());
    }

    const Source source{mass, Trajectory{CircularOrbitPath{{}, radius, omega, 0.0, {0, 0, 1}}}};
    const AmbientField field = ZeroField{};
    const KernelParams kernel = settings.kernel(tau_g);
    const double gm = kGravitationalConstant * mass;

    ScenarioReport report;
    report.scenario = "orbit";
    report.inputs = {{"R_m", {radius}},
                     {"omega_rad_s", {omega}},
                     {"tau_g_s", {tau_g}},
                     {"mass_kg", {mass}},
                     {"probe_radius_m", {settings.probe_radius}}};

    const Evaluation center = evaluate(source, field, Vec3{}, 0.0, kernel);
    record(report.diagnostics, center);
    const double factor = std::abs(center.potential) * radius / gm;
    // The centre is at distance R from the source: the excess is −anomaly·R/(GM).
    const double excess = -center.anomaly * radius / gm;
    const double predicted_correction = product * product;
    report.comparisons.push_back(make_comparison("center_factor_minus_one", "|phi_center| R / (G M) - 1 = Omega^2 tau_G^2",
                                                 predicted_correction, excess));

    ShiftFit fit = fit_on_sphere(source, field, settings.probe_radius, kernel, report.diagnostics);
    const double predicted_shift = radius * predicted_correction;
    const double inward = -fit.delta.x;
    report.comparisons.push_back(
        make_comparison("inward_shift_m", "delta_G = R Omega^2 tau_G^2", predicted_shift, inward));
    report.outputs = {{"center_potential_J_kg", {center.potential}},
                      {"center_factor", {factor}},
                      {"omega_tau_g", {product}}};
    report.fits.push_back(std::move(fit));
    report.notes.push_back("circular orbit in the xy-plane, source at (R,0,0) at t=0; no ambient gravity");
    report.wall_time_s = seconds_since(start);
    return report;
}

ScenarioReport jump_scenario(const Vec3& a, double tau_g, double mass, const Vec3& r, std::span<const double> times,
                             const ScenarioSettings& settings) {
    const auto start = Clock::now();
    require(is_finite(a) && is_finite(r), "jump: displacement and probe must be finite");
    require_non_negative(tau_g, "jump: tau_g");
    require_positive(mass, "jump: mass");
    require(!times.empty(), "jump: at least one evaluation time is required");
    require(norm(r) > settings.softening && norm(r - a) > settings.softening,
            "jump: probe must lie farther than the softening length from both source positions");
    for (double t : times) {
        require(t > 0.0 && std::isfinite(t), "jump: evaluation times must be > 0");
    }

    const KernelParams kernel = settings.kernel(tau_g);
    const double first = -std::max(1.0, 2.0 * kernel.horizon());
    const Source source{mass, Trajectory{PiecewiseStaticPath{{{first, Vec3{}}, {0.0, a}}}}};
    const AmbientField field = ZeroField{};
    const double old_phi = newton_potential(mass, r, Vec3{});
    const double new_phi = newton_potential(mass, r, a);

    ScenarioReport report;
    report.scenario = "jump";
    report.inputs = {{"a_m", {a.x, a.y, a.z}},
                     {"tau_g_s", {tau_g}},
                     {"mass_kg", {mass}},
                     {"probe_m", {r.x, r.y, r.z}},
                     {"times_s", {times.begin(), times.end()}}};
    NamedValue simulated{"potential_J_kg", {}};
    NamedValue old_weight{"old_field_weight", {}};
    for (double t : times) {
        const Evaluation e = evaluate(source, field, r, t, kernel);
        record(report.diagnostics, e);
        const double w_old = tau_g > 0.0 ? std::exp(-t / tau_g) : 0.0;
        const double w_new = tau_g > 0.0 ? -std::expm1(-t / tau_g) : 1.0;
        const double predicted = w_old * old_phi + w_new * new_phi;
        report.comparisons.push_back(make_comparison(
            tagged("potential_J_kg@t", t), "phi = e^{-t/tau_G}(-GM/|r|) + (1 - e^{-t/tau_G})(-GM/|r-a|)", predicted,
            e.potential));
        simulated.values.push_back(e.potential);
        old_weight.values.push_back(w_old);
    }
    report.outputs = {simulated, old_weight, {"max_rel_deviation", {report.max_rel_deviation()}}};
    report.notes.push_back("source at the origin for t<0, relocated to a at t=0; no ambient gravity");
    report.wall_time_s = seconds_since(start);
    return report;
}

ScenarioReport boost_demo(const Vec3& v, double tau_g, double mass, const Vec3& r, const ScenarioSettings& settings) {
    const auto start = Clock::now();
    require(is_finite(v) && is_finite(r), "boost: velocity and probe must be finite");
    require_non_negative(tau_g, "boost: tau_g");
    require_positive(mass, "boost: mass");
    const double r_mag = norm(r);
    require(r_mag > settings.softening, "boost: probe must lie outside the softening length");
    const double speed = norm(v);
    if (speed > 0.0 && tau_g > 0.0) {
        const double ratio = speed * tau_g / r_mag;
        require(ratio >= 1e-6 && ratio <= 1e6,
                "boost: |v| tau_g and |r| must lie within six orders of magnitude of each other");
        // The boosted source sweeps the ray {v s : s >= 0}; on that ray the naive integral diverges.
        const Vec3 vhat = v / speed;
        const double along = dot(r, vhat);
        const double miss = along > 0.0 ? norm(r - along * vhat) : r_mag;
        require(miss > 1e-6 * r_mag, "boost: probe lies on the boosted source path; the naive integral diverges");
    }

    const KernelParams kernel = settings.kernel(tau_g);
    const AmbientField field = ZeroField{};
    const double rest = newton_potential(mass, r, Vec3{});

    auto boosted_source = [mass](const Vec3& velocity) {
        return Source{mass, Trajectory{UniformVelocityPath{{}, -velocity}}};
    };

    ScenarioReport report;
    report.scenario = "boost";
    report.inputs = {{"v_m_s", {v.x, v.y, v.z}}, {"tau_g_s", {tau_g}}, {"mass_kg", {mass}}, {"probe_m", {r.x, r.y, r.z}}};

    const Source source = boosted_source(v);
    const SourcePath lab_path = [&](double s) { return source.trajectory.position(s); };
    const Evaluation naive = evaluate_naive(source, lab_path, r, 0.0, kernel);
    record(report.diagnostics, naive);
    const Evaluation framed = evaluate(source, field, r, 0.0, kernel);
    record(report.diagnostics, framed);

    // Second quadrature route for the naive integral.
    KernelParams alternate = kernel;
    if (std::holds_alternative<AdaptiveSimpsonScheme>(kernel.quadrature)) {
        alternate.quadrature = GaussLegendreScheme{};
    } else {
        alternate.quadrature = AdaptiveSimpsonScheme{1e-12};
    }
    const Evaluation naive_cross = evaluate_naive(source, lab_path, r, 0.0, alternate);
    record(report.diagnostics, naive_cross);

    report.comparisons.push_back(make_comparison("naive_over_rest", "alternate quadrature of the boosted-frame kernel integral",
                                                 naive_cross.potential / rest, naive.potential / rest));
    report.comparisons.push_back(make_comparison("framed_over_rest", "co-moving free-fall frame: phi = -GM/|r|", 1.0,
                                                 framed.potential / rest));

    // Boost invariance of the framed evaluator along the same direction.
    const Vec3 direction = speed > 0.0 ? v / speed : perpendicular_unit(r);
    NamedValue sweep_ratio{"framed_ratio_sweep", {}};
    for (double magnitude : {0.0, 1.0, 1e3, 1e6}) {
        const Evaluation e = evaluate(boosted_source(direction * magnitude), field, r, 0.0, kernel);
        record(report.diagnostics, e);
        report.comparisons.push_back(
            make_comparison(tagged("framed_over_rest@|v|", magnitude), "boost invariance: ratio = 1", 1.0, e.potential / rest));
        sweep_ratio.values.push_back(e.potential / rest);
    }
    NamedValue naive_sweep{"naive_ratio_sweep", {}};
    NamedValue sweep_speeds{"naive_sweep_speeds_m_s", {}};
    if (speed > 0.0 && tau_g > 0.0) {
        for (double factor : {0.25, 0.5, 1.0, 2.0, 4.0}) {
            const Source s = boosted_source(v * factor);
            const SourcePath p = [&](double t) { return s.trajectory.position(t); };
            const Evaluation e = evaluate_naive(s, p, r, 0.0, kernel);
            record(report.diagnostics, e);
            naive_sweep.values.push_back(e.potential / rest);
            sweep_speeds.values.push_back(speed * factor);
        }
    }
    report.outputs = {{"rest_potential_J_kg", {rest}},
                      {"naive_potential_J_kg", {naive.potential}},
                      {"framed_potential_J_kg", {framed.potential}},
                      {"naive_discrepancy", {naive.potential / rest - 1.0}},
                      sweep_ratio,
                      sweep_speeds,
                      naive_sweep};
    report.notes.push_back("source at rest in the rest frame; boosted description x_t = -v t evaluated at t = 0");
    report.wall_time_s = seconds_since(start);
    return report;
}

}  // namespace lazy_newton
