#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lazy_newton/evaluator.hpp"
#include "lazy_newton/fit.hpp"
#include "lazy_newton/vec3.hpp"

namespace lazy_newton {

struct NamedValue {
    std::string name;
    std::vector<double> values;
};

/// One predicted-vs-simulated pair.
struct Comparison {
    std::string quantity;
    /// Closed form the prediction comes from.
    std::string formula;
    double predicted = 0.0;
    double simulated = 0.0;
    double abs_deviation = 0.0;
    double rel_deviation = 0.0;
};

struct QuadratureDiagnostics {
    /// Kernel nodes (or integrand evaluations) summed over all evaluations.
    std::size_t nodes = 0;
    /// Segments per evaluation (largest seen).
    std::size_t segments = 0;
    std::size_t evaluations = 0;
};

struct ScenarioReport {
    /// Relative deviations divide by max(|predicted|, kRelDeviationFloor).
    static constexpr double kRelDeviationFloor = 1e-300;

    std::string scenario;
    std::vector<NamedValue> inputs;
    std::vector<NamedValue> outputs;
    std::vector<Comparison> comparisons;
    std::vector<ShiftFit> fits;
    QuadratureDiagnostics diagnostics;
    double wall_time_s = 0.0;
    std::vector<std::string> notes;

    double max_rel_deviation() const;
    const NamedValue* output(const std::string& name) const;
    const Comparison* comparison(const std::string& quantity) const;
};

Comparison make_comparison(std::string quantity, std::string formula, double predicted, double simulated);

/// Evaluation settings shared by the scenario drivers.
struct ScenarioSettings {
    QuadratureSpec quadrature = GaussLegendreScheme{};
    double t_max_factor = 40.0;
    double softening = 1e-9;
    /// Radius of the probe sphere used by shift fits [m].
    double probe_radius = 1.0;

    KernelParams kernel(double tau_g) const { return {tau_g, t_max_factor, softening, quadrature}; }
};

/// Order-of-magnitude emergence time 1/√(G·ρ) [s].
double estimate_tau_g(double rho_nucl);

ScenarioReport estimate_scenario(double rho_nucl);

/// Static source supported against uniform gravity of magnitude g_mag
/// (pointing −ẑ); fits the apparent upward displacement on a probe sphere of
/// each radius and compares it with g·τ_G².
ScenarioReport static_shift_scenario(double g_mag, double tau_g, double mass, std::span<const double> probe_distances,
                                     const ScenarioSettings& settings = {});

/// Source on a circle of radius R about the origin in the xy-plane, no ambient
/// gravity. Compares the centre potential enhancement with Ω²τ_G² and the
/// fitted inward displacement with R·Ω²·τ_G². Requires Ω·τ_G <= 0.1.
ScenarioReport orbit_scenario(double radius, double omega, double tau_g, double mass,
                              const ScenarioSettings& settings = {});

/// Source relocated from the origin to `a` at t = 0; compares the potential
/// at probe r with the exponential mixture of old and new static fields.
ScenarioReport jump_scenario(const Vec3& a, double tau_g, double mass, const Vec3& r, std::span<const double> times,
                             const ScenarioSettings& settings = {});

/// A source at rest seen from a frame moving with velocity v (x_t = −v·t).
/// Reports the naive-kernel discrepancy at t = 0 and checks that the framed
/// evaluation is boost invariant for |v| ∈ {0, 1, 1e3, 1e6} m/s.
ScenarioReport boost_demo(const Vec3& v, double tau_g, double mass, const Vec3& r,
                          const ScenarioSettings& settings = {});

}  // namespace lazy_newton
