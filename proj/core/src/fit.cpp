#include "lazy_newton/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "lazy_newton/constants.hpp"
#include "lazy_newton/errors.hpp"

namespace lazy_newton {
namespace {

constexpr int kMaxIterations = 50;
constexpr double kStepTolerance = 1e-15;

struct Linearization {
    Eigen::Matrix3d normal;
    Eigen::Vector3d gradient;
    double sum_sq = 0.0;
};

enum class Form { potential, anomaly };

// Model in units of GM (1/m). In anomaly form it is −1/|a − δ| + 1/|a| with
// a = r − nominal, rewritten as −(2a·δ − δ·δ)/((|a| + |a − δ|)|a||a − δ|).
double model_value(Form form, const Vec3& r, const Vec3& nominal, const Vec3& center) {
    const Vec3 w = r - center;
    const double dw = norm(w);
    if (form == Form::potential) {
        return -1.0 / dw;
    }
    const Vec3 a = r - nominal;
    const Vec3 delta = center - nominal;
    const double da = norm(a);
    return -(2.0 * dot(a, delta) - dot(delta, delta)) / ((da + dw) * da * dw);
}

// Residuals in units of GM (1/m).
Linearization linearize(std::span<const PotentialSample> samples, double gm, const Vec3& nominal,
                        const Vec3& center, Form form) {
    Linearization lin;
    lin.normal.setZero();
    lin.gradient.setZero();
    for (const auto& s : samples) {
        const Vec3 d = s.point - center;
        const double dist = norm(d);
        const double model = model_value(form, s.point, nominal, center);
        const double residual = s.potential / gm - model;
        // d(model)/d(center) = −(r − c)/|r − c|³
        const double inv3 = 1.0 / (dist * dist * dist);
        const Eigen::Vector3d jac(-d.x * inv3, -d.y * inv3, -d.z * inv3);
        lin.normal += jac * jac.transpose();
        lin.gradient += jac * residual;
        lin.sum_sq += residual * residual;
    }
    return lin;
}

}  // namespace

std::vector<Vec3> probe_sphere(const Vec3& center, double radius) {
    const double c = radius / std::sqrt(3.0);
    return {
        center + Vec3{radius, 0, 0}, center + Vec3{-radius, 0, 0}, center + Vec3{0, radius, 0},
        center + Vec3{0, -radius, 0}, center + Vec3{0, 0, radius}, center + Vec3{0, 0, -radius},
        center + Vec3{c, c, c},      center + Vec3{c, -c, -c},     center + Vec3{-c, c, -c},
        center + Vec3{-c, -c, c},
    };
}

namespace {

ShiftFit fit_shift(std::span<const PotentialSample> samples, double mass, const Vec3& nominal, Form form) {
    if (samples.size() < 6) {
        throw PreconditionError("fit_apparent_shift: needs at least 6 potential samples");
    }
    if (!(mass > 0.0)) {
        throw PreconditionError("fit_apparent_shift: mass must be > 0");
    }
    double scale = 0.0;
    for (const auto& s : samples) {
        const double d = norm(s.point - nominal);
        if (!(d > 0.0) || !std::isfinite(s.potential)) {
            throw PreconditionError("fit_apparent_shift: samples must be finite and away from the nominal position");
        }
        scale = std::max(scale, d);
    }
    const double gm = kGravitationalConstant * mass;

    {
        const Linearization lin = linearize(samples, gm, nominal, nominal, form);
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(lin.normal);
        const auto ev = eig.eigenvalues();
        if (!(ev.minCoeff() > 1e-10 * ev.maxCoeff())) {
            throw PreconditionError(
                "fit_apparent_shift: probe directions do not constrain all three shift components");
        }
    }

    // Raw potentials resolve positions only to rounding of the probe geometry;
    // anomalies resolve the shift to rounding of the shift itself.
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double geometric_floor = form == Form::potential ? 8.0 * eps * scale : 0.0;
    ShiftFit fit;
    for (const auto& s : samples) {
        fit.probes.push_back(s.point);
    }
    Vec3 delta{};
    for (int it = 1; it <= kMaxIterations; ++it) {
        const Linearization lin = linearize(samples, gm, nominal, nominal + delta, form);
        const Eigen::Vector3d step = lin.normal.ldlt().solve(lin.gradient);
        delta += Vec3{step.x(), step.y(), step.z()};
        fit.iterations = it;
        if (!step.allFinite()) {
            break;
        }
        const double tolerance = std::max({kStepTolerance, geometric_floor, 8.0 * eps * norm(delta)});
        if (step.norm() < tolerance) {
            fit.converged = true;
            break;
        }
    }
    const Linearization final_lin = linearize(samples, gm, nominal, nominal + delta, form);
    fit.delta = delta;
    fit.residual_rms = gm * std::sqrt(final_lin.sum_sq / static_cast<double>(samples.size()));
    return fit;
}

}  // namespace

ShiftFit fit_apparent_shift(std::span<const PotentialSample> samples, double mass, const Vec3& nominal) {
    return fit_shift(samples, mass, nominal, Form::potential);
}

ShiftFit fit_apparent_shift_anomaly(std::span<const PotentialSample> anomalies, double mass, const Vec3& nominal) {
    return fit_shift(anomalies, mass, nominal, Form::anomaly);
}

}  // namespace lazy_newton
