#include "lazy_newton/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lazy_newton/constants.hpp"
#include "lazy_newton/errors.hpp"
#include "lazy_newton/quadrature.hpp"

namespace lazy_newton {
namespace {

struct Sample {
    double potential = 0.0;
    Vec3 field;

    Sample& operator+=(const Sample& o) {
        potential += o.potential;
        field += o.field;
        return *this;
    }
    friend Sample operator+(Sample a, const Sample& b) { return a += b; }
    friend Sample operator-(const Sample& a, const Sample& b) { return {a.potential - b.potential, a.field - b.field}; }
    friend Sample operator*(double s, const Sample& a) { return {s * a.potential, s * a.field}; }
    friend Sample operator*(const Sample& a, double s) { return s * a; }
};

// Segment edges on [0, horizon] in delay units, including both ends.
std::vector<double> segment_edges(double horizon, double max_len, std::span<const double> breakpoints) {
    std::vector<double> cuts{0.0, horizon};
    for (double b : breakpoints) {
        if (b > 0.0 && b < horizon) {
            cuts.push_back(b);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<double> edges{0.0};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double len = cuts[i + 1] - cuts[i];
        if (len <= 0.0) {
            continue;
        }
        const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(len / max_len - 1e-12)));
        for (std::size_t k = 1; k < pieces; ++k) {
            edges.push_back(cuts[i] + len * static_cast<double>(k) / static_cast<double>(pieces));
        }
        edges.push_back(cuts[i + 1]);
    }
    return edges;
}

std::vector<double> breakpoint_delays(const Trajectory& traj, double t, double horizon) {
    std::vector<double> delays;
    for (double s : traj.breakpoints_in(t - horizon, t)) {
        delays.push_back(t - s);
    }
    return delays;
}

[[noreturn]] void throw_singular(double distance, double tau, double softening) {
    std::ostringstream msg;
    msg << "field point within softening length (" << softening << " m) of the source path: distance "
        << distance << " m at delay " << tau << " s";
    throw SingularApproach(msg.str(), distance);
}

Sample point_sample(double gm, const Vec3& separation, double tau, double softening) {
    const double d = norm(separation);
    if (!(d > softening)) {
        throw_singular(d, tau, softening);
    }
    const double inv = 1.0 / d;
    return {-gm / d, separation * (-gm * inv * inv * inv)};
}

// f(τ) − f(0) for a source moved from p0 to p, seen from r. The potential
// difference uses |s0| − |s| = (p − p0)·(s0 + s)/(|s0| + |s|).
Sample difference_sample(double gm, const Vec3& r, const Vec3& p0, const Sample& ref, const Vec3& p, double tau,
                         double softening) {
    const Vec3 sep = r - p;
    const Sample here = point_sample(gm, sep, tau, softening);
    const Vec3 sep0 = r - p0;
    const double d = norm(sep);
    const double d0 = norm(sep0);
    const double dphi = -gm * dot(p - p0, sep0 + sep) / ((d0 + d) * d * d0);
    return {dphi, here.field - ref.field};
}

// The kernel integral is split as m_T·f(0) + ∫ (f(τ) − f(0)) dμ with the exact
// truncated kernel mass m_T = 1 − e^{−T}. Static stretches then contribute
// exactly zero, and small delay effects are summed without cancellation.
double kernel_mass(const KernelParams& params) { return -std::expm1(-params.t_max_factor); }

struct Accumulator {
    quadrature::CompensatedSum phi;
    quadrature::CompensatedSum gx;
    quadrature::CompensatedSum gy;
    quadrature::CompensatedSum gz;

    void add(const Sample& s) {
        phi.add(s.potential);
        gx.add(s.field.x);
        gy.add(s.field.y);
        gz.add(s.field.z);
    }
    Sample value() const { return {phi.value(), {gx.value(), gy.value(), gz.value()}}; }
};

// `source(τ)` is the source position at delay τ in the coordinates of r.
Evaluation integrate_gauss(double gm, const Vec3& r, const std::function<Vec3(double)>& source,
                           const KernelParams& params, std::span<const double> delays) {
    const KernelRule rule = kernel_weights(params, delays);
    const Vec3 p0 = source(0.0);
    const Sample ref = point_sample(gm, r - p0, 0.0, params.softening);
    Accumulator acc;
    quadrature::CompensatedSum anomaly;
    acc.add(kernel_mass(params) * ref);
    anomaly.add((kernel_mass(params) - 1.0) * ref.potential);
    for (const auto& node : rule.nodes) {
        const Sample term =
            node.weight * difference_sample(gm, r, p0, ref, source(node.tau), node.tau, params.softening);
        acc.add(term);
        anomaly.add(term.potential);
    }
    const Sample total = acc.value();
    return {total.potential, total.field, rule.nodes.size(), rule.segments, anomaly.value()};
}

Evaluation integrate_simpson(double gm, const Vec3& r, const std::function<Vec3(double)>& source,
                             const KernelParams& params, const AdaptiveSimpsonScheme& scheme,
                             std::span<const double> delays) {
    const double tau_g = params.tau_g;
    const double horizon = params.horizon();
    const auto edges = segment_edges(horizon, 0.5 * tau_g, delays);
    const Vec3 p0 = source(0.0);
    const Sample ref = point_sample(gm, r - p0, 0.0, params.softening);
    std::size_t evaluations = 1;
    auto integrand = [&](double tau) {
        const double density = std::exp(-tau / tau_g) / tau_g;
        return density * difference_sample(gm, r, p0, ref, source(tau), tau, params.softening);
    };

    // Tolerances are relative to the full integral, whose scale is the reference sample.
    const double phi_scale = std::max(std::abs(ref.potential), 1e-300);
    const double field_scale = std::max(norm(ref.field), 1e-300);
    auto error_of = [&](const Sample& d) {
        return std::max(std::abs(d.potential) / phi_scale, norm(d.field) / field_scale);
    };

    Accumulator acc;
    quadrature::CompensatedSum anomaly;
    acc.add(kernel_mass(params) * ref);
    anomaly.add((kernel_mass(params) - 1.0) * ref.potential);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges[i];
        const double b = edges[i + 1];
        const double tol = scheme.rel_tol * (b - a) / horizon;
        // Endpoints sampled one ulp inside the segment.
        const double lo = std::nextafter(a, b);
        const double hi = std::nextafter(b, a);
        auto interior = [&](double tau) { return integrand(std::clamp(tau, lo, hi)); };
        const Sample piece = quadrature::adaptive_simpson(interior, a, b, tol, error_of, evaluations);
        acc.add(piece);
        anomaly.add(piece.potential);
    }
    const Sample total = acc.value();
    return {total.potential, total.field, evaluations, edges.size() - 1, anomaly.value()};
}

Evaluation integrate(double gm, const Vec3& r, const std::function<Vec3(double)>& source,
                     const KernelParams& params, std::span<const double> delays) {
    if (const auto* simpson = std::get_if<AdaptiveSimpsonScheme>(&params.quadrature)) {
        return integrate_simpson(gm, r, source, params, *simpson, delays);
    }
    return integrate_gauss(gm, r, source, params, delays);
}

void validate_source(const Source& source) {
    if (!(source.mass > 0.0) || !std::isfinite(source.mass)) {
        throw PreconditionError("source mass must be > 0");
    }
}

}  // namespace

void KernelParams::validate() const {
    if (!(tau_g >= 0.0) || !std::isfinite(tau_g)) {
        throw PreconditionError("kernel: tau_g must be >= 0");
    }
    if (!(t_max_factor >= 20.0) || !std::isfinite(t_max_factor)) {
        throw PreconditionError("kernel: t_max_factor must be >= 20");
    }
    if (!(softening > 0.0) || !std::isfinite(softening)) {
        throw PreconditionError("kernel: softening length must be > 0");
    }
    if (const auto* gl = std::get_if<GaussLegendreScheme>(&quadrature)) {
        if (gl->order < 2) {
            throw PreconditionError("kernel: Gauss-Legendre order must be >= 2");
        }
        if (!(gl->max_segment_tau > 0.0) || !std::isfinite(gl->max_segment_tau)) {
            throw PreconditionError("kernel: max segment length must be > 0");
        }
    } else {
        const double tol = std::get<AdaptiveSimpsonScheme>(quadrature).rel_tol;
        if (!(tol > 0.0 && tol <= 1e-6)) {
            throw PreconditionError("kernel: adaptive Simpson rel_tol must lie in (0, 1e-6]");
        }
    }
}

KernelRule kernel_weights(const KernelParams& params, std::span<const double> breakpoint_delays) {
    params.validate();
    if (params.tau_g == 0.0) {
        throw PreconditionError("kernel_weights: tau_g = 0 has no kernel; use the instantaneous potential");
    }
    const auto* gl = std::get_if<GaussLegendreScheme>(&params.quadrature);
    if (gl == nullptr) {
        throw PreconditionError("kernel_weights: requires a Gauss-Legendre quadrature scheme");
    }
    const double tau_g = params.tau_g;
    const auto edges = segment_edges(params.horizon(), gl->max_segment_tau * tau_g, breakpoint_delays);
    const auto base = quadrature::gauss_legendre(gl->order);

    KernelRule rule;
    rule.segments = edges.size() - 1;
    rule.nodes.reserve(rule.segments * base.nodes.size());
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double mid = 0.5 * (edges[i] + edges[i + 1]);
        const double half = 0.5 * (edges[i + 1] - edges[i]);
        for (std::size_t k = 0; k < base.nodes.size(); ++k) {
            const double tau = mid + half * base.nodes[k];
            rule.nodes.push_back({tau, base.weights[k] * half * std::exp(-tau / tau_g) / tau_g});
        }
    }
    return rule;
}

double newton_potential(double mass, const Vec3& r, const Vec3& x) {
    return -kGravitationalConstant * mass / norm(r - x);
}

Vec3 newton_field(double mass, const Vec3& r, const Vec3& x) {
    const Vec3 d = r - x;
    const double inv = 1.0 / norm(d);
    return d * (-kGravitationalConstant * mass * inv * inv * inv);
}

Evaluation evaluate_naive(const Source& source, const SourcePath& path, const Vec3& r, double t,
                          const KernelParams& params) {
    validate_source(source);
    params.validate();
    const double gm = kGravitationalConstant * source.mass;
    if (params.tau_g == 0.0) {
        const Sample s = point_sample(gm, r - path(t), 0.0, params.softening);
        return {s.potential, s.field, 1, 0};
    }
    const auto delays = breakpoint_delays(source.trajectory, t, params.horizon());
    return integrate(gm, r, [&](double tau) { return path(t - tau); }, params, delays);
}

Evaluation evaluate(const Source& source, const AmbientField& field, const Vec3& r, double t,
                    const KernelParams& params) {
    validate_source(source);
    params.validate();
    validate(field);
    const double gm = kGravitationalConstant * source.mass;
    const Trajectory& traj = source.trajectory;
    if (params.tau_g == 0.0) {
        const Sample s = point_sample(gm, r - traj.position(t), 0.0, params.softening);
        return {s.potential, s.field, 1, 0};
    }
    const double horizon = params.horizon();
    const FreeFallFrame frame =
        build_frame(traj, field, t, horizon, FrameOptions{params.tau_g / 100.0, params.softening});
    // Frame coordinates: r' = r − y(t); the source at t − τ sits at x(t−τ) − y(t−τ).
    const Vec3 r_frame = r - frame.anchor();
    const auto delays = breakpoint_delays(traj, t, horizon);
    return integrate(
        gm, r_frame, [&](double tau) { return relative_source_path(frame, traj, t - tau); }, params, delays);
}

Evaluation evaluate_superposed(std::span<const Source> sources, const AmbientField& field, const Vec3& r,
                               double t, const KernelParams& params) {
    Evaluation total;
    quadrature::CompensatedSum phi;
    quadrature::CompensatedSum anomaly;
    for (std::size_t i = 0; i < sources.size(); ++i) {
        Evaluation e;
        try {
            e = evaluate(sources[i], field, r, t, params);
        } catch (const SingularApproach& ex) {
            throw SingularApproach("source " + std::to_string(i) + ": " + ex.what(), ex.distance(), i);
        }
        phi.add(e.potential);
        anomaly.add(e.anomaly);
        total.field += e.field;
        total.nodes += e.nodes;
        total.segments += e.segments;
    }
    total.potential = phi.value();
    total.anomaly = anomaly.value();
    return total;
}

double delayed_potential_naive(const Source& source, const SourcePath& path, const Vec3& r, double t,
                               const KernelParams& params) {
    return evaluate_naive(source, path, r, t, params).potential;
}

double delayed_potential(const Source& source, const AmbientField& field, const Vec3& r, double t,
                         const KernelParams& params) {
    return evaluate(source, field, r, t, params).potential;
}

Vec3 delayed_field(const Source& source, const AmbientField& field, const Vec3& r, double t,
                   const KernelParams& params) {
    return evaluate(source, field, r, t, params).field;
}

double superposed_potential(std::span<const Source> sources, const AmbientField& field, const Vec3& r, double t,
                            const KernelParams& params) {
    return evaluate_superposed(sources, field, r, t, params).potential;
}

}  // namespace lazy_newton
