#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "lazy_newton/frames.hpp"
#include "lazy_newton/kinematics.hpp"
#include "lazy_newton/vec3.hpp"

namespace lazy_newton {

/// Gauss–Legendre rule applied on every segment of the kernel support.
struct GaussLegendreScheme {
    int order = 32;
    /// Maximum segment length in units of τ_G.
    double max_segment_tau = 0.5;
    friend bool operator==(const GaussLegendreScheme&, const GaussLegendreScheme&) = default;
};

struct AdaptiveSimpsonScheme {
    double rel_tol = 1e-12;
    friend bool operator==(const AdaptiveSimpsonScheme&, const AdaptiveSimpsonScheme&) = default;
};

using QuadratureSpec = std::variant<GaussLegendreScheme, AdaptiveSimpsonScheme>;

/// Parameters of the exponential memory kernel e^{−τ/τ_G} dτ/τ_G.
struct KernelParams {
    double tau_g = 1e-3;
    /// Support is truncated at t_max_factor·τ_G.
    double t_max_factor = 40.0;
    double softening = 1e-9;
    QuadratureSpec quadrature = GaussLegendreScheme{};

    double horizon() const noexcept { return t_max_factor * tau_g; }
    /// Throws PreconditionError if any invariant is violated.
    void validate() const;

    friend bool operator==(const KernelParams&, const KernelParams&) = default;
};

struct Source {
    double mass = 1.0;
    Trajectory trajectory;
    friend bool operator==(const Source&, const Source&) = default;
};

struct KernelNode {
    double tau;
    double weight;
};

struct KernelRule {
    std::vector<KernelNode> nodes;
    std::size_t segments = 0;
};

/// Quadrature nodes on [0, t_max_factor·τ_G] with the exponential density
/// folded into the weights. Segments split at the given delays and at most
/// every max_segment_tau·τ_G. Requires a Gauss–Legendre scheme and τ_G > 0.
KernelRule kernel_weights(const KernelParams& params, std::span<const double> breakpoint_delays = {});

/// Potential, field and quadrature bookkeeping from one evaluation.
struct Evaluation {
    double potential = 0.0;
    Vec3 field;
    std::size_t nodes = 0;
    std::size_t segments = 0;
    /// potential − (instantaneous Newtonian potential of the source at t),
    /// accumulated separately at full relative precision.
    double anomaly = 0.0;
};

/// Source position as seen in the evaluation frame, as a function of time.
using SourcePath = std::function<Vec3(double)>;

/// Delayed potential and field with the kernel applied directly in the frame
/// where `path` is expressed. Breakpoints come from the source trajectory.
Evaluation evaluate_naive(const Source& source, const SourcePath& path, const Vec3& r, double t,
                          const KernelParams& params);

/// Full prescription: the kernel is applied in the source's co-moving
/// free-falling frame at time t, and the result is transformed back.
Evaluation evaluate(const Source& source, const AmbientField& field, const Vec3& r, double t,
                    const KernelParams& params);

/// Sum over sources, each framed independently. A SingularApproach names the
/// offending source index.
Evaluation evaluate_superposed(std::span<const Source> sources, const AmbientField& field, const Vec3& r,
                               double t, const KernelParams& params);

double delayed_potential_naive(const Source& source, const SourcePath& path, const Vec3& r, double t,
                               const KernelParams& params);
double delayed_potential(const Source& source, const AmbientField& field, const Vec3& r, double t,
                         const KernelParams& params);
Vec3 delayed_field(const Source& source, const AmbientField& field, const Vec3& r, double t,
                   const KernelParams& params);
double superposed_potential(std::span<const Source> sources, const AmbientField& field, const Vec3& r, double t,
                            const KernelParams& params);

/// Instantaneous Newtonian potential −GM/|r − x|.
double newton_potential(double mass, const Vec3& r, const Vec3& x);
/// Instantaneous Newtonian acceleration −GM(r − x)/|r − x|³.
Vec3 newton_field(double mass, const Vec3& r, const Vec3& x);

}  // namespace lazy_newton
