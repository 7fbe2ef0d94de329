#pragma once

#include <span>
#include <variant>
#include <vector>

#include "lazy_newton/vec3.hpp"

namespace lazy_newton {

struct StaticPath {
    Vec3 position;
    friend bool operator==(const StaticPath&, const StaticPath&) = default;
};

/// x(s) = position + velocity·s
struct UniformVelocityPath {
    Vec3 position;
    Vec3 velocity;
    friend bool operator==(const UniformVelocityPath&, const UniformVelocityPath&) = default;
};

/// x(s) = position + velocity·s + ½·acceleration·s²
struct UniformAccelerationPath {
    Vec3 position;
    Vec3 velocity;
    Vec3 acceleration;
    friend bool operator==(const UniformAccelerationPath&, const UniformAccelerationPath&) = default;
};

/// Uniform circular motion; angle(s) = angular_frequency·s + phase, measured
/// from the in-plane reference axis (the projection of x̂ onto the orbit plane,
/// or of ŷ when the normal is along x̂).
struct CircularOrbitPath {
    Vec3 center;
    double radius = 1.0;
    double angular_frequency = 0.0;
    double phase = 0.0;
    Vec3 normal{0.0, 0.0, 1.0};
    friend bool operator==(const CircularOrbitPath&, const CircularOrbitPath&) = default;
};

struct Epoch {
    double time = 0.0;
    Vec3 position;
    friend bool operator==(const Epoch&, const Epoch&) = default;
};

/// Instantaneous relocations: the source sits at epochs[k].position on
/// [epochs[k].time, epochs[k+1].time), and at epochs[0].position before the
/// first switch time.
struct PiecewiseStaticPath {
    std::vector<Epoch> epochs;
    friend bool operator==(const PiecewiseStaticPath&, const PiecewiseStaticPath&) = default;
};

/// Natural cubic spline through (times[i], positions[i]); held at the nearest
/// endpoint outside the sampled range.
struct SampledPath {
    std::vector<double> times;
    std::vector<Vec3> positions;
    friend bool operator==(const SampledPath&, const SampledPath&) = default;
};

using TrajectorySpec = std::variant<StaticPath, UniformVelocityPath, UniformAccelerationPath,
                                    CircularOrbitPath, PiecewiseStaticPath, SampledPath>;

/// Immutable source trajectory, defined for every finite time.
///
/// Construction validates the variant invariants and throws PreconditionError
/// on violation. Evaluation is pure and thread-safe.
class Trajectory {
  public:
    explicit Trajectory(TrajectorySpec spec);

    const TrajectorySpec& spec() const noexcept { return spec_; }

    Vec3 position(double s) const;
    Vec3 velocity(double s) const;
    Vec3 acceleration(double s) const;

    /// Switch times and sample-range endpoints inside [t_lo, t_hi], ascending.
    std::vector<double> breakpoints_in(double t_lo, double t_hi) const;

    friend bool operator==(const Trajectory& a, const Trajectory& b) { return a.spec_ == b.spec_; }

  private:
    struct State {
        Vec3 position;
        Vec3 velocity;
        Vec3 acceleration;
    };
    State state(double s) const;
    State spline_state(const SampledPath& path, double s) const;

    TrajectorySpec spec_;
    // Orbit plane basis, e1 × e2 = normal.
    Vec3 axis1_;
    Vec3 axis2_;
    // Spline second derivatives at the knots.
    std::vector<Vec3> curvature_;
};

}  // namespace lazy_newton
