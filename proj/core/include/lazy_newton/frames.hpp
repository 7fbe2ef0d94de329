#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "lazy_newton/kinematics.hpp"
#include "lazy_newton/vec3.hpp"

namespace lazy_newton {

struct ZeroField {
    friend bool operator==(const ZeroField&, const ZeroField&) = default;
};

struct UniformField {
    Vec3 g;
    friend bool operator==(const UniformField&, const UniformField&) = default;
};

/// Background acceleration −G·mass·(x − position)/|x − position|³.
struct PointMassField {
    Vec3 position;
    double mass = 0.0;
    friend bool operator==(const PointMassField&, const PointMassField&) = default;
};

/// Externally prescribed gravitational acceleration field.
using AmbientField = std::variant<ZeroField, UniformField, PointMassField>;

/// Throws PreconditionError if the field parameters are invalid.
void validate(const AmbientField& field);

Vec3 ambient_accel(const AmbientField& field, const Vec3& x, double s);

/// Total source acceleration minus the ambient gravitational acceleration.
Vec3 nongrav_accel(const Trajectory& traj, const AmbientField& field, double s);

struct FrameOptions {
    /// RK4 step for tabulated frames; 0 selects horizon/4000.
    double step = 0.0;
    /// The tabulated origin path may not come closer than this to a point mass.
    double softening = 1e-9;
};

/// Non-rotating frame whose origin free-falls in the ambient field and
/// matches the source position and velocity at the match time.
///
/// The origin path is stored as an offset from the matched position.
class FreeFallFrame {
  public:
    double match_time() const noexcept { return match_time_; }
    double horizon() const noexcept { return horizon_; }
    bool tabulated() const noexcept { return !offsets_.empty(); }
    std::size_t table_size() const noexcept { return offsets_.size(); }

    /// Position of the matched source at the match time (= origin(t)).
    const Vec3& anchor() const noexcept { return anchor_; }

    /// y(s) − y(t).
    Vec3 offset(double s) const;
    Vec3 origin(double s) const { return anchor_ + offset(s); }
    Vec3 origin_velocity(double s) const;
    Vec3 origin_acceleration(double s) const;

    /// True when s lies in [t − horizon, t] (with a relative rounding allowance).
    bool covers(double s) const noexcept;

  private:
    friend FreeFallFrame build_frame(const Trajectory&, const AmbientField&, double, double, FrameOptions);

    struct Knot {
        std::size_t index;
        double theta;
    };
    Knot locate(double s) const;

    double match_time_ = 0.0;
    double horizon_ = 0.0;
    Vec3 anchor_;
    Vec3 anchor_velocity_;
    // Analytic path: offset(u) = v·u + ½·g·u².
    Vec3 uniform_g_;
    // Tabulated path, knots at u_k = −k·step.
    double step_ = 0.0;
    std::vector<Vec3> offsets_;
    std::vector<Vec3> velocities_;
    std::vector<Vec3> accelerations_;
    PointMassField central_;
};

/// Builds the co-moving free-falling frame of a source at time t.
///
/// Zero and uniform fields use the closed-form parabola. A point-mass field is
/// integrated backward from the terminal state with fixed-step RK4; the path
/// throws SingularApproach if it passes within options.softening of the mass.
FreeFallFrame build_frame(const Trajectory& traj, const AmbientField& field, double t, double horizon,
                          FrameOptions options = {});

/// Source position relative to the frame origin at the same instant, x(s) − y(s).
/// Throws PreconditionError for s outside the frame horizon.
Vec3 relative_source_path(const FreeFallFrame& frame, const Trajectory& traj, double s);

}  // namespace lazy_newton
