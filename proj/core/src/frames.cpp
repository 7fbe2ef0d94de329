#include "lazy_newton/frames.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lazy_newton/constants.hpp"
#include "lazy_newton/errors.hpp"

namespace lazy_newton {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

constexpr double kHorizonSlack = 1e-12;

// Distance from p to the segment [a, b].
double segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 ab = b - a;
    const double len2 = dot(ab, ab);
    const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    return norm(a + t * ab - p);
}

}  // namespace

void validate(const AmbientField& field) {
    std::visit(overloaded{
                   [](const ZeroField&) {},
                   [](const UniformField& f) {
                       if (!is_finite(f.g)) {
                           throw PreconditionError("ambient field: uniform g must be finite");
                       }
                   },
                   [](const PointMassField& f) {
                       if (!is_finite(f.position)) {
                           throw PreconditionError("ambient field: point mass position must be finite");
                       }
                       if (!(f.mass > 0.0) || !std::isfinite(f.mass)) {
                           throw PreconditionError("ambient field: point mass must be > 0");
                       }
                   },
               },
               field);
}

Vec3 ambient_accel(const AmbientField& field, const Vec3& x, double /*s*/) {
    return std::visit(overloaded{
                          [](const ZeroField&) { return Vec3{}; },
                          [](const UniformField& f) { return f.g; },
                          [&x](const PointMassField& f) {
                              const Vec3 d = x - f.position;
                              const double r = norm(d);
                              if (r == 0.0) {
                                  throw SingularApproach("ambient field evaluated at the point-mass position", 0.0);
                              }
                              return d * (-kGravitationalConstant * f.mass / (r * r * r));
                          },
                      },
                      field);
}

Vec3 nongrav_accel(const Trajectory& traj, const AmbientField& field, double s) {
    return traj.acceleration(s) - ambient_accel(field, traj.position(s), s);
}

bool FreeFallFrame::covers(double s) const noexcept {
    const double slack = kHorizonSlack * std::max({horizon_, std::abs(match_time_), 1e-300});
    const double u = s - match_time_;
    return u <= slack && u >= -horizon_ - slack;
}

FreeFallFrame::Knot FreeFallFrame::locate(double s) const {
    // Interval between knot k+1 (earlier) and knot k; theta runs 0 → 1 forward in time.
    const double back = (match_time_ - s) / step_;
    const std::size_t last = offsets_.size() - 2;
    std::size_t k = back <= 0.0 ? 0 : static_cast<std::size_t>(std::floor(back));
    k = std::min(k, last);
    const double theta = std::clamp(static_cast<double>(k + 1) - back, 0.0, 1.0);
    return {k, theta};
}

Vec3 FreeFallFrame::offset(double s) const {
    const double u = s - match_time_;
    if (!tabulated()) {
        return anchor_velocity_ * u + (0.5 * u * u) * uniform_g_;
    }
    // Quintic Hermite through position, velocity and acceleration at both knots.
    const auto [k, t] = locate(s);
    const double h = step_;
    const Vec3& p0 = offsets_[k + 1];
    const Vec3& p1 = offsets_[k];
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double t4 = t3 * t;
    const double t5 = t4 * t;
    const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
    const double h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    const double h3 = 10 * t3 - 15 * t4 + 6 * t5;
    const double h4 = -4 * t3 + 7 * t4 - 3 * t5;
    const double h5 = 0.5 * t3 - t4 + 0.5 * t5;
    return p0 + h3 * (p1 - p0) + (h1 * h) * velocities_[k + 1] + (h2 * h * h) * accelerations_[k + 1] +
           (h4 * h) * velocities_[k] + (h5 * h * h) * accelerations_[k];
}

Vec3 FreeFallFrame::origin_velocity(double s) const {
    const double u = s - match_time_;
    if (!tabulated()) {
        return anchor_velocity_ + u * uniform_g_;
    }
    const auto [k, t] = locate(s);
    const double h = step_;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double t4 = t3 * t;
    const double d1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    const double d2 = t - 4.5 * t2 + 6 * t3 - 2.5 * t4;
    const double d3 = 30 * t2 - 60 * t3 + 30 * t4;
    const double d4 = -12 * t2 + 28 * t3 - 15 * t4;
    const double d5 = 1.5 * t2 - 4 * t3 + 2.5 * t4;
    const Vec3& p0 = offsets_[k + 1];
    const Vec3& p1 = offsets_[k];
    return (d3 / h) * (p1 - p0) + d1 * velocities_[k + 1] + (d2 * h) * accelerations_[k + 1] +
           d4 * velocities_[k] + (d5 * h) * accelerations_[k];
}

Vec3 FreeFallFrame::origin_acceleration(double s) const {
    if (!tabulated()) {
        return uniform_g_;
    }
    return ambient_accel(central_, origin(s), s);
}

FreeFallFrame build_frame(const Trajectory& traj, const AmbientField& field, double t, double horizon,
                          FrameOptions options) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw PreconditionError("build_frame: horizon must be > 0");
    }
    FreeFallFrame frame;
    frame.match_time_ = t;
    frame.horizon_ = horizon;
    frame.anchor_ = traj.position(t);
    frame.anchor_velocity_ = traj.velocity(t);

    if (const auto* uniform = std::get_if<UniformField>(&field)) {
        frame.uniform_g_ = uniform->g;
        return frame;
    }
    const auto* point = std::get_if<PointMassField>(&field);
    if (point == nullptr) {
        return frame;
    }

    const double step = options.step > 0.0 ? options.step : horizon / 4000.0;
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
    const std::size_t count = std::max<std::size_t>(steps, 1) + 1;
    frame.step_ = step;
    frame.offsets_.reserve(count);
    frame.velocities_.reserve(count);
    frame.accelerations_.reserve(count);

    const Vec3 anchor = frame.anchor_;
    auto accel = [&](const Vec3& z) {
        const Vec3 d = anchor + z - point->position;
        const double r = norm(d);
        if (r < options.softening) {
            std::ostringstream msg;
            msg << "build_frame: free-fall path passes within " << r << " m of the ambient point mass";
            throw SingularApproach(msg.str(), r);
        }
        return d * (-kGravitationalConstant * point->mass / (r * r * r));
    };

    // RK4 substeps capped at 1e-3 of the local free-fall time √(r³/GM).
    const double gm = kGravitationalConstant * point->mass;
    constexpr double kSubstepFraction = 1e-3;
    constexpr std::size_t kMaxSubsteps = 10'000'000;
    std::size_t substeps = 0;
    Vec3 z{};
    Vec3 zd = frame.anchor_velocity_;
    Vec3 zdd = accel(z);
    frame.central_ = *point;
    frame.offsets_.push_back(z);
    frame.velocities_.push_back(zd);
    frame.accelerations_.push_back(zdd);
    for (std::size_t k = 1; k < count; ++k) {
        double remaining = step;
        while (remaining > 0.0) {
            const double r = norm(anchor + z - point->position);
            const double local = kSubstepFraction * std::sqrt(r * r * r / gm);
            const double dt = local < remaining ? local : remaining;
            const double h = -dt;
            const Vec3 k1v = zdd;
            const Vec3 k1x = zd;
            const Vec3 k2x = zd + (0.5 * h) * k1v;
            const Vec3 k2v = accel(z + (0.5 * h) * k1x);
            const Vec3 k3x = zd + (0.5 * h) * k2v;
            const Vec3 k3v = accel(z + (0.5 * h) * k2x);
            const Vec3 k4x = zd + h * k3v;
            const Vec3 k4v = accel(z + h * k3x);
            const Vec3 previous = z;
            z += (h / 6.0) * (k1x + 2.0 * (k2x + k3x) + k4x);
            zd += (h / 6.0) * (k1v + 2.0 * (k2v + k3v) + k4v);
            if (!is_finite(z) || !is_finite(zd) || ++substeps > kMaxSubsteps) {
                throw NumericError("build_frame: free-fall integration failed to stay finite and resolved");
            }
            const double chord = segment_distance(point->position, anchor + previous, anchor + z);
            if (chord < options.softening) {
                std::ostringstream msg;
                msg << "build_frame: free-fall path passes within " << chord << " m of the ambient point mass";
                throw SingularApproach(msg.str(), chord);
            }
            zdd = accel(z);
            remaining = dt < remaining ? remaining - dt : 0.0;
        }
        frame.offsets_.push_back(z);
        frame.velocities_.push_back(zd);
        frame.accelerations_.push_back(zdd);
    }
    return frame;
}

Vec3 relative_source_path(const FreeFallFrame& frame, const Trajectory& traj, double s) {
    if (!frame.covers(s)) {
        std::ostringstream msg;
        msg << "relative_source_path: time " << s << " outside frame horizon ["
            << frame.match_time() - frame.horizon() << ", " << frame.match_time() << "]";
        throw PreconditionError(msg.str());
    }
    return (traj.position(s) - frame.anchor()) - frame.offset(s);
}

}  // namespace lazy_newton
