#include "lazy_newton/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lazy_newton/errors.hpp"

namespace lazy_newton {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void require_finite(const Vec3& v, const char* what) {
    if (!is_finite(v)) {
        throw PreconditionError(std::string("trajectory: ") + what + " must be finite");
    }
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw PreconditionError(std::string("trajectory: ") + what + " must be finite");
    }
}

// Natural spline second derivatives (Thomas algorithm on the standard tridiagonal system).
std::vector<Vec3> natural_spline_curvature(const std::vector<double>& t, const std::vector<Vec3>& p) {
    const std::size_t n = t.size();
    std::vector<Vec3> m(n);
    std::vector<double> diag(n, 1.0);
    std::vector<double> upper(n, 0.0);
    std::vector<Vec3> rhs(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = t[i] - t[i - 1];
        const double h1 = t[i + 1] - t[i];
        const double lower = h0 / 6.0;
        diag[i] = (h0 + h1) / 3.0;
        upper[i] = h1 / 6.0;
        rhs[i] = (p[i + 1] - p[i]) / h1 - (p[i] - p[i - 1]) / h0;
        // forward elimination against row i-1
        const double factor = lower / diag[i - 1];
        diag[i] -= factor * upper[i - 1];
        rhs[i] -= factor * rhs[i - 1];
    }
    for (std::size_t i = n - 1; i-- > 1;) {
        m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
    }
    return m;
}

}  // namespace

Trajectory::Trajectory(TrajectorySpec spec) : spec_(std::move(spec)) {
    std::visit(
        overloaded{
            [](const StaticPath& p) { require_finite(p.position, "position"); },
            [](const UniformVelocityPath& p) {
                require_finite(p.position, "position");
                require_finite(p.velocity, "velocity");
            },
            [](const UniformAccelerationPath& p) {
                require_finite(p.position, "position");
                require_finite(p.velocity, "velocity");
                require_finite(p.acceleration, "acceleration");
            },
            [this](const CircularOrbitPath& p) {
                require_finite(p.center, "center");
                require_finite(p.normal, "normal");
                require_finite(p.angular_frequency, "angular frequency");
                require_finite(p.phase, "phase");
                if (!(p.radius > 0.0) || !std::isfinite(p.radius)) {
                    throw PreconditionError("trajectory: circular orbit radius must be > 0");
                }
                if (std::abs(norm(p.normal) - 1.0) > 1e-12) {
                    throw PreconditionError("trajectory: circular orbit normal must be a unit vector");
                }
                const Vec3 ref = std::abs(p.normal.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
                const Vec3 in_plane = ref - dot(ref, p.normal) * p.normal;
                axis1_ = in_plane / norm(in_plane);
                axis2_ = cross(p.normal, axis1_);
            },
            [](const PiecewiseStaticPath& p) {
                if (p.epochs.empty()) {
                    throw PreconditionError("trajectory: piecewise-static path needs at least one epoch");
                }
                for (std::size_t i = 0; i < p.epochs.size(); ++i) {
                    require_finite(p.epochs[i].time, "epoch time");
                    require_finite(p.epochs[i].position, "epoch position");
                    if (i > 0 && !(p.epochs[i].time > p.epochs[i - 1].time)) {
                        throw PreconditionError("trajectory: epoch times must be strictly increasing");
                    }
                }
            },
            [this](const SampledPath& p) {
                if (p.times.size() != p.positions.size()) {
                    throw PreconditionError("trajectory: sampled path needs one position per time");
                }
                if (p.times.size() < 4) {
                    throw PreconditionError("trajectory: sampled path needs at least 4 samples");
                }
                for (std::size_t i = 0; i < p.times.size(); ++i) {
                    require_finite(p.times[i], "sample time");
                    require_finite(p.positions[i], "sample position");
                    if (i > 0 && !(p.times[i] > p.times[i - 1])) {
                        throw PreconditionError("trajectory: sample times must be strictly increasing");
                    }
                }
                curvature_ = natural_spline_curvature(p.times, p.positions);
            },
        },
        spec_);
}

Trajectory::State Trajectory::spline_state(const SampledPath& path, double s) const {
    const auto& t = path.times;
    const auto& p = path.positions;
    if (s <= t.front()) {
        return {p.front(), {}, {}};
    }
    if (s >= t.back()) {
        return {p.back(), {}, {}};
    }
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
    const double h = t[i + 1] - t[i];
    const double a = (t[i + 1] - s) / h;
    const double b = (s - t[i]) / h;
    const Vec3& m0 = curvature_[i];
    const Vec3& m1 = curvature_[i + 1];
    State st;
    st.position = a * p[i] + b * p[i + 1] + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * (h * h / 6.0);
    st.velocity = (p[i + 1] - p[i]) / h - ((3.0 * a * a - 1.0) * h / 6.0) * m0 +
                  ((3.0 * b * b - 1.0) * h / 6.0) * m1;
    st.acceleration = a * m0 + b * m1;
    return st;
}

Trajectory::State Trajectory::state(double s) const {
    return std::visit(
        overloaded{
            [](const StaticPath& p) { return State{p.position, {}, {}}; },
            [s](const UniformVelocityPath& p) { return State{p.position + p.velocity * s, p.velocity, {}}; },
            [s](const UniformAccelerationPath& p) {
                return State{p.position + p.velocity * s + (0.5 * s * s) * p.acceleration,
                             p.velocity + p.acceleration * s, p.acceleration};
            },
            [this, s](const CircularOrbitPath& p) {
                const double angle = p.angular_frequency * s + p.phase;
                const double c = std::cos(angle);
                const double sn = std::sin(angle);
                const Vec3 radial = c * axis1_ + sn * axis2_;
                const Vec3 tangent = -sn * axis1_ + c * axis2_;
                const double w = p.angular_frequency;
                return State{p.center + p.radius * radial, (p.radius * w) * tangent,
                             (-p.radius * w * w) * radial};
            },
            [s](const PiecewiseStaticPath& p) {
                const auto it = std::upper_bound(p.epochs.begin(), p.epochs.end(), s,
                                                 [](double v, const Epoch& e) { return v < e.time; });
                const Epoch& e = it == p.epochs.begin() ? p.epochs.front() : *(it - 1);
                return State{e.position, {}, {}};
            },
            [this, s](const SampledPath& p) { return spline_state(p, s); },
        },
        spec_);
}

Vec3 Trajectory::position(double s) const { return state(s).position; }
Vec3 Trajectory::velocity(double s) const { return state(s).velocity; }
Vec3 Trajectory::acceleration(double s) const { return state(s).acceleration; }

std::vector<double> Trajectory::breakpoints_in(double t_lo, double t_hi) const {
    if (t_lo > t_hi) {
        throw PreconditionError("breakpoints_in: window must satisfy t_lo <= t_hi");
    }
    std::vector<double> out;
    auto take = [&](double t) {
        if (t >= t_lo && t <= t_hi) {
            out.push_back(t);
        }
    };
    if (const auto* pw = std::get_if<PiecewiseStaticPath>(&spec_)) {
        for (const auto& e : pw->epochs) {
            take(e.time);
        }
    } else if (const auto* sp = std::get_if<SampledPath>(&spec_)) {
        take(sp->times.front());
        take(sp->times.back());
    }
    return out;
}

}  // namespace lazy_newton
