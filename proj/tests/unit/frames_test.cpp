#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lazy_newton/constants.hpp"
#include "lazy_newton/errors.hpp"
#include "lazy_newton/frames.hpp"

namespace {

using namespace lazy_newton;

constexpr double kG0 = 9.81;
const AmbientField kEarthLike = UniformField{{0, 0, -kG0}};

void expect_vec_near(const Vec3& a, const Vec3& b, double tol) {
    EXPECT_NEAR(a.x, b.x, tol);
    EXPECT_NEAR(a.y, b.y, tol);
    EXPECT_NEAR(a.z, b.z, tol);
}

// Circular Kepler orbit about a point mass; purely gravitational motion.
struct KeplerScene {
    double central_mass = 1e10;
    double radius = 10.0;
    Vec3 center{2.0, -1.0, 0.5};
    double omega() const { return std::sqrt(kGravitationalConstant * central_mass / (radius * radius * radius)); }
    AmbientField field() const { return PointMassField{center, central_mass}; }
    Trajectory source(double phase = 0.3) const {
        return Trajectory{CircularOrbitPath{center, radius, omega(), phase, {0, 0, 1}}};
    }
};

TEST(Ambient, Variants) {
    EXPECT_EQ(ambient_accel(ZeroField{}, {1, 2, 3}, 0.0), Vec3{});
    EXPECT_EQ(ambient_accel(kEarthLike, {1, 2, 3}, 5.0), (Vec3{0, 0, -9.81}));
}

TEST(Ambient, PointMassAtEarthSurface) {
    const AmbientField earth = PointMassField{{}, 5.972e24};
    const Vec3 a = ambient_accel(earth, {6.371e6, 0, 0}, 0.0);
    EXPECT_NEAR(norm(a), 9.82, 0.005);
    EXPECT_LT(a.x, 0.0);
    EXPECT_EQ(a.y, 0.0);
    EXPECT_THROW((void)ambient_accel(earth, {}, 0.0), SingularApproach);
}

TEST(Ambient, ValidationRejectsBadParameters) {
    EXPECT_THROW(validate(AmbientField{PointMassField{{}, 0.0}}), PreconditionError);
    EXPECT_THROW(validate(AmbientField{UniformField{{0, 0, INFINITY}}}), PreconditionError);
    EXPECT_NO_THROW(validate(kEarthLike));
}

TEST(NongravAccel, SupportForceOfStaticSource) {
    const Trajectory source{StaticPath{}};
    EXPECT_EQ(nongrav_accel(source, kEarthLike, 0.0), (Vec3{0, 0, 9.81}));
}

TEST(NongravAccel, FreeFallHasNone) {
    const Trajectory source{UniformAccelerationPath{{}, {1, 0, 0}, {0, 0, -9.81}}};
    EXPECT_EQ(nongrav_accel(source, kEarthLike, 0.7), Vec3{});
}

TEST(NongravAccel, OrbitInZeroFieldIsCentripetal) {
    const Trajectory source{CircularOrbitPath{{}, 1.0, 10.0, 0.0, {0, 0, 1}}};
    expect_vec_near(nongrav_accel(source, ZeroField{}, 0.0), {-100, 0, 0}, 1e-12);
}

TEST(BuildFrame, ZeroFieldGivesInertialTangentLine) {
    const Trajectory source{CircularOrbitPath{{}, 1.0, 10.0, 0.0, {0, 0, 1}}};
    const FreeFallFrame frame = build_frame(source, ZeroField{}, 0.0, 0.04);
    EXPECT_FALSE(frame.tabulated());
    for (double s : {0.0, -0.01, -0.04}) {
        expect_vec_near(frame.origin(s), Vec3{1, 0, 0} + s * Vec3{0, 10, 0}, 1e-14);
    }
}

TEST(BuildFrame, UniformFieldGivesFreeFallParabola) {
    const Trajectory source{StaticPath{}};
    const FreeFallFrame frame = build_frame(source, kEarthLike, 0.0, 1.0);
    for (double s : {0.0, -0.3, -1.0}) {
        expect_vec_near(frame.origin(s), (0.5 * s * s) * Vec3{0, 0, -kG0}, 1e-15);
        expect_vec_near(frame.origin_acceleration(s), {0, 0, -kG0}, 0.0);
    }
}

TEST(BuildFrame, RejectsNonPositiveHorizon) {
    EXPECT_THROW((void)build_frame(Trajectory{StaticPath{}}, ZeroField{}, 0.0, 0.0), PreconditionError);
}

TEST(BuildFrame, TabulatedFrameTracksKeplerOrbit) {
    const KeplerScene scene;
    const Trajectory source = scene.source();
    const double horizon = 4.0;
    const FreeFallFrame frame =
        build_frame(source, scene.field(), 0.0, horizon, FrameOptions{1e-3, 1e-9});
    ASSERT_TRUE(frame.tabulated());
    EXPECT_EQ(frame.table_size(), 4001u);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> time(-horizon, 0.0);
    for (int i = 0; i < 200; ++i) {
        const double s = time(rng);
        const Vec3 exact = source.position(s);
        EXPECT_LT(norm(frame.origin(s) - exact), 1e-12 * scene.radius);
        EXPECT_LT(norm(frame.origin_velocity(s) - source.velocity(s)), 1e-12 * scene.radius * scene.omega());
    }
}

TEST(BuildFrame, TabulatedPathObeysAmbientAcceleration) {
    const KeplerScene scene;
    // A supported (non-free) source: the frame is still a free-fall path.
    const Trajectory source{StaticPath{scene.center + Vec3{scene.radius, 0, 0}}};
    const double tau_g = 1e-3;
    const FreeFallFrame frame = build_frame(source, scene.field(), 0.0, 40 * tau_g, FrameOptions{tau_g / 100, 1e-9});
    // Second differences of the interpolated origin, independent of how the
    // frame reports its own acceleration.
    const double h = 2e-3;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> time(-40 * tau_g + h, -h);
    for (int i = 0; i < 200; ++i) {
        const double s = time(rng);
        const Vec3 ambient = ambient_accel(scene.field(), frame.origin(s), s);
        const Vec3 second = (frame.offset(s + h) - 2.0 * frame.offset(s) + frame.offset(s - h)) / (h * h);
        EXPECT_LT(norm(second - ambient), 1e-9 * norm(ambient));
        EXPECT_LT(norm(frame.origin_acceleration(s) - ambient), 1e-15 * norm(ambient));
    }
}

TEST(BuildFrame, PathIntoPointMassIsReported) {
    // Released from rest 1 mm from a heavy mass: the backward free-fall path
    // reaches the mass within a fraction of a millisecond.
    const AmbientField field = PointMassField{{}, 1e10};
    const Trajectory source{StaticPath{{1e-3, 0, 0}}};
    EXPECT_THROW((void)build_frame(source, field, 0.0, 0.04, FrameOptions{1e-5, 1e-6}), SingularApproach);
}

TEST(RelativePath, StaticSourceRisesAlongTheParabola) {
    const Trajectory source{StaticPath{}};
    const FreeFallFrame frame = build_frame(source, kEarthLike, 0.0, 0.04);
    for (double tau : {1e-4, 1e-3, 0.02}) {
        expect_vec_near(relative_source_path(frame, source, -tau), {0, 0, 0.5 * kG0 * tau * tau}, 1e-18);
    }
}

TEST(RelativePath, OrbitInZeroField) {
    const double R = 1.0;
    const double omega = 10.0;
    const Trajectory source{CircularOrbitPath{{}, R, omega, 0.0, {0, 0, 1}}};
    const FreeFallFrame frame = build_frame(source, ZeroField{}, 0.0, 0.04);
    for (double tau : {1e-4, 1e-3, 0.02}) {
        const double a = omega * tau;
        expect_vec_near(relative_source_path(frame, source, -tau),
                        {R * (std::cos(a) - 1.0), R * (a - std::sin(a)), 0.0}, 1e-15);
    }
}

TEST(RelativePath, OutsideHorizonIsAnError) {
    const Trajectory source{StaticPath{}};
    const FreeFallFrame frame = build_frame(source, kEarthLike, 1.0, 0.04);
    EXPECT_NO_THROW((void)relative_source_path(frame, source, 0.96));
    EXPECT_THROW((void)relative_source_path(frame, source, 0.95), PreconditionError);
    EXPECT_THROW((void)relative_source_path(frame, source, 1.01), PreconditionError);
}

TEST(FramesProperty, FreeFallingSourcesSitAtTheFrameOrigin) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec3 g{u(rng), u(rng), -9.81 + u(rng)};
        const Vec3 p0{10 * u(rng), 10 * u(rng), 10 * u(rng)};
        const Vec3 v0{5 * u(rng), 5 * u(rng), 5 * u(rng)};
        const AmbientField field = UniformField{g};
        const Trajectory source{UniformAccelerationPath{p0, v0, g}};
        const double t = u(rng);
        const FreeFallFrame frame = build_frame(source, field, t, 0.1);
        for (double tau : {0.0, 0.01, 0.05, 0.1}) {
            EXPECT_LT(norm(relative_source_path(frame, source, t - tau)), 1e-10 * 10.0);
        }
    }
    const KeplerScene scene;
    for (double phase : {0.0, 1.0, 2.5}) {
        const Trajectory source = scene.source(phase);
        const FreeFallFrame frame = build_frame(source, scene.field(), 0.0, 4.0, FrameOptions{1e-3, 1e-9});
        for (double tau : {0.0, 0.1, 1.7, 4.0}) {
            EXPECT_LT(norm(relative_source_path(frame, source, -tau)), 1e-10 * scene.radius);
        }
    }
}

TEST(FramesProperty, GalileanBoostLeavesRelativePathUnchanged) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Trajectory rest{StaticPath{{0.1, 0.2, 0.3}}};
    for (double speed : {1.0, 1e3, 1e6}) {
        const Vec3 v = speed * Vec3{u(rng), u(rng), u(rng)};
        const Trajectory boosted{UniformVelocityPath{{0.1, 0.2, 0.3}, v}};
        const double t = 0.37;
        const FreeFallFrame f_rest = build_frame(rest, kEarthLike, t, 0.04);
        const FreeFallFrame f_boost = build_frame(boosted, kEarthLike, t, 0.04);
        for (double tau : {1e-3, 1e-2, 0.04}) {
            const Vec3 a = relative_source_path(f_rest, rest, t - tau);
            const Vec3 b = relative_source_path(f_boost, boosted, t - tau);
            // Relative to the scene scale set by the boosted displacement over the horizon.
            EXPECT_LT(norm(a - b), 1e-12 * std::max(1.0, speed * 0.04 + norm(v) * t));
        }
    }
}

TEST(FramesProperty, TerminalMatching) {
    const Trajectory sources[] = {
        Trajectory{StaticPath{{1, 2, 3}}},
        Trajectory{CircularOrbitPath{{}, 1.0, 10.0, 0.2, {0, 0, 1}}},
        Trajectory{UniformAccelerationPath{{}, {3, 0, 0}, {0, 1, 2}}},
    };
    for (const auto& source : sources) {
        const FreeFallFrame frame = build_frame(source, kEarthLike, 0.5, 0.04);
        EXPECT_LT(norm(relative_source_path(frame, source, 0.5)), 1e-15);
        EXPECT_LT(norm(source.velocity(0.5) - frame.origin_velocity(0.5)), 1e-12);
        // One-sided difference: |x'(t−h)| = O(h²) when x' and its derivative vanish at t.
        const double h = 1e-6;
        EXPECT_LT(norm(relative_source_path(frame, source, 0.5 - h)) / h, 1e-4);
    }
}

}  // namespace
