#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lazy_newton/errors.hpp"
#include "lazy_newton/kinematics.hpp"

namespace {

using lazy_newton::Vec3;
using namespace lazy_newton;

void expect_vec_near(const Vec3& a, const Vec3& b, double tol) {
    EXPECT_NEAR(a.x, b.x, tol);
    EXPECT_NEAR(a.y, b.y, tol);
    EXPECT_NEAR(a.z, b.z, tol);
}

Trajectory orbit(double radius, double omega, double phase = 0.0, Vec3 normal = {0, 0, 1}, Vec3 center = {}) {
    return Trajectory{CircularOrbitPath{center, radius, omega, phase, normal}};
}

TEST(Kinematics, StaticPositionIsConstant) {
    const Trajectory t{StaticPath{{1, 2, 3}}};
    EXPECT_EQ(t.position(-5.0), (Vec3{1, 2, 3}));
    EXPECT_EQ(t.velocity(0.3), Vec3{});
    EXPECT_EQ(t.acceleration(7.0), Vec3{});
}

TEST(Kinematics, OrbitPhaseZeroStateInXyPlane) {
    const Trajectory t = orbit(1.0, 10.0);
    expect_vec_near(t.position(0.0), {1, 0, 0}, 1e-15);
    expect_vec_near(t.velocity(0.0), {0, 10, 0}, 1e-14);
    expect_vec_near(t.acceleration(0.0), {-100, 0, 0}, 1e-12);
}

TEST(Kinematics, UniformAccelerationHalfATSquared) {
    const Trajectory t{UniformAccelerationPath{{}, {}, {0, 0, -9.81}}};
    expect_vec_near(t.position(1.0), {0, 0, -4.905}, 1e-15);
    EXPECT_EQ(t.acceleration(123.0), (Vec3{0, 0, -9.81}));
}

TEST(Kinematics, UniformVelocity) {
    const Trajectory t{UniformVelocityPath{{1, 1, 1}, {3, 0, 0}}};
    EXPECT_EQ(t.velocity(-2.0), (Vec3{3, 0, 0}));
    expect_vec_near(t.position(2.0), {7, 1, 1}, 1e-15);
}

TEST(Kinematics, TiltedOrbitStaysInItsPlane) {
    const Vec3 n = Vec3{1, 1, 1} / std::sqrt(3.0);
    const Vec3 c{0.5, -2, 3};
    const Trajectory t = orbit(2.0, 3.0, 0.4, n, c);
    for (double s : {-1.3, 0.0, 0.77, 5.0}) {
        const Vec3 d = t.position(s) - c;
        EXPECT_NEAR(dot(d, n), 0.0, 1e-14);
        EXPECT_NEAR(norm(d), 2.0, 1e-14);
        // v = Ω n × (x − c)
        expect_vec_near(t.velocity(s), 3.0 * cross(n, d), 1e-13);
    }
}

TEST(Kinematics, BreakpointsOfPiecewiseStatic) {
    const Vec3 a{0, 0, 0.01};
    const Trajectory single{PiecewiseStaticPath{{{0.0, a}}}};
    EXPECT_EQ(single.breakpoints_in(-1, 1), (std::vector<double>{0.0}));

    const Trajectory two{PiecewiseStaticPath{{{0.0, {1, 0, 0}}, {0.5, {2, 0, 0}}}}};
    EXPECT_EQ(two.breakpoints_in(0.1, 2), (std::vector<double>{0.5}));

    EXPECT_TRUE(Trajectory{StaticPath{}}.breakpoints_in(-1e9, 1e9).empty());
    EXPECT_TRUE(orbit(1, 1).breakpoints_in(-10, 10).empty());
    EXPECT_THROW((void)two.breakpoints_in(1, 0), PreconditionError);
}

TEST(Kinematics, PiecewiseStaticIsRightContinuousAndClamped) {
    const Vec3 p1{1, 0, 0};
    const Vec3 p2{0, 2, 0};
    const Trajectory t{PiecewiseStaticPath{{{0.0, p1}, {0.5, p2}}}};
    EXPECT_EQ(t.position(-100.0), p1);
    EXPECT_EQ(t.position(0.25), p1);
    EXPECT_EQ(t.position(0.5), p2);
    EXPECT_EQ(t.position(std::nextafter(0.5, 0.0)), p1);
    EXPECT_EQ(t.velocity(0.5), Vec3{});
    EXPECT_EQ(t.acceleration(0.5), Vec3{});
}

TEST(Kinematics, SampledSplineInterpolatesAndClamps) {
    SampledPath path;
    for (int i = 0; i < 6; ++i) {
        const double s = 0.1 * i;
        path.times.push_back(s);
        path.positions.push_back({2.0 * s + 1.0, -s, 0.5});
    }
    const Trajectory t{path};
    for (std::size_t i = 0; i < path.times.size(); ++i) {
        expect_vec_near(t.position(path.times[i]), path.positions[i], 1e-15);
    }
    // A linear path has zero curvature, so the natural spline is exact.
    expect_vec_near(t.position(0.237), {2.0 * 0.237 + 1.0, -0.237, 0.5}, 1e-14);
    expect_vec_near(t.velocity(0.237), {2.0, -1.0, 0.0}, 1e-13);
    EXPECT_EQ(t.position(-3.0), path.positions.front());
    EXPECT_EQ(t.position(9.0), path.positions.back());
    EXPECT_EQ(t.velocity(-3.0), Vec3{});
    EXPECT_EQ(t.breakpoints_in(-1, 1), (std::vector<double>{0.0, 0.5}));
    EXPECT_EQ(t.breakpoints_in(0.2, 1), (std::vector<double>{0.5}));
}

TEST(Kinematics, SampledSplineTracksSmoothPathInInterior) {
    SampledPath path;
    for (int i = 0; i <= 200; ++i) {
        const double s = 0.01 * i;
        path.times.push_back(s);
        path.positions.push_back({std::sin(s), std::cos(s), s * s});
    }
    const Trajectory t{path};
    const double s = 1.005;
    expect_vec_near(t.position(s), {std::sin(s), std::cos(s), s * s}, 1e-8);
    expect_vec_near(t.velocity(s), {std::cos(s), -std::sin(s), 2 * s}, 1e-5);
    expect_vec_near(t.acceleration(s), {-std::sin(s), -std::cos(s), 2.0}, 1e-3);
}

TEST(Kinematics, InvalidConstructionRejected) {
    EXPECT_THROW(orbit(0.0, 1.0), PreconditionError);
    EXPECT_THROW(orbit(-1.0, 1.0), PreconditionError);
    EXPECT_THROW(orbit(1.0, 1.0, 0.0, {0, 0, 1.001}), PreconditionError);
    EXPECT_THROW((Trajectory{PiecewiseStaticPath{}}), PreconditionError);
    EXPECT_THROW((Trajectory{PiecewiseStaticPath{{{1.0, {}}, {1.0, {}}}}}), PreconditionError);
    EXPECT_THROW((Trajectory{SampledPath{{0, 1, 2}, {{}, {}, {}}}}), PreconditionError);
    EXPECT_THROW((Trajectory{SampledPath{{0, 1, 1, 2}, {{}, {}, {}, {}}}}), PreconditionError);
    EXPECT_THROW((Trajectory{SampledPath{{0, 1, 2, 3}, {{}, {}, {}}}}), PreconditionError);
    EXPECT_THROW((Trajectory{StaticPath{{NAN, 0, 0}}}), PreconditionError);
}

// Taylor residual x(s+h) − x(s) − h·v − ½h²·a scales as h³.
double taylor_residual(const Trajectory& t, double s, double h) {
    return norm(t.position(s + h) - t.position(s) - h * t.velocity(s) - (0.5 * h * h) * t.acceleration(s));
}

TEST(KinematicsProperty, TaylorResidualIsThirdOrderForOrbits) {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> radius(0.1, 5.0);
    std::uniform_real_distribution<double> omega(1.0, 30.0);
    std::uniform_real_distribution<double> phase(-3.0, 3.0);
    std::uniform_real_distribution<double> time(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Trajectory t = orbit(radius(rng), omega(rng), phase(rng));
        const double s = time(rng);
        const double ratio = taylor_residual(t, s, 1e-3) / taylor_residual(t, s, 1e-4);
        EXPECT_NEAR(ratio, 1000.0, 200.0) << "trial " << trial;
    }
}

TEST(KinematicsProperty, TaylorResidualVanishesForPolynomialPaths) {
    const Trajectory paths[] = {
        Trajectory{StaticPath{{1, 2, 3}}},
        Trajectory{UniformVelocityPath{{1, 0, 0}, {3, -2, 1}}},
        Trajectory{UniformAccelerationPath{{0, 1, 0}, {1, 2, 3}, {0, 0, -9.81}}},
    };
    for (const auto& t : paths) {
        for (double s : {-1.0, 0.0, 2.5}) {
            EXPECT_LT(taylor_residual(t, s, 1e-3), 1e-14);
        }
    }
}

TEST(KinematicsProperty, OrbitRadiusIsPreserved) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> time(-100.0, 100.0);
    const Vec3 c{1e3, -2e3, 5};
    const Trajectory t = orbit(2.5, 7.0, 1.0, {0, 0, 1}, c);
    for (int i = 0; i < 200; ++i) {
        EXPECT_NEAR(norm(t.position(time(rng)) - c) / 2.5, 1.0, 1e-12);
    }
}

}  // namespace
