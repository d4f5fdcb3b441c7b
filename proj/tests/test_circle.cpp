#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sphere_eq/circle.hpp"
#include "sphere_eq/errors.hpp"

using namespace sphere_eq;

namespace {
constexpr double pi = std::numbers::pi;
double normal_form(double lambda, int k) { return std::sqrt(4 * (lambda - k * k) / (3 * lambda)); }
}  // namespace

TEST(Circle, AtOrBelowThresholdIsTrivial) {
    for (int k : {1, 2, 3}) {
        for (double lam : {0.5 * k * k, 1.0 * k * k}) {
            const CircleProfile p = circle_solve(lam, k, 64);
            EXPECT_TRUE(p.trivial);
            EXPECT_EQ(p.amplitude, 0.0);
            for (double v : p.values) EXPECT_EQ(v, 0.0);
        }
    }
}

TEST(Circle, NormalFormAmplitude) {
    for (double lam : {1.05, 1.1, 1.2}) {
        const CircleProfile p = circle_solve(lam, 1, 128);
        EXPECT_FALSE(p.trivial);
        EXPECT_LE(p.residual_norm, 1e-10);
        EXPECT_NEAR(p.amplitude, normal_form(lam, 1), 0.1 * normal_form(lam, 1)) << lam;
    }
}

TEST(Circle, SolvesTheOdeAtSamplesAndPhaseIsFixed) {
    // Independent check with centred second differences on a fine grid.
    const double lam = 2.0;
    const CircleProfile p = circle_solve(lam, 1, 64);
    EXPECT_GT(p.value(0.0), 0.0);
    EXPECT_NEAR(p.derivative(0.0), 0.0, 1e-12);
    const double h = 1e-3;
    for (double phi = 0.0; phi < 2 * pi; phi += 0.37) {
        const double upp = (p.value(phi + h) - 2 * p.value(phi) + p.value(phi - h)) / (h * h);
        const double u = p.value(phi);
        EXPECT_NEAR(upp + lam * u * (1 - u * u), 0.0, 1e-5);
    }
    for (int i = 0; i < p.n; ++i) EXPECT_NEAR(p.values[i], p.value(2 * pi * i / p.n), 1e-14);
}

TEST(Circle, HigherModesHaveMatchingPeriod) {
    const CircleProfile p = circle_solve(10.0, 2, 128);
    for (double phi : {0.1, 0.9, 2.0}) EXPECT_NEAR(p.value(phi + pi), p.value(phi), 1e-12);
    // One period of u'' + lambda u(1-u^2) with period pi is the k=1 profile at lambda/4, rescaled.
    const CircleProfile q = circle_solve(2.5, 1, 128);
    EXPECT_NEAR(p.amplitude, q.amplitude, 1e-10);
}

TEST(Circle, ExtremaEvenlySpaced) {
    for (int k : {1, 2, 3}) {
        const CircleProfile p = circle_solve(1.5 * k * k, k, 96);
        const auto ext = circle_extrema(p);
        ASSERT_EQ(ext.size(), static_cast<std::size_t>(2 * k));
        for (std::size_t i = 0; i < ext.size(); ++i) EXPECT_NEAR(ext[i], i * pi / k, 1e-8) << k;
    }
}

TEST(Circle, AmplitudeGrowsWithLambda) {
    double prev = 0.0;
    for (double lam : {1.1, 1.2, 1.5, 2.0, 4.0}) {
        const CircleProfile p = circle_solve(lam, 1, 64);
        EXPECT_GT(p.amplitude, prev);
        EXPECT_LT(p.amplitude, 1.0);
        prev = p.amplitude;
    }
}

TEST(Circle, RejectsBadArguments) {
    EXPECT_THROW(circle_solve(2.0, 0, 64), ParameterError);
    EXPECT_THROW(circle_solve(2.0, 1, 4), ParameterError);
}
