#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sphere_eq/errors.hpp"
#include "sphere_eq/fourier.hpp"
#include "sphere_eq/quadrature.hpp"
#include "sphere_eq/sphere_field.hpp"
#include "test_support.hpp"

using namespace sphere_eq;
using sphere_eq::testing::max_abs_diff;
using sphere_eq::testing::random_band_limited;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(Quadrature, NodesAreLegendreRoots) {
    for (int n : {4, 7, 16, 33}) {
        const GaussRule rule = gauss_legendre(n);
        double wsum = 0.0;
        for (int i = 0; i < n; ++i) {
            EXPECT_NEAR(std::legendre(n, rule.nodes[i]), 0.0, 1e-13);
            if (i > 0) {
                EXPECT_LT(rule.nodes[i - 1], rule.nodes[i]);
            }
            wsum += rule.weights[i];
        }
        EXPECT_NEAR(wsum, 2.0, 1e-14);
    }
}

TEST(Quadrature, ExactForPolynomialsUpToDegree2nMinus1) {
    const int n = 6;
    const GaussRule rule = gauss_legendre(n);
    for (int d = 0; d <= 2 * n - 1; ++d) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], d);
        const double exact = (d % 2 == 1) ? 0.0 : 2.0 / (d + 1);
        EXPECT_NEAR(s, exact, 1e-14) << "degree " << d;
    }
}

TEST(Grid, RejectsInvalidSizes) {
    EXPECT_THROW(make_grid(3, 8), ParameterError);
    EXPECT_THROW(make_grid(4, 6), ParameterError);
    EXPECT_THROW(make_grid(4, 9), ParameterError);
    EXPECT_NO_THROW(make_grid(4, 8));
}

TEST(Grid, SmallestGridIsSymmetricAboutEquator) {
    const GridPtr g = make_grid(4, 8);
    ASSERT_EQ(g->theta_nodes.size(), 4u);
    for (int j = 0; j < 4; ++j) {
        EXPECT_GT(g->theta_nodes[j], 0.0);
        EXPECT_LT(g->theta_nodes[j], pi);
        EXPECT_NEAR(g->theta_nodes[j] + g->theta_nodes[3 - j], pi, 1e-14);
        EXPECT_NEAR(g->theta_weights[j], g->theta_weights[3 - j], 1e-15);
    }
}

TEST(Grid, SphereAreaAtEveryResolution) {
    for (auto [nt, np] : {std::pair{4, 8}, {16, 32}, {33, 64}, {64, 128}}) {
        const GridPtr g = make_grid(nt, np);
        const double area = integrate(ScalarField(g, 1.0));
        EXPECT_NEAR(area, 4 * pi, 1e-12 * 4 * pi) << nt << "x" << np;
    }
}

TEST(Integrate, AnalyticIntegrals) {
    const GridPtr g = make_grid(16, 32);
    EXPECT_NEAR(integrate(eval_on_grid(g, [](double t, double) { return std::cos(t); })), 0.0, 1e-12);
    // int cos^2(theta) sin(theta) dtheta dphi = 2*pi * 2/3
    EXPECT_NEAR(integrate(eval_on_grid(g, [](double t, double) { return std::cos(t) * std::cos(t); })), 4 * pi / 3,
                1e-12);
    EXPECT_NEAR(integrate(eval_on_grid(g, [](double t, double p) { return std::sin(t) * std::cos(p); })), 0.0, 1e-12);
}

TEST(EvalOnGrid, ValuesAndErrors) {
    const GridPtr g = make_grid(8, 16);
    const ScalarField ones = eval_on_grid(g, [](double, double) { return 1.0; });
    for (double v : ones.values()) EXPECT_EQ(v, 1.0);

    const ScalarField c = eval_on_grid(g, [](double t, double) { return std::cos(t); });
    for (int j = 0; j < g->n_theta; ++j)
        for (int k = 1; k < g->n_phi; ++k) EXPECT_EQ(c(j, k), c(j, 0));

    const ScalarField s = eval_on_grid(g, [](double t, double p) { return std::sin(t) * std::cos(2 * p); });
    for (int j = 0; j < g->n_theta; ++j) {
        double mean = 0.0;
        for (double v : s.ring(j)) mean += v / g->n_phi;
        EXPECT_NEAR(mean, 0.0, 1e-12);
    }

    try {
        eval_on_grid(g, [](double t, double) { return t > 1.0 ? std::nan("") : 0.0; });
        FAIL() << "expected EvaluationError";
    } catch (const EvaluationError& e) {
        EXPECT_NE(std::string(e.what()).find("j="), std::string::npos);
    }
}

TEST(DPhi, AnalyticDerivatives) {
    const GridPtr g = make_grid(12, 32);
    const ScalarField u = eval_on_grid(g, [](double t, double p) { return std::cos(2 * p) * std::sin(t); });
    const ScalarField du = eval_on_grid(g, [](double t, double p) { return -2 * std::sin(2 * p) * std::sin(t); });
    EXPECT_LT(max_abs_diff(d_phi(u), du), 1e-12);

    EXPECT_LT(d_phi(ScalarField(g, 3.0)).sup_norm(), 1e-14);

    const ScalarField c = eval_on_grid(g, [](double, double p) { return std::cos(p); });
    EXPECT_LT(max_abs_diff(d_phi(d_phi(c)), -1.0 * c), 1e-12);
}

TEST(Reflect, FixedAndAntiFixedFields) {
    const GridPtr g = make_grid(10, 32);
    const ScalarField u = eval_on_grid(g, [](double t, double p) { return std::cos(2 * p) * std::sin(t); });
    EXPECT_LT(max_abs_diff(reflect_phi(u, pi / 2), u), 1e-12);
    EXPECT_LT(max_abs_diff(reflect_phi(u, pi / 4), -1.0 * u), 1e-12);
}

TEST(Reflect, MatchesPointEvaluationOffGrid) {
    const GridPtr g = make_grid(10, 32);
    auto f = [](double t, double p) { return std::sin(t) * (std::cos(3 * p) + 0.4 * std::sin(5 * p - 0.3)); };
    const ScalarField u = eval_on_grid(g, f);
    const double c = 0.4137;
    const ScalarField v = reflect_phi(u, c);
    const ScalarField expect = eval_on_grid(g, [&](double t, double p) { return f(t, 2 * c - p); });
    EXPECT_LT(max_abs_diff(v, expect), 1e-12);
}

TEST(Reflect, InvolutionCompositionAndDerivativeProperties) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    const GridPtr g = make_grid(16, 32);
    for (int trial = 0; trial < 10; ++trial) {
        const ScalarField u = random_band_limited(g, 12, rng);
        const double scale = u.sup_norm();
        const double c1 = angle(rng), c2 = angle(rng);

        EXPECT_LT(max_abs_diff(reflect_phi(reflect_phi(u, c1), c1), u), 1e-12 * scale);

        const ScalarField composed = reflect_phi(reflect_phi(u, c2), c1);
        EXPECT_LT(max_abs_diff(composed, translate_phi(u, 2 * (c1 - c2))), 1e-12 * scale);

        EXPECT_LT(max_abs_diff(d_phi(reflect_phi(u, c1)), -1.0 * reflect_phi(d_phi(u), c1)),
                  1e-12 * d_phi(u).sup_norm());
    }
}

TEST(Reflect, NyquistModeHandledExactly) {
    // cos(N phi / 2) sampled on the grid reflects to cos(N c) cos(N phi / 2).
    const GridPtr g = make_grid(4, 8);
    const ScalarField u = eval_on_grid(g, [](double, double p) { return std::cos(4 * p); });
    for (double c : {0.0, pi / 8, pi / 4, 0.3}) {
        const ScalarField v = reflect_phi(u, c);
        for (int k = 0; k < 8; ++k) EXPECT_NEAR(v(0, k), std::cos(4 * (2 * c - g->phi(k))), 1e-12) << c;
        // The sin(N phi / 2) part vanishes on the grid, so the map is an
        // involution only for centres on the half-grid.
        if (std::abs(std::cos(8 * c)) == 1.0) {
            EXPECT_LT(max_abs_diff(reflect_phi(v, c), u), 1e-12);
        }
    }
}

TEST(Translate, ShiftsProfile) {
    const GridPtr g = make_grid(6, 16);
    const ScalarField u = eval_on_grid(g, [](double t, double p) { return std::cos(t) + std::sin(t) * std::cos(p); });
    const ScalarField v = translate_phi(u, 0.7);
    const ScalarField expect =
        eval_on_grid(g, [](double t, double p) { return std::cos(t) + std::sin(t) * std::cos(p - 0.7); });
    EXPECT_LT(max_abs_diff(v, expect), 1e-12);
}

TEST(SectorMask, CountsAndArea) {
    const GridPtr g = make_grid(4, 32);
    const SectorMask full = sector_mask(*g, 0.3, 0.3 + 2 * pi);
    EXPECT_EQ(full.columns.size(), 32u);
    EXPECT_NEAR(full.area, 4 * pi, 1e-15);

    const SectorMask none = sector_mask(*g, 1.0, 1.0);
    EXPECT_TRUE(none.empty());
    EXPECT_EQ(none.area, 0.0);

    // Both endpoints sit on grid columns and are excluded.
    const SectorMask half = sector_mask(*g, 0.0, pi);
    EXPECT_EQ(half.columns.size(), 15u);
    EXPECT_NEAR(half.area, 2 * pi, 1e-15);

    const SectorMask wrap = sector_mask(*g, -pi / 4, pi / 4);
    EXPECT_EQ(wrap.columns.size(), 7u);
    EXPECT_TRUE(wrap.member[0]);
    EXPECT_TRUE(wrap.member[31]);

    EXPECT_THROW(sector_mask(*g, 1.0, 0.5), ParameterError);
}

TEST(Fourier, RefineReproducesInterpolant) {
    const GridPtr g = make_grid(4, 16);
    auto f = [](double, double p) { return 0.5 + std::cos(p) - 0.25 * std::sin(3 * p) + 0.125 * std::cos(8 * p); };
    const ScalarField u = eval_on_grid(g, f);
    const RingSpectrum spec = ring_analysis(u);
    const std::vector<double> fine = ring_refine(spec, 4);
    for (int i = 0; i < 64; ++i) {
        const double phi = 2 * pi * i / 64;
        // The Nyquist term is interpolated as a cosine.
        EXPECT_NEAR(fine[i], f(0, phi), 1e-12);
        EXPECT_NEAR(ring_eval(spec, 0, phi), f(0, phi), 1e-12);
    }
}

TEST(ScalarField, ArithmeticAndGridChecks) {
    const GridPtr a = make_grid(4, 8);
    const GridPtr b = make_grid(6, 8);
    ScalarField x(a, 1.0), y(a, 2.0);
    EXPECT_EQ((x + y)(1, 1), 3.0);
    EXPECT_EQ((x - y)(1, 1), -1.0);
    EXPECT_EQ((2.0 * y)(0, 0), 4.0);
    EXPECT_EQ(hadamard(y, y)(3, 7), 4.0);
    EXPECT_THROW(x += ScalarField(b, 1.0), ParameterError);
    EXPECT_THROW(ScalarField(a, std::vector<double>(5)), ParameterError);
}
