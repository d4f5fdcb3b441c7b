#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sphere_eq/errors.hpp"
#include "sphere_eq/solver.hpp"
#include "sphere_eq/symmetry.hpp"
#include "test_support.hpp"

using namespace sphere_eq;
using sphere_eq::testing::max_abs_diff;

namespace {

constexpr double pi = std::numbers::pi;

ScalarField field(const GridPtr& g, double (*h)(double, double)) { return eval_on_grid(g, h); }

double circ_dist(double a, double b) {
    const double d = std::fmod(std::abs(a - b), 2 * pi);
    return std::min(d, 2 * pi - d);
}

// Gap-free index lookup: the extremum closest to `phi`.
int nearest(const AxialExtremumSet& ext, double phi) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(ext.size()); ++i)
        if (circ_dist(ext.angles[i], phi) < circ_dist(ext.angles[best], phi)) best = i;
    return best;
}

AxialExtremumSet make_set(std::vector<double> angles) {
    AxialExtremumSet ext;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        ext.kinds.push_back(i % 2 ? ExtremumKind::min : ExtremumKind::max);
        ext.axiality_defect.push_back(0.0);
        ext.merged.push_back(false);
    }
    ext.angles = std::move(angles);
    return ext;
}

Equilibrium equilibrium_22(const OperatorHandle& op) {
    ScalarField y = harmonic_mode(op.grid_ptr(), 2, 2);
    y *= 0.3 / y.sup_norm();
    return newton_solve(chafee_infante(6.5), op, y);
}

}  // namespace

TEST(Detect, SinCosModesAreSound) {
    const GridPtr g = make_grid(16, 32);
    for (int m = 1; m <= 6; ++m) {
        const ScalarField u = eval_on_grid(g, [m](double t, double p) { return std::sin(t) * std::cos(m * p); });
        const AxialExtremumSet ext = detect_axial_extrema(u);
        ASSERT_EQ(ext.size(), static_cast<std::size_t>(2 * m)) << m;
        EXPECT_FALSE(ext.all_critical);
        EXPECT_TRUE(ext.non_axial.empty());
        for (int i = 0; i < 2 * m; ++i) {
            EXPECT_NEAR(ext.angles[i], i * pi / m, 1e-10) << m;
            EXPECT_EQ(ext.kinds[i], i % 2 ? ExtremumKind::min : ExtremumKind::max);
            EXPECT_LT(ext.axiality_defect[i], 1e-10);
            EXPECT_FALSE(ext.merged[i]);
        }
    }
}

TEST(Detect, AxisymmetricFieldIsAllCritical) {
    const GridPtr g = make_grid(16, 32);
    const AxialExtremumSet ext = detect_axial_extrema(field(g, [](double t, double) { return std::cos(t); }));
    EXPECT_TRUE(ext.all_critical);
    EXPECT_EQ(ext.size(), 0u);
}

TEST(Detect, DriftingCriticalCurveIsNotAxial) {
    // u_phi = 0 where tan(2 phi) = 0.3 sin(theta): the critical curve bends with theta.
    const GridPtr g = make_grid(24, 48);
    const ScalarField u = field(g, [](double t, double p) {
        return std::sin(t) * std::cos(2 * p) + 0.3 * std::sin(t) * std::sin(t) * std::cos(2 * p - pi / 2);
    });
    const AxialExtremumSet ext = detect_axial_extrema(u);
    EXPECT_EQ(ext.size(), 0u);
    EXPECT_FALSE(ext.non_axial.empty());
    EXPECT_EQ(theorem_audit(u).verdict, Verdict::hypotheses_not_met);
}

TEST(Detect, ConstantFieldIsDegenerate) {
    const GridPtr g = make_grid(8, 16);
    EXPECT_THROW(detect_axial_extrema(ScalarField(g, 3.0)), DegenerateInputError);
    EXPECT_THROW(theorem_audit(ScalarField(g, 3.0)), DegenerateInputError);
    EXPECT_THROW(detect_axial_extrema(harmonic_mode(g, 1, 1), 0.0), ParameterError);
}

TEST(Leveled, ExactAndPerturbed) {
    const GridPtr g = make_grid(24, 48);
    const ScalarField even = field(g, [](double t, double p) { return std::sin(t) * std::cos(2 * p); });
    const LeveledResult a = check_leveled(detect_axial_extrema(even), even);
    EXPECT_TRUE(a.applicable);
    EXPECT_LT(a.level_defect, 1e-12);
    EXPECT_TRUE(a.pass);

    // Maxima at 0 and pi carry 1.05 sin(theta) and 0.95 sin(theta); the minima
    // agree by the phi -> -phi symmetry. Grid span is 2.05 max sin(theta_j).
    const ScalarField tilted =
        field(g, [](double t, double p) { return std::sin(t) * (std::cos(2 * p) + 0.05 * std::cos(p)); });
    const AxialExtremumSet ext = detect_axial_extrema(tilted);
    ASSERT_EQ(ext.size(), 4u);
    const LeveledResult b = check_leveled(ext, tilted);
    EXPECT_NEAR(b.level_defect, 0.05 / 2.05, 1e-10);
    EXPECT_FALSE(b.pass);

    EXPECT_FALSE(check_leveled(AxialExtremumSet{}, tilted).applicable);
}

TEST(Reflection, EvenAndOddFields) {
    const GridPtr g = make_grid(24, 48);
    const ScalarField c = field(g, [](double t, double p) { return std::sin(t) * std::cos(2 * p); });
    const ScalarField s = field(g, [](double t, double p) { return std::sin(t) * std::sin(2 * p); });
    EXPECT_LT(check_reflection(c, 0.0, -pi / 2, 0.0), 1e-12);
    EXPECT_LT(check_reflection(c, pi / 2, 0.0, pi / 2), 1e-12);
    EXPECT_NEAR(check_reflection(s, 0.0, -pi / 2, 0.0), 1.0, 1e-12);
    EXPECT_THROW(check_reflection(c, 0.0, 0.1, 0.5), ContractError);
    EXPECT_THROW(check_reflection(c, 0.0, -pi / 2, -pi / 4 - 1.0), ContractError);
}

TEST(Midpoint, Arithmetic) {
    const MidpointResult even = check_midpoint(make_set({0, pi / 2, pi, 3 * pi / 2}));
    ASSERT_TRUE(even.applicable);
    for (double d : even.defects) EXPECT_NEAR(d, 0.0, 1e-15);

    const MidpointResult uneven = check_midpoint(make_set({0, pi / 3, pi, 4 * pi / 3}));
    ASSERT_EQ(uneven.defects.size(), 4u);
    for (double d : uneven.defects) EXPECT_NEAR(d, pi / 6, 1e-14);
    EXPECT_NEAR(uneven.max_defect, pi / 6, 1e-14);

    EXPECT_FALSE(check_midpoint(make_set({0, pi})).applicable);
}

TEST(MovingArc, ExactSymmetryReachesTarget) {
    const GridPtr g = make_grid(24, 48);
    const ScalarField u = field(g, [](double t, double p) { return std::sin(t) * std::cos(2 * p); });
    const AxialExtremumSet ext = detect_axial_extrema(u);
    for (int seed : {1, 3}) {
        for (int dir : {1, -1}) {
            const MovingArcReport r = moving_arc_sweep(u, ext, seed, dir, 50);
            ASSERT_EQ(r.epsilons.size(), 50u);
            ASSERT_EQ(r.w_max.size(), 50u);
            EXPECT_NEAR(r.gap, pi / 2, 1e-12);
            EXPECT_NEAR(r.epsilons.back(), r.gap, 1e-14);
            for (double w : r.w_max) EXPECT_LE(w, 1e-12);
            EXPECT_NEAR(r.eps_star, r.gap, 1e-12);
            EXPECT_TRUE(r.reaches_target);
            EXPECT_TRUE(r.equality_holds);
            EXPECT_NEAR(r.phi_star, pi / 2, 1e-12);
            EXPECT_LE(r.eps_star, r.epsilons.back());
        }
    }
    EXPECT_THROW(moving_arc_sweep(u, ext, 0, 1), ContractError);
    EXPECT_THROW(moving_arc_sweep(u, ext, 1, 2), ParameterError);
}

TEST(MovingArc, BrokenSymmetryViolatesTheBound) {
    // Sweep against the extrema of the unperturbed Y_2^2.
    const GridPtr g = make_grid(24, 48);
    const ScalarField base = harmonic_mode(g, 2, 2);
    const ScalarField u = base + 0.1 * harmonic_mode(g, 1, 1);
    const AxialExtremumSet ext = detect_axial_extrema(base);
    const int seed = nearest(ext, pi / 2);
    ASSERT_EQ(ext.kinds[seed], ExtremumKind::min);
    const MovingArcReport r = moving_arc_sweep(u, ext, seed, 1);
    EXPECT_GT(*std::max_element(r.w_max.begin(), r.w_max.end()), r.tolerance);
    EXPECT_LT(r.eps_star, r.gap);
    EXPECT_FALSE(r.reaches_target);
    // Y_1^1 is still even about the target pi, so both the reflection defect
    // there and w at the full gap vanish; about the seed neither does.
    const double target = r.target_angle;
    EXPECT_LT(check_reflection(u, target, target - pi / 2, target), 1e-12);
    EXPECT_LT(r.equality_defect, 1e-12);
    EXPECT_TRUE(r.equality_holds);
    const double phi_seed = ext.angles[seed];
    EXPECT_GT(check_reflection(u, phi_seed, phi_seed - pi / 2, phi_seed), 1e-3);
}

TEST(MovingArc, ShrinkingSectorGivesVanishingDifference) {
    const GridPtr g = make_grid(24, 48);
    const ScalarField base = harmonic_mode(g, 2, 2);
    const ScalarField u = base + 0.3 * harmonic_mode(g, 3, 1);
    const AxialExtremumSet ext = detect_axial_extrema(base);
    const MovingArcReport r = moving_arc_sweep(u, ext, nearest(ext, pi / 2), 1, 400);
    // No grid column lies strictly inside the first sectors.
    EXPECT_EQ(r.w_max.front(), 0.0);
    EXPECT_GT(*std::max_element(r.w_max.begin(), r.w_max.end()), 0.0);
}

TEST(Audit, PhaseCovariance) {
    const GridPtr g = make_grid(24, 48);
    const ScalarField u = eval_on_grid(g, [](double t, double p) {
        return std::sin(t) * (std::cos(2 * p) + 0.3 * std::cos(3 * p) + 0.2 * std::sin(p)) + 0.1 * std::cos(t);
    });
    const SymmetryReport base = theorem_audit(u);
    ASSERT_GE(base.extrema.size(), 4u);
    for (int shift : {1, 7, 30}) {
        const double delta = shift * g->dphi();
        const SymmetryReport moved = theorem_audit(translate_phi(u, delta));
        ASSERT_EQ(moved.extrema.size(), base.extrema.size());
        // The list may start at a different extremum after wrapping.
        const int n = static_cast<int>(base.extrema.size());
        const int offset = nearest(moved.extrema, base.extrema.angles[0] + delta);
        for (int i = 0; i < n; ++i) {
            const int k = (i + offset) % n;
            EXPECT_LT(circ_dist(moved.extrema.angles[k], base.extrema.angles[i] + delta), 1e-10);
            EXPECT_EQ(moved.extrema.kinds[k], base.extrema.kinds[i]);
            EXPECT_NEAR(moved.reflection_defects[k], base.reflection_defects[i], 1e-10);
            EXPECT_NEAR(moved.midpoint.defects[k], base.midpoint.defects[i], 1e-10);
        }
        EXPECT_NEAR(moved.leveled.level_defect, base.leveled.level_defect, 1e-10);
        EXPECT_EQ(moved.verdict, base.verdict);
    }
    // Off-grid rotations still move every extremum rigidly.
    const SymmetryReport off = theorem_audit(translate_phi(u, 0.123));
    const int offset = nearest(off.extrema, base.extrema.angles[0] + 0.123);
    for (std::size_t i = 0; i < base.extrema.size(); ++i)
        EXPECT_LT(circ_dist(off.extrema.angles[(i + offset) % base.extrema.size()], base.extrema.angles[i] + 0.123),
                  1e-10);
}

TEST(Audit, HarmonicPasses) {
    const GridPtr g = make_grid(24, 48);
    const SymmetryReport rep = theorem_audit(harmonic_mode(g, 2, 2));
    EXPECT_EQ(rep.verdict, Verdict::pass);
    EXPECT_TRUE(rep.hypotheses_met);
    EXPECT_EQ(rep.arc_reports.size(), 4u);  // two minima, both directions
    EXPECT_FALSE(rep.equation.has_value());
}

TEST(Audit, EquilibriumPassesWithEquationChecks) {
    const GridPtr g = make_grid(32, 64);
    const OperatorHandle op(g, Realization::spectral);
    const Equilibrium eq = equilibrium_22(op);
    const SymmetryReport rep = theorem_audit(chafee_infante(6.5), op, eq.u);
    EXPECT_EQ(rep.verdict, Verdict::pass);
    ASSERT_EQ(rep.extrema.size(), 4u);
    for (double d : rep.reflection_defects) EXPECT_LE(d, 1e-7);
    ASSERT_TRUE(rep.equation.has_value());
    EXPECT_LE(rep.equation->residual_norm, 1e-9);
    EXPECT_TRUE(rep.equation->elliptic);
    EXPECT_LE(rep.equation->annihilation.relative, 1e-7);
}

TEST(Annihilation, TrivialCasesAndGenericCentre) {
    const GridPtr g = make_grid(32, 64);
    const OperatorHandle op(g, Realization::spectral);
    const NonlinearProblem p = chafee_infante(6.5);
    EXPECT_EQ(linearized_annihilation(p, op, ScalarField(g), 0.7).defect, 0.0);

    const Equilibrium eq = equilibrium_22(op);
    const AnnihilationResult axis = linearized_annihilation(p, op, eq.u, pi / 2);
    EXPECT_LT(axis.defect, 1e-9);

    for (double eps : {0.3, 1.1, 2.5}) {
        const AnnihilationResult r = linearized_annihilation(p, op, eq.u, eps);
        EXPECT_GT(r.scale, 0.1);
        EXPECT_LE(r.defect, 1e-7 * r.scale) << eps;
    }
}

TEST(Figure1, ConstructionProperties) {
    // Independent oracle: the breakpoints of the construction.
    const std::vector<double> half = {pi / 8, 3 * pi / 8, 9 * pi / 16, 11 * pi / 16, 13 * pi / 16, 15 * pi / 16};
    std::vector<double> expected = half;
    for (double a : half) expected.push_back(a + pi);
    const std::vector<double> listed = figure1_extrema();
    ASSERT_EQ(listed.size(), 12u);
    for (int i = 0; i < 12; ++i) EXPECT_NEAR(listed[i], expected[i], 1e-15);

    for (double p = 0.0; p < pi; p += 0.05) EXPECT_NEAR(figure1_profile(p + pi), figure1_profile(p), 1e-14);
    for (int i = 0; i < 12; ++i) EXPECT_NEAR(figure1_profile(expected[i]), i % 2 ? -1.0 : 1.0, 1e-14);

    const GridPtr g = make_grid(48, 96);
    const ScalarField u = generate_figure1(g);
    const AxialExtremumSet ext = detect_axial_extrema(u);
    ASSERT_EQ(ext.size(), 12u);
    int maxima = 0;
    for (int i = 0; i < 12; ++i) {
        maxima += ext.kinds[i] == ExtremumKind::max;
        EXPECT_NE(ext.kinds[i], ext.kinds[(i + 1) % 12]);
    }
    EXPECT_EQ(maxima, 6);
    EXPECT_LE(ext.max_axiality_defect(), 1e-10);
    EXPECT_LE(check_leveled(ext, u).level_defect, 1e-10);

    // The detected midpoint defects match the breakpoint arithmetic.
    const MidpointResult mid = check_midpoint(ext);
    const MidpointResult mid_ref = check_midpoint(make_set(expected));
    EXPECT_NEAR(mid.max_defect, mid_ref.max_defect, 2e-2);
    EXPECT_GT(mid.max_defect, 2 * pi / 96);

    const SymmetryReport rep = theorem_audit(u);
    EXPECT_TRUE(rep.hypotheses_met);
    EXPECT_FALSE(rep.midpoint_ok);
    EXPECT_EQ(rep.verdict, Verdict::fail);
}

TEST(Thresholds, Validate) {
    AuditThresholds t;
    EXPECT_NO_THROW(t.validate());
    t.tol_w = -1;
    EXPECT_THROW(t.validate(), ParameterError);
    t = {};
    t.n_eps = 0;
    EXPECT_THROW(t.validate(), ParameterError);
}
