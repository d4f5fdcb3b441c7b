#include <gtest/gtest.h>

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

// 32 x 64 keeps the band-truncation part of the pointwise residual below
// 1e-9 along the (2,2) branch up to lambda = 8.
struct Fixture {
    GridPtr g = make_grid(32, 64);
    OperatorHandle op{g, Realization::spectral};
};

// 0.3 * Y_2^2 scaled to unit sup-norm.
ScalarField seed_22(const GridPtr& g, double amplitude = 0.3) {
    const ScalarField y = harmonic_mode(g, 2, 2);
    return (amplitude / y.sup_norm()) * y;
}

Equilibrium solve_22(const OperatorHandle& op, double lambda) {
    const ScalarField guess = seed_22(op.grid_ptr());
    return newton_solve(chafee_infante(lambda), op, guess);
}

}  // namespace

TEST(Newton, TrivialRootIsExact) {
    Fixture f;
    const Equilibrium eq = newton_solve(chafee_infante(3.0), f.op, ScalarField(f.g));
    EXPECT_EQ(eq.residual_norm, 0.0);
    EXPECT_EQ(eq.u.sup_norm(), 0.0);
    EXPECT_EQ(eq.newton_iters, 0);
}

TEST(Newton, ConvergesToNearestConstantRoot) {
    Fixture f;
    for (Realization r : {Realization::spectral, Realization::finite_difference}) {
        const OperatorHandle op(f.g, r);
        const Equilibrium eq = newton_solve(chafee_infante(3.0), op, ScalarField(f.g, 0.9));
        EXPECT_LT(max_abs_diff(eq.u, ScalarField(f.g, 1.0)), 1e-9) << to_string(r);
        EXPECT_LE(eq.residual_norm, 1e-9);
    }
}

TEST(Newton, NonconstantEquilibriumOnThe22Branch) {
    Fixture f;
    const Equilibrium eq = solve_22(f.op, 6.5);
    EXPECT_LE(eq.residual_norm, 1e-9);
    EXPECT_LE(eq.residual_norm, eq.tol);
    EXPECT_EQ(eq.lambda, 6.5);
    EXPECT_DOUBLE_EQ(eq.amplitude, eq.u.sup_norm());
    // Nonconstant and still dominated by the seeding mode.
    EXPECT_GT(eq.u.max_value() - eq.u.min_value(), 0.3);
    const ScalarField y = harmonic_mode(f.g, 2, 2);
    EXPECT_GT(inner(eq.u, y) / std::sqrt(inner(eq.u, eq.u)), 0.99);
    // The full pointwise residual, recomputed independently.
    EXPECT_LE(residual(chafee_infante(6.5), f.op, eq.u).sup_norm(), 1e-9);
}

TEST(Newton, FiniteDifferenceSolutionTracksSpectral) {
    const GridPtr g = make_grid(32, 64);
    const OperatorHandle sp(g, Realization::spectral), fd(g, Realization::finite_difference);
    const Equilibrium a = solve_22(sp, 6.5);
    const Equilibrium b = solve_22(fd, 6.5);
    EXPECT_LE(b.residual_norm, 1e-9);
    EXPECT_LT(std::abs(a.amplitude - b.amplitude), 0.05 * a.amplitude);
}

TEST(Newton, IteratesKeepReflectionSymmetry) {
    Fixture f;
    // Every term is even about phi = 0.
    const ScalarField guess = seed_22(f.g) + 0.05 * harmonic_mode(f.g, 4, 0) + 0.02 * harmonic_mode(f.g, 3, 2);
    ASSERT_LT(max_abs_diff(reflect_phi(guess, 0.0), guess), 1e-14);
    NewtonOptions opts;
    int seen = 0;
    opts.on_iterate = [&](int, const ScalarField& u, double) {
        ++seen;
        EXPECT_LT(max_abs_diff(reflect_phi(u, 0.0), u), 1e-10);
    };
    const Equilibrium eq = newton_solve(chafee_infante(6.5), f.op, guess, opts);
    EXPECT_GT(seen, 1);
    EXPECT_LT(max_abs_diff(reflect_phi(eq.u, 0.0), eq.u), 1e-10);
}

TEST(Newton, CoarseSpectralGridReportsTruncationFloor) {
    const GridPtr g = make_grid(16, 32);
    const OperatorHandle op(g, Realization::spectral);
    try {
        solve_22(op, 6.5);
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError& e) {
        EXPECT_NE(std::string(e.what()).find("band-truncation floor"), std::string::npos);
        EXPECT_GT(e.residual_norm(), 1e-9);
        EXPECT_LT(e.iterations(), 10);
    }
}

TEST(Newton, NonConvergenceCarriesLastIterate) {
    Fixture f;
    try {
        newton_solve(chafee_infante(6.5), f.op, seed_22(f.g), 1e-12, 1);
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError& e) {
        EXPECT_EQ(e.iterations(), 1);
        EXPECT_GT(e.residual_norm(), 1e-12);
        EXPECT_TRUE(e.last_iterate().grid().same_shape(*f.g));
        EXPECT_GT(e.last_iterate().sup_norm(), 0.0);
    }
    EXPECT_THROW(newton_solve(chafee_infante(1.0), f.op, ScalarField(f.g), 0.0, 5), ParameterError);
}

TEST(GradientFlow, ZeroStaysZero) {
    Fixture f;
    EXPECT_EQ(gradient_flow_relax(chafee_infante(3.0), f.op, ScalarField(f.g), 0.1, 20).sup_norm(), 0.0);
}

TEST(GradientFlow, ConstantStateFollowsLogisticOde) {
    // For a constant state the scheme is forward Euler on u' = lambda u (1 - u^2),
    // whose exact solution is u(t) = (1 + (u0^-2 - 1) e^{-2 lambda t})^{-1/2}.
    Fixture f;
    const double lam = 3.0, dt = 2e-3, u0 = 0.1;
    const NonlinearProblem p = chafee_infante(lam);
    ScalarField u(f.g, u0);
    double euler = u0, prev = u0;
    for (int block = 1; block <= 20; ++block) {
        u = gradient_flow_relax(p, f.op, u, dt, 100);
        for (int s = 0; s < 100; ++s) euler += dt * lam * euler * (1 - euler * euler);
        const double t = block * 100 * dt;
        const double exact = 1.0 / std::sqrt(1.0 + (1.0 / (u0 * u0) - 1.0) * std::exp(-2 * lam * t));
        EXPECT_NEAR(u.max_value(), euler, 1e-12);
        EXPECT_NEAR(u.min_value(), euler, 1e-12);
        EXPECT_NEAR(u.max_value(), exact, 1e-2);
        EXPECT_GT(u.sup_norm(), prev);
        EXPECT_LT(u.sup_norm(), 1.0);
        prev = u.sup_norm();
    }
    EXPECT_GT(prev, 0.99);
}

TEST(GradientFlow, SubcriticalDipoleDecays) {
    // Linear rate of Y_1^0 per step: (1 + dt lambda) / (1 + 2 dt) with the
    // implicit Laplacian eigenvalue -2.
    Fixture f;
    const double lam = 1.0, dt = 0.05, a0 = 1e-4;
    const int steps = 40;
    const ScalarField y = harmonic_mode(f.g, 1, 0);
    const ScalarField u = gradient_flow_relax(chafee_infante(lam), f.op, a0 * y, dt, steps);
    const double rate = std::pow((1 + dt * lam) / (1 + 2 * dt), steps);
    EXPECT_NEAR(u.sup_norm() / (a0 * y.sup_norm()), rate, 1e-6);
    EXPECT_LT(max_abs_diff(u, (a0 * rate) * y), 1e-9 * a0);
}

TEST(GradientFlow, DivergenceIsReported) {
    Fixture f;
    NonlinearProblem p = chafee_infante(1.0);
    p.F = [](double u, double q) { return q + u * u; };
    p.Fu = [](double u, double) { return 2 * u; };
    EXPECT_THROW(gradient_flow_relax(p, f.op, ScalarField(f.g, 2.0), 0.1, 200), DivergenceError);
}

TEST(GradientFlow, FixesNewtonEquilibria) {
    Fixture f;
    const Equilibrium eq = solve_22(f.op, 6.5);
    const ScalarField v = gradient_flow_relax(chafee_infante(6.5), f.op, eq.u, 0.01, 10);
    EXPECT_LE(max_abs_diff(v, eq.u), 10 * eq.tol);
}

TEST(GradientFlow, RelaxesBackOntoTheEquilibrium) {
    // Within the cos(2 phi) symmetry class the (2,2) solution just past its
    // pitchfork attracts; a perturbed copy must flow back toward it.
    Fixture f;
    const Equilibrium eq = solve_22(f.op, 6.5);
    const ScalarField start = 1.2 * eq.u;
    const double d0 = max_abs_diff(start, eq.u);
    const ScalarField v = gradient_flow_relax(chafee_infante(6.5), f.op, start, 0.05, 40);
    EXPECT_LT(max_abs_diff(v, eq.u), 0.5 * d0);
}

TEST(Bifurcation, ChafeeInfanteThresholds) {
    const auto pts = detect_bifurcations(chafee_infante, 0.5, 13.0, 3);
    ASSERT_EQ(pts.size(), 3u);
    for (int i = 0; i < 3; ++i) {
        const int l = i + 1;
        EXPECT_EQ(pts[i].l, l);
        EXPECT_NEAR(pts[i].lambda, l * (l + 1.0), 1e-10);
    }
    EXPECT_TRUE(detect_bifurcations(chafee_infante, 0.5, 1.5, 3).empty());
    const auto zero = detect_bifurcations(chafee_infante, -5.0, 0.5, 3);
    ASSERT_EQ(zero.size(), 1u);
    EXPECT_EQ(zero[0].l, 0);
    EXPECT_NEAR(zero[0].lambda, 0.0, 1e-10);
}

TEST(Bifurcation, TrivialStateMustBeARoot) {
    const ProblemFamily shifted = [](double lambda) {
        NonlinearProblem p = chafee_infante(lambda);
        p.F = [lambda](double u, double q) { return q + lambda * u * (1 - u * u) + 0.1; };
        return p;
    };
    EXPECT_THROW(detect_bifurcations(shifted, 0.5, 13.0, 3), ContractError);
}

TEST(Bifurcation, DiscreteLinearizationAgreesAndIsMeshIndependent) {
    std::vector<std::vector<EigenCrossing>> runs;
    for (auto [nt, np] : {std::pair{8, 16}, std::pair{12, 24}}) {
        const OperatorHandle op(make_grid(nt, np), Realization::spectral);
        runs.push_back(linearization_crossings(chafee_infante, op, 0.5, 13.0));
    }
    for (const auto& run : runs) {
        ASSERT_EQ(run.size(), 3u);
        for (int i = 0; i < 3; ++i) {
            const int l = i + 1;
            EXPECT_NEAR(run[i].lambda, l * (l + 1.0), 1e-8);
            EXPECT_EQ(run[i].multiplicity, 2 * l + 1);
        }
    }
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(runs[0][i].lambda, runs[1][i].lambda, 1e-6);
}

TEST(BranchSwitch, SeedShapes) {
    const GridPtr g = make_grid(24, 48);
    const BranchSeed s22 = branch_switch(g, 6.0, 2, 2);
    EXPECT_DOUBLE_EQ(s22.lambda_start, 6.25);
    EXPECT_NEAR(s22.guess.sup_norm(), std::sqrt(4 * 0.25 / (3 * 6.25)), 1e-14);
    const AxialExtremumSet ext = detect_axial_extrema(s22.guess);
    ASSERT_EQ(ext.size(), 4u);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(ext.angles[i], i * pi / 2, 1e-10);

    const BranchSeed s10 = branch_switch(g, 2.0, 1, 0, 0.1, -1);
    EXPECT_DOUBLE_EQ(s10.lambda_start, 1.75);
    EXPECT_NEAR(s10.guess.sup_norm(), 0.1, 1e-14);
    EXPECT_LT(d_phi(s10.guess).sup_norm(), 1e-14);

    EXPECT_THROW(branch_switch(g, 6.0, 2, 3), ParameterError);
}

TEST(BranchSwitch, NewtonLeavesTheTrivialBranch) {
    Fixture f;
    const BranchSeed seed = branch_switch(f.g, 6.0, 2, 2);
    const Equilibrium eq = newton_solve(chafee_infante(seed.lambda_start), f.op, seed.guess);
    EXPECT_GT(eq.amplitude, 0.5 * seed.guess.sup_norm());
}

TEST(PinPhase, UndoesRotation) {
    Fixture f;
    const ScalarField y = harmonic_mode(f.g, 2, 2);
    for (double d : {0.3, -0.7, 1.2}) {
        EXPECT_LT(max_abs_diff(pin_phase(translate_phi(y, d), 2), y), 1e-12) << d;
    }
    const ScalarField axi = harmonic_mode(f.g, 2, 0);
    EXPECT_EQ(max_abs_diff(pin_phase(axi, 0), axi), 0.0);
}

TEST(Continuation, ZeroStepsReturnsStart) {
    Fixture f;
    const Equilibrium eq = solve_22(f.op, 6.5);
    const Branch b = continue_branch(chafee_infante, f.op, eq, 0.25, 0, 2, 2);
    ASSERT_EQ(b.points.size(), 1u);
    EXPECT_EQ(b.points[0].lambda, 6.5);
    EXPECT_EQ(max_abs_diff(b.points[0].u, eq.u), 0.0);
}

TEST(Continuation, SupercriticalGrowthAndRetreat) {
    Fixture f;
    const Equilibrium eq = solve_22(f.op, 6.5);

    const Branch up = continue_branch(chafee_infante, f.op, eq, 0.25, 6, 2, 2);
    ASSERT_EQ(up.points.size(), 7u);
    EXPECT_EQ(up.l, 2);
    EXPECT_EQ(up.m, 2);
    EXPECT_NEAR(up.points.back().lambda, 8.0, 1e-12);
    for (std::size_t i = 1; i < up.points.size(); ++i) {
        EXPECT_GT(up.points[i].lambda, up.points[i - 1].lambda);
        EXPECT_GT(up.points[i].amplitude, up.points[i - 1].amplitude);
        EXPECT_LE(up.points[i].residual_norm, 1e-9);
    }

    // Toward lambda* = 6 the branch shrinks onto u = 0.
    const Branch down = continue_branch(chafee_infante, f.op, eq, -0.1, 4, 2, 2);
    ASSERT_EQ(down.points.size(), 5u);
    for (std::size_t i = 1; i < down.points.size(); ++i) {
        EXPECT_LT(down.points[i].lambda, down.points[i - 1].lambda);
        EXPECT_LT(down.points[i].amplitude, down.points[i - 1].amplitude);
    }
    EXPECT_LT(down.points.back().amplitude, 0.5 * eq.amplitude);
}
