#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sphere_eq/errors.hpp"
#include "sphere_eq/krylov.hpp"
#include "sphere_eq/laplace_beltrami.hpp"
#include "sphere_eq/problem.hpp"

namespace sphere_eq {

struct Equilibrium {
    double lambda = 0.0;
    ScalarField u;
    double residual_norm = 0.0;  // sup-norm of F(u, Laplacian u)
    int newton_iters = 0;
    double amplitude = 0.0;  // sup-norm of u
    double tol = 0.0;        // tolerance the solve was run to
};

/// Equilibria ordered by lambda, seeded from the eigenmode (l, m).
struct Branch {
    int l = 0;
    int m = 0;
    std::vector<Equilibrium> points;
};

/// Newton (or its linear solve) failed. Carries the last iterate.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, ScalarField last_iterate, double residual_norm, int iterations)
        : Error(what), last_(std::move(last_iterate)), residual_norm_(residual_norm), iterations_(iterations) {}

    const ScalarField& last_iterate() const { return last_; }
    double residual_norm() const { return residual_norm_; }
    int iterations() const { return iterations_; }

private:
    ScalarField last_;
    double residual_norm_;
    int iterations_;
};

struct NewtonOptions {
    double tol = 1e-9;
    int max_iter = 30;
    KrylovOptions krylov{1e-10, 80, 4000};
    /// Krylov solves ending above this relative residual count as stagnation.
    double stagnation = 1e-3;
    int max_halvings = 12;
    /// Called with (iteration, iterate, residual sup-norm) before every step.
    std::function<void(int, const ScalarField&, double)> on_iterate;
};

/// Newton-Krylov: GMRES with diagonal right preconditioning on the Jacobian
/// action, then a halving line search on the residual sup-norm.
Equilibrium newton_solve(const NonlinearProblem& problem, const OperatorHandle& op, const ScalarField& guess,
                         const NewtonOptions& options);
Equilibrium newton_solve(const NonlinearProblem& problem, const OperatorHandle& op, const ScalarField& guess,
                         double tol = 1e-9, int max_iter = 30);

/// Semi-implicit steps of u_t = F(u, Laplacian u):
///   (I - dt a Lap) u' = u + dt (F(u, Lap u) - a Lap u),  a = max F_q at the current state.
/// Throws DivergenceError once the sup-norm exceeds 1e6.
ScalarField gradient_flow_relax(const NonlinearProblem& problem, const OperatorHandle& op, const ScalarField& u0,
                                double dt, int steps);

struct BifurcationPoint {
    double lambda = 0.0;
    int l = 0;
};

/// Zeros of F_u(0,0;lambda) - l(l+1) F_q(0,0;lambda) in [lambda_lo, lambda_hi]
/// for l <= l_max, by a sign scan and bisection. Throws ContractError if
/// u = 0 is not a root somewhere on the scan. Sorted by lambda.
std::vector<BifurcationPoint> detect_bifurcations(const ProblemFamily& family, double lambda_lo, double lambda_hi,
                                                  int l_max, int n_scan = 512);

struct EigenCrossing {
    double lambda = 0.0;
    int multiplicity = 0;
};

/// Independent check of detect_bifurcations: assembles the discrete
/// linearization at u = 0 as a dense matrix at `n_samples` parameter values,
/// symmetrizes it with the quadrature weights and locates the parameters
/// where its eigenvalues cross zero (linear interpolation between samples).
/// Only crossings in the open interval are reported.
std::vector<EigenCrossing> linearization_crossings(const ProblemFamily& family, const OperatorHandle& op,
                                                   double lambda_lo, double lambda_hi, int n_samples = 2);

struct BranchSeed {
    double lambda_start = 0.0;
    ScalarField guess;
};

/// guess = amplitude * Y_l^m / |Y_l^m|_inf at lambda* + side * d_lambda. A
/// non-positive amplitude selects the cubic normal-form estimate
/// sqrt(4 |lambda_start - lambda*| / (3 lambda_start)).
BranchSeed branch_switch(const GridPtr& grid, double lambda_star, int l, int m, double amplitude = 0.0,
                         int side = 1, double d_lambda = 0.25);

/// Translates u in phi so that its ring-weighted m-th Fourier coefficient is
/// real and positive (maximal correlation with cos(m phi)). No-op for m = 0.
ScalarField pin_phase(const ScalarField& u, int m);

struct ContinuationOptions {
    NewtonOptions newton;
    /// Points whose sup-norm falls below this are taken as having rejoined u = 0.
    double amplitude_floor = 1e-4;
};

/// Natural-parameter continuation: secant predictor in u, Newton corrector,
/// phase pinned to cos(m phi) after every step. Stops early and returns the
/// partial branch on a failed corrector or when the amplitude floor is hit;
/// a failure on the very first step is rethrown.
Branch continue_branch(const ProblemFamily& family, const OperatorHandle& op, const Equilibrium& start,
                       double d_lambda, int n_steps, int l, int m, const ContinuationOptions& options = {});

}  // namespace sphere_eq
