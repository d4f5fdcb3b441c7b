#include "sphere_eq/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "sphere_eq/fourier.hpp"

namespace sphere_eq {

namespace {

double sup_residual(const NonlinearProblem& problem, const OperatorHandle& op, const ScalarField& u) {
    return residual(problem, op, u).sup_norm();
}

}  // namespace

Equilibrium newton_solve(const NonlinearProblem& problem, const OperatorHandle& op, const ScalarField& guess,
                         const NewtonOptions& options) {
    if (!(options.tol > 0.0)) throw ParameterError("newton_solve: tol must be positive");
    if (options.max_iter < 0) throw ParameterError("newton_solve: max_iter must be non-negative");
    if (!guess.grid().same_shape(op.grid())) throw ParameterError("newton_solve: guess lives on another grid");

    // The spectral realization only sees the resolved harmonics, so Newton runs
    // on the band-projected equations there (pseudo-spectral Galerkin); the
    // acceptance test always uses the full pointwise residual.
    const bool spectral = op.realization() == Realization::spectral;
    const ScalarField lap_diag = spectral ? ScalarField() : op.diagonal();
    ScalarField u = op.project(guess);
    ScalarField r = residual(problem, op, u);
    double rn = r.sup_norm();
    int stalled = 0;

    for (int it = 0;; ++it) {
        if (options.on_iterate) options.on_iterate(it, u, rn);
        if (rn <= options.tol) {
            Equilibrium eq;
            eq.lambda = problem.lambda;
            eq.amplitude = u.sup_norm();
            eq.u = std::move(u);
            eq.residual_norm = rn;
            eq.newton_iters = it;
            eq.tol = options.tol;
            return eq;
        }
        // Galerkin converged but the pointwise residual did not: what is left
        // is the part of F(u) above the band, which no in-band update removes.
        if (spectral) {
            const double rn_band = op.project(r).sup_norm();
            if (rn_band <= 1e-3 * options.tol)
                throw ConvergenceError("newton_solve: band-truncation floor " + format_sci(rn) +
                                           " is above tol " + format_sci(options.tol) + "; refine the grid",
                                       u, rn, it);
        }
        if (it >= options.max_iter)
            throw ConvergenceError("newton_solve: no convergence after " + std::to_string(it) +
                                       " iterations (residual " + format_sci(rn) + ")",
                                   u, rn, it);

        const Linearization lin = linearize(problem, op, u);
        const GridPtr& grid = u.grid_ptr();
        LinearMap J = [&](std::span<const double> x, std::span<double> y) {
            ScalarField jx = lin.apply(ScalarField(grid, std::vector<double>(x.begin(), x.end())));
            if (spectral) jx = op.project(jx);
            std::copy(jx.values().begin(), jx.values().end(), y.begin());
        };

        // Spectral: (alpha - a Lap)^{-1}, diagonal in the harmonic basis.
        // Finite differences: inverse of the Jacobian's grid diagonal.
        LinearMap M;
        if (spectral) {
            double alpha = 1.0;
            for (double v : lin.fu.values()) alpha = std::max(alpha, std::abs(v));
            const double a = std::max(lin.fq.max_value(), 1e-12);
            M = [&, alpha, a](std::span<const double> x, std::span<double> y) {
                const ScalarField z =
                    op.solve_shifted(a / alpha, ScalarField(grid, std::vector<double>(x.begin(), x.end())));
                for (std::size_t i = 0; i < y.size(); ++i) y[i] = z.values()[i] / alpha;
            };
        } else {
            auto inv_diag = std::make_shared<std::vector<double>>(u.size());
            for (std::size_t i = 0; i < inv_diag->size(); ++i) {
                const double d = lin.fu.values()[i] + lin.fq.values()[i] * lap_diag.values()[i];
                (*inv_diag)[i] = std::abs(d) > 1e-12 ? 1.0 / d : 1.0;
            }
            M = [inv_diag](std::span<const double> x, std::span<double> y) {
                for (std::size_t i = 0; i < y.size(); ++i) y[i] = (*inv_diag)[i] * x[i];
            };
        }

        ScalarField rhs = -1.0 * (spectral ? op.project(r) : r);
        ScalarField step(grid);
        const KrylovResult kr = gmres(J, rhs.values(), step.values(), options.krylov, M);
        if (!kr.converged && kr.rel_residual > options.stagnation)
            throw ConvergenceError("newton_solve: Krylov solve stagnated at relative residual " +
                                       format_sci(kr.rel_residual),
                                   u, rn, it);

        // Rotations in phi map solutions to solutions, so u_phi spans a
        // near-kernel of J and roundoff along it gets amplified. Drop that
        // component: the step stays in the slice through u, and any
        // reflection symmetry of the iterate survives (u_phi is odd about
        // every mirror of u).
        const ScalarField tangent = d_phi(u);
        const double tt = inner(tangent, tangent);
        if (tt > 1e-20 * std::max(1.0, inner(u, u))) step -= (inner(step, tangent) / tt) * tangent;

        // Halving line search; keep the best trial if none decreases the residual.
        double alpha = 1.0;
        ScalarField best_u;
        ScalarField best_r;
        double best_rn = std::numeric_limits<double>::infinity();
        for (int h = 0; h <= options.max_halvings; ++h, alpha *= 0.5) {
            ScalarField trial = u + alpha * step;
            ScalarField tr;
            try {
                tr = residual(problem, op, trial);
            } catch (const EvaluationError&) {
                continue;
            }
            const double trn = tr.sup_norm();
            if (trn < best_rn) {
                best_rn = trn;
                best_u = std::move(trial);
                best_r = std::move(tr);
            }
            if (best_rn < rn) break;
        }
        if (!std::isfinite(best_rn))
            throw ConvergenceError("newton_solve: every line-search trial was non-finite", u, rn, it);
        // A few uphill steps are tolerated (the sup-norm is not a merit
        // function Newton must decrease); a run of them means stagnation.
        stalled = best_rn < rn ? 0 : stalled + 1;
        if (stalled > 3)
            throw ConvergenceError("newton_solve: line search stalled at residual " + format_sci(rn), u, rn, it);
        u = std::move(best_u);
        r = std::move(best_r);
        rn = best_rn;
    }
}

Equilibrium newton_solve(const NonlinearProblem& problem, const OperatorHandle& op, const ScalarField& guess,
                         double tol, int max_iter) {
    NewtonOptions options;
    options.tol = tol;
    options.max_iter = max_iter;
    return newton_solve(problem, op, guess, options);
}

ScalarField gradient_flow_relax(const NonlinearProblem& problem, const OperatorHandle& op, const ScalarField& u0,
                                double dt, int steps) {
    if (!(dt > 0.0)) throw ParameterError("gradient_flow_relax: dt must be positive");
    if (steps < 0) throw ParameterError("gradient_flow_relax: steps must be non-negative");
    constexpr double blow_up = 1e6;
    ScalarField u = u0;
    for (int n = 0; n < steps; ++n) {
        const ScalarField q = op.apply(u);
        const Linearization lin = linearize(problem, op, u);
        const double a = lin.fq.max_value();
        ScalarField rhs = evaluate_F(problem, u, q);
        rhs -= a * q;
        rhs *= dt;
        rhs += u;
        u = op.solve_shifted(dt * a, rhs);
        if (!u.all_finite() || u.sup_norm() > blow_up)
            throw DivergenceError("gradient_flow_relax: sup-norm exceeded 1e6 at step " + std::to_string(n + 1));
    }
    return u;
}

std::vector<BifurcationPoint> detect_bifurcations(const ProblemFamily& family, double lambda_lo, double lambda_hi,
                                                  int l_max, int n_scan) {
    if (!(lambda_lo < lambda_hi)) throw ParameterError("detect_bifurcations: empty parameter range");
    if (l_max < 0) throw ParameterError("detect_bifurcations: l_max must be non-negative");
    n_scan = std::max(n_scan, 2);

    std::vector<double> grid(n_scan + 1);
    for (int i = 0; i <= n_scan; ++i) grid[i] = lambda_lo + (lambda_hi - lambda_lo) * i / n_scan;
    for (double lam : grid) {
        const NonlinearProblem p = family(lam);
        if (std::abs(p.F(0.0, 0.0)) > 1e-12)
            throw ContractError("detect_bifurcations: u = 0 is not a root at lambda = " + std::to_string(lam));
    }

    std::vector<BifurcationPoint> out;
    for (int l = 0; l <= l_max; ++l) {
        const double ev = static_cast<double>(l) * (l + 1);
        auto g = [&](double lam) {
            const NonlinearProblem p = family(lam);
            return p.Fu(0.0, 0.0) - ev * p.Fq(0.0, 0.0);
        };
        double prev_x = grid[0];
        double prev_g = g(prev_x);
        if (prev_g == 0.0) out.push_back({prev_x, l});
        for (int i = 1; i <= n_scan; ++i) {
            const double x = grid[i];
            const double gx = g(x);
            if (gx == 0.0) {
                out.push_back({x, l});
            } else if (prev_g != 0.0 && (prev_g < 0.0) != (gx < 0.0)) {
                double a = prev_x, b = x, ga = prev_g;
                while (b - a > 1e-12 * std::max(1.0, std::abs(a))) {
                    const double mid = 0.5 * (a + b);
                    const double gm = g(mid);
                    if (gm == 0.0) {
                        a = b = mid;
                        break;
                    }
                    if ((gm < 0.0) == (ga < 0.0)) {
                        a = mid;
                        ga = gm;
                    } else {
                        b = mid;
                    }
                }
                out.push_back({0.5 * (a + b), l});
            }
            prev_x = x;
            prev_g = gx;
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return x.lambda < y.lambda || (x.lambda == y.lambda && x.l < y.l);
    });
    return out;
}

std::vector<EigenCrossing> linearization_crossings(const ProblemFamily& family, const OperatorHandle& op,
                                                   double lambda_lo, double lambda_hi, int n_samples) {
    if (!(lambda_lo < lambda_hi)) throw ParameterError("linearization_crossings: empty parameter range");
    n_samples = std::max(n_samples, 2);
    const GridSpec& g = op.grid();
    const int n = static_cast<int>(g.size());
    const ScalarField zero(op.grid_ptr());

    // sqrt of the quadrature weight per node.
    Eigen::VectorXd sw(n);
    for (int j = 0; j < g.n_theta; ++j)
        for (int k = 0; k < g.n_phi; ++k) sw(j * g.n_phi + k) = std::sqrt(g.theta_weights[j] * g.dphi());

    std::vector<Eigen::VectorXd> spectra;
    std::vector<double> params;
    for (int s = 0; s < n_samples; ++s) {
        const double lam = lambda_lo + (lambda_hi - lambda_lo) * s / (n_samples - 1);
        const Linearization lin = linearize(family(lam), op, zero);
        Eigen::MatrixXd S(n, n);
        ScalarField e(op.grid_ptr());
        for (int c = 0; c < n; ++c) {
            e.values()[c] = 1.0;
            const ScalarField col = lin.apply(e);
            e.values()[c] = 0.0;
            for (int r = 0; r < n; ++r) S(r, c) = sw(r) * col.values()[r] / sw(c);
        }
        const Eigen::MatrixXd sym = 0.5 * (S + S.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
        spectra.push_back(solver.eigenvalues());
        params.push_back(lam);
    }

    std::vector<double> roots;
    for (int s = 0; s + 1 < n_samples; ++s) {
        const Eigen::VectorXd& a = spectra[s];
        const Eigen::VectorXd& b = spectra[s + 1];
        for (int i = 0; i < n; ++i) {
            if ((a(i) < 0.0) == (b(i) < 0.0) || a(i) == 0.0) continue;
            const double t = a(i) / (a(i) - b(i));
            const double lam = params[s] + t * (params[s + 1] - params[s]);
            if (lam > lambda_lo && lam < lambda_hi) roots.push_back(lam);
        }
    }
    std::sort(roots.begin(), roots.end());
    std::vector<EigenCrossing> out;
    for (double r : roots) {
        if (!out.empty() && r - out.back().lambda <= 1e-6 * std::max(1.0, std::abs(r))) {
            ++out.back().multiplicity;
        } else {
            out.push_back({r, 1});
        }
    }
    return out;
}

BranchSeed branch_switch(const GridPtr& grid, double lambda_star, int l, int m, double amplitude, int side,
                         double d_lambda) {
    if (std::abs(m) > l) throw ParameterError("branch_switch: need |m| <= l");
    if (side != 1 && side != -1) throw ParameterError("branch_switch: side must be +1 or -1");
    if (!(d_lambda > 0.0)) throw ParameterError("branch_switch: d_lambda must be positive");
    BranchSeed seed;
    seed.lambda_start = lambda_star + side * d_lambda;
    if (amplitude <= 0.0) {
        if (seed.lambda_start == 0.0) throw ParameterError("branch_switch: normal-form amplitude undefined at 0");
        amplitude = std::sqrt(4.0 * std::abs(seed.lambda_start - lambda_star) / (3.0 * std::abs(seed.lambda_start)));
    }
    ScalarField y = harmonic_mode(grid, l, m);
    y *= amplitude / y.sup_norm();
    seed.guess = std::move(y);
    return seed;
}

ScalarField pin_phase(const ScalarField& u, int m) {
    if (m == 0) return u;
    m = std::abs(m);
    if (2 * m >= u.n_phi()) throw ParameterError("pin_phase: order not resolved in phi");
    const RingSpectrum spec = ring_analysis(u);
    cplx s = 0.0;
    for (int j = 0; j < u.n_theta(); ++j) s += u.grid().theta_weights[j] * spec(j, m);
    if (std::abs(s) <= 1e-14 * std::max(1.0, u.sup_norm())) return u;
    return translate_phi(u, std::arg(s) / m);
}

Branch continue_branch(const ProblemFamily& family, const OperatorHandle& op, const Equilibrium& start,
                       double d_lambda, int n_steps, int l, int m, const ContinuationOptions& options) {
    if (n_steps < 0) throw ParameterError("continue_branch: n_steps must be non-negative");
    if (n_steps > 0 && d_lambda == 0.0) throw ParameterError("continue_branch: d_lambda must be nonzero");
    if (start.residual_norm > std::max(start.tol, options.newton.tol))
        throw ContractError("continue_branch: start point is not converged");

    Branch branch;
    branch.l = l;
    branch.m = m;
    branch.points.push_back(start);
    for (int step = 1; step <= n_steps; ++step) {
        const Equilibrium& last = branch.points.back();
        const double lam = start.lambda + step * d_lambda;
        ScalarField guess = last.u;
        if (branch.points.size() >= 2) {
            const Equilibrium& prev = branch.points[branch.points.size() - 2];
            const double ratio = (lam - last.lambda) / (last.lambda - prev.lambda);
            guess += ratio * (last.u - prev.u);
        }
        Equilibrium eq;
        try {
            eq = newton_solve(family(lam), op, guess, options.newton);
        } catch (const ConvergenceError&) {
            if (step == 1) throw;
            break;
        }
        if (eq.amplitude < options.amplitude_floor) break;
        eq.u = pin_phase(eq.u, m);
        eq.amplitude = eq.u.sup_norm();
        eq.residual_norm = sup_residual(family(lam), op, eq.u);
        branch.points.push_back(std::move(eq));
    }
    return branch;
}

}  // namespace sphere_eq
