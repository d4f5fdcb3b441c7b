#pragma once

#include <functional>
#include <span>

namespace sphere_eq {

/// y = A x
using LinearMap = std::function<void(std::span<const double> x, std::span<double> y)>;

struct KrylovOptions {
    double rel_tol = 1e-10;
    int restart = 80;
    int max_iter = 4000;
};

struct KrylovResult {
    int iterations = 0;
    double rel_residual = 0.0;
    bool converged = false;
};

/// Restarted GMRES (modified Gram-Schmidt, Givens rotations) with optional
/// right preconditioning by a diagonal, given as its inverse. `x` holds the
/// initial guess on entry and the solution on exit. The stopping test uses the
/// true residual ||b - A x|| / ||b||, recomputed at every restart.
KrylovResult gmres(const LinearMap& A, std::span<const double> b, std::span<double> x,
                   const KrylovOptions& options = {}, std::span<const double> inv_diag = {});

/// Same iteration with a general right preconditioner M^{-1} (empty = none).
KrylovResult gmres(const LinearMap& A, std::span<const double> b, std::span<double> x,
                   const KrylovOptions& options, const LinearMap& precond);

}  // namespace sphere_eq
