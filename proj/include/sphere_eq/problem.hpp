#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sphere_eq/laplace_beltrami.hpp"
#include "sphere_eq/sphere_field.hpp"

namespace sphere_eq {

/// Pointwise nonlinearity F(u, q) of 0 = F(u, Laplacian u), with its partial
/// derivatives. `delta` is the ellipticity floor the caller promises for F_q.
struct NonlinearProblem {
    using Evaluator = std::function<double(double u, double q)>;

    std::string name;
    double lambda = 0.0;
    double delta = 1.0;
    Evaluator F;
    Evaluator Fu;
    Evaluator Fq;
};

using ProblemFamily = std::function<NonlinearProblem(double lambda)>;

/// F = q + lambda u (1 - u^2), F_u = lambda (1 - 3u^2), F_q = 1, delta = 1.
NonlinearProblem chafee_infante(double lambda);

/// Built-in families by name; throws ParameterError for unknown names.
ProblemFamily problem_family(const std::string& name);
std::vector<std::string> problem_names();

/// F(u, q) pointwise; throws EvaluationError on a non-finite value.
ScalarField evaluate_F(const NonlinearProblem& problem, const ScalarField& u, const ScalarField& q);

/// F(u, Laplacian u).
ScalarField residual(const NonlinearProblem& problem, const OperatorHandle& op, const ScalarField& u);

/// Frozen linearization w -> F_u w + F_q Laplacian(w) at a base state.
struct Linearization {
    const OperatorHandle* op = nullptr;
    ScalarField fu;
    ScalarField fq;

    ScalarField apply(const ScalarField& w) const;
};

Linearization linearize(const NonlinearProblem& problem, const OperatorHandle& op, const ScalarField& u);

ScalarField jacobian_apply(const NonlinearProblem& problem, const OperatorHandle& op, const ScalarField& u,
                           const ScalarField& w);

struct EllipticityAudit {
    double min_Fq = 0.0;
    bool pass = false;
};

EllipticityAudit ellipticity_audit(const NonlinearProblem& problem, const OperatorHandle& op,
                                   const ScalarField& u);

/// a = int_0^1 F_q(u^t, q^t) dt and b = int_0^1 F_u(u^t, q^t) dt along
/// u^t = t u + (1 - t) u_ref, using Gauss-Legendre in t.
struct HadamardCoeffs {
    ScalarField a;
    ScalarField b;
    std::vector<double> tau_nodes;
    std::vector<double> tau_weights;
};

HadamardCoeffs hadamard_coeffs(const NonlinearProblem& problem, const OperatorHandle& op, const ScalarField& u,
                               const ScalarField& u_ref, int n_tau = 8);

}  // namespace sphere_eq
