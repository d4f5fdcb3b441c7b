#include "sphere_eq/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sphere_eq/errors.hpp"
#include "sphere_eq/quadrature.hpp"

namespace sphere_eq {

NonlinearProblem chafee_infante(double lambda) {
    NonlinearProblem p;
    p.name = "chafee-infante";
    p.lambda = lambda;
    p.delta = 1.0;
    p.F = [lambda](double u, double q) { return q + lambda * u * (1.0 - u * u); };
    p.Fu = [lambda](double u, double) { return lambda * (1.0 - 3.0 * u * u); };
    p.Fq = [](double, double) { return 1.0; };
    return p;
}

ProblemFamily problem_family(const std::string& name) {
    if (name == "chafee-infante") return chafee_infante;
    throw ParameterError("unknown problem '" + name + "'");
}

std::vector<std::string> problem_names() { return {"chafee-infante"}; }

namespace {

ScalarField pointwise(const NonlinearProblem::Evaluator& f, const char* what, const ScalarField& u,
                      const ScalarField& q) {
    require_same_grid(u, q, what);
    ScalarField out(u.grid_ptr());
    const int n_phi = u.n_phi();
    for (int j = 0; j < u.n_theta(); ++j) {
        for (int k = 0; k < n_phi; ++k) {
            const double v = f(u(j, k), q(j, k));
            if (!std::isfinite(v)) {
                std::ostringstream msg;
                msg.precision(17);
                msg << what << ": non-finite value at node (j=" << j << ", k=" << k << ", u=" << u(j, k)
                    << ", q=" << q(j, k) << ")";
                throw EvaluationError(msg.str());
            }
            out(j, k) = v;
        }
    }
    return out;
}

}  // namespace

ScalarField evaluate_F(const NonlinearProblem& problem, const ScalarField& u, const ScalarField& q) {
    return pointwise(problem.F, "F", u, q);
}

ScalarField residual(const NonlinearProblem& problem, const OperatorHandle& op, const ScalarField& u) {
    return evaluate_F(problem, u, op.apply(u));
}

ScalarField Linearization::apply(const ScalarField& w) const {
    ScalarField out = hadamard(fq, op->apply(w));
    out += hadamard(fu, w);
    return out;
}

Linearization linearize(const NonlinearProblem& problem, const OperatorHandle& op, const ScalarField& u) {
    const ScalarField q = op.apply(u);
    return Linearization{&op, pointwise(problem.Fu, "F_u", u, q), pointwise(problem.Fq, "F_q", u, q)};
}

ScalarField jacobian_apply(const NonlinearProblem& problem, const OperatorHandle& op, const ScalarField& u,
                           const ScalarField& w) {
    require_same_grid(u, w, "jacobian_apply");
    return linearize(problem, op, u).apply(w);
}

EllipticityAudit ellipticity_audit(const NonlinearProblem& problem, const OperatorHandle& op,
                                   const ScalarField& u) {
    const ScalarField fq = pointwise(problem.Fq, "F_q", u, op.apply(u));
    EllipticityAudit out;
    out.min_Fq = fq.min_value();
    out.pass = out.min_Fq >= problem.delta;
    return out;
}

HadamardCoeffs hadamard_coeffs(const NonlinearProblem& problem, const OperatorHandle& op, const ScalarField& u,
                               const ScalarField& u_ref, int n_tau) {
    if (n_tau < 2) throw ParameterError("hadamard_coeffs: n_tau must be at least 2");
    require_same_grid(u, u_ref, "hadamard_coeffs");
    const GaussRule rule = gauss_legendre_unit(n_tau);
    const ScalarField q = op.apply(u);
    const ScalarField q_ref = op.apply(u_ref);

    HadamardCoeffs out{ScalarField(u.grid_ptr()), ScalarField(u.grid_ptr()), rule.nodes, rule.weights};
    auto a = out.a.values();
    auto b = out.b.values();
    const auto uv = u.values();
    const auto rv = u_ref.values();
    const auto qv = q.values();
    const auto qr = q_ref.values();
    for (int t = 0; t < n_tau; ++t) {
        const double tau = rule.nodes[t];
        const double w = rule.weights[t];
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double ut = tau * uv[i] + (1.0 - tau) * rv[i];
            const double qt = tau * qv[i] + (1.0 - tau) * qr[i];
            a[i] += w * problem.Fq(ut, qt);
            b[i] += w * problem.Fu(ut, qt);
        }
    }
    // Divide by the weight sum accumulated in the same order, so a constant
    // derivative comes back bit for bit.
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] /= wsum;
        b[i] /= wsum;
    }
    if (!out.a.all_finite() || !out.b.all_finite())
        throw EvaluationError("hadamard_coeffs: non-finite coefficient");
    return out;
}

}  // namespace sphere_eq
