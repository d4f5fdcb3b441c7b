#pragma once

#include <vector>

namespace sphere_eq {

/// Periodic equilibrium of u'' + lambda u (1 - u^2) = 0 on the circle with
/// fundamental period 2*pi/k, phase-fixed by u'(0) = 0 and u(0) > 0.
struct CircleProfile {
    int n = 0;                  // samples, phi_i = 2*pi*i/n
    std::vector<double> values;
    double lambda = 0.0;
    int k_mode = 1;
    bool trivial = false;       // lambda <= k^2: no nontrivial profile
    /// Coefficients c_p of u(phi) = sum_p c_p cos(p k phi).
    std::vector<double> cos_coeffs;
    double residual_norm = 0.0; // sup of the equation residual on a 4x oversampled grid
    int newton_iters = 0;
    double amplitude = 0.0;

    double value(double phi) const;
    double derivative(double phi) const;
};

/// Cosine collocation in s = k*phi with `n_modes` unknowns at the points
/// s_i = pi (i + 1/2) / n_modes, solved by Newton with dense LU from the
/// normal-form seed. Throws ParameterError for k < 1 or n < 8 and Error if
/// Newton does not converge.
CircleProfile circle_solve(double lambda, int k, int n, int n_modes = 48);

/// Zeros of u' in [0, 2*pi), located by sign change on a fine grid and bisection.
std::vector<double> circle_extrema(const CircleProfile& profile);

}  // namespace sphere_eq
