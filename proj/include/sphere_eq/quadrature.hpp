#pragma once

#include <vector>

namespace sphere_eq {

struct GaussRule {
    std::vector<double> nodes;    // ascending in (-1, 1)
    std::vector<double> weights;  // sum to 2
};

/// n-point Gauss-Legendre rule on [-1, 1]. Roots of P_n are located by
/// Newton iteration from the Tricomi initial guess and refined until the
/// update falls below 1e-15.
GaussRule gauss_legendre(int n);

/// Same rule mapped affinely to [0, 1] (weights sum to 1).
GaussRule gauss_legendre_unit(int n);

}  // namespace sphere_eq
