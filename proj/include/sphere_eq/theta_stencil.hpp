#pragma once

#include <array>
#include <vector>

#include "sphere_eq/sphere_field.hpp"

namespace sphere_eq {

/// Finite-difference realization of d2/dtheta2 + cot(theta) d/dtheta on the
/// Gauss colatitudes, applied per phi-Fourier mode.
///
/// Row j uses the five nodes j-2..j+2: the average of the two one-sided
/// four-point Fornberg stencils {j-2..j+1} and {j-1..j+2}, each second order
/// for the second derivative on a nonuniform grid. Nodes beyond a pole are
/// ghosts: crossing the pole maps (theta, phi) to (-theta, phi + pi), so
/// mode m picks up the parity (-1)^m and the ghost at -theta_i reuses ring i.
struct ThetaStencil {
    struct Tap {
        int ring;      // source ring after pole folding
        bool folded;   // true if reached through a pole (parity applies)
        double weight;
    };
    int n_theta = 0;
    std::vector<std::array<Tap, 5>> rows;
    std::vector<double> inv_sin2;  // 1 / sin^2(theta_j)

    static ThetaStencil build(const GridSpec& grid);

    /// Diagonal of the mode-m block.
    double diagonal(int j, int m) const;
};

}  // namespace sphere_eq
