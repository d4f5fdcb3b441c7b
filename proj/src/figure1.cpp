#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <numbers>

#include "sphere_eq/symmetry.hpp"

namespace sphere_eq {

namespace {

constexpr double pi = std::numbers::pi;

// Extremum longitudes on [0, pi): one wide period, then two narrow ones.
constexpr std::array<double, 6> breakpoints{pi / 8, 3 * pi / 8, 9 * pi / 16, 11 * pi / 16, 13 * pi / 16,
                                            15 * pi / 16};

// Phase psi(phi) = 6 phi + c0 + a1 cos 2phi + b1 sin 2phi + a2 cos 4phi + b2 sin 4phi + a3 cos 6phi,
// fitted so that psi(breakpoint_i) = pi/2 + i*pi; h = sin(psi) then peaks or
// dips with unit height exactly at the breakpoints.
struct Warp {
    std::array<double, 6> c{};

    static std::array<double, 6> basis(double phi) {
        return {1.0, std::cos(2 * phi), std::sin(2 * phi), std::cos(4 * phi), std::sin(4 * phi),
                std::cos(6 * phi)};
    }

    Warp() {
        Eigen::Matrix<double, 6, 6> A;
        Eigen::Matrix<double, 6, 1> rhs;
        for (int i = 0; i < 6; ++i) {
            const auto b = basis(breakpoints[i]);
            for (int p = 0; p < 6; ++p) A(i, p) = b[p];
            rhs(i) = pi / 2 + i * pi - 6.0 * breakpoints[i];
        }
        const Eigen::Matrix<double, 6, 1> sol = A.fullPivLu().solve(rhs);
        for (int p = 0; p < 6; ++p) c[p] = sol(p);
    }

    double psi(double phi) const {
        const auto b = basis(phi);
        double v = 6.0 * phi;
        for (int p = 0; p < 6; ++p) v += c[p] * b[p];
        return v;
    }
};

const Warp& warp() {
    static const Warp w;
    return w;
}

}  // namespace

double figure1_profile(double phi) { return std::sin(warp().psi(phi)); }

std::vector<double> figure1_extrema() {
    std::vector<double> out;
    for (double shift : {0.0, pi})
        for (double b : breakpoints) out.push_back(b + shift);
    return out;
}

ScalarField generate_figure1(const GridPtr& grid) {
    return eval_on_grid(grid, [](double theta, double phi) { return std::sin(theta) * figure1_profile(phi); });
}

}  // namespace sphere_eq
