#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "sphere_eq/legendre.hpp"
#include "sphere_eq/sphere_field.hpp"
#include "sphere_eq/theta_stencil.hpp"

namespace sphere_eq {

/// Real spherical-harmonic coefficients for 0 <= l <= L, -l <= m <= l, in the
/// orthonormal basis of LegendreTable. Flat storage via sh_index(l, m).
struct SpectralCoeffs {
    int degree_cap = 0;
    std::vector<double> coeffs;

    SpectralCoeffs() = default;
    explicit SpectralCoeffs(int L) : degree_cap(L), coeffs(static_cast<std::size_t>(L + 1) * (L + 1), 0.0) {}

    double& operator()(int l, int m) { return coeffs[sh_index(l, m)]; }
    double operator()(int l, int m) const { return coeffs[sh_index(l, m)]; }
};

/// Analysis/synthesis pair for one grid and degree cap. Immutable; share freely.
class SphericalTransform {
public:
    /// Throws ResolutionError unless L <= n_theta - 1 and 2L < n_phi.
    SphericalTransform(GridPtr grid, int degree_cap);

    const GridSpec& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    int degree_cap() const { return table_.degree_cap(); }
    const LegendreTable& table() const { return table_; }

    SpectralCoeffs forward(const ScalarField& field) const;
    ScalarField inverse(const SpectralCoeffs& coeffs) const;

private:
    GridPtr grid_;
    LegendreTable table_;
};

/// Largest degree cap the grid resolves without aliasing.
int max_degree_cap(const GridSpec& grid);

SpectralCoeffs sht_forward(const ScalarField& field, int degree_cap);
ScalarField sht_inverse(const SpectralCoeffs& coeffs, const GridPtr& grid);

enum class Realization { spectral, finite_difference };

std::string to_string(Realization r);
/// Accepts "spectral" and "fd" / "finite-difference"; throws ParameterError otherwise.
Realization parse_realization(const std::string& name);

/// The Laplace-Beltrami operator on one grid in one realization.
///
/// Spectral: synthesis of -l(l+1) times the analysis up to the grid's degree
/// cap; grid functions outside that band are annihilated. Finite difference:
/// ThetaStencil per phi-mode, so the operator is block diagonal over m.
/// Both realizations commute with every phi-reflection and phi-translation.
class OperatorHandle {
public:
    OperatorHandle(GridPtr grid, Realization realization);

    const GridSpec& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    Realization realization() const { return realization_; }
    /// Degree cap of the spectral realization (unused by finite differences).
    int degree_cap() const;
    const ThetaStencil& stencil() const { return stencil_; }

    ScalarField apply(const ScalarField& field) const;

    /// Orthogonal projection onto the harmonics the spectral realization
    /// resolves; identity for finite differences.
    ScalarField project(const ScalarField& field) const;

    /// Diagonal of the assembled operator (theta-dependent only), as a field.
    ScalarField diagonal() const;

    /// Solves (I - shift * Laplacian) u = rhs for shift >= 0. Exact division for
    /// the spectral realization; preconditioned Krylov for finite differences.
    ScalarField solve_shifted(double shift, const ScalarField& rhs) const;

private:
    GridPtr grid_;
    Realization realization_;
    std::shared_ptr<const SphericalTransform> transform_;
    ThetaStencil stencil_;
};

ScalarField apply_laplacian(const OperatorHandle& op, const ScalarField& field);

/// Sampled orthonormal real harmonic Y_l^m; throws ParameterError if |m| > l.
ScalarField harmonic_mode(const GridPtr& grid, int l, int m);

struct TrivialEigen {
    int l;
    long long eigenvalue;  // -l(l+1)
    int multiplicity;      // 2l+1
};

std::vector<TrivialEigen> trivial_branch_eigenvalues(int l_max);

/// CSV with header `l,m,coeff`, one row per coefficient, 17 significant digits.
void write_coeffs_csv(std::ostream& os, const SpectralCoeffs& coeffs);

}  // namespace sphere_eq
