#pragma once

// Data-parallel inner loops of the library, each in two builds with the same
// signature: `serial` is the reference, `omp` spreads the outer loop over
// OpenMP threads. Every output element is produced by the same sequence of
// floating-point operations in both, so the results agree bit for bit.
// Library code calls the `omp` variants; tests and bench/ compare the two.

#include <complex>
#include <span>

#include "sphere_eq/legendre.hpp"
#include "sphere_eq/theta_stencil.hpp"

namespace sphere_eq::kernels {

using cplx = std::complex<double>;

#define SPHERE_EQ_KERNEL_DECLS                                                                     \
    /* Normalized per-ring DFT, out is n_theta x (n_phi/2+1). */                                   \
    void ring_forward(std::span<const double> values, int n_theta, int n_phi, std::span<cplx> out); \
    /* Inverse of ring_forward. Imaginary parts of DC and Nyquist are ignored. */                  \
    void ring_inverse(std::span<const cplx> spec, int n_theta, int n_phi, std::span<double> out);   \
    /* Ring spectra -> real harmonic coefficients (Gauss quadrature in theta). */                  \
    void legendre_analysis(const LegendreTable& table, std::span<const cplx> ring_spec, int n_phi, \
                           std::span<const double> weights, std::span<double> coeffs);             \
    /* Real harmonic coefficients -> ring spectra; modes above the cap are zeroed. */              \
    void legendre_synthesis(const LegendreTable& table, std::span<const double> coeffs, int n_phi, \
                            std::span<cplx> ring_spec);                                            \
    /* Per-mode finite-difference Laplacian on ring spectra. */                                    \
    void fd_apply(const ThetaStencil& stencil, std::span<const cplx> in, int n_phi,                \
                  std::span<cplx> out);

namespace serial {
SPHERE_EQ_KERNEL_DECLS
}  // namespace serial

namespace omp {
SPHERE_EQ_KERNEL_DECLS
}  // namespace omp

#undef SPHERE_EQ_KERNEL_DECLS

/// Worker count the omp variants will use (1 without OpenMP).
int max_threads();
/// Caps worker parallelism; 0 restores the runtime default.
void set_threads(int n);

}  // namespace sphere_eq::kernels
