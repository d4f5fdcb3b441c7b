#include "kernel_bodies.hpp"

namespace sphere_eq::kernels::serial {

void ring_forward(std::span<const double> values, int n_theta, int n_phi, std::span<cplx> out) {
    const RealFft& fft = RealFft::get(n_phi);
    for (int j = 0; j < n_theta; ++j) detail::ring_forward_row(fft, values, n_phi, out, j);
}

void ring_inverse(std::span<const cplx> spec, int n_theta, int n_phi, std::span<double> out) {
    const RealFft& fft = RealFft::get(n_phi);
    for (int j = 0; j < n_theta; ++j) detail::ring_inverse_row(fft, spec, n_phi, out, j);
}

void legendre_analysis(const LegendreTable& table, std::span<const cplx> ring_spec, int n_phi,
                       std::span<const double> weights, std::span<double> coeffs) {
    for (int m = 0; m <= table.degree_cap(); ++m)
        detail::legendre_analysis_mode(table, ring_spec, n_phi, weights, coeffs, m);
}

void legendre_synthesis(const LegendreTable& table, std::span<const double> coeffs, int n_phi,
                        std::span<cplx> ring_spec) {
    for (int j = 0; j < table.n_theta(); ++j) detail::zero_row(ring_spec, n_phi, j);
    for (int m = 0; m <= table.degree_cap(); ++m)
        detail::legendre_synthesis_mode(table, coeffs, n_phi, ring_spec, m);
}

void fd_apply(const ThetaStencil& stencil, std::span<const cplx> in, int n_phi, std::span<cplx> out) {
    for (int m = 0; m <= n_phi / 2; ++m) detail::fd_apply_mode(stencil, in, n_phi, out, m);
}

}  // namespace sphere_eq::kernels::serial
