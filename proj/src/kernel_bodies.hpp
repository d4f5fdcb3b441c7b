#pragma once

// Loop bodies shared by kernels_serial.cpp and kernels_omp.cpp. Each function
// computes one independent slice of the output (one ring or one mode).

#include <cmath>
#include <numbers>
#include <vector>

#include "sphere_eq/fourier.hpp"
#include "sphere_eq/kernels.hpp"

namespace sphere_eq::kernels::detail {

inline std::size_t n_modes(int n_phi) { return static_cast<std::size_t>(n_phi / 2 + 1); }

inline void ring_forward_row(const RealFft& fft, std::span<const double> values, int n_phi,
                             std::span<cplx> out, int j) {
    const std::size_t nm = n_modes(n_phi);
    auto row_out = out.subspan(j * nm, nm);
    fft.forward(values.subspan(static_cast<std::size_t>(j) * n_phi, n_phi), row_out);
    const double scale = 1.0 / n_phi;
    for (auto& c : row_out) c *= scale;
}

inline void ring_inverse_row(const RealFft& fft, std::span<const cplx> spec, int n_phi,
                             std::span<double> out, int j) {
    const std::size_t nm = n_modes(n_phi);
    std::vector<cplx> work(spec.begin() + j * nm, spec.begin() + (j + 1) * nm);
    work.front() = work.front().real();
    work.back() = work.back().real();
    fft.inverse(work, out.subspan(static_cast<std::size_t>(j) * n_phi, n_phi));
}

inline void legendre_analysis_mode(const LegendreTable& table, std::span<const cplx> ring_spec,
                                   int n_phi, std::span<const double> weights,
                                   std::span<double> coeffs, int m) {
    const int L = table.degree_cap();
    const int nt = table.n_theta();
    const std::size_t nm = n_modes(n_phi);
    constexpr double pi = std::numbers::pi;
    if (m == 0) {
        for (int l = 0; l <= L; ++l) {
            const auto lam = table.column(l, 0);
            double acc = 0.0;
            for (int j = 0; j < nt; ++j) acc += weights[j] * lam[j] * ring_spec[j * nm].real();
            coeffs[sh_index(l, 0)] = 2.0 * pi * acc;
        }
        return;
    }
    const double scale = std::numbers::sqrt2 * pi;
    for (int l = m; l <= L; ++l) {
        const auto lam = table.column(l, m);
        double acc_c = 0.0;
        double acc_s = 0.0;
        for (int j = 0; j < nt; ++j) {
            const cplx c = ring_spec[j * nm + m];
            acc_c += weights[j] * lam[j] * (2.0 * c.real());
            acc_s += weights[j] * lam[j] * (-2.0 * c.imag());
        }
        coeffs[sh_index(l, m)] = scale * acc_c;
        coeffs[sh_index(l, -m)] = scale * acc_s;
    }
}

inline void zero_row(std::span<cplx> ring_spec, int n_phi, int j) {
    const std::size_t nm = n_modes(n_phi);
    for (std::size_t m = 0; m < nm; ++m) ring_spec[j * nm + m] = 0.0;
}

inline void legendre_synthesis_mode(const LegendreTable& table, std::span<const double> coeffs,
                                    int n_phi, std::span<cplx> ring_spec, int m) {
    const int L = table.degree_cap();
    const int nt = table.n_theta();
    const std::size_t nm = n_modes(n_phi);
    for (int j = 0; j < nt; ++j) {
        double a = 0.0;
        double b = 0.0;
        for (int l = m; l <= L; ++l) {
            const double lam = table(l, m, j);
            a += coeffs[sh_index(l, m)] * lam;
            if (m > 0) b += coeffs[sh_index(l, -m)] * lam;
        }
        ring_spec[j * nm + m] = (m == 0) ? cplx(a, 0.0) : cplx(a, -b) / std::numbers::sqrt2;
    }
}

inline void fd_apply_mode(const ThetaStencil& st, std::span<const cplx> in, int n_phi,
                          std::span<cplx> out, int m) {
    const std::size_t nm = n_modes(n_phi);
    const double parity = (m % 2 == 0) ? 1.0 : -1.0;
    const double m2 = static_cast<double>(m) * m;
    for (int j = 0; j < st.n_theta; ++j) {
        cplx acc = -m2 * st.inv_sin2[j] * in[j * nm + m];
        for (const auto& tap : st.rows[j]) {
            const double w = tap.folded ? parity * tap.weight : tap.weight;
            acc += w * in[tap.ring * nm + m];
        }
        out[j * nm + m] = acc;
    }
}

}  // namespace sphere_eq::kernels::detail
