#pragma once

#include <complex>
#include <span>
#include <vector>

#include "sphere_eq/sphere_field.hpp"

namespace sphere_eq {

using cplx = std::complex<double>;

/// Length-n real FFT pair (FFTW underneath). Plans are created once per
/// length under a lock; execution is thread-safe.
class RealFft {
public:
    static const RealFft& get(int n);

    int size() const { return n_; }
    /// out[m] = sum_k in[k] exp(-2*pi*i*m*k/n), m = 0..n/2 (unnormalized).
    void forward(std::span<const double> in, std::span<cplx> out) const;
    /// out[k] = sum over the Hermitian extension of in, unnormalized.
    /// `in` is used as scratch and is overwritten.
    void inverse(std::span<cplx> in, std::span<double> out) const;

    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;
    ~RealFft();

private:
    explicit RealFft(int n);
    int n_;
    void* r2c_;
    void* c2r_;
};

/// Per-ring normalized DFT of a field:
///   c(j, m) = (1/n_phi) sum_k u(j, k) exp(-i m phi_k),  m = 0..n_phi/2,
/// so that u(j, phi) = c0 + 2 Re sum_{0<m<N/2} c_m e^{i m phi} + c_{N/2} cos(N phi / 2).
class RingSpectrum {
public:
    RingSpectrum() = default;
    RingSpectrum(int n_theta, int n_phi);

    int n_theta() const { return n_theta_; }
    int n_phi() const { return n_phi_; }
    int n_modes() const { return n_phi_ / 2 + 1; }
    int nyquist() const { return n_phi_ / 2; }

    cplx& operator()(int j, int m) { return data_[static_cast<std::size_t>(j) * n_modes() + m]; }
    const cplx& operator()(int j, int m) const {
        return data_[static_cast<std::size_t>(j) * n_modes() + m];
    }
    std::span<cplx> data() { return data_; }
    std::span<const cplx> data() const { return data_; }

private:
    int n_theta_ = 0;
    int n_phi_ = 0;
    std::vector<cplx> data_;
};

RingSpectrum ring_analysis(const ScalarField& field);
ScalarField ring_synthesis(const RingSpectrum& spec, const GridPtr& grid);

/// k-th phi-derivative of the interpolant (Nyquist dropped for odd k).
RingSpectrum ring_derivative(const RingSpectrum& spec, int order);

/// Value of ring j's trigonometric interpolant at an arbitrary longitude.
double ring_eval(const RingSpectrum& spec, int j, double phi);

/// Interpolant sampled on factor * n_phi uniform longitudes per ring (theta-major).
std::vector<double> ring_refine(const RingSpectrum& spec, int factor);

}  // namespace sphere_eq
