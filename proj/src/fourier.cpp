#include "sphere_eq/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "sphere_eq/errors.hpp"
#include "sphere_eq/kernels.hpp"

namespace sphere_eq {

namespace {
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

RealFft::RealFft(int n) : n_(n) {
    // Planning arrays are throwaway; FFTW_UNALIGNED lets the plans run on any buffer.
    std::vector<double> real(n);
    std::vector<cplx> spec(n / 2 + 1);
    auto* c = reinterpret_cast<fftw_complex*>(spec.data());
    r2c_ = fftw_plan_dft_r2c_1d(n, real.data(), c, FFTW_ESTIMATE | FFTW_UNALIGNED);
    c2r_ = fftw_plan_dft_c2r_1d(n, c, real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
}

RealFft::~RealFft() {
    std::lock_guard lock(plan_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(r2c_));
    fftw_destroy_plan(static_cast<fftw_plan>(c2r_));
}

const RealFft& RealFft::get(int n) {
    if (n < 2) throw ParameterError("RealFft: length must be at least 2");
    std::mutex& mutex = plan_mutex();  // constructed before, destroyed after, the cache
    static std::map<int, std::unique_ptr<RealFft>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::unique_ptr<RealFft>(new RealFft(n))).first;
    return *it->second;
}

void RealFft::forward(std::span<const double> in, std::span<cplx> out) const {
    // r2c does not write to its input.
    fftw_execute_dft_r2c(static_cast<fftw_plan>(r2c_), const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(std::span<cplx> in, std::span<double> out) const {
    fftw_execute_dft_c2r(static_cast<fftw_plan>(c2r_), reinterpret_cast<fftw_complex*>(in.data()),
                         out.data());
}

RingSpectrum::RingSpectrum(int n_theta, int n_phi)
    : n_theta_(n_theta), n_phi_(n_phi),
      data_(static_cast<std::size_t>(n_theta) * (n_phi / 2 + 1)) {}

RingSpectrum ring_analysis(const ScalarField& field) {
    RingSpectrum spec(field.n_theta(), field.n_phi());
    kernels::omp::ring_forward(field.values(), field.n_theta(), field.n_phi(), spec.data());
    return spec;
}

ScalarField ring_synthesis(const RingSpectrum& spec, const GridPtr& grid) {
    ScalarField out(grid);
    kernels::omp::ring_inverse(spec.data(), spec.n_theta(), spec.n_phi(), out.values());
    return out;
}

RingSpectrum ring_derivative(const RingSpectrum& spec, int order) {
    RingSpectrum out = spec;
    const int nyq = spec.nyquist();
    cplx factor_unit(0.0, 1.0);
    for (int m = 0; m < spec.n_modes(); ++m) {
        cplx f = std::pow(factor_unit * static_cast<double>(m), order);
        if (m == nyq && order % 2 == 1) f = 0.0;
        for (int j = 0; j < spec.n_theta(); ++j) out(j, m) *= f;
    }
    return out;
}

double ring_eval(const RingSpectrum& spec, int j, double phi) {
    const int nyq = spec.nyquist();
    double acc = spec(j, 0).real();
    for (int m = 1; m < nyq; ++m) {
        const cplx e(std::cos(m * phi), std::sin(m * phi));
        acc += 2.0 * (spec(j, m) * e).real();
    }
    acc += spec(j, nyq).real() * std::cos(nyq * phi);
    return acc;
}

std::vector<double> ring_refine(const RingSpectrum& spec, int factor) {
    if (factor < 1) throw ParameterError("ring_refine: factor must be positive");
    const int n = spec.n_phi();
    const int nr = n * factor;
    const int nyq = spec.nyquist();
    const RealFft& fft = RealFft::get(nr);
    std::vector<double> out(static_cast<std::size_t>(spec.n_theta()) * nr);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < spec.n_theta(); ++j) {
        std::vector<cplx> work(nr / 2 + 1, cplx(0.0));
        for (int m = 0; m < nyq; ++m) work[m] = spec(j, m);
        // The coarse Nyquist cosine is split evenly between +N/2 and -N/2.
        work[nyq] = (factor == 1) ? spec(j, nyq).real() : 0.5 * spec(j, nyq).real();
        work[0] = work[0].real();
        fft.inverse(work, std::span<double>(out).subspan(static_cast<std::size_t>(j) * nr, nr));
    }
    return out;
}

}  // namespace sphere_eq
