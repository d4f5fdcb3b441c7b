#include "sphere_eq/laplace_beltrami.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <tuple>
#include <numbers>
#include <ostream>

#include "sphere_eq/errors.hpp"
#include "sphere_eq/fourier.hpp"
#include "sphere_eq/kernels.hpp"
#include "sphere_eq/krylov.hpp"

namespace sphere_eq {

namespace {

// Fornberg's recursion: weights of derivatives 0..2 at x0 from nodes xs.
std::vector<std::array<double, 3>> fornberg_weights(double x0, const std::vector<double>& xs) {
    const int n = static_cast<int>(xs.size());
    std::vector<std::array<double, 3>> c(n, {0.0, 0.0, 0.0});
    double c1 = 1.0;
    double c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, 2);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int s = mn; s > 0; --s) c[i][s] = c1 * (s * c[i - 1][s - 1] - c5 * c[i - 1][s]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int s = mn; s > 0; --s) c[j][s] = (c4 * c[j][s] - s * c[j][s - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    return c;
}

}  // namespace

ThetaStencil ThetaStencil::build(const GridSpec& grid) {
    const int n = grid.n_theta;
    const auto& th = grid.theta_nodes;
    ThetaStencil st;
    st.n_theta = n;
    st.rows.resize(n);
    st.inv_sin2.resize(n);

    // Position, source ring and fold flag of a (possibly ghost) node index.
    auto node = [&](int i) {
        if (i < 0) return std::tuple{-th[-i - 1], -i - 1, true};
        if (i >= n) return std::tuple{2.0 * std::numbers::pi - th[2 * n - 1 - i], 2 * n - 1 - i, true};
        return std::tuple{th[i], i, false};
    };

    for (int j = 0; j < n; ++j) {
        const double cot = grid.cos_theta[j] / grid.sin_theta[j];
        std::array<double, 5> w{};
        for (int first : {j - 2, j - 1}) {
            std::vector<double> xs;
            for (int i = first; i < first + 4; ++i) xs.push_back(std::get<0>(node(i)));
            const auto c = fornberg_weights(th[j], xs);
            for (int t = 0; t < 4; ++t) w[first + t - (j - 2)] += 0.5 * (c[t][2] + cot * c[t][1]);
        }
        for (int t = 0; t < 5; ++t) {
            const auto [x, ring, folded] = node(j - 2 + t);
            (void)x;
            st.rows[j][t] = Tap{ring, folded, w[t]};
        }
        st.inv_sin2[j] = 1.0 / (grid.sin_theta[j] * grid.sin_theta[j]);
    }
    return st;
}

double ThetaStencil::diagonal(int j, int m) const {
    const double parity = (m % 2 == 0) ? 1.0 : -1.0;
    double d = -static_cast<double>(m) * m * inv_sin2[j];
    for (const auto& tap : rows[j])
        if (tap.ring == j) d += tap.folded ? parity * tap.weight : tap.weight;
    return d;
}

int max_degree_cap(const GridSpec& grid) { return std::min(grid.n_theta - 1, (grid.n_phi - 1) / 2); }

namespace {
int checked_cap(const GridSpec& grid, int degree_cap) {
    if (degree_cap < 0 || degree_cap > grid.n_theta - 1 || 2 * degree_cap >= grid.n_phi)
        throw ResolutionError("degree cap " + std::to_string(degree_cap) + " not resolved by a " +
                              std::to_string(grid.n_theta) + "x" + std::to_string(grid.n_phi) + " grid");
    return degree_cap;
}
}  // namespace

SphericalTransform::SphericalTransform(GridPtr grid, int degree_cap)
    : grid_(std::move(grid)), table_(checked_cap(*grid_, degree_cap), grid_->cos_theta, grid_->sin_theta) {}

SpectralCoeffs SphericalTransform::forward(const ScalarField& field) const {
    if (!field.grid().same_shape(*grid_)) throw ParameterError("sht_forward: field grid mismatch");
    const RingSpectrum spec = ring_analysis(field);
    SpectralCoeffs out(degree_cap());
    kernels::omp::legendre_analysis(table_, spec.data(), grid_->n_phi, grid_->theta_weights, out.coeffs);
    return out;
}

ScalarField SphericalTransform::inverse(const SpectralCoeffs& coeffs) const {
    if (coeffs.degree_cap != degree_cap()) throw ParameterError("sht_inverse: degree cap mismatch");
    RingSpectrum spec(grid_->n_theta, grid_->n_phi);
    kernels::omp::legendre_synthesis(table_, coeffs.coeffs, grid_->n_phi, spec.data());
    return ring_synthesis(spec, grid_);
}

SpectralCoeffs sht_forward(const ScalarField& field, int degree_cap) {
    return SphericalTransform(field.grid_ptr(), degree_cap).forward(field);
}

ScalarField sht_inverse(const SpectralCoeffs& coeffs, const GridPtr& grid) {
    return SphericalTransform(grid, coeffs.degree_cap).inverse(coeffs);
}

std::string to_string(Realization r) {
    return r == Realization::spectral ? "spectral" : "fd";
}

Realization parse_realization(const std::string& name) {
    if (name == "spectral") return Realization::spectral;
    if (name == "fd" || name == "finite-difference") return Realization::finite_difference;
    throw ParameterError("unknown operator realization '" + name + "' (expected spectral or fd)");
}

OperatorHandle::OperatorHandle(GridPtr grid, Realization realization)
    : grid_(std::move(grid)), realization_(realization) {
    if (realization_ == Realization::spectral) {
        transform_ = std::make_shared<SphericalTransform>(grid_, max_degree_cap(*grid_));
    } else {
        stencil_ = ThetaStencil::build(*grid_);
    }
}

int OperatorHandle::degree_cap() const { return transform_ ? transform_->degree_cap() : max_degree_cap(*grid_); }

ScalarField OperatorHandle::apply(const ScalarField& field) const {
    if (!field.grid().same_shape(*grid_)) throw ParameterError("apply_laplacian: field grid mismatch");
    if (realization_ == Realization::spectral) {
        SpectralCoeffs c = transform_->forward(field);
        for (int l = 0; l <= c.degree_cap; ++l) {
            const double ev = -static_cast<double>(l) * (l + 1);
            for (int m = -l; m <= l; ++m) c(l, m) *= ev;
        }
        return transform_->inverse(c);
    }
    const RingSpectrum in = ring_analysis(field);
    RingSpectrum out(in.n_theta(), in.n_phi());
    kernels::omp::fd_apply(stencil_, in.data(), grid_->n_phi, out.data());
    return ring_synthesis(out, grid_);
}

ScalarField OperatorHandle::project(const ScalarField& field) const {
    if (realization_ == Realization::finite_difference) return field;
    return transform_->inverse(transform_->forward(field));
}

ScalarField OperatorHandle::diagonal() const {
    ScalarField d(grid_);
    const int n_phi = grid_->n_phi;
    for (int j = 0; j < grid_->n_theta; ++j) {
        double v = 0.0;
        if (realization_ == Realization::spectral) {
            // Addition theorem: sum_m Y_lm^2 = (2l+1)/(4 pi) at every point.
            double s = 0.0;
            for (int l = 0; l <= degree_cap(); ++l) s += static_cast<double>(l) * (l + 1) * (2 * l + 1);
            v = -grid_->theta_weights[j] * grid_->dphi() * s / (4.0 * std::numbers::pi);
        } else {
            // Circulant in phi: the diagonal is the mean of the mode-block diagonals.
            for (int k = 0; k < n_phi; ++k) v += stencil_.diagonal(j, std::min(k, n_phi - k));
            v /= n_phi;
        }
        for (int k = 0; k < n_phi; ++k) d(j, k) = v;
    }
    return d;
}

ScalarField OperatorHandle::solve_shifted(double shift, const ScalarField& rhs) const {
    if (shift < 0.0) throw ParameterError("solve_shifted: shift must be non-negative");
    if (realization_ == Realization::spectral) {
        SpectralCoeffs c = transform_->forward(rhs);
        for (int l = 0; l <= c.degree_cap; ++l) {
            const double f = 1.0 / (1.0 + shift * l * (l + 1)) - 1.0;
            for (int m = -l; m <= l; ++m) c(l, m) *= f;
        }
        return rhs + transform_->inverse(c);
    }
    const ScalarField diag = diagonal();
    std::vector<double> inv_diag(rhs.size());
    for (std::size_t i = 0; i < inv_diag.size(); ++i) inv_diag[i] = 1.0 / (1.0 - shift * diag.values()[i]);
    LinearMap A = [&](std::span<const double> x, std::span<double> y) {
        ScalarField xf(grid_, std::vector<double>(x.begin(), x.end()));
        const ScalarField lx = apply(xf);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] - shift * lx.values()[i];
    };
    ScalarField u = rhs;
    KrylovOptions opts;
    opts.rel_tol = 1e-13;
    const KrylovResult res = gmres(A, rhs.values(), u.values(), opts, inv_diag);
    if (!res.converged && res.rel_residual > 1e-9)
        throw Error("solve_shifted: Krylov solve stagnated at relative residual " +
                    format_sci(res.rel_residual));
    return u;
}

ScalarField apply_laplacian(const OperatorHandle& op, const ScalarField& field) { return op.apply(field); }

ScalarField harmonic_mode(const GridPtr& grid, int l, int m) {
    if (l < 0 || std::abs(m) > l) throw ParameterError("harmonic_mode: need |m| <= l");
    if (2 * std::abs(m) >= grid->n_phi) throw ResolutionError("harmonic_mode: order not resolved in phi");
    const LegendreTable table(l, grid->cos_theta, grid->sin_theta);
    const int am = std::abs(m);
    ScalarField y(grid);
    for (int j = 0; j < grid->n_theta; ++j) {
        const double lam = table(l, am, j);
        for (int k = 0; k < grid->n_phi; ++k) {
            const double phi = grid->phi(k);
            double angular = 1.0;
            if (m > 0) angular = std::numbers::sqrt2 * std::cos(m * phi);
            if (m < 0) angular = std::numbers::sqrt2 * std::sin(am * phi);
            y(j, k) = lam * angular;
        }
    }
    return y;
}

std::vector<TrivialEigen> trivial_branch_eigenvalues(int l_max) {
    if (l_max < 0) throw ParameterError("trivial_branch_eigenvalues: l_max must be non-negative");
    std::vector<TrivialEigen> out;
    for (int l = 0; l <= l_max; ++l) out.push_back({l, -static_cast<long long>(l) * (l + 1), 2 * l + 1});
    return out;
}

void write_coeffs_csv(std::ostream& os, const SpectralCoeffs& coeffs) {
    const auto old = os.precision(17);
    os << "l,m,coeff\n";
    for (int l = 0; l <= coeffs.degree_cap; ++l)
        for (int m = -l; m <= l; ++m) os << l << ',' << m << ',' << coeffs(l, m) << '\n';
    os.precision(old);
}

}  // namespace sphere_eq
