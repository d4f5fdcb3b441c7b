#include "sphere_eq/circle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sphere_eq/errors.hpp"

namespace sphere_eq {

double CircleProfile::value(double phi) const {
    double v = 0.0;
    for (std::size_t p = 0; p < cos_coeffs.size(); ++p) v += cos_coeffs[p] * std::cos(p * k_mode * phi);
    return v;
}

double CircleProfile::derivative(double phi) const {
    double v = 0.0;
    for (std::size_t p = 1; p < cos_coeffs.size(); ++p)
        v -= cos_coeffs[p] * p * k_mode * std::sin(p * k_mode * phi);
    return v;
}

namespace {

double equation_residual(const CircleProfile& prof, int n_check) {
    const double k2 = static_cast<double>(prof.k_mode) * prof.k_mode;
    double worst = 0.0;
    for (int i = 0; i < n_check; ++i) {
        const double s = 2.0 * std::numbers::pi * i / n_check;
        double v = 0.0, vss = 0.0;
        for (std::size_t p = 0; p < prof.cos_coeffs.size(); ++p) {
            const double c = std::cos(p * s);
            v += prof.cos_coeffs[p] * c;
            vss -= prof.cos_coeffs[p] * static_cast<double>(p * p) * c;
        }
        worst = std::max(worst, std::abs(k2 * vss + prof.lambda * v * (1.0 - v * v)));
    }
    return worst;
}

}  // namespace

CircleProfile circle_solve(double lambda, int k, int n, int n_modes) {
    if (k < 1) throw ParameterError("circle_solve: k must be at least 1");
    if (n < 8) throw ParameterError("circle_solve: need at least 8 samples");
    if (n_modes < 4) throw ParameterError("circle_solve: need at least 4 modes");

    CircleProfile prof;
    prof.n = n;
    prof.lambda = lambda;
    prof.k_mode = k;
    prof.cos_coeffs.assign(n_modes, 0.0);
    const double k2 = static_cast<double>(k) * k;

    if (lambda <= k2) {
        prof.trivial = true;
        prof.values.assign(n, 0.0);
        return prof;
    }

    const int P = n_modes;
    Eigen::MatrixXd C(P, P);  // C(i, p) = cos(p s_i)
    std::vector<double> s_nodes(P);
    for (int i = 0; i < P; ++i) {
        s_nodes[i] = std::numbers::pi * (i + 0.5) / P;
        for (int p = 0; p < P; ++p) C(i, p) = std::cos(p * s_nodes[i]);
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(P);
    c(1) = std::sqrt(4.0 * (lambda - k2) / (3.0 * lambda));

    Eigen::VectorXd lap(P);
    for (int p = 0; p < P; ++p) lap(p) = -k2 * p * p;

    constexpr double tol = 1e-13;
    constexpr int max_iter = 50;
    int it = 0;
    for (;; ++it) {
        const Eigen::VectorXd v = C * c;
        const Eigen::VectorXd vss = C * lap.asDiagonal() * c;
        Eigen::VectorXd r(P);
        for (int i = 0; i < P; ++i) r(i) = vss(i) + lambda * v(i) * (1.0 - v(i) * v(i));
        if (r.lpNorm<Eigen::Infinity>() <= tol) break;
        if (it >= max_iter)
            throw Error("circle_solve: Newton did not converge (residual " +
                        format_sci(r.lpNorm<Eigen::Infinity>()) + ")");
        Eigen::MatrixXd J = C * lap.asDiagonal();
        for (int i = 0; i < P; ++i) J.row(i) += lambda * (1.0 - 3.0 * v(i) * v(i)) * C.row(i);
        c -= J.partialPivLu().solve(r);
    }

    for (int p = 0; p < P; ++p) prof.cos_coeffs[p] = c(p);
    if (prof.value(0.0) < 0.0)
        for (double& x : prof.cos_coeffs) x = -x;
    prof.newton_iters = it;
    prof.values.resize(n);
    for (int i = 0; i < n; ++i) {
        prof.values[i] = prof.value(2.0 * std::numbers::pi * i / n);
        prof.amplitude = std::max(prof.amplitude, std::abs(prof.values[i]));
    }
    prof.residual_norm = equation_residual(prof, 4 * std::max(n, 2 * P));
    return prof;
}

std::vector<double> circle_extrema(const CircleProfile& profile) {
    std::vector<double> out;
    if (profile.trivial) return out;
    const int m = 64 * profile.k_mode * static_cast<int>(profile.cos_coeffs.size());
    const double h = 2.0 * std::numbers::pi / m;
    // Shift the scan by half a cell so that exact zeros at grid points are bracketed.
    const double start = -0.5 * h;
    double a = start;
    double fa = profile.derivative(a);
    for (int i = 1; i <= m; ++i) {
        const double b = start + i * h;
        const double fb = profile.derivative(b);
        if ((fa < 0.0) != (fb < 0.0)) {
            double lo = a, hi = b, flo = fa;
            for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = profile.derivative(mid);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            double root = 0.5 * (lo + hi);
            if (root < 0.0) root += 2.0 * std::numbers::pi;
            out.push_back(root);
        }
        a = b;
        fa = fb;
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace sphere_eq
