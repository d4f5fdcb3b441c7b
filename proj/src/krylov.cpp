#include "sphere_eq/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sphere_eq/errors.hpp"

namespace sphere_eq {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

KrylovResult gmres(const LinearMap& A, std::span<const double> b, std::span<double> x,
                   const KrylovOptions& options, std::span<const double> inv_diag) {
    if (inv_diag.empty()) return gmres(A, b, x, options, LinearMap{});
    if (inv_diag.size() != b.size()) throw ParameterError("gmres: preconditioner size mismatch");
    LinearMap M = [inv_diag](std::span<const double> v, std::span<double> out) {
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = inv_diag[i] * v[i];
    };
    return gmres(A, b, x, options, M);
}

KrylovResult gmres(const LinearMap& A, std::span<const double> b, std::span<double> x,
                   const KrylovOptions& options, const LinearMap& precond) {
    const std::size_t n = b.size();
    if (x.size() != n) throw ParameterError("gmres: size mismatch");
    const int restart = std::max(1, options.restart);

    KrylovResult result;
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        result.converged = true;
        return result;
    }

    auto precondition = [&](std::span<const double> v, std::span<double> out) {
        if (precond) precond(v, out);
        else std::copy(v.begin(), v.end(), out.begin());
    };

    std::vector<std::vector<double>> V(restart + 1, std::vector<double>(n));
    std::vector<double> H(static_cast<std::size_t>(restart + 1) * restart, 0.0);
    auto h = [&](int i, int j) -> double& { return H[static_cast<std::size_t>(i) * restart + j]; };
    std::vector<double> cs(restart), sn(restart), g(restart + 1), y(restart);
    std::vector<double> r(n), z(n), w(n);

    while (true) {
        A(x, r);
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
        const double beta = norm2(r);
        result.rel_residual = beta / bnorm;
        if (result.rel_residual <= options.rel_tol) {
            result.converged = true;
            return result;
        }
        if (result.iterations >= options.max_iter) return result;

        for (std::size_t i = 0; i < n; ++i) V[0][i] = r[i] / beta;
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = beta;
        int k = 0;
        for (; k < restart && result.iterations < options.max_iter; ++k) {
            ++result.iterations;
            precondition(V[k], z);
            A(z, w);
            for (int i = 0; i <= k; ++i) {
                h(i, k) = dot(w, V[i]);
                for (std::size_t t = 0; t < n; ++t) w[t] -= h(i, k) * V[i][t];
            }
            h(k + 1, k) = norm2(w);
            if (h(k + 1, k) > 0.0)
                for (std::size_t t = 0; t < n; ++t) V[k + 1][t] = w[t] / h(k + 1, k);
            for (int i = 0; i < k; ++i) {
                const double tmp = cs[i] * h(i, k) + sn[i] * h(i + 1, k);
                h(i + 1, k) = -sn[i] * h(i, k) + cs[i] * h(i + 1, k);
                h(i, k) = tmp;
            }
            const double denom = std::hypot(h(k, k), h(k + 1, k));
            cs[k] = denom == 0.0 ? 1.0 : h(k, k) / denom;
            sn[k] = denom == 0.0 ? 0.0 : h(k + 1, k) / denom;
            h(k, k) = denom;
            h(k + 1, k) = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k] * g[k];
            const bool breakdown = denom == 0.0;
            if (std::abs(g[k + 1]) / bnorm <= 0.5 * options.rel_tol || breakdown) {
                ++k;
                break;
            }
        }
        // Back-substitute and update x += M^{-1} V y.
        for (int i = k - 1; i >= 0; --i) {
            double s = g[i];
            for (int j = i + 1; j < k; ++j) s -= h(i, j) * y[j];
            y[i] = h(i, i) == 0.0 ? 0.0 : s / h(i, i);
        }
        std::fill(w.begin(), w.end(), 0.0);
        for (int i = 0; i < k; ++i)
            for (std::size_t t = 0; t < n; ++t) w[t] += y[i] * V[i][t];
        precondition(w, z);
        for (std::size_t t = 0; t < n; ++t) x[t] += z[t];
    }
}

}  // namespace sphere_eq
