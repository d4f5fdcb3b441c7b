#include "sphere_eq/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "sphere_eq/errors.hpp"

namespace sphere_eq {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
void legendre_pair(int n, double x, double& p, double& dp) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    p = (n == 0) ? 1.0 : p1;
    dp = (n == 0) ? 0.0 : n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

GaussRule gauss_legendre(int n) {
    if (n < 1) throw ParameterError("gauss_legendre: n must be positive");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // i-th largest root
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double p = 0.0;
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            legendre_pair(n, x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        legendre_pair(n, x, p, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[n - 1 - i] = x;
        rule.nodes[i] = -x;
        rule.weights[n - 1 - i] = w;
        rule.weights[i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

GaussRule gauss_legendre_unit(int n) {
    GaussRule rule = gauss_legendre(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = 0.5 * (rule.nodes[i] + 1.0);
        rule.weights[i] *= 0.5;
    }
    return rule;
}

}  // namespace sphere_eq
