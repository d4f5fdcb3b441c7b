#include "sphere_eq/legendre.hpp"

#include <cmath>
#include <numbers>

#include "sphere_eq/errors.hpp"

namespace sphere_eq {

namespace {

// Fills out[l - m] = lambda_l^m(x) for l = m..L.
void recur_column(int L, int m, double x, double sectoral, double* out, std::size_t stride) {
    double prev2 = 0.0;
    double prev1 = sectoral;
    out[0] = sectoral;
    if (m == L) return;
    double cur = x * std::sqrt(2.0 * m + 3.0) * sectoral;
    out[stride] = cur;
    prev2 = prev1;
    prev1 = cur;
    for (int l = m + 2; l <= L; ++l) {
        const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
        const double b = std::sqrt((static_cast<double>(l - 1) * (l - 1) - static_cast<double>(m) * m) /
                                   (4.0 * (l - 1) * (l - 1) - 1.0));
        cur = a * (x * prev1 - b * prev2);
        out[static_cast<std::size_t>(l - m) * stride] = cur;
        prev2 = prev1;
        prev1 = cur;
    }
}

}  // namespace

LegendreTable::LegendreTable(int degree_cap, std::span<const double> cos_theta,
                             std::span<const double> sin_theta)
    : L_(degree_cap), n_theta_(static_cast<int>(cos_theta.size())) {
    if (degree_cap < 0) throw ParameterError("LegendreTable: negative degree cap");
    if (cos_theta.size() != sin_theta.size()) throw ParameterError("LegendreTable: size mismatch");
    m_offset_.resize(L_ + 1);
    std::size_t offset = 0;
    for (int m = 0; m <= L_; ++m) {
        m_offset_[m] = offset;
        offset += static_cast<std::size_t>(L_ - m + 1) * n_theta_;
    }
    values_.assign(offset, 0.0);
    for (int j = 0; j < n_theta_; ++j) {
        double sectoral = 1.0 / std::sqrt(4.0 * std::numbers::pi);
        for (int m = 0; m <= L_; ++m) {
            if (m > 0) sectoral *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * sin_theta[j];
            recur_column(L_, m, cos_theta[j], sectoral, values_.data() + m_offset_[m] + j, n_theta_);
        }
    }
}

double normalized_legendre(int l, int m, double cos_theta, double sin_theta) {
    if (m < 0 || m > l) throw ParameterError("normalized_legendre: need 0 <= m <= l");
    double sectoral = 1.0 / std::sqrt(4.0 * std::numbers::pi);
    for (int k = 1; k <= m; ++k) sectoral *= std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * sin_theta;
    std::vector<double> column(static_cast<std::size_t>(l - m + 1));
    recur_column(l, m, cos_theta, sectoral, column.data(), 1);
    return column.back();
}

}  // namespace sphere_eq
