#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sphere_eq {

/// Fully normalized associated Legendre functions
///   lambda_l^m(theta) = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) P_l^m(cos theta),
/// without the Condon-Shortley phase, tabulated on a set of colatitudes for
/// 0 <= m <= l <= L. Real orthonormal harmonics are
///   Y_l^0 = lambda_l^0,  Y_l^m = sqrt2 lambda_l^m cos(m phi),  Y_l^{-m} = sqrt2 lambda_l^m sin(m phi).
///
/// Values come from the sectoral seed lambda_m^m and the standard stable
/// three-term recurrence in l, which never forms the factorial ratio.
class LegendreTable {
public:
    LegendreTable(int degree_cap, std::span<const double> cos_theta, std::span<const double> sin_theta);

    int degree_cap() const { return L_; }
    int n_theta() const { return n_theta_; }

    double operator()(int l, int m, int j) const { return values_[index(l, m) + j]; }
    /// lambda_l^m over all colatitudes.
    std::span<const double> column(int l, int m) const {
        return std::span<const double>(values_).subspan(index(l, m), n_theta_);
    }

private:
    std::size_t index(int l, int m) const {
        return m_offset_[m] + static_cast<std::size_t>(l - m) * n_theta_;
    }
    int L_;
    int n_theta_;
    std::vector<std::size_t> m_offset_;
    std::vector<double> values_;
};

/// Single-point evaluation of lambda_l^m at one colatitude, same recurrence.
double normalized_legendre(int l, int m, double cos_theta, double sin_theta);

/// Position of (l, m), -l <= m <= l, in a flat coefficient array: l*l + l + m.
constexpr std::size_t sh_index(int l, int m) {
    return static_cast<std::size_t>(l) * l + static_cast<std::size_t>(l + m);
}

}  // namespace sphere_eq
