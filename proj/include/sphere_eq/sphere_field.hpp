#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace sphere_eq {

/// Latitude-longitude discretization of S^2 in geodesic coordinates.
///
/// Colatitudes are the arccosines of the Gauss-Legendre roots, so no ring
/// sits on a pole; longitudes are uniform, phi_k = 2*pi*k / n_phi, with no
/// duplicated seam column. Ring weights are the Gauss weights in cos(theta),
/// so that sum_j w_j * 2*pi = 4*pi.
struct GridSpec {
    int n_theta = 0;
    int n_phi = 0;
    std::vector<double> theta_nodes;    // strictly increasing in (0, pi)
    std::vector<double> theta_weights;  // Gauss weights in cos(theta)
    std::vector<double> cos_theta;
    std::vector<double> sin_theta;

    double phi(int k) const;
    double dphi() const;
    std::size_t size() const { return static_cast<std::size_t>(n_theta) * n_phi; }
    bool same_shape(const GridSpec& other) const {
        return n_theta == other.n_theta && n_phi == other.n_phi;
    }
};

using GridPtr = std::shared_ptr<const GridSpec>;

/// Builds a grid; throws ParameterError unless n_theta >= 4 and n_phi >= 8 is even.
GridPtr make_grid(int n_theta, int n_phi);

/// Real field sampled on a GridSpec, stored theta-major: value(j, k) = u(theta_j, phi_k).
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(GridPtr grid, double fill = 0.0);
    ScalarField(GridPtr grid, std::vector<double> values);

    const GridSpec& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    int n_theta() const { return grid_->n_theta; }
    int n_phi() const { return grid_->n_phi; }
    std::size_t size() const { return values_.size(); }

    double& operator()(int j, int k) { return values_[static_cast<std::size_t>(j) * grid_->n_phi + k]; }
    double operator()(int j, int k) const {
        return values_[static_cast<std::size_t>(j) * grid_->n_phi + k];
    }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    std::span<const double> ring(int j) const {
        return std::span<const double>(values_).subspan(static_cast<std::size_t>(j) * grid_->n_phi,
                                                        grid_->n_phi);
    }

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(double s);

    double sup_norm() const;
    double max_value() const;
    double min_value() const;
    /// max - min over the grid values.
    double span() const { return max_value() - min_value(); }
    bool all_finite() const;

private:
    GridPtr grid_;
    std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
/// Pointwise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

/// Throws ParameterError when the two fields live on differently shaped grids.
void require_same_grid(const ScalarField& a, const ScalarField& b, const char* where);

/// Longitudes strictly inside the open arc (phi_lo, phi_lo + width), wrapping
/// allowed. Sector area is 2 * width (the full sphere has area 4*pi).
struct SectorMask {
    double phi_lo = 0.0;
    double phi_hi = 0.0;
    double area = 0.0;
    std::vector<int> columns;
    std::vector<bool> member;  // indexed by grid longitude k

    bool empty() const { return columns.empty(); }
};

using PointFunction = std::function<double(double theta, double phi)>;

/// values(j,k) = f(theta_j, phi_k); throws EvaluationError naming the node if f is not finite.
ScalarField eval_on_grid(const GridPtr& grid, const PointFunction& f);

/// Gauss-Legendre x trapezoid quadrature over S^2.
double integrate(const ScalarField& field);

/// Quadrature inner product <a, b>.
double inner(const ScalarField& a, const ScalarField& b);

/// Spectral phi-derivative per ring; the Nyquist mode is dropped.
ScalarField d_phi(const ScalarField& field);

/// v(theta, phi) = u(theta, 2*phi_c - phi) by trigonometric interpolation.
ScalarField reflect_phi(const ScalarField& field, double phi_c);

/// v(theta, phi) = u(theta, phi - shift) by trigonometric interpolation.
ScalarField translate_phi(const ScalarField& field, double shift);

/// Throws ParameterError for negative width or width above 2*pi.
SectorMask sector_mask(const GridSpec& grid, double phi_lo, double phi_hi);

/// Reduces an angle to [0, 2*pi).
double wrap_angle(double phi);

}  // namespace sphere_eq
