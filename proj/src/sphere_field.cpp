#include "sphere_eq/sphere_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sphere_eq/errors.hpp"
#include "sphere_eq/fourier.hpp"
#include "sphere_eq/quadrature.hpp"

namespace sphere_eq {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
// Angular slack for strict sector membership; grid longitudes are multiples of
// 2*pi/n_phi, so anything below this is round-off.
constexpr double angle_slack = 1e-12;
}  // namespace

double GridSpec::phi(int k) const { return two_pi * k / n_phi; }
double GridSpec::dphi() const { return two_pi / n_phi; }

GridPtr make_grid(int n_theta, int n_phi) {
    if (n_theta < 4) throw ParameterError("make_grid: n_theta must be at least 4");
    if (n_phi < 8 || n_phi % 2 != 0) throw ParameterError("make_grid: n_phi must be even and at least 8");
    auto grid = std::make_shared<GridSpec>();
    grid->n_theta = n_theta;
    grid->n_phi = n_phi;
    const GaussRule rule = gauss_legendre(n_theta);
    // Ascending theta means descending cos(theta).
    for (int j = 0; j < n_theta; ++j) {
        const double x = rule.nodes[n_theta - 1 - j];
        grid->cos_theta.push_back(x);
        grid->sin_theta.push_back(std::sqrt((1.0 - x) * (1.0 + x)));
        grid->theta_nodes.push_back(std::acos(x));
        grid->theta_weights.push_back(rule.weights[n_theta - 1 - j]);
    }
    return grid;
}

ScalarField::ScalarField(GridPtr grid, double fill)
    : grid_(std::move(grid)), values_(grid_->size(), fill) {}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_->size()) throw ParameterError("ScalarField: value count does not match grid");
}

void require_same_grid(const ScalarField& a, const ScalarField& b, const char* where) {
    if (!a.grid().same_shape(b.grid()))
        throw ParameterError(std::string(where) + ": fields live on different grids");
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
    require_same_grid(*this, other, "operator+=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
    require_same_grid(*this, other, "operator-=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (auto& v : values_) v *= s;
    return *this;
}

double ScalarField::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double ScalarField::max_value() const { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

bool ScalarField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a, b, "hadamard");
    ScalarField out(a.grid_ptr());
    auto o = out.values();
    auto x = a.values();
    auto y = b.values();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] * y[i];
    return out;
}

ScalarField eval_on_grid(const GridPtr& grid, const PointFunction& f) {
    ScalarField out(grid);
    for (int j = 0; j < grid->n_theta; ++j) {
        for (int k = 0; k < grid->n_phi; ++k) {
            const double v = f(grid->theta_nodes[j], grid->phi(k));
            if (!std::isfinite(v)) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "eval_on_grid: non-finite value at node (j=" << j << ", k=" << k
                    << ", theta=" << grid->theta_nodes[j] << ", phi=" << grid->phi(k) << ")";
                throw EvaluationError(msg.str());
            }
            out(j, k) = v;
        }
    }
    return out;
}

double integrate(const ScalarField& field) {
    const GridSpec& g = field.grid();
    double total = 0.0;
    for (int j = 0; j < g.n_theta; ++j) {
        double ring = 0.0;
        for (double v : field.ring(j)) ring += v;
        total += g.theta_weights[j] * ring;
    }
    return total * g.dphi();
}

double inner(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a, b, "inner");
    return integrate(hadamard(a, b));
}

ScalarField d_phi(const ScalarField& field) {
    return ring_synthesis(ring_derivative(ring_analysis(field), 1), field.grid_ptr());
}

ScalarField reflect_phi(const ScalarField& field, double phi_c) {
    RingSpectrum spec = ring_analysis(field);
    const double c = wrap_angle(phi_c);
    const int nyq = spec.nyquist();
    for (int m = 0; m < nyq; ++m) {
        const cplx phase = std::polar(1.0, -2.0 * m * c);
        for (int j = 0; j < spec.n_theta(); ++j) spec(j, m) = std::conj(spec(j, m)) * phase;
    }
    // Nyquist term a*cos(N phi/2) -> a*cos(N c)*cos(N phi/2) on grid longitudes.
    const double nyq_factor = std::cos(2.0 * nyq * c);
    for (int j = 0; j < spec.n_theta(); ++j) spec(j, nyq) = spec(j, nyq).real() * nyq_factor;
    return ring_synthesis(spec, field.grid_ptr());
}

ScalarField translate_phi(const ScalarField& field, double shift) {
    RingSpectrum spec = ring_analysis(field);
    const double s = wrap_angle(shift);
    const int nyq = spec.nyquist();
    for (int m = 0; m < nyq; ++m) {
        const cplx phase = std::polar(1.0, -static_cast<double>(m) * s);
        for (int j = 0; j < spec.n_theta(); ++j) spec(j, m) *= phase;
    }
    const double nyq_factor = std::cos(nyq * s);
    for (int j = 0; j < spec.n_theta(); ++j) spec(j, nyq) = spec(j, nyq).real() * nyq_factor;
    return ring_synthesis(spec, field.grid_ptr());
}

double wrap_angle(double phi) {
    double r = std::fmod(phi, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r -= two_pi;
    return r;
}

SectorMask sector_mask(const GridSpec& grid, double phi_lo, double phi_hi) {
    const double width = phi_hi - phi_lo;
    if (width < 0.0) throw ParameterError("sector_mask: negative width");
    if (width > two_pi + angle_slack) throw ParameterError("sector_mask: width exceeds 2*pi");
    SectorMask mask;
    mask.phi_lo = wrap_angle(phi_lo);
    mask.phi_hi = wrap_angle(phi_hi);
    mask.area = 2.0 * width;
    mask.member.assign(grid.n_phi, false);
    const bool full = width >= two_pi - angle_slack;
    for (int k = 0; k < grid.n_phi; ++k) {
        const double offset = wrap_angle(grid.phi(k) - phi_lo);
        const bool inside = full || (offset > angle_slack && offset < width - angle_slack);
        if (inside) {
            mask.member[k] = true;
            mask.columns.push_back(k);
        }
    }
    return mask;
}

}  // namespace sphere_eq
