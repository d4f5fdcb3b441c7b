#include "sphere_eq/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sphere_eq/errors.hpp"
#include "sphere_eq/fourier.hpp"

namespace sphere_eq {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr int refine_factor = 16;

// Forward circular distance from a to b, in [0, 2*pi).
double ccw_gap(double a, double b) { return wrap_angle(b - a); }

double circ_dist(double a, double b) {
    const double d = ccw_gap(a, b);
    return std::min(d, two_pi - d);
}

}  // namespace

std::string to_string(ExtremumKind kind) {
    switch (kind) {
        case ExtremumKind::max: return "max";
        case ExtremumKind::min: return "min";
        default: return "indeterminate";
    }
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        default: return "hypotheses-not-met";
    }
}

double AxialExtremumSet::max_axiality_defect() const {
    double m = 0.0;
    for (double d : axiality_defect) m = std::max(m, d);
    return m;
}

AxialExtremumSet detect_axial_extrema(const ScalarField& u, double tol_ax) {
    if (!(tol_ax > 0.0 && tol_ax < 1.0)) throw ParameterError("detect_axial_extrema: tol_ax must lie in (0, 1)");
    const GridSpec& g = u.grid();
    const double mean = integrate(u) / (4.0 * std::numbers::pi);
    double dev = 0.0;
    for (double v : u.values()) dev = std::max(dev, std::abs(v - mean));
    if (dev <= 1e-12 * u.sup_norm() || dev == 0.0)
        throw DegenerateInputError("detect_axial_extrema: field is constant");

    AxialExtremumSet out;
    out.tol_ax = tol_ax;

    const RingSpectrum spec = ring_analysis(u);
    const RingSpectrum d1 = ring_derivative(spec, 1);
    const RingSpectrum d2 = ring_derivative(spec, 2);
    const std::vector<double> r1 = ring_refine(d1, refine_factor);
    const std::vector<double> r2 = ring_refine(d2, refine_factor);
    const int M = refine_factor * g.n_phi;

    double uphi_norm = 0.0;
    for (double v : r1) uphi_norm = std::max(uphi_norm, std::abs(v));
    if (uphi_norm <= 1e-11 * dev) {
        out.all_critical = true;
        return out;
    }

    const auto& w = g.theta_weights;
    std::vector<double> gp(M, 0.0);  // G'(phi) / 2
    for (int j = 0; j < g.n_theta; ++j)
        for (int i = 0; i < M; ++i) gp[i] += w[j] * r1[static_cast<std::size_t>(j) * M + i] * r2[static_cast<std::size_t>(j) * M + i];

    auto gprime = [&](double phi) {
        double s = 0.0;
        for (int j = 0; j < g.n_theta; ++j) s += w[j] * ring_eval(d1, j, phi) * ring_eval(d2, j, phi);
        return s;
    };

    const double h = two_pi / M;
    std::vector<double> axial;
    for (int i = 0; i < M; ++i) {
        const int next = (i + 1) % M;
        if (!(gp[i] < 0.0 && gp[next] >= 0.0)) continue;
        double lo = i * h, hi = (i + 1) * h;
        for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (gprime(mid) < 0.0) lo = mid;
            else hi = mid;
        }
        double phi = wrap_angle(0.5 * (lo + hi));
        if (two_pi - phi < 1e-13) phi = 0.0;

        double worst = 0.0;
        for (int j = 0; j < g.n_theta; ++j) worst = std::max(worst, std::abs(ring_eval(d1, j, phi)));
        if (worst / uphi_norm <= tol_ax) {
            axial.push_back(phi);
            continue;
        }
        // Not a critical meridian; report it when some ring is critical nearby.
        const double reach = g.dphi();
        bool ring_critical = false;
        for (int j = 0; j < g.n_theta && !ring_critical; ++j) {
            const double a = ring_eval(d1, j, phi - reach);
            const double b = ring_eval(d1, j, phi + reach);
            ring_critical = (a < 0.0) != (b < 0.0);
        }
        if (ring_critical) out.non_axial.push_back(phi);
    }
    std::sort(axial.begin(), axial.end());
    std::sort(out.non_axial.begin(), out.non_axial.end());

    // Merge clusters closer than one coarse cell, circularly.
    std::vector<std::vector<double>> clusters;
    for (double a : axial) {
        if (!clusters.empty() && circ_dist(clusters.back().back(), a) < g.dphi()) clusters.back().push_back(a);
        else clusters.push_back({a});
    }
    if (clusters.size() > 1 && circ_dist(clusters.back().back(), clusters.front().front()) < g.dphi()) {
        clusters.front().insert(clusters.front().begin(), clusters.back().begin(), clusters.back().end());
        clusters.pop_back();
    }

    std::vector<std::pair<double, bool>> merged;
    for (const auto& c : clusters) {
        double s = 0.0;
        for (double a : c) s += ccw_gap(c.front(), a);
        double phi = wrap_angle(c.front() + s / c.size());
        if (two_pi - phi < 1e-13) phi = 0.0;
        merged.emplace_back(phi, c.size() > 1);
    }
    std::sort(merged.begin(), merged.end());

    for (const auto& [phi, was_merged] : merged) {
        double worst = 0.0;
        for (int j = 0; j < g.n_theta; ++j) worst = std::max(worst, std::abs(ring_eval(d1, j, phi)));
        double curv = 0.0, curv_abs = 0.0;
        for (int j = 0; j < g.n_theta; ++j) {
            const double v = ring_eval(d2, j, phi);
            curv += w[j] * v;
            curv_abs += w[j] * std::abs(v);
        }
        ExtremumKind kind = ExtremumKind::indeterminate;
        if (std::abs(curv) > 1e-8 * curv_abs) kind = curv < 0.0 ? ExtremumKind::max : ExtremumKind::min;
        out.angles.push_back(phi);
        out.kinds.push_back(kind);
        out.axiality_defect.push_back(worst / uphi_norm);
        out.merged.push_back(was_merged);
    }
    return out;
}

LeveledResult check_leveled(const AxialExtremumSet& ext, const ScalarField& u, double tol_lvl) {
    LeveledResult out;
    if (ext.size() < 2) return out;
    out.applicable = true;
    const int n_theta = u.n_theta();
    const RingSpectrum spec = ring_analysis(u);
    const double span = u.span();

    auto profile_defect = [&](ExtremumKind kind, std::vector<double>& mean) {
        std::vector<std::vector<double>> profiles;
        for (std::size_t i = 0; i < ext.size(); ++i) {
            if (ext.kinds[i] != kind) continue;
            std::vector<double> p(n_theta);
            for (int j = 0; j < n_theta; ++j) p[j] = ring_eval(spec, j, ext.angles[i]);
            profiles.push_back(std::move(p));
        }
        if (profiles.empty()) return 0.0;
        mean.assign(n_theta, 0.0);
        for (const auto& p : profiles)
            for (int j = 0; j < n_theta; ++j) mean[j] += p[j] / profiles.size();
        double d = 0.0;
        for (const auto& p : profiles)
            for (int j = 0; j < n_theta; ++j) d = std::max(d, std::abs(p[j] - mean[j]));
        return d;
    };

    const double d_max = profile_defect(ExtremumKind::max, out.level_M);
    const double d_min = profile_defect(ExtremumKind::min, out.level_m);
    out.level_defect = span > 0.0 ? std::max(d_max, d_min) / span : 0.0;
    out.pass = out.level_defect <= tol_lvl;
    return out;
}

double check_reflection(const ScalarField& u, double phi_i, double phi_lo, double phi_hi) {
    const double width = phi_hi - phi_lo;
    if (width < 0.0) throw ContractError("check_reflection: negative interval width");
    const double slack = 1e-9;
    double offset = ccw_gap(phi_i - std::numbers::pi, phi_lo);
    if (offset > two_pi - slack) offset = 0.0;
    if (offset + width > std::numbers::pi + slack)
        throw ContractError("check_reflection: interval must lie inside [phi_i - pi, phi_i]");

    const double span = u.span();
    if (span == 0.0) return 0.0;
    const ScalarField diff = u - reflect_phi(u, phi_i);
    const GridSpec& g = u.grid();
    constexpr double edge = 1e-12;
    double worst = 0.0;
    for (int k = 0; k < g.n_phi; ++k) {
        const double off = ccw_gap(phi_lo, g.phi(k));
        const bool inside = off <= width + edge || off >= two_pi - edge;
        if (!inside) continue;
        for (int j = 0; j < g.n_theta; ++j) worst = std::max(worst, std::abs(diff(j, k)));
    }
    return worst / span;
}

MidpointResult check_midpoint(const AxialExtremumSet& ext) {
    MidpointResult out;
    const int n = static_cast<int>(ext.size());
    if (n < 3) return out;
    out.applicable = true;
    for (int i = 0; i < n; ++i) {
        const double left = ccw_gap(ext.angles[(i + n - 1) % n], ext.angles[i]);
        const double right = ccw_gap(ext.angles[i], ext.angles[(i + 1) % n]);
        const double d = 0.5 * std::abs(right - left);
        out.defects.push_back(d);
        out.max_defect = std::max(out.max_defect, d);
    }
    return out;
}

MovingArcReport moving_arc_sweep(const ScalarField& u, const AxialExtremumSet& ext, int seed_index, int direction,
                                 int n_eps, double tol_w) {
    const int n = static_cast<int>(ext.size());
    if (seed_index < 0 || seed_index >= n) throw ParameterError("moving_arc_sweep: seed index out of range");
    if (direction != 1 && direction != -1) throw ParameterError("moving_arc_sweep: direction must be +1 or -1");
    if (n_eps < 1) throw ParameterError("moving_arc_sweep: n_eps must be positive");
    if (!(tol_w > 0.0)) throw ParameterError("moving_arc_sweep: tol_w must be positive");
    if (n < 2) throw ContractError("moving_arc_sweep: need at least two extrema");
    if (ext.kinds[seed_index] != ExtremumKind::min)
        throw ContractError("moving_arc_sweep: seed must be an axial minimum");
    const int target = (seed_index + direction + n) % n;
    if (ext.kinds[target] != ExtremumKind::max)
        throw ContractError("moving_arc_sweep: neighbour in sweep direction must be an axial maximum");

    MovingArcReport rep;
    rep.seed_index = seed_index;
    rep.target_index = target;
    rep.start_angle = ext.angles[seed_index];
    rep.target_angle = ext.angles[target];
    rep.direction = direction;
    rep.gap = direction > 0 ? ccw_gap(rep.start_angle, rep.target_angle) : ccw_gap(rep.target_angle, rep.start_angle);
    const int beyond = (target + direction + n) % n;
    rep.phi_star = std::min(circ_dist(rep.target_angle, rep.start_angle), circ_dist(rep.target_angle, ext.angles[beyond]));
    rep.tol_w = tol_w;
    const double span = u.span();
    rep.tolerance = tol_w * span;

    const GridSpec& g = u.grid();
    auto sector_of = [&](double eps) {
        return direction > 0 ? sector_mask(g, rep.start_angle, rep.start_angle + eps)
                             : sector_mask(g, rep.start_angle - eps, rep.start_angle);
    };

    rep.epsilons.resize(n_eps);
    rep.w_max.assign(n_eps, 0.0);
    for (int s = 0; s < n_eps; ++s) rep.epsilons[s] = rep.gap * (s + 1) / n_eps;

#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < n_eps; ++s) {
        const double eps = rep.epsilons[s];
        const SectorMask mask = sector_of(eps);
        if (mask.empty()) continue;
        const ScalarField reflected = reflect_phi(u, rep.start_angle + direction * eps);
        double wmax = -std::numeric_limits<double>::infinity();
        for (int k : mask.columns)
            for (int j = 0; j < g.n_theta; ++j) wmax = std::max(wmax, u(j, k) - reflected(j, k));
        rep.w_max[s] = wmax;
    }

    for (int s = 0; s < n_eps && rep.w_max[s] <= rep.tolerance; ++s) rep.eps_star = rep.epsilons[s];
    rep.reaches_target = rep.eps_star >= rep.gap - rep.gap / n_eps - 1e-12;

    const SectorMask full = sector_of(rep.gap);
    const ScalarField reflected = reflect_phi(u, rep.target_angle);
    double eq = 0.0;
    for (int k : full.columns)
        for (int j = 0; j < g.n_theta; ++j) eq = std::max(eq, std::abs(u(j, k) - reflected(j, k)));
    rep.equality_defect = span > 0.0 ? eq / span : 0.0;
    rep.equality_holds = rep.equality_defect <= tol_w;
    return rep;
}

AnnihilationResult linearized_annihilation(const NonlinearProblem& problem, const OperatorHandle& op,
                                           const ScalarField& u, double eps, int n_tau) {
    const ScalarField u_ref = reflect_phi(u, eps);
    const ScalarField w = u - u_ref;
    const HadamardCoeffs hc = hadamard_coeffs(problem, op, u, u_ref, n_tau);
    const ScalarField lap_w = op.apply(w);
    const ScalarField r = hadamard(hc.a, lap_w) + hadamard(hc.b, w);
    AnnihilationResult out;
    out.defect = r.sup_norm();
    out.scale = hc.a.sup_norm() * lap_w.sup_norm() + hc.b.sup_norm() * w.sup_norm();
    out.relative = out.scale > 0.0 ? out.defect / out.scale : 0.0;
    return out;
}

void AuditThresholds::validate() const {
    if (!(tol_ax > 0.0 && tol_ax < 1.0)) throw ParameterError("tol_ax must lie in (0, 1)");
    if (!(tol_lvl > 0.0)) throw ParameterError("tol_lvl must be positive");
    if (!(tol_refl > 0.0)) throw ParameterError("tol_refl must be positive");
    if (!(tol_w > 0.0)) throw ParameterError("tol_w must be positive");
    if (tol_mid < 0.0) throw ParameterError("tol_mid must be non-negative (0 selects 2*pi/n_phi)");
    if (n_eps < 1) throw ParameterError("n_eps must be positive");
}

SymmetryReport theorem_audit(const ScalarField& u, const AuditThresholds& thresholds) {
    thresholds.validate();
    SymmetryReport rep;
    rep.thresholds = thresholds;
    if (rep.thresholds.tol_mid <= 0.0) rep.thresholds.tol_mid = u.grid().dphi();
    const AuditThresholds& t = rep.thresholds;

    rep.extrema = detect_axial_extrema(u, t.tol_ax);
    const AxialExtremumSet& ext = rep.extrema;
    const int n = static_cast<int>(ext.size());

    // Hypotheses: a finite, even set of alternating axial extrema, all leveled.
    rep.axial_ok = !ext.all_critical && n >= 2 && ext.non_axial.empty();
    if (ext.all_critical) rep.notes.push_back("u_phi vanishes identically; every longitude is critical");
    if (!ext.non_axial.empty()) rep.notes.push_back("non-axial critical longitudes present");
    if (n < 2 && !ext.all_critical) rep.notes.push_back("fewer than two axial extrema");
    for (int i = 0; i < n && rep.axial_ok; ++i) {
        if (ext.kinds[i] == ExtremumKind::indeterminate) {
            rep.axial_ok = false;
            rep.notes.push_back("extremum kind indeterminate");
        } else if (ext.kinds[i] == ext.kinds[(i + 1) % n]) {
            rep.axial_ok = false;
            rep.notes.push_back("extremum kinds do not alternate");
        } else if (ext.merged[i]) {
            rep.axial_ok = false;
            rep.notes.push_back("merged (near-degenerate) extrema");
        }
    }
    if (rep.axial_ok && ext.max_axiality_defect() > t.tol_ax) rep.axial_ok = false;

    rep.leveled = check_leveled(ext, u, t.tol_lvl);
    rep.leveled_ok = rep.leveled.applicable && rep.leveled.pass;
    if (rep.leveled.applicable && !rep.leveled.pass) rep.notes.push_back("extrema are not leveled");
    rep.hypotheses_met = rep.axial_ok && rep.leveled_ok;

    // Conclusions.
    rep.reflection_ok = n >= 2;
    for (int i = 0; i < n; ++i) {
        const double prev = ext.angles[(i + n - 1) % n];
        double lo = prev;
        if (ccw_gap(prev, ext.angles[i]) > std::numbers::pi) lo = ext.angles[i] - std::numbers::pi;
        const double width = ccw_gap(lo, ext.angles[i]);
        const double d = check_reflection(u, ext.angles[i], lo, lo + width);
        rep.reflection_defects.push_back(d);
        if (d > t.tol_refl) rep.reflection_ok = false;
    }

    rep.midpoint = check_midpoint(ext);
    if (rep.midpoint.applicable) {
        rep.midpoint_ok = rep.midpoint.max_defect <= t.tol_mid;
    } else {
        // Two extrema: the circular midpoint statement reduces to antipodal placement.
        rep.midpoint_ok = n == 2 && std::abs(ccw_gap(ext.angles[0], ext.angles[1]) - std::numbers::pi) <= t.tol_mid;
    }

    rep.moving_arc_ok = false;
    for (int i = 0; i < n; ++i) {
        if (ext.kinds[i] != ExtremumKind::min) continue;
        for (int dir : {1, -1}) {
            if (ext.kinds[(i + dir + n) % n] != ExtremumKind::max) continue;
            rep.arc_reports.push_back(moving_arc_sweep(u, ext, i, dir, t.n_eps, t.tol_w));
        }
    }
    if (!rep.arc_reports.empty()) {
        rep.moving_arc_ok = std::all_of(rep.arc_reports.begin(), rep.arc_reports.end(),
                                        [](const MovingArcReport& r) { return r.reaches_target; });
    }

    const bool conclusions = rep.reflection_ok && rep.midpoint_ok && rep.moving_arc_ok;
    if (!rep.hypotheses_met) rep.verdict = Verdict::hypotheses_not_met;
    else rep.verdict = conclusions ? Verdict::pass : Verdict::fail;
    return rep;
}

SymmetryReport theorem_audit(const NonlinearProblem& problem, const OperatorHandle& op, const ScalarField& u,
                             const AuditThresholds& thresholds) {
    SymmetryReport rep = theorem_audit(u, thresholds);
    EquationChecks eq;
    eq.residual_norm = residual(problem, op, u).sup_norm();
    const EllipticityAudit ell = ellipticity_audit(problem, op, u);
    eq.min_Fq = ell.min_Fq;
    eq.elliptic = ell.pass;
    eq.annihilation_eps = rep.arc_reports.empty()
                              ? 0.25 * std::numbers::pi
                              : rep.arc_reports.front().start_angle +
                                    rep.arc_reports.front().direction * 0.5 * rep.arc_reports.front().gap;
    eq.annihilation = linearized_annihilation(problem, op, u, eq.annihilation_eps);
    rep.equation = eq;
    return rep;
}

}  // namespace sphere_eq
