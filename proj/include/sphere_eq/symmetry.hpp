#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sphere_eq/laplace_beltrami.hpp"
#include "sphere_eq/problem.hpp"
#include "sphere_eq/sphere_field.hpp"

namespace sphere_eq {

enum class ExtremumKind { max, min, indeterminate };

std::string to_string(ExtremumKind kind);

/// Meridians phi_i along which u_phi vanishes for every colatitude.
struct AxialExtremumSet {
    std::vector<double> angles;  // sorted in [0, 2*pi)
    std::vector<ExtremumKind> kinds;
    std::vector<double> axiality_defect;  // max_j |u_phi(theta_j, phi_i)| / |u_phi|_inf
    std::vector<bool> merged;             // several candidates collapsed into one
    /// Local minima of sum_j w_j u_phi^2 where some ring has u_phi = 0 but the
    /// meridian is not critical as a whole.
    std::vector<double> non_axial;
    /// u_phi vanishes identically (axisymmetric field); `angles` is then empty.
    bool all_critical = false;
    double tol_ax = 0.0;

    std::size_t size() const { return angles.size(); }
    double max_axiality_defect() const;
};

/// Candidates are the local minima of G(phi) = sum_j w_j u_phi(theta_j, phi)^2
/// on a 16x refined longitude grid, refined by bisection on G'. A candidate
/// is axial when max_j |u_phi| <= tol_ax |u_phi|_inf there. Kind follows the
/// sign of sum_j w_j u_phiphi. Candidates closer than 2*pi/n_phi are merged.
/// Throws DegenerateInputError for a constant field.
AxialExtremumSet detect_axial_extrema(const ScalarField& u, double tol_ax = 1e-6);

struct LeveledResult {
    bool applicable = false;  // needs at least two extrema
    double level_defect = 0.0;
    bool pass = false;
    std::vector<double> level_M;  // mean max-axis profile per ring (empty without maxima)
    std::vector<double> level_m;  // mean min-axis profile per ring
};

/// max over axes and rings of |u(theta, phi_i) - M(theta)| (and the minimum
/// analogue), divided by the grid span max u - min u.
LeveledResult check_leveled(const AxialExtremumSet& ext, const ScalarField& u, double tol_lvl = 1e-5);

/// max |u - u o R_{phi_i}| / span(u) over grid longitudes in the closed arc
/// [phi_lo, phi_hi]. The arc must lie inside [phi_i - pi, phi_i] (mod 2*pi);
/// otherwise ContractError.
double check_reflection(const ScalarField& u, double phi_i, double phi_lo, double phi_hi);

struct MidpointResult {
    bool applicable = false;  // needs at least three extrema
    std::vector<double> defects;
    double max_defect = 0.0;
};

/// |phi_i - midpoint(phi_{i-1}, phi_{i+1})| with circular neighbours.
MidpointResult check_midpoint(const AxialExtremumSet& ext);

struct MovingArcReport {
    int seed_index = 0;
    int target_index = 0;
    double start_angle = 0.0;
    double target_angle = 0.0;
    int direction = 1;
    double gap = 0.0;  // angular distance seed -> target along `direction`
    std::vector<double> epsilons;
    std::vector<double> w_max;  // max of w^eps over the sector; 0 for an empty sector
    double eps_star = 0.0;      // end of the longest prefix with w_max <= tolerance
    double phi_star = 0.0;      // min distance from the target to its two neighbours
    double tol_w = 0.0;         // relative tolerance
    double tolerance = 0.0;     // absolute: tol_w * span(u)
    bool reaches_target = false;
    double equality_defect = 0.0;  // sup |w^gap| / span over the full sector
    bool equality_holds = false;
};

/// Sweeps the reflection arc phi_seed + direction * eps for eps = gap*s/n_eps,
/// s = 1..n_eps, with w^eps = u - u o R and the sector strictly between the
/// seed and the arc. The seed must be an axial minimum and the neighbour in
/// `direction` an axial maximum (ContractError otherwise).
MovingArcReport moving_arc_sweep(const ScalarField& u, const AxialExtremumSet& ext, int seed_index, int direction,
                                 int n_eps = 100, double tol_w = 1e-7);

struct AnnihilationResult {
    double defect = 0.0;    // sup |a Lap(w) + b w|
    double scale = 0.0;     // |a| |Lap w| + |b| |w|, sup-norms
    double relative = 0.0;  // defect / scale, 0 when w vanishes
};

/// With u_ref = u o R_eps (reflection about the longitude eps) and
/// w = u - u_ref, evaluates the linear equation
/// satisfied by w through the Hadamard coefficients of (u, u_ref).
AnnihilationResult linearized_annihilation(const NonlinearProblem& problem, const OperatorHandle& op,
                                           const ScalarField& u, double eps, int n_tau = 8);

struct AuditThresholds {
    double tol_ax = 1e-6;
    double tol_lvl = 1e-5;
    double tol_refl = 1e-7;
    double tol_w = 1e-7;
    double tol_mid = 0.0;  // <= 0 selects one coarse cell, 2*pi/n_phi
    int n_eps = 100;

    void validate() const;
};

enum class Verdict { pass, fail, hypotheses_not_met };

std::string to_string(Verdict v);

struct EquationChecks {
    double residual_norm = 0.0;
    double min_Fq = 0.0;
    bool elliptic = false;
    AnnihilationResult annihilation;
    double annihilation_eps = 0.0;
};

struct SymmetryReport {
    AxialExtremumSet extrema;
    LeveledResult leveled;
    std::vector<double> reflection_defects;  // per extremum, over [phi_{i-1}, phi_i]
    MidpointResult midpoint;
    std::vector<MovingArcReport> arc_reports;
    AuditThresholds thresholds;

    bool axial_ok = false;
    bool leveled_ok = false;
    bool reflection_ok = false;
    bool midpoint_ok = false;
    bool moving_arc_ok = false;
    bool hypotheses_met = false;
    Verdict verdict = Verdict::hypotheses_not_met;
    std::vector<std::string> notes;

    std::optional<EquationChecks> equation;
};

SymmetryReport theorem_audit(const ScalarField& u, const AuditThresholds& thresholds = {});
/// Adds residual, ellipticity and linearized-annihilation checks for `problem`.
SymmetryReport theorem_audit(const NonlinearProblem& problem, const OperatorHandle& op, const ScalarField& u,
                             const AuditThresholds& thresholds = {});

/// sin(theta) * h(phi): twelve unit-height extrema, spaced pi/4 and 3*pi/16 on
/// the wide arcs of each half turn and pi/8 on the narrow ones, pi-periodic in phi.
ScalarField generate_figure1(const GridPtr& grid);

/// The phi-profile h of generate_figure1.
double figure1_profile(double phi);

/// Longitudes of the extrema of figure1_profile in [0, 2*pi).
std::vector<double> figure1_extrema();

}  // namespace sphere_eq
