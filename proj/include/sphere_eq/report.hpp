#pragma once

#include <iosfwd>
#include <string>

#include "sphere_eq/solver.hpp"
#include "sphere_eq/symmetry.hpp"

namespace sphere_eq {

/// JSON with top-level keys extrema, leveled, reflection, midpoint,
/// moving_arc, verdict (and equation when present). Angles in radians,
/// rounded to 12 significant digits.
std::string report_json(const SymmetryReport& report, int indent = 2);

/// Rounds to 12 significant digits.
double round_sig12(double x);

/// `index,phi,kind,axiality_defect,reflection_defect,midpoint_defect`; header only without extrema.
void emit_plot_data(const SymmetryReport& report, std::ostream& os);
/// `eps,w_max`, one row per sweep point.
void emit_plot_data(const MovingArcReport& report, std::ostream& os);
/// `lambda,amplitude`, one row per branch point.
void emit_plot_data(const Branch& branch, std::ostream& os);

/// File variants; throw IoError when the file cannot be written.
void emit_plot_data(const SymmetryReport& report, const std::string& path);
void emit_plot_data(const MovingArcReport& report, const std::string& path);
void emit_plot_data(const Branch& branch, const std::string& path);

}  // namespace sphere_eq
