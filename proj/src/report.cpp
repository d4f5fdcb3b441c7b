#include "sphere_eq/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <ostream>

#include "sphere_eq/errors.hpp"

namespace sphere_eq {

using nlohmann::json;

double round_sig12(double x) {
    if (!std::isfinite(x) || x == 0.0) return x;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

namespace {

json angles(const std::vector<double>& xs) {
    json a = json::array();
    for (double x : xs) a.push_back(round_sig12(x));
    return a;
}

json arc_json(const MovingArcReport& r) {
    double w_peak = 0.0;
    for (double w : r.w_max) w_peak = std::max(w_peak, w);
    return {{"seed_index", r.seed_index},
            {"target_index", r.target_index},
            {"start_angle", round_sig12(r.start_angle)},
            {"target_angle", round_sig12(r.target_angle)},
            {"direction", r.direction},
            {"gap", round_sig12(r.gap)},
            {"n_eps", r.epsilons.size()},
            {"eps_star", round_sig12(r.eps_star)},
            {"phi_star", round_sig12(r.phi_star)},
            {"tol_w", r.tol_w},
            {"tolerance", r.tolerance},
            {"max_w", w_peak},
            {"reaches_target", r.reaches_target},
            {"equality_defect", r.equality_defect},
            {"equality_holds", r.equality_holds}};
}

}  // namespace

std::string report_json(const SymmetryReport& rep, int indent) {
    const AxialExtremumSet& e = rep.extrema;
    json kinds = json::array();
    for (auto k : e.kinds) kinds.push_back(to_string(k));
    json merged = json::array();
    for (bool m : e.merged) merged.push_back(m);

    json j;
    j["extrema"] = {{"count", e.size()},
                    {"all_critical", e.all_critical},
                    {"angles", angles(e.angles)},
                    {"kinds", kinds},
                    {"axiality_defect", e.axiality_defect},
                    {"merged", merged},
                    {"non_axial", angles(e.non_axial)},
                    {"pass", rep.axial_ok}};
    j["leveled"] = {{"applicable", rep.leveled.applicable},
                    {"level_defect", rep.leveled.level_defect},
                    {"pass", rep.leveled_ok}};
    double refl_max = 0.0;
    for (double d : rep.reflection_defects) refl_max = std::max(refl_max, d);
    j["reflection"] = {{"defects", rep.reflection_defects},
                       {"max_defect", refl_max},
                       {"threshold", rep.thresholds.tol_refl},
                       {"pass", rep.reflection_ok}};
    j["midpoint"] = {{"applicable", rep.midpoint.applicable},
                     {"defects", angles(rep.midpoint.defects)},
                     {"max_defect", round_sig12(rep.midpoint.max_defect)},
                     {"threshold", round_sig12(rep.thresholds.tol_mid)},
                     {"pass", rep.midpoint_ok}};
    json arcs = json::array();
    for (const auto& r : rep.arc_reports) arcs.push_back(arc_json(r));
    j["moving_arc"] = {{"sweeps", arcs}, {"pass", rep.moving_arc_ok}};
    j["verdict"] = to_string(rep.verdict);
    j["hypotheses"] = {{"met", rep.hypotheses_met}, {"notes", rep.notes}};
    j["thresholds"] = {{"tol_ax", rep.thresholds.tol_ax},     {"tol_lvl", rep.thresholds.tol_lvl},
                       {"tol_refl", rep.thresholds.tol_refl}, {"tol_w", rep.thresholds.tol_w},
                       {"tol_mid", round_sig12(rep.thresholds.tol_mid)}, {"n_eps", rep.thresholds.n_eps}};
    if (rep.equation) {
        const EquationChecks& q = *rep.equation;
        j["equation"] = {{"residual_norm", q.residual_norm},
                         {"min_Fq", q.min_Fq},
                         {"elliptic", q.elliptic},
                         {"annihilation_eps", round_sig12(q.annihilation_eps)},
                         {"annihilation_defect", q.annihilation.defect},
                         {"annihilation_relative", q.annihilation.relative}};
    }
    return j.dump(indent);
}

void emit_plot_data(const SymmetryReport& rep, std::ostream& os) {
    os << "index,phi,kind,axiality_defect,reflection_defect,midpoint_defect\n";
    const auto& e = rep.extrema;
    char buf[64];
    for (std::size_t i = 0; i < e.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g", e.angles[i]);
        os << i << ',' << buf << ',' << to_string(e.kinds[i]) << ',' << e.axiality_defect[i] << ','
           << (i < rep.reflection_defects.size() ? rep.reflection_defects[i] : 0.0) << ','
           << (i < rep.midpoint.defects.size() ? rep.midpoint.defects[i] : 0.0) << '\n';
    }
}

void emit_plot_data(const MovingArcReport& rep, std::ostream& os) {
    os << "eps,w_max\n";
    char buf[64];
    for (std::size_t s = 0; s < rep.epsilons.size(); ++s) {
        std::snprintf(buf, sizeof buf, "%.12g,%.17g\n", rep.epsilons[s], rep.w_max[s]);
        os << buf;
    }
}

void emit_plot_data(const Branch& branch, std::ostream& os) {
    os << "lambda,amplitude\n";
    char buf[64];
    for (const auto& p : branch.points) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.lambda, p.amplitude);
        os << buf;
    }
}

namespace {

template <class T>
void emit_to_file(const T& obj, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    emit_plot_data(obj, os);
    if (!os) throw IoError("write to '" + path + "' failed");
}

}  // namespace

void emit_plot_data(const SymmetryReport& report, const std::string& path) { emit_to_file(report, path); }
void emit_plot_data(const MovingArcReport& report, const std::string& path) { emit_to_file(report, path); }
void emit_plot_data(const Branch& branch, const std::string& path) { emit_to_file(branch, path); }

}  // namespace sphere_eq
