#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

#include "sphere_eq/laplace_beltrami.hpp"
#include "sphere_eq/solver.hpp"
#include "sphere_eq/sphere_field.hpp"
#include "sphere_eq/symmetry.hpp"

namespace sphere_eq {

/// SPHF v1 text format:
///   sphf 1
///   n_theta n_phi
///   theta_0 ... theta_{n_theta-1}
///   n_theta rows of n_phi values
/// Numbers are written with 17 significant digits, so a round trip is exact.
void write_field(std::ostream& os, const ScalarField& field);
/// Path "-" writes to stdout. Throws IoError if the file cannot be written.
void write_field(const std::string& path, const ScalarField& field);

/// Throws ParseError (with line number) for a malformed header, wrong counts,
/// non-finite entries, colatitudes that differ from make_grid, or any version
/// other than 1.
ScalarField read_field(std::istream& is);
/// Path "-" reads stdin. Throws IoError if the file cannot be opened.
ScalarField read_field(const std::string& path);

struct RunConfig {
    int n_theta = 48;
    int n_phi = 96;
    Realization realization = Realization::spectral;
    std::string problem = "chafee-infante";
    double lambda = 6.5;
    double newton_tol = 1e-9;
    double krylov_tol = 1e-10;
    int max_newton = 30;
    AuditThresholds thresholds;
    std::string output_dir = ".";
    std::uint64_t seed = 12345;

    /// Throws ParameterError for non-positive thresholds or invalid grid sizes.
    void validate() const;
    NewtonOptions newton_options() const;
};

/// Parses `key = value` lines; blank lines and lines starting with '#' are
/// skipped. Throws ParseError for a line without '='.
std::map<std::string, std::string> parse_config(std::istream& is);
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// Applies known keys to `config`; throws ParameterError for unknown keys or
/// unparsable values.
void apply_config(RunConfig& config, const std::map<std::string, std::string>& entries);

/// `lambda,amplitude,residual_norm,newton_iters`, one row per point.
void write_branch_csv(std::ostream& os, const Branch& branch);
/// Writes branch.csv plus branch_<l>_<m>_step<k>.sphf per point into `dir`.
void export_branch(const std::string& dir, const Branch& branch);

}  // namespace sphere_eq
