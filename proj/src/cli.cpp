#include "sphere_eq/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "sphere_eq/circle.hpp"
#include "sphere_eq/errors.hpp"
#include "sphere_eq/io.hpp"
#include "sphere_eq/kernels.hpp"
#include "sphere_eq/report.hpp"
#include "sphere_eq/solver.hpp"
#include "sphere_eq/symmetry.hpp"

namespace sphere_eq {

namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Flag values; an option only overrides the config file when it was given.
struct Flags {
    std::string config;
    int threads = -1;
    int n_theta = 0;
    int n_phi = 0;
    std::string realization;
    std::string problem;
    double lambda = 0.0;
    double tol = 0.0;
    int max_newton = 0;
    double tol_ax = 0.0, tol_lvl = 0.0, tol_refl = 0.0, tol_w = 0.0, tol_mid = 0.0;
    int n_eps = 0;
    std::string output_dir;
    long long seed = 0;
};

struct Context {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
};

ScalarField load(Context& ctx, const std::string& path) {
    if (path == "-") return read_field(ctx.in);
    return read_field(path);
}

void store(Context& ctx, const std::string& path, const ScalarField& f) {
    if (path == "-") {
        write_field(ctx.out, f);
        return;
    }
    write_field(path, f);
}

void write_text(Context& ctx, const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        ctx.out << text;
        return;
    }
    std::ofstream os(path);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os << text;
}

int threads_from_env() {
    const char* v = std::getenv("SPHERE_EQ_THREADS");
    if (!v || !*v) return -1;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 0) throw ParameterError("SPHERE_EQ_THREADS must be a non-negative integer");
    return static_cast<int>(n);
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    Context ctx{in, out, err};
    CLI::App app{"Equilibria of 0 = F(u, Laplacian u) on the sphere and reflection-symmetry audits"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", "sphere_eq 1.0");

    Flags fl;
    app.add_option("--config", fl.config, "key = value configuration file (flags override it)")
        ->check(CLI::ExistingFile);
    app.add_option("--threads", fl.threads, "worker threads, 0 = all cores (env SPHERE_EQ_THREADS)")
        ->check(CLI::NonNegativeNumber);
    auto* o_nt = app.add_option("--n-theta", fl.n_theta, "colatitude rings (default 48)");
    auto* o_np = app.add_option("--n-phi", fl.n_phi, "longitudes, even (default 96)");
    auto* o_real = app.add_option("--realization", fl.realization, "spectral | fd");
    auto* o_prob = app.add_option("--problem", fl.problem, "built-in problem (chafee-infante)");
    auto* o_lam = app.add_option("--lambda", fl.lambda, "problem parameter");
    auto* o_tol = app.add_option("--tol", fl.tol, "Newton tolerance, residual sup-norm (default 1e-9)");
    auto* o_maxn = app.add_option("--max-newton", fl.max_newton, "Newton iteration cap (default 30)");
    auto* o_tax = app.add_option("--tol-ax", fl.tol_ax, "axiality threshold (default 1e-6)");
    auto* o_tlvl = app.add_option("--tol-lvl", fl.tol_lvl, "level threshold (default 1e-5)");
    auto* o_trefl = app.add_option("--tol-refl", fl.tol_refl, "reflection threshold (default 1e-7)");
    auto* o_tw = app.add_option("--tol-w", fl.tol_w, "moving-arc threshold (default 1e-7)");
    auto* o_tmid = app.add_option("--tol-mid", fl.tol_mid, "midpoint threshold, radians (default 2*pi/n_phi)");
    auto* o_neps = app.add_option("--n-eps", fl.n_eps, "moving-arc sweep points (default 100)");
    auto* o_odir = app.add_option("--output-dir", fl.output_dir, "directory for branch output");
    auto* o_seed = app.add_option("--seed", fl.seed, "random seed");

    // eigen
    auto* eigen = app.add_subcommand("eigen", "print eigenvalues of the Laplacian on the sphere");
    int lmax = 3;
    bool eigen_check = false;
    eigen->add_option("--lmax", lmax, "largest degree")->check(CLI::NonNegativeNumber);
    eigen->add_flag("--check", eigen_check, "append the eigenvalue measured on the grid for Y_l^0");

    // bifurcate
    auto* bif = app.add_subcommand("bifurcate", "locate bifurcations from u = 0");
    double lam_lo = 0.5, lam_hi = 13.0;
    int bif_lmax = 3;
    bool bif_discrete = false;
    bif->add_option("--lambda-min", lam_lo, "scan start");
    bif->add_option("--lambda-max", lam_hi, "scan end");
    bif->add_option("--lmax", bif_lmax, "largest degree")->check(CLI::NonNegativeNumber);
    bif->add_flag("--discrete", bif_discrete, "also report eigenvalue crossings of the assembled linearization");

    // solve
    auto* solve = app.add_subcommand("solve", "Newton solve from a named seed");
    std::string seed_name = "harmonic";
    int sl = 2, sm = 2;
    double s_amp = 0.3, s_value = 0.9;
    std::string solve_out;
    solve->add_option("--from", seed_name, "zero | constant | harmonic")
        ->check(CLI::IsMember({"zero", "constant", "harmonic"}));
    solve->add_option("--l", sl, "harmonic degree");
    solve->add_option("--m", sm, "harmonic order");
    solve->add_option("--amplitude", s_amp, "harmonic seed sup-norm");
    solve->add_option("--value", s_value, "constant seed value");
    solve->add_option("--out", solve_out, "write the equilibrium as SPHF ('-' for stdout)");

    // branch
    auto* branch = app.add_subcommand("branch", "switch onto the branch of Y_l^m and continue it");
    int bl = 2, bm = 2, b_steps = 6, b_side = 1;
    double b_star = 0.0, b_step = 0.25, b_offset = 0.25, b_amp = 0.0;
    branch->add_option("--l", bl, "degree");
    branch->add_option("--m", bm, "order");
    auto* o_star = branch->add_option("--lambda-star", b_star, "bifurcation point (default: detected)");
    branch->add_option("--side", b_side, "+1 or -1")->check(CLI::IsMember({-1, 1}));
    branch->add_option("--offset", b_offset, "distance of the first point from lambda*");
    branch->add_option("--amplitude", b_amp, "seed amplitude (default: normal-form estimate)");
    branch->add_option("--step", b_step, "continuation step in lambda");
    branch->add_option("--steps", b_steps, "continuation steps")->check(CLI::NonNegativeNumber);

    // audit
    auto* audit = app.add_subcommand("audit", "reflection-symmetry audit of a field file");
    std::string audit_in;
    std::string audit_json, audit_plot;
    bool strict = false, with_problem = false;
    audit->add_option("field", audit_in, "SPHF file, '-' for stdin")->required();
    audit->add_flag("--strict", strict, "exit 1 unless the verdict is pass");
    audit->add_flag("--equation", with_problem, "also check residual and Hadamard identity for --problem/--lambda");
    audit->add_option("--json", audit_json, "write the JSON report here instead of stdout");
    audit->add_option("--plot", audit_plot, "write the extremum table as CSV");

    // arc-sweep
    auto* arc = app.add_subcommand("arc-sweep", "single moving-arc sweep; CSV of eps vs w_max");
    std::string arc_in, arc_out;
    int arc_seed = -1, arc_dir = 1;
    arc->add_option("field", arc_in, "SPHF file, '-' for stdin")->required();
    arc->add_option("--seed-index", arc_seed, "index of the minimum to start from (default: first minimum)");
    arc->add_option("--direction", arc_dir, "+1 or -1")->check(CLI::IsMember({-1, 1}));
    arc->add_option("--out", arc_out, "CSV path (default stdout)");

    // gen
    auto* gen = app.add_subcommand("gen", "synthetic fields as SPHF");
    std::string gen_kind;
    int gl = 2, gm = 2, pl = 1, pm = 1;
    double g_amp = 1.0, g_eps = 0.1;
    std::string gen_out = "-";
    gen->add_option("kind", gen_kind, "harmonic | figure1 | broken")
        ->required()
        ->check(CLI::IsMember({"harmonic", "figure1", "broken"}));
    gen->add_option("--l", gl, "degree");
    gen->add_option("--m", gm, "order");
    gen->add_option("--amplitude", g_amp, "scale factor");
    gen->add_option("--perturb-l", pl, "perturbation degree (broken)");
    gen->add_option("--perturb-m", pm, "perturbation order (broken)");
    gen->add_option("--eps", g_eps, "perturbation size (broken)");
    gen->add_option("--out", gen_out, "SPHF path (default stdout)");

    // circle
    auto* circ = app.add_subcommand("circle", "periodic equilibrium of u'' + lambda u (1 - u^2) = 0");
    int ck = 1, cn = 64;
    std::string circ_out;
    circ->add_option("--k", ck, "number of periods")->check(CLI::PositiveNumber);
    circ->add_option("--n", cn, "output samples");
    circ->add_option("--out", circ_out, "CSV of phi,u (default: summary only)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << '\n';
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return exit_usage;
    }

    RunConfig cfg;
    try {
        if (!fl.config.empty()) apply_config(cfg, parse_config_file(fl.config));
        if (*o_nt) cfg.n_theta = fl.n_theta;
        if (*o_np) cfg.n_phi = fl.n_phi;
        if (*o_real) cfg.realization = parse_realization(fl.realization);
        if (*o_prob) cfg.problem = fl.problem;
        if (*o_lam) cfg.lambda = fl.lambda;
        if (*o_tol) cfg.newton_tol = fl.tol;
        if (*o_maxn) cfg.max_newton = fl.max_newton;
        if (*o_tax) cfg.thresholds.tol_ax = fl.tol_ax;
        if (*o_tlvl) cfg.thresholds.tol_lvl = fl.tol_lvl;
        if (*o_trefl) cfg.thresholds.tol_refl = fl.tol_refl;
        if (*o_tw) cfg.thresholds.tol_w = fl.tol_w;
        if (*o_tmid) cfg.thresholds.tol_mid = fl.tol_mid;
        if (*o_neps) cfg.thresholds.n_eps = fl.n_eps;
        if (*o_odir) cfg.output_dir = fl.output_dir;
        if (*o_seed) cfg.seed = static_cast<std::uint64_t>(fl.seed);
        cfg.validate();
        const int threads = fl.threads >= 0 ? fl.threads : threads_from_env();
        if (threads >= 0) kernels::set_threads(threads);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        const ProblemFamily family = problem_family(cfg.problem);
        auto grid = [&] { return make_grid(cfg.n_theta, cfg.n_phi); };

        if (*eigen) {
            std::ostringstream os;
            os << "l,eigenvalue,multiplicity" << (eigen_check ? ",measured" : "") << '\n';
            std::optional<OperatorHandle> op;
            if (eigen_check) op.emplace(grid(), cfg.realization);
            for (const auto& e : trivial_branch_eigenvalues(lmax)) {
                os << e.l << ',' << e.eigenvalue << ',' << e.multiplicity;
                if (op) {
                    const ScalarField y = harmonic_mode(op->grid_ptr(), e.l, 0);
                    os << ',' << fmt("%.12g", inner(op->apply(y), y) / inner(y, y));
                }
                os << '\n';
            }
            out << os.str();
            return exit_ok;
        }

        if (*bif) {
            out << "lambda,l\n";
            for (const auto& b : detect_bifurcations(family, lam_lo, lam_hi, bif_lmax))
                out << fmt("%.12g", b.lambda) << ',' << b.l << '\n';
            if (bif_discrete) {
                const OperatorHandle op(grid(), cfg.realization);
                out << "\ndiscrete_lambda,multiplicity\n";
                for (const auto& c : linearization_crossings(family, op, lam_lo, lam_hi))
                    out << fmt("%.9g", c.lambda) << ',' << c.multiplicity << '\n';
            }
            return exit_ok;
        }

        if (*solve) {
            const OperatorHandle op(grid(), cfg.realization);
            ScalarField guess(op.grid_ptr());
            if (seed_name == "constant") {
                guess = ScalarField(op.grid_ptr(), s_value);
            } else if (seed_name == "harmonic") {
                guess = harmonic_mode(op.grid_ptr(), sl, sm);
                guess *= s_amp / guess.sup_norm();
            }
            const Equilibrium eq = newton_solve(family(cfg.lambda), op, guess, cfg.newton_options());
            out << "lambda," << fmt("%.12g", eq.lambda) << "\nresidual_norm," << fmt("%.6e", eq.residual_norm)
                << "\nnewton_iters," << eq.newton_iters << "\namplitude," << fmt("%.12g", eq.amplitude) << '\n';
            if (!solve_out.empty()) store(ctx, solve_out, eq.u);
            return exit_ok;
        }

        if (*branch) {
            const OperatorHandle op(grid(), cfg.realization);
            double star = b_star;
            if (!*o_star) {
                const double guess_star = static_cast<double>(bl) * (bl + 1);
                bool found = false;
                for (const auto& b : detect_bifurcations(family, -1.0 - 4.0 * guess_star, 1.0 + 4.0 * guess_star, bl,
                                                         4096)) {
                    if (b.l == bl) {
                        star = b.lambda;
                        found = true;
                        break;
                    }
                }
                if (!found) throw ParameterError("no bifurcation found for l = " + std::to_string(bl));
            }
            const BranchSeed seed = branch_switch(op.grid_ptr(), star, bl, bm, b_amp, b_side, b_offset);
            Equilibrium start = newton_solve(family(seed.lambda_start), op, seed.guess, cfg.newton_options());
            start.u = pin_phase(start.u, bm);
            ContinuationOptions copts;
            copts.newton = cfg.newton_options();
            const Branch br = continue_branch(family, op, start, b_side * b_step, b_steps, bl, bm, copts);
            export_branch(cfg.output_dir, br);
            emit_plot_data(br, (std::filesystem::path(cfg.output_dir) / "branch_plot.csv").string());
            write_branch_csv(out, br);
            return exit_ok;
        }

        if (*audit) {
            const ScalarField u = load(ctx, audit_in);
            SymmetryReport rep;
            if (with_problem) {
                const OperatorHandle op(u.grid_ptr(), cfg.realization);
                rep = theorem_audit(family(cfg.lambda), op, u, cfg.thresholds);
            } else {
                rep = theorem_audit(u, cfg.thresholds);
            }
            write_text(ctx, audit_json, report_json(rep) + "\n");
            if (!audit_plot.empty()) emit_plot_data(rep, audit_plot);
            if (!audit_json.empty()) out << "verdict: " << to_string(rep.verdict) << '\n';
            return strict && rep.verdict != Verdict::pass ? exit_audit_failed : exit_ok;
        }

        if (*arc) {
            const ScalarField u = load(ctx, arc_in);
            const AxialExtremumSet ext = detect_axial_extrema(u, cfg.thresholds.tol_ax);
            int seed = arc_seed;
            if (seed < 0) {
                for (std::size_t i = 0; i < ext.size() && seed < 0; ++i)
                    if (ext.kinds[i] == ExtremumKind::min) seed = static_cast<int>(i);
                if (seed < 0) throw ContractError("arc-sweep: field has no axial minimum");
            }
            const MovingArcReport rep = moving_arc_sweep(u, ext, seed, arc_dir, cfg.thresholds.n_eps, cfg.thresholds.tol_w);
            std::ostringstream os;
            emit_plot_data(rep, os);
            write_text(ctx, arc_out, os.str());
            err << "eps_star " << fmt("%.12g", rep.eps_star) << " of " << fmt("%.12g", rep.gap)
                << (rep.reaches_target ? " (reaches target)" : " (stops short)") << '\n';
            return exit_ok;
        }

        if (*gen) {
            const GridPtr g = grid();
            ScalarField f;
            if (gen_kind == "figure1") {
                f = generate_figure1(g);
            } else {
                f = harmonic_mode(g, gl, gm);
                if (gen_kind == "broken") f += g_eps * harmonic_mode(g, pl, pm);
            }
            f *= g_amp;
            store(ctx, gen_out, f);
            return exit_ok;
        }

        if (*circ) {
            const CircleProfile prof = circle_solve(cfg.lambda, ck, cn);
            out << "lambda," << fmt("%.12g", prof.lambda) << "\nk," << prof.k_mode << "\ntrivial,"
                << (prof.trivial ? "true" : "false") << "\namplitude," << fmt("%.12g", prof.amplitude)
                << "\nresidual_norm," << fmt("%.3e", prof.residual_norm) << '\n';
            if (!circ_out.empty()) {
                std::ostringstream os;
                os << "phi,u\n";
                for (int i = 0; i < prof.n; ++i)
                    os << fmt("%.12g", 2.0 * std::numbers::pi * i / prof.n) << ',' << fmt("%.17g", prof.values[i])
                       << '\n';
                write_text(ctx, circ_out, os.str());
            }
            return exit_ok;
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const DegenerateInputError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_compute;
    }
    return exit_usage;
}

int cli_main(int argc, const char* const* argv) { return cli_main(argc, argv, std::cin, std::cout, std::cerr); }

}  // namespace sphere_eq
