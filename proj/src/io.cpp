#include "sphere_eq/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "sphere_eq/errors.hpp"

namespace sphere_eq {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& tok, int line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') throw ParseError("not a number: '" + tok + "'", line);
    if (!std::isfinite(v)) throw ParseError("non-finite entry '" + tok + "'", line);
    return v;
}

int parse_int(const std::string& tok, int line) {
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0') throw ParseError("not an integer: '" + tok + "'", line);
    return static_cast<int>(v);
}

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class LineReader {
public:
    explicit LineReader(std::istream& is) : is_(is) {}
    bool next(std::string& line) {
        if (!std::getline(is_, line)) return false;
        ++number_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }
    int number() const { return number_; }

private:
    std::istream& is_;
    int number_ = 0;
};

}  // namespace

void write_field(std::ostream& os, const ScalarField& field) {
    const GridSpec& g = field.grid();
    os << "sphf 1\n" << g.n_theta << ' ' << g.n_phi << '\n';
    for (int j = 0; j < g.n_theta; ++j) os << (j ? " " : "") << fmt17(g.theta_nodes[j]);
    os << '\n';
    for (int j = 0; j < g.n_theta; ++j) {
        for (int k = 0; k < g.n_phi; ++k) os << (k ? " " : "") << fmt17(field(j, k));
        os << '\n';
    }
}

void write_field(const std::string& path, const ScalarField& field) {
    if (path == "-") {
        write_field(std::cout, field);
        std::cout.flush();
        return;
    }
    std::ofstream os(path);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    write_field(os, field);
    if (!os) throw IoError("write to '" + path + "' failed");
}

ScalarField read_field(std::istream& is) {
    LineReader in(is);
    std::string line;

    if (!in.next(line)) throw ParseError("empty input, expected 'sphf 1' header", 1);
    auto tok = split(line);
    if (tok.size() != 2 || tok[0] != "sphf") throw ParseError("malformed header, expected 'sphf 1'", in.number());
    if (tok[1] != "1") throw ParseError("unsupported SPHF version '" + tok[1] + "'", in.number());

    if (!in.next(line)) throw ParseError("missing grid size line", in.number() + 1);
    tok = split(line);
    if (tok.size() != 2) throw ParseError("expected 'n_theta n_phi'", in.number());
    const int n_theta = parse_int(tok[0], in.number());
    const int n_phi = parse_int(tok[1], in.number());
    GridPtr grid;
    try {
        grid = make_grid(n_theta, n_phi);
    } catch (const ParameterError& e) {
        throw ParseError(e.what(), in.number());
    }

    if (!in.next(line)) throw ParseError("missing colatitude line", in.number() + 1);
    tok = split(line);
    if (static_cast<int>(tok.size()) != n_theta)
        throw ParseError("expected " + std::to_string(n_theta) + " colatitudes, found " + std::to_string(tok.size()),
                         in.number());
    for (int j = 0; j < n_theta; ++j) {
        const double th = parse_double(tok[j], in.number());
        if (std::abs(th - grid->theta_nodes[j]) > 1e-12)
            throw ParseError("colatitude " + std::to_string(j) + " does not match the Gauss-Legendre grid",
                             in.number());
    }

    ScalarField field(grid);
    for (int j = 0; j < n_theta; ++j) {
        if (!in.next(line))
            throw ParseError("truncated file: missing row " + std::to_string(j + 1) + " of " + std::to_string(n_theta),
                             in.number() + 1);
        tok = split(line);
        if (static_cast<int>(tok.size()) != n_phi)
            throw ParseError("row " + std::to_string(j + 1) + ": expected " + std::to_string(n_phi) + " values, found " +
                                 std::to_string(tok.size()),
                             in.number());
        for (int k = 0; k < n_phi; ++k) field(j, k) = parse_double(tok[k], in.number());
    }
    while (in.next(line))
        if (!split(line).empty()) throw ParseError("unexpected trailing data", in.number());
    return field;
}

ScalarField read_field(const std::string& path) {
    if (path == "-") return read_field(std::cin);
    std::ifstream is(path);
    if (!is) throw IoError("cannot open '" + path + "'");
    return read_field(is);
}

void RunConfig::validate() const {
    if (n_theta < 4) throw ParameterError("n_theta must be at least 4");
    if (n_phi < 8 || n_phi % 2 != 0) throw ParameterError("n_phi must be even and at least 8");
    if (!(newton_tol > 0.0)) throw ParameterError("newton_tol must be positive");
    if (!(krylov_tol > 0.0)) throw ParameterError("krylov_tol must be positive");
    if (max_newton < 1) throw ParameterError("max_newton must be positive");
    thresholds.validate();
}

NewtonOptions RunConfig::newton_options() const {
    NewtonOptions o;
    o.tol = newton_tol;
    o.max_iter = max_newton;
    o.krylov.rel_tol = krylov_tol;
    return o;
}

std::map<std::string, std::string> parse_config(std::istream& is) {
    std::map<std::string, std::string> out;
    LineReader in(is);
    std::string line;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t");
        return s.substr(b, e - b + 1);
    };
    while (in.next(line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", in.number());
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw ParseError("empty key", in.number());
        out[key] = trim(t.substr(eq + 1));
    }
    return out;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config '" + path + "'");
    return parse_config(is);
}

void apply_config(RunConfig& c, const std::map<std::string, std::string>& entries) {
    for (const auto& [key, value] : entries) {
        auto as_double = [&] {
            try {
                std::size_t pos = 0;
                const double v = std::stod(value, &pos);
                if (pos != value.size()) throw std::invalid_argument(value);
                return v;
            } catch (const std::exception&) {
                throw ParameterError("config '" + key + "': not a number: '" + value + "'");
            }
        };
        auto as_int = [&] {
            const double v = as_double();
            if (v != std::floor(v)) throw ParameterError("config '" + key + "': not an integer: '" + value + "'");
            return static_cast<int>(v);
        };
        if (key == "n_theta") c.n_theta = as_int();
        else if (key == "n_phi") c.n_phi = as_int();
        else if (key == "realization") c.realization = parse_realization(value);
        else if (key == "problem") c.problem = value;
        else if (key == "lambda") c.lambda = as_double();
        else if (key == "newton_tol") c.newton_tol = as_double();
        else if (key == "krylov_tol") c.krylov_tol = as_double();
        else if (key == "max_newton") c.max_newton = as_int();
        else if (key == "tol_ax") c.thresholds.tol_ax = as_double();
        else if (key == "tol_lvl") c.thresholds.tol_lvl = as_double();
        else if (key == "tol_refl") c.thresholds.tol_refl = as_double();
        else if (key == "tol_w") c.thresholds.tol_w = as_double();
        else if (key == "tol_mid") c.thresholds.tol_mid = as_double();
        else if (key == "n_eps") c.thresholds.n_eps = as_int();
        else if (key == "output_dir") c.output_dir = value;
        else if (key == "seed") c.seed = static_cast<std::uint64_t>(as_double());
        else throw ParameterError("unknown config key '" + key + "'");
    }
}

void write_branch_csv(std::ostream& os, const Branch& branch) {
    os << "lambda,amplitude,residual_norm,newton_iters\n";
    for (const auto& p : branch.points)
        os << fmt17(p.lambda) << ',' << fmt17(p.amplitude) << ',' << fmt17(p.residual_norm) << ',' << p.newton_iters
           << '\n';
}

void export_branch(const std::string& dir, const Branch& branch) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
    const std::filesystem::path base(dir);
    {
        std::ofstream os(base / "branch.csv");
        if (!os) throw IoError("cannot write branch.csv in '" + dir + "'");
        write_branch_csv(os, branch);
    }
    for (std::size_t k = 0; k < branch.points.size(); ++k) {
        const std::string name = "branch_" + std::to_string(branch.l) + "_" + std::to_string(branch.m) + "_step" +
                                 std::to_string(k) + ".sphf";
        write_field((base / name).string(), branch.points[k].u);
    }
}

}  // namespace sphere_eq
