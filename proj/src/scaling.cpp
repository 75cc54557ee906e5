#include "wrest/scaling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wrest {

DiagonalLattice family_lattice(ExperimentConfig::Family family, int dim, double R, double beta) {
    const double s1 = std::pow(R, beta);
    const double s2 = std::pow(R, 2.0 * beta);
    std::vector<double> scales;
    if (dim == 2)
        scales = family == ExperimentConfig::Family::aniso ? std::vector<double>{s1, s2}
                                                           : std::vector<double>{s1, s1};
    else
        scales = family == ExperimentConfig::Family::aniso ? std::vector<double>{s1, s1, s2}
                                                           : std::vector<double>{s1, s1, s1};
    return DiagonalLattice(scales);
}

std::vector<Vec3> build_weight_set(const DiagonalLattice& lattice, double R, double max_points) {
    const int d = lattice.dim();
    Box box({0, 0, 0}, {R, R, d == 3 ? R : 1}, d);
    EnumerationLimits lim;
    lim.max_points = max_points;
    return enumerate_in_box(lattice, box, lim);
}

namespace {

NormEstimate norm_for_cell(const ExperimentConfig& cfg, double beta, double R) {
    const int d = cfg.surface.dim();
    DiagonalLattice lat = family_lattice(cfg.family, d, R, beta);
    if (cfg.method == "poisson")
        return poisson_upper_bound(lat, cfg.surface, R, cfg.poisson_grid);
    auto X = build_weight_set(lat, R);
    if (X.size() > cfg.cap)
        throw std::runtime_error("cell |X| = " + std::to_string(X.size()) + " exceeds cap");
    GramOptions g;
    g.tol = cfg.tol;
    g.max_iter = cfg.max_iter;
    g.cap = cfg.cap;
    g.seed = cfg.seed;
    if (cfg.method == "svd") return svd_discretized_norm(X, cfg.surface, cfg.svd_nodes, g);
    if (cfg.method != "gram") throw std::invalid_argument("unknown method: " + cfg.method);
    SurfaceKernel k{cfg.surface};
    return gram_norm(X, k, g);
}

long long auto_grid_steps(const DiagonalLattice& dual, double thickness) {
    double smax = dual.scale(0);
    for (int i = 1; i < dual.dim(); ++i) smax = std::max(smax, dual.scale(i));
    return static_cast<long long>(std::ceil(2.0 * smax / thickness)) + 1;
}

std::optional<double> cell_count(const ExperimentConfig& cfg, double beta, double R) {
    if (cfg.surface.kind == SurfaceSpec::Kind::parabola2d) return std::nullopt;
    const int d = cfg.surface.dim();
    DiagonalLattice dual = family_lattice(cfg.family, d, R, beta).dual();
    const double th = 1.0 / R;
    NeighborhoodSpec<double> spec(d, {1.0, 1.0, 1.0}, {0.0, 0.0, 0.0}, {th, th, d == 3 ? th : 0.5});
    auto res = max_count_over_translations(dual, spec, auto_grid_steps(dual, th));
    return static_cast<double>(res.count);
}

} // namespace

std::vector<ScalingRecord> run_sweep(const ExperimentConfig& config) {
    std::vector<ScalingRecord> records;
    for (double beta : config.beta_values) {
        if (beta < 0.0 || beta >= 1.0)
            throw std::invalid_argument("run_sweep: beta must lie in [0, 1)");
    }
    for (std::size_t i = 0; i + 1 < config.r_values.size(); ++i)
        if (config.r_values[i] >= config.r_values[i + 1])
            throw std::invalid_argument("run_sweep: R values must be ascending");
    for (double R : config.r_values)
        if (R < 2.0) throw std::invalid_argument("run_sweep: R >= 2 required");

    for (double beta : config.beta_values) {
        for (double R : config.r_values) {
            ScalingRecord rec;
            rec.beta = beta;
            rec.R = R;
            rec.method = config.method;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                rec.norm = norm_for_cell(config, beta, R).value;
                if (config.with_counts) rec.count = cell_count(config, beta, R);
            } catch (const std::exception& e) {
                rec.error = e.what();
            }
            rec.runtime_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            records.push_back(std::move(rec));
        }
    }
    return records;
}

ExponentFit fit_exponent(std::span<const ScalingRecord> records, const SurfaceSpec& surface,
                         ExperimentConfig::Family family, double beta) {
    std::vector<double> lx, ly;
    for (const auto& r : records) {
        if (!r.error.empty() || !(r.norm > 0.0)) continue;
        lx.push_back(std::log(r.R));
        ly.push_back(std::log(r.norm));
    }
    std::vector<double> ux = lx;
    std::sort(ux.begin(), ux.end());
    ux.erase(std::unique(ux.begin(), ux.end()), ux.end());
    if (ux.size() < 3)
        throw std::invalid_argument("fit_exponent: need >= 3 records at distinct R");

    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    ExponentFit fit;
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double my = sy / n;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ss_res += e * e;
        ss_tot += (ly[i] - my) * (ly[i] - my);
    }
    fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;

    const bool square = family == ExperimentConfig::Family::square;
    if (square && beta >= 0.75) {
        fit.predicted_slope = 0.0;
        fit.prediction_source = "flat plateau (kernel has bounded l1 mass for beta >= 3/4)";
    } else if (surface.kind == SurfaceSpec::Kind::parabola2d) {
        fit.predicted_slope = square ? 0.5 - 0.75 * beta : 0.5 - beta;
        fit.prediction_source = square ? "1/2 - 3*beta/4 (parabola lower bound, square lattice)"
                                       : "1/2 - beta (parabola lower bound, anisotropic lattice)";
    } else {
        fit.predicted_slope = square ? 0.5 - beta : 0.5 - 1.5 * beta;
        fit.prediction_source = square ? "1/2 - beta (circle upper bound, square lattice)"
                                       : "1/2 - 3*beta/2 (circle/sphere upper bound, anisotropic "
                                         "lattice; d=3 reported, not asserted)";
    }
    return fit;
}

IdentityReport identity_check(double beta, double R, const IdentityOptions& opts) {
    DiagonalLattice lat = family_lattice(ExperimentConfig::Family::aniso, 2, R, beta);
    auto X = build_weight_set(lat, R);
    GramOptions g;
    g.tol = opts.tol;
    g.max_iter = opts.max_iter;
    g.cap = opts.cap;
    g.seed = opts.seed;
    SurfaceKernel kern{SurfaceSpec{SurfaceSpec::Kind::circle}};
    const double M = gram_norm(X, kern, g).value;

    DiagonalLattice dual = lat.dual();
    const double th = 1.0 / R;
    NeighborhoodSpec<double> spec(2, {1.0, 1.0, 1.0}, {0.0, 0.0, 0.0}, {th, th, 0.5});
    long long steps = opts.grid_steps > 0 ? opts.grid_steps : auto_grid_steps(dual, th);
    auto best = max_count_over_translations(dual, spec, steps);

    IdentityReport rep;
    rep.beta = beta;
    rep.R = R;
    rep.norm = M;
    rep.count = best.count;
    rep.grid_steps = steps;
    const double denom = std::pow(R, 1.0 - 3.0 * beta) * std::max<double>(1, best.count);
    rep.rho = M * M / denom;
    return rep;
}

void write_records_csv(const std::string& path, std::span<const ScalingRecord> records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_records_csv: cannot open " + path);
    out << "beta,R,method,norm,count,runtime_s\n";
    char buf[256];
    for (const auto& r : records) {
        std::string count_str;
        if (r.count) {
            std::snprintf(buf, sizeof buf, "%.17g", *r.count);
            count_str = buf;
        }
        std::snprintf(buf, sizeof buf, "%.17g,%.17g", r.beta, r.R);
        out << buf << ',' << r.method << ',';
        std::snprintf(buf, sizeof buf, "%.17g", r.norm);
        out << buf << ',' << count_str << ',';
        std::snprintf(buf, sizeof buf, "%.17g", r.runtime_s);
        out << buf << '\n';
    }
}

std::vector<ScalingRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_records_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_records_csv: empty file");
    std::vector<ScalingRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> parts;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) parts.push_back(tok);
        while (parts.size() < 6) parts.emplace_back();
        ScalingRecord r;
        r.beta = std::stod(parts[0]);
        r.R = std::stod(parts[1]);
        r.method = parts[2];
        r.norm = std::stod(parts[3]);
        if (!parts[4].empty()) r.count = std::stod(parts[4]);
        if (!parts[5].empty()) r.runtime_s = std::stod(parts[5]);
        records.push_back(std::move(r));
    }
    return records;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("parse_config_file: cannot open " + path);
    ExperimentConfig cfg;
    std::string line;
    auto parse_list = [](const std::string& s) {
        std::vector<double> out;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
        return out;
    };
    auto trim = [](std::string s) {
        const char* ws = " \t\r\n";
        s.erase(0, s.find_first_not_of(ws));
        auto e = s.find_last_not_of(ws);
        s.erase(e == std::string::npos ? 0 : e + 1);
        return s;
    };
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) continue;
        if (key == "surface") {
            if (val == "circle") cfg.surface.kind = SurfaceSpec::Kind::circle;
            else if (val == "parabola") cfg.surface.kind = SurfaceSpec::Kind::parabola2d;
            else if (val == "sphere3") cfg.surface.kind = SurfaceSpec::Kind::sphere3d;
            else throw std::invalid_argument("config: unknown surface " + val);
        } else if (key == "lattice") {
            if (val == "aniso") cfg.family = ExperimentConfig::Family::aniso;
            else if (val == "square") cfg.family = ExperimentConfig::Family::square;
            else throw std::invalid_argument("config: unknown lattice " + val);
        } else if (key == "betas") cfg.beta_values = parse_list(val);
        else if (key == "Rs") cfg.r_values = parse_list(val);
        else if (key == "method") cfg.method = val;
        else if (key == "tol") cfg.tol = std::stod(val);
        else if (key == "max_iter") cfg.max_iter = std::stoi(val);
        else if (key == "cap") cfg.cap = static_cast<std::size_t>(std::stod(val));
        else if (key == "nodes") cfg.svd_nodes = std::stoi(val);
        else if (key == "grid_steps") cfg.poisson_grid = std::stoll(val);
        else if (key == "with_counts") cfg.with_counts = (val == "true" || val == "1");
        else if (key == "seed") cfg.seed = std::stoull(val);
        else if (key == "out") cfg.out_path = val;
        else throw std::invalid_argument("config: unknown key " + key);
    }
    return cfg;
}

} // namespace wrest
