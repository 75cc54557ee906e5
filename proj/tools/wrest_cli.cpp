// wrest: weighted restriction workbench CLI.
//
// Subcommands: count, detect, norm, sweep, fit, identity, ffield, incidence.
// Exit codes: 0 success, 1 fatal error, 2 sweep finished with per-cell
// failures.

#include "wrest/counting.hpp"
#include "wrest/curve_detect.hpp"
#include "wrest/extension.hpp"
#include "wrest/finite_field.hpp"
#include "wrest/incidence.hpp"
#include "wrest/scaling.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using json = nlohmann::json;
using namespace wrest;

namespace {

std::vector<double> parse_csv_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

std::vector<BigRational> parse_csv_rationals(const std::string& s) {
    std::vector<BigRational> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_rational(tok));
    return out;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot open output file " + out_path);
        f << j.dump(2) << "\n";
    }
}

SurfaceSpec parse_surface(const std::string& s) {
    if (s == "circle") return SurfaceSpec{SurfaceSpec::Kind::circle};
    if (s == "parabola") return SurfaceSpec{SurfaceSpec::Kind::parabola2d};
    if (s == "sphere3") return SurfaceSpec{SurfaceSpec::Kind::sphere3d};
    throw std::invalid_argument("unknown surface: " + s);
}

json certificate_to_json(const DetectionCertificate& cert) {
    json j;
    switch (cert.status) {
        case DetectionCertificate::Status::common_quadric: j["status"] = "common_quadric"; break;
        case DetectionCertificate::Status::full_rank: j["status"] = "full_rank"; break;
        case DetectionCertificate::Status::insufficient_points:
            j["status"] = "insufficient_points";
            break;
    }
    j["rank"] = cert.rank;
    j["nullspace_dim"] = cert.nullspace_dim;
    j["max_height"] = cert.max_height.get_str();
    j["target_match"] = cert.target_match;
    if (cert.quadric) {
        json coeffs = json::array();
        for (const auto& c : cert.quadric->c) coeffs.push_back(rational_to_string(c));
        j["quadric"] = coeffs;
    }
    return j;
}

int cmd_count(const std::string& scales_s, const std::string& axes_s,
              const std::string& translation_s, const std::string& thickness_s,
              long long grid_steps, bool exact, const std::string& out_path) {
    json j;
    if (exact) {
        auto axes = parse_csv_rationals(axes_s);
        auto tr = parse_csv_rationals(translation_s);
        auto th = parse_csv_rationals(thickness_s);
        const int d = static_cast<int>(axes.size());
        if (d != 2 && d != 3) throw std::invalid_argument("count: need 2 or 3 axes");
        std::array<BigRational, 3> a{BigRational(1), BigRational(1), BigRational(1)}, t{}, k{};
        for (int i = 0; i < d; ++i) {
            a[static_cast<std::size_t>(i)] = axes[static_cast<std::size_t>(i)];
            t[static_cast<std::size_t>(i)] = tr.at(static_cast<std::size_t>(i));
            k[static_cast<std::size_t>(i)] = th.at(static_cast<std::size_t>(i));
        }
        if (d == 2) k[2] = make_rational(1, 2);
        NeighborhoodSpec<BigRational> spec(d, a, t, k);
        auto res = count_in_neighborhood(spec);
        j["count"] = res.count;
        json tj = json::array();
        for (int i = 0; i < d; ++i) tj.push_back(rational_to_string(t[static_cast<std::size_t>(i)]));
        j["translation"] = tj;
        json w = json::array();
        for (const auto& p : res.points) {
            json pt = json::array();
            for (int i = 0; i < d; ++i) pt.push_back(p[static_cast<std::size_t>(i)]);
            w.push_back(pt);
        }
        j["witnesses"] = w;
    } else {
        auto scales = parse_csv_doubles(scales_s);
        auto axes = parse_csv_doubles(axes_s);
        auto tr = parse_csv_doubles(translation_s);
        auto th = parse_csv_doubles(thickness_s);
        DiagonalLattice lat(scales);
        const int d = lat.dim();
        std::array<double, 3> a{1, 1, 1}, t{0, 0, 0}, k{0.5, 0.5, 0.5};
        for (int i = 0; i < d; ++i) {
            a[static_cast<std::size_t>(i)] = axes.at(static_cast<std::size_t>(i));
            t[static_cast<std::size_t>(i)] = tr.at(static_cast<std::size_t>(i));
            k[static_cast<std::size_t>(i)] = th.at(static_cast<std::size_t>(i));
        }
        NeighborhoodSpec<double> spec(d, a, t, k);
        CountResult res = grid_steps > 0 ? max_count_over_translations(lat, spec, grid_steps)
                                         : count_in_neighborhood(lat, spec);
        j["count"] = res.count;
        json tj = json::array();
        for (int i = 0; i < d; ++i) tj.push_back(res.translation[static_cast<std::size_t>(i)]);
        j["translation"] = tj;
        if (grid_steps > 0) j["grid_steps"] = grid_steps;
        json w = json::array();
        for (const auto& p : res.witnesses) {
            json pt = json::array();
            for (int i = 0; i < d; ++i) pt.push_back(p[static_cast<std::size_t>(i)]);
            w.push_back(pt);
        }
        j["witnesses"] = w;
    }
    emit(j, out_path);
    return 0;
}

int cmd_detect(const std::string& in_path, double tau, const std::string& height_bound,
               const std::string& out_path) {
    json in;
    if (in_path == "-") {
        std::cin >> in;
    } else {
        std::ifstream f(in_path);
        if (!f) throw std::runtime_error("cannot open " + in_path);
        f >> in;
    }
    const int dim = in.value("dim", 2);
    std::vector<IVec3> points;
    for (const auto& p : in.at("points")) {
        IVec3 q{0, 0, 0};
        for (int i = 0; i < dim; ++i)
            q[static_cast<std::size_t>(i)] = p.at(static_cast<std::size_t>(i)).get<long long>();
        points.push_back(q);
    }
    std::vector<BigRational> tc;
    for (const auto& c : in.at("target")) {
        if (c.is_string())
            tc.push_back(parse_rational(c.get<std::string>()));
        else
            tc.push_back(rational_from_double(c.get<double>()));
    }
    if (in.contains("tau")) tau = in["tau"].get<double>();
    Quadric<BigRational> target(dim, tc);
    DetectOptions opts;
    if (!height_bound.empty()) opts.height_bound = BigInt(height_bound);

    if (points.empty()) {
        json j;
        j["status"] = "insufficient_points";
        emit(j, out_path);
        return 0;
    }
    auto cert = dim == 2 ? detect_common_quadric(points, target, tau, opts)
                         : detect_common_quadric_3d(points, target, tau, opts);
    emit(certificate_to_json(cert), out_path);
    return 0;
}

int cmd_norm(const std::string& surface_s, const std::string& lattice_s, double R, double beta,
             const std::string& method, double tol, int max_iter, std::size_t cap, int nodes,
             long long grid_steps, const std::string& points_path, const std::string& out_path) {
    SurfaceSpec surface = parse_surface(surface_s);
    NormEstimate est;
    std::size_t n_points = 0;
    if (lattice_s == "custom") {
        if (points_path.empty()) throw std::invalid_argument("norm: custom lattice needs --points");
        std::ifstream f(points_path);
        if (!f) throw std::runtime_error("cannot open " + points_path);
        json pj;
        f >> pj;
        std::vector<Vec3> X;
        for (const auto& p : pj) {
            Vec3 v{0, 0, 0};
            for (std::size_t i = 0; i < p.size() && i < 3; ++i) v[i] = p[i].get<double>();
            X.push_back(v);
        }
        n_points = X.size();
        GramOptions g;
        g.tol = tol;
        g.max_iter = max_iter;
        g.cap = cap;
        if (method == "svd")
            est = svd_discretized_norm(X, surface, nodes, g);
        else {
            SurfaceKernel k{surface};
            est = gram_norm(X, k, g);
        }
    } else {
        ExperimentConfig cfg;
        cfg.surface = surface;
        cfg.family = lattice_s == "square" ? ExperimentConfig::Family::square
                                           : ExperimentConfig::Family::aniso;
        if (lattice_s != "square" && lattice_s != "aniso")
            throw std::invalid_argument("norm: lattice must be aniso, square or custom");
        DiagonalLattice lat = family_lattice(cfg.family, surface.dim(), R, beta);
        if (method == "poisson") {
            est = poisson_upper_bound(lat, surface, R, grid_steps > 0 ? grid_steps : 16);
        } else {
            auto X = build_weight_set(lat, R);
            n_points = X.size();
            GramOptions g;
            g.tol = tol;
            g.max_iter = max_iter;
            g.cap = cap;
            if (method == "svd")
                est = svd_discretized_norm(X, surface, nodes, g);
            else if (method == "gram") {
                SurfaceKernel k{surface};
                est = gram_norm(X, k, g);
            } else
                throw std::invalid_argument("norm: method must be gram, svd or poisson");
        }
    }

    json j;
    j["surface"] = surface_s;
    j["lattice"] = lattice_s;
    j["R"] = R;
    j["beta"] = beta;
    j["method"] = method;
    j["norm"] = est.value;
    j["iterations"] = est.iterations;
    j["residual"] = est.residual;
    j["converged"] = est.converged;
    if (n_points) j["points"] = n_points;

    if (!out_path.empty() && out_path.size() > 4 &&
        out_path.substr(out_path.size() - 4) == ".csv") {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot open " + out_path);
        f << "beta,R,method,norm,count,runtime_s\n";
        char buf[128];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s,%.17g,,\n", beta, R, method.c_str(),
                      est.value);
        f << buf;
        std::cout << j.dump(2) << "\n";
    } else {
        emit(j, out_path);
    }
    return 0;
}

int cmd_sweep(const std::string& config_path) {
    ExperimentConfig cfg = parse_config_file(config_path);
    auto records = run_sweep(cfg);
    const std::string out = cfg.out_path.empty() ? "sweep.csv" : cfg.out_path;
    write_records_csv(out, records);

    json side;
    side["surface"] = cfg.surface.kind == SurfaceSpec::Kind::circle       ? "circle"
                      : cfg.surface.kind == SurfaceSpec::Kind::parabola2d ? "parabola"
                                                                          : "sphere3";
    side["lattice"] = cfg.family == ExperimentConfig::Family::aniso ? "aniso" : "square";
    side["betas"] = cfg.beta_values;
    side["Rs"] = cfg.r_values;
    side["method"] = cfg.method;
    side["tol"] = cfg.tol;
    side["max_iter"] = cfg.max_iter;
    side["cap"] = cfg.cap;
    side["nodes"] = cfg.svd_nodes;
    side["grid_steps"] = cfg.poisson_grid;
    side["with_counts"] = cfg.with_counts;
    side["seed"] = cfg.seed;
    side["out"] = out;
    std::ofstream sf(out + ".config.json");
    if (!sf) throw std::runtime_error("cannot open sidecar for " + out);
    sf << side.dump(2) << "\n";

    int failures = 0;
    for (const auto& r : records) {
        if (!r.error.empty()) {
            ++failures;
            std::cerr << "cell (beta=" << r.beta << ", R=" << r.R << ") failed: " << r.error
                      << "\n";
        }
    }
    std::cout << "wrote " << records.size() << " records to " << out << " (" << failures
              << " failed cells)\n";
    return failures ? 2 : 0;
}

int cmd_fit(const std::string& in_path, const std::string& surface_s,
            const std::string& lattice_s) {
    auto records = read_records_csv(in_path);
    std::vector<double> betas;
    for (const auto& r : records)
        if (std::find(betas.begin(), betas.end(), r.beta) == betas.end()) betas.push_back(r.beta);
    const bool have_pred = !surface_s.empty();
    SurfaceSpec surface = have_pred ? parse_surface(surface_s) : SurfaceSpec{};
    auto family = lattice_s == "square" ? ExperimentConfig::Family::square
                                        : ExperimentConfig::Family::aniso;
    int fitted = 0;
    for (double beta : betas) {
        std::vector<ScalingRecord> group;
        for (const auto& r : records)
            if (r.beta == beta) group.push_back(r);
        try {
            auto fit = fit_exponent(group, surface, family, beta);
            json j;
            j["beta"] = beta;
            j["slope"] = fit.slope;
            j["intercept"] = fit.intercept;
            j["r_squared"] = fit.r_squared;
            if (have_pred) {
                j["predicted_slope"] = fit.predicted_slope;
                j["prediction_source"] = fit.prediction_source;
            }
            std::cout << j.dump() << "\n";
            ++fitted;
        } catch (const std::exception& e) {
            std::cerr << "beta=" << beta << ": " << e.what() << "\n";
        }
    }
    return fitted ? 0 : 1;
}

int cmd_identity(double beta, double R, double tol, std::size_t cap, long long grid_steps,
                 const std::string& out_path) {
    IdentityOptions opts;
    opts.tol = tol;
    opts.cap = cap;
    opts.grid_steps = grid_steps;
    auto rep = identity_check(beta, R, opts);
    json j;
    j["beta"] = rep.beta;
    j["R"] = rep.R;
    j["norm"] = rep.norm;
    j["norm_sq"] = rep.norm * rep.norm;
    j["count"] = rep.count;
    j["rho"] = rep.rho;
    j["grid_steps"] = rep.grid_steps;
    emit(j, out_path);
    return 0;
}

int cmd_ffield(long long p, const std::string& variety, double census_exponent, long long p_cap,
               const std::string& out_path) {
    PrimeField f(p);
    FieldOptions opts;
    opts.p_cap = p_cap;
    json j;
    j["p"] = p;
    j["variety"] = variety;

    if (variety == "parabola") {
        auto v = make_variety(f, FieldVariety::Kind::parabola);
        const double p32 = std::pow(static_cast<double>(p), -1.5);
        double max_dev_zero_row = 0.0, max_dev_modulus = 0.0;
        for (long long m1 = 1; m1 < p; ++m1)
            max_dev_zero_row = std::max(max_dev_zero_row, std::abs(fourier_coeff(f, v, {m1, 0})));
        for (long long m1 = 0; m1 < p; ++m1)
            for (long long m2 = 1; m2 < p; ++m2)
                max_dev_modulus = std::max(
                    max_dev_modulus, std::abs(std::abs(fourier_coeff(f, v, {m1, m2})) - p32));
        j["checks"] = {{"coeff_at_zero", std::abs(fourier_coeff(f, v, {0, 0}))},
                       {"expected_at_zero", 1.0 / static_cast<double>(p)},
                       {"max_dev_zero_row", max_dev_zero_row},
                       {"max_dev_modulus", max_dev_modulus},
                       {"points", v.points.size()}};
    } else if (variety == "circle") {
        auto rep = circle_bound_check(f, opts);
        j["checks"] = {{"max_normalized", rep.max_normalized},
                       {"violations", rep.violations.size()},
                       {"points", make_variety(f, FieldVariety::Kind::circle).points.size()}};
        j["histogram"] = rep.histogram;
        auto census = small_coefficient_census(f, census_exponent, opts);
        json c;
        c["exponent"] = census.exponent;
        c["threshold"] = census.threshold;
        c["count"] = census.count;
        c["fraction"] = census.fraction;
        c["truncated"] = census.truncated;
        json ms = json::array();
        for (const auto& m : census.small_m) ms.push_back({m[0], m[1]});
        c["m_set"] = ms;
        j["census"] = c;
    } else {
        throw std::invalid_argument("ffield: variety must be circle or parabola");
    }
    emit(j, out_path);
    return 0;
}

int cmd_incidence(long long R, const std::string& grid_s, long long k,
                  const std::string& out_path) {
    auto x_pos = grid_s.find('x');
    if (x_pos == std::string::npos) throw std::invalid_argument("incidence: --grid must be NxM");
    const long long N = std::stoll(grid_s.substr(0, x_pos));
    const long long M = std::stoll(grid_s.substr(x_pos + 1));
    std::vector<std::array<long long, 2>> E;
    E.reserve(static_cast<std::size_t>(N * M));
    for (long long x = -N / 2; x < N - N / 2; ++x)
        for (long long y = -M / 2; y < M - M / 2; ++y) E.push_back({x, y});

    auto gamma = DiscreteCurve::parabola_trunc(R);
    auto conv = convolve_indicator(gamma, E);
    const long long rich = rich_points(conv, k);
    const double esz = static_cast<double>(E.size());
    const double bound = esz * esz / (static_cast<double>(k) * static_cast<double>(k) *
                                      static_cast<double>(k));
    json j;
    j["R"] = R;
    j["grid"] = grid_s;
    j["k"] = k;
    j["E_size"] = E.size();
    j["gamma_size"] = gamma.points.size();
    j["mass"] = conv_mass(conv);
    j["rich_count"] = rich;
    j["bound_value"] = bound;
    j["ratio"] = static_cast<double>(rich) / bound;
    emit(j, out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted restriction workbench"};
    app.require_subcommand(1);

    // count
    std::string c_scales = "1,1", c_axes = "1,1", c_tr = "0,0", c_th = "0.01,0.01", c_out;
    long long c_grid = 0;
    bool c_exact = false;
    auto* count = app.add_subcommand("count", "lattice points in a thin conic neighborhood");
    count->add_option("--scales", c_scales, "lattice scales, comma separated");
    count->add_option("--axes", c_axes, "ellipse semi-axes");
    count->add_option("--translation", c_tr, "ellipse translation");
    count->add_option("--thickness", c_th, "per-axis thickness");
    count->add_option("--grid-steps", c_grid, "maximize over a translation grid");
    count->add_flag("--exact", c_exact, "exact rational mode over Z^d");
    count->add_option("--out", c_out, "write JSON here instead of stdout");

    // detect
    std::string d_in = "-", d_height, d_out;
    double d_tau = 1e-6;
    auto* detect = app.add_subcommand("detect", "certify a common quadric through integer points");
    detect->add_option("--in", d_in, "JSON input file ('-' = stdin)");
    detect->add_option("--tau", d_tau, "target-proximity tolerance");
    detect->add_option("--height-bound", d_height, "denominator bound for rounding");
    detect->add_option("--out", d_out, "write JSON here instead of stdout");

    // norm
    std::string n_surface = "circle", n_lattice = "aniso", n_method = "gram", n_points, n_out;
    double n_R = 32, n_beta = 0, n_tol = 1e-7;
    int n_iter = 500, n_nodes = 1024;
    std::size_t n_cap = 30000;
    long long n_grid = 0;
    auto* norm = app.add_subcommand("norm", "weighted restriction operator norm");
    norm->add_option("--surface", n_surface, "circle | parabola | sphere3");
    norm->add_option("--lattice", n_lattice, "aniso | square | custom");
    norm->add_option("--R", n_R, "box radius");
    norm->add_option("--beta", n_beta, "lattice exponent");
    norm->add_option("--method", n_method, "gram | svd | poisson");
    norm->add_option("--tol", n_tol, "power-iteration tolerance");
    norm->add_option("--max-iter", n_iter, "power-iteration cap");
    norm->add_option("--cap", n_cap, "|X| cap");
    norm->add_option("--nodes", n_nodes, "svd quadrature nodes");
    norm->add_option("--grid-steps", n_grid, "poisson offset grid");
    norm->add_option("--points", n_points, "JSON point list for --lattice custom");
    norm->add_option("--out", n_out, "output file (.csv or .json)");

    // sweep
    std::string s_config;
    auto* sweep = app.add_subcommand("sweep", "run a (beta, R) sweep from a config file");
    sweep->add_option("--config", s_config, "key = value config file")->required();

    // fit
    std::string f_in, f_surface, f_lattice = "aniso";
    auto* fit = app.add_subcommand("fit", "fit log-log scaling exponents from a sweep CSV");
    fit->add_option("--in", f_in, "records CSV")->required();
    fit->add_option("--surface", f_surface, "surface for the predicted slope");
    fit->add_option("--lattice", f_lattice, "lattice family for the predicted slope");

    // identity
    double i_beta = 1.0 / 28.0, i_R = 64, i_tol = 1e-7;
    std::size_t i_cap = 40000;
    long long i_grid = 0;
    std::string i_out;
    auto* identity = app.add_subcommand("identity", "norm-count ratio rho at (beta, R)");
    identity->add_option("--beta", i_beta, "lattice exponent");
    identity->add_option("--R", i_R, "box radius");
    identity->add_option("--tol", i_tol, "power-iteration tolerance");
    identity->add_option("--cap", i_cap, "|X| cap");
    identity->add_option("--grid-steps", i_grid, "translation grid (0 = auto)");
    identity->add_option("--out", i_out, "write JSON here instead of stdout");

    // ffield
    long long ff_p = 101, ff_cap = 2003;
    std::string ff_variety = "circle", ff_out;
    double ff_exp = 1.51;
    auto* ffield = app.add_subcommand("ffield", "finite-field Fourier coefficients");
    ffield->add_option("--p", ff_p, "odd prime")->required();
    ffield->add_option("--variety", ff_variety, "circle | parabola");
    ffield->add_option("--census-exponent", ff_exp, "census threshold exponent");
    ffield->add_option("--p-cap", ff_cap, "largest allowed p");
    ffield->add_option("--out", ff_out, "write JSON here instead of stdout");

    // incidence
    long long in_R = 16, in_k = 8;
    std::string in_grid = "16x256", in_out;
    auto* incidence = app.add_subcommand("incidence", "k-rich points of the parabola convolution");
    incidence->add_option("--R", in_R, "parabola truncation");
    incidence->add_option("--grid", in_grid, "point-set grid NxM");
    incidence->add_option("--k", in_k, "richness threshold");
    incidence->add_option("--out", in_out, "write JSON here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (count->parsed())
            return cmd_count(c_scales, c_axes, c_tr, c_th, c_grid, c_exact, c_out);
        if (detect->parsed()) return cmd_detect(d_in, d_tau, d_height, d_out);
        if (norm->parsed())
            return cmd_norm(n_surface, n_lattice, n_R, n_beta, n_method, n_tol, n_iter, n_cap,
                            n_nodes, n_grid, n_points, n_out);
        if (sweep->parsed()) return cmd_sweep(s_config);
        if (fit->parsed()) return cmd_fit(f_in, f_surface, f_lattice);
        if (identity->parsed()) return cmd_identity(i_beta, i_R, i_tol, i_cap, i_grid, i_out);
        if (ffield->parsed()) return cmd_ffield(ff_p, ff_variety, ff_exp, ff_cap, ff_out);
        if (incidence->parsed()) return cmd_incidence(in_R, in_grid, in_k, in_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
