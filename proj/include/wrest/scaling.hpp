#pragma once

#include "wrest/counting.hpp"
#include "wrest/extension.hpp"
#include "wrest/lattice.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wrest {

struct ExperimentConfig {
    SurfaceSpec surface;
    enum class Family { aniso, square } family = Family::aniso;
    std::vector<double> beta_values;
    std::vector<double> r_values;
    std::string method = "gram"; // gram | svd | poisson
    double tol = 1e-7;
    int max_iter = 400;
    std::size_t cap = 30000;
    int svd_nodes = 1024;
    long long poisson_grid = 16;
    bool with_counts = false;
    std::uint64_t seed = 0x5eedULL;
    std::string out_path; // CSV destination; empty = caller handles output
};

struct ScalingRecord {
    double beta = 0.0;
    double R = 0.0;
    std::string method;
    double norm = 0.0;
    std::optional<double> count;
    double runtime_s = 0.0;
    std::string error; // empty on success
};

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double predicted_slope = 0.0;
    std::string prediction_source;
};

/// Lattice of the weight-set family at (R, beta): anisotropic
/// (R^b, ..., R^b, R^{2b}) or square (R^b, ..., R^b); d from the surface.
DiagonalLattice family_lattice(ExperimentConfig::Family family, int dim, double R, double beta);

/// The weight set X: lattice points in [-R, R]^d.
std::vector<Vec3> build_weight_set(const DiagonalLattice& lattice, double R,
                                   double max_points = 1e8);

/// Runs every (beta, R) cell of the config; per-cell failures are embedded in
/// the records and the sweep continues. Records are ordered by (beta, R).
std::vector<ScalingRecord> run_sweep(const ExperimentConfig& config);

/// OLS of log(norm) against log(R) over the records (all with one beta);
/// records with errors are skipped. Needs >= 3 valid records at distinct R.
ExponentFit fit_exponent(std::span<const ScalingRecord> records, const SurfaceSpec& surface,
                         ExperimentConfig::Family family, double beta);

struct IdentityReport {
    double beta = 0.0;
    double R = 0.0;
    double norm = 0.0;
    long long count = 0;
    double rho = 0.0; // M^2 / (R^{1-3 beta} * count)
    long long grid_steps = 0;
};

struct IdentityOptions {
    double tol = 1e-7;
    int max_iter = 400;
    std::size_t cap = 40000;
    long long grid_steps = 0; // 0 = smallest grid satisfying the pitch rule
    std::uint64_t seed = 0x5eedULL;
};

/// The norm-count ratio rho = M^2 / (R^{1-3 beta} * max translated count of
/// N_{1/R}(S^1) in the dual lattice), circle surface, d = 2.
IdentityReport identity_check(double beta, double R, const IdentityOptions& opts = {});

/// CSV persistence, header: beta,R,method,norm,count,runtime_s
void write_records_csv(const std::string& path, std::span<const ScalingRecord> records);
std::vector<ScalingRecord> read_records_csv(const std::string& path);

/// Key-value config file (one `key = value` per line, '#' comments; lists
/// comma-separated). Keys: surface, lattice, betas, Rs, method, tol,
/// max_iter, cap, nodes, grid_steps, with_counts, seed, out.
ExperimentConfig parse_config_file(const std::string& path);

} // namespace wrest
