#pragma once

#include "wrest/conics.hpp"
#include "wrest/exact.hpp"
#include "wrest/lattice.hpp"
#include "wrest/parallel.hpp"

#include <span>
#include <vector>

namespace wrest {

struct CountResult {
    long long count = 0;
    std::vector<Vec3> witnesses;
    Vec3 translation{0, 0, 0};
    int dim = 2;
};

/// Count over the integer lattice in exact arithmetic; witnesses are the
/// integer points themselves.
struct ExactCountResult {
    long long count = 0;
    std::vector<IVec3> points;
};

struct CountingLimits {
    double max_columns = 1e8;
};

/// Lattice points of `lattice` inside the thickened translated ellipse.
/// Scans the first d-1 axes over the neighborhood's projection and solves the
/// admissible last-coordinate windows per column; agrees with full-box brute
/// force by construction (every candidate is re-checked with in_neighborhood).
CountResult count_in_neighborhood(const DiagonalLattice& lattice,
                                  const NeighborhoodSpec<double>& spec,
                                  const CountingLimits& limits = {});

/// Exact-rational variant over Z^d (pre-scaled integer coordinates).
ExactCountResult count_in_neighborhood(const NeighborhoodSpec<BigRational>& spec,
                                       const CountingLimits& limits = {});

/// Maximizes count_in_neighborhood over a grid_steps^d uniform grid of
/// translations spanning one fundamental domain of the lattice, added to the
/// base spec's translation. The grid pitch max_i(s_i/grid_steps) must be
/// <= min(thickness)/2. Ties broken by lexicographically smallest grid index.
CountResult max_count_over_translations(const DiagonalLattice& lattice,
                                        const NeighborhoodSpec<double>& base_spec,
                                        long long grid_steps, Exec exec = Exec::parallel,
                                        const CountingLimits& limits = {});

struct IntBox {
    IVec3 lo{0, 0, 0};
    IVec3 hi{0, 0, 0};
    int dim = 2;
};

/// Integer points exactly on {Q = 0} inside the closed integer box, by
/// per-column quadratic solving with perfect-square tests; no floating point.
/// Requires a non-degenerate quadratic part.
ExactCountResult count_on_quadric(const Quadric<BigInt>& q, const IntBox& box);

struct OnCurveCountRow {
    long long r = 0;
    long long max_count = 0;
    BigRational best_translation_x{0};
    BigRational best_translation_y{0};
};

/// For each r, the maximum number of integer points on the translated ellipse
/// with semi-axes (r, r^axis_ratio_exponent) over the grid of translations
/// (a/grid_denominator, b/grid_denominator). Each cell counts points of the
/// theta-thinned neighborhood in exact arithmetic and cross-checks the result
/// against the exact on-curve count; at these thicknesses the two must agree.
std::vector<OnCurveCountRow> heathbrown_scan(double axis_ratio_exponent,
                                             std::span<const long long> r_values, double theta,
                                             long long grid_denominator = 4,
                                             Exec exec = Exec::parallel);

} // namespace wrest
