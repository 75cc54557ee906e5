#include "wrest/counting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wrest {
namespace {

inline double to_d(double x) { return x; }
inline double to_d(const BigRational& x) { return mpq_get_d(x.get_mpq_t()); }

template <class T>
T scaled(long long m, const T& s) {
    return T(static_cast<long>(m)) * s;
}

// Column scan over the first d-1 axes; the admissible last-coordinate windows
// are located in double precision with two-index safety margins and every
// candidate is re-checked with the exact (same-arithmetic) membership
// predicate, so the result agrees with brute force over the bounding box.
template <class T>
std::vector<IVec3> scan_columns(const NeighborhoodSpec<T>& spec, const std::array<T, 3>& scales,
                                const CountingLimits& limits) {
    const int d = spec.dim;
    const int last = d - 1;
    const auto lastu = static_cast<std::size_t>(last);

    std::array<std::array<long long, 2>, 2> outer{{{0, 0}, {0, 0}}};
    double ncols = 1;
    for (int i = 0; i < last; ++i) {
        auto u = static_cast<std::size_t>(i);
        const double t = to_d(spec.translation[u]);
        const double span = to_d(spec.semi_axes[u]) + to_d(spec.thickness[u]);
        const double s = to_d(scales[u]);
        long long lo = static_cast<long long>(std::ceil((t - span) / s)) - 1;
        long long hi = static_cast<long long>(std::floor((t + span) / s)) + 1;
        outer[u] = {lo, hi};
        ncols *= static_cast<double>(hi - lo + 1);
    }
    if (ncols > limits.max_columns)
        throw std::runtime_error("count_in_neighborhood: column count exceeds cap");

    std::vector<IVec3> pts;
    const T one(1);
    long long candidate_budget = static_cast<long long>(limits.max_columns);

    auto do_column = [&](long long m0, long long m1) {
        T Mlo(0), Mhi(0);
        {
            T x0 = scaled(m0, scales[0]);
            Mlo += axis_min_contrib(spec, 0, x0);
            Mhi += axis_max_contrib(spec, 0, x0);
        }
        if (d == 3) {
            T x1 = scaled(m1, scales[1]);
            Mlo += axis_min_contrib(spec, 1, x1);
            Mhi += axis_max_contrib(spec, 1, x1);
        }
        T c1 = one - Mlo;
        if (c1 < T(0)) return;

        const double a = to_d(spec.semi_axes[lastu]);
        const double th = to_d(spec.thickness[lastu]);
        const double t = to_d(spec.translation[lastu]);
        const double s = to_d(scales[lastu]);
        const double w = a * std::sqrt(std::max(to_d(c1), 0.0));
        T c2 = one - Mhi;
        double gap = 0.0;
        if (c2 > T(0)) gap = std::max(0.0, a * std::sqrt(to_d(c2)) - th);
        const double W = w + th;

        long long alo = static_cast<long long>(std::ceil((t - W) / s)) - 2;
        long long ahi, blo = 0, bhi = -1;
        bool two_branches = gap > 0.0;
        if (two_branches) {
            ahi = static_cast<long long>(std::floor((t - gap) / s)) + 2;
            blo = static_cast<long long>(std::ceil((t + gap) / s)) - 2;
            bhi = static_cast<long long>(std::floor((t + W) / s)) + 2;
            if (blo <= ahi + 1) {
                two_branches = false;
                ahi = bhi;
            }
        } else {
            ahi = static_cast<long long>(std::floor((t + W) / s)) + 2;
        }

        auto emit_range = [&](long long lo, long long hi) {
            if (hi < lo) return;
            candidate_budget -= hi - lo + 1;
            if (candidate_budget < 0)
                throw std::runtime_error("count_in_neighborhood: candidate count exceeds cap");
            for (long long m = lo; m <= hi; ++m) {
                T y = scaled(m, scales[lastu]);
                T lo_tot = Mlo + axis_min_contrib(spec, last, y);
                if (!(lo_tot <= one)) continue;
                T hi_tot = Mhi + axis_max_contrib(spec, last, y);
                if (!(hi_tot >= one)) continue;
                if (d == 2)
                    pts.push_back({m0, m, 0});
                else
                    pts.push_back({m0, m1, m});
            }
        };
        emit_range(alo, ahi);
        if (two_branches) emit_range(blo, bhi);
    };

    for (long long m0 = outer[0][0]; m0 <= outer[0][1]; ++m0) {
        if (d == 2) {
            do_column(m0, 0);
        } else {
            for (long long m1 = outer[1][0]; m1 <= outer[1][1]; ++m1) do_column(m0, m1);
        }
    }
    return pts;
}

} // namespace

CountResult count_in_neighborhood(const DiagonalLattice& lattice,
                                  const NeighborhoodSpec<double>& spec,
                                  const CountingLimits& limits) {
    if (lattice.dim() != spec.dim)
        throw std::invalid_argument("count_in_neighborhood: dimension mismatch");
    std::array<double, 3> scales{1, 1, 1};
    for (int i = 0; i < lattice.dim(); ++i) scales[static_cast<std::size_t>(i)] = lattice.scale(i);
    auto idx = scan_columns(spec, scales, limits);
    CountResult res;
    res.dim = spec.dim;
    res.translation = spec.translation;
    res.count = static_cast<long long>(idx.size());
    res.witnesses.reserve(idx.size());
    for (const auto& m : idx) {
        Vec3 p{scaled(m[0], scales[0]), scaled(m[1], scales[1]),
               spec.dim == 3 ? scaled(m[2], scales[2]) : 0.0};
        res.witnesses.push_back(p);
    }
    return res;
}

ExactCountResult count_in_neighborhood(const NeighborhoodSpec<BigRational>& spec,
                                       const CountingLimits& limits) {
    std::array<BigRational, 3> unit{BigRational(1), BigRational(1), BigRational(1)};
    auto idx = scan_columns(spec, unit, limits);
    ExactCountResult res;
    res.count = static_cast<long long>(idx.size());
    res.points = std::move(idx);
    return res;
}

CountResult max_count_over_translations(const DiagonalLattice& lattice,
                                        const NeighborhoodSpec<double>& base_spec,
                                        long long grid_steps, Exec exec,
                                        const CountingLimits& limits) {
    if (grid_steps < 1)
        throw std::invalid_argument("max_count_over_translations: grid_steps >= 1 required");
    const int d = lattice.dim();
    if (d != base_spec.dim)
        throw std::invalid_argument("max_count_over_translations: dimension mismatch");

    double max_pitch = 0.0, min_th = base_spec.thickness[0];
    for (int i = 0; i < d; ++i) {
        auto u = static_cast<std::size_t>(i);
        max_pitch = std::max(max_pitch, lattice.scale(i) / static_cast<double>(grid_steps));
        min_th = std::min(min_th, base_spec.thickness[u]);
    }
    if (max_pitch > 0.5 * min_th)
        throw std::runtime_error(
            "max_count_over_translations: grid pitch " + std::to_string(max_pitch) +
            " coarser than thickness/2 = " + std::to_string(0.5 * min_th));

    const long long nz = d == 3 ? grid_steps : 1;
    const long long total = grid_steps * grid_steps * nz;
    if (total > (1LL << 31))
        throw std::runtime_error("max_count_over_translations: translation grid too large");

    auto cell_spec = [&](long long cell) {
        long long j2 = d == 3 ? cell % grid_steps : 0;
        long long rest = d == 3 ? cell / grid_steps : cell;
        long long j1 = rest % grid_steps;
        long long j0 = rest / grid_steps;
        NeighborhoodSpec<double> s = base_spec;
        s.translation[0] += static_cast<double>(j0) * lattice.scale(0) / static_cast<double>(grid_steps);
        s.translation[1] += static_cast<double>(j1) * lattice.scale(1) / static_cast<double>(grid_steps);
        if (d == 3)
            s.translation[2] += static_cast<double>(j2) * lattice.scale(2) / static_cast<double>(grid_steps);
        return s;
    };

    std::vector<long long> counts(static_cast<std::size_t>(total), 0);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (long long cell = 0; cell < total; ++cell)
            counts[static_cast<std::size_t>(cell)] =
                count_in_neighborhood(lattice, cell_spec(cell), limits).count;
    } else {
        for (long long cell = 0; cell < total; ++cell)
            counts[static_cast<std::size_t>(cell)] =
                count_in_neighborhood(lattice, cell_spec(cell), limits).count;
    }

    long long best_cell = 0;
    for (long long cell = 1; cell < total; ++cell)
        if (counts[static_cast<std::size_t>(cell)] > counts[static_cast<std::size_t>(best_cell)])
            best_cell = cell;
    return count_in_neighborhood(lattice, cell_spec(best_cell), limits);
}

ExactCountResult count_on_quadric(const Quadric<BigInt>& q, const IntBox& box) {
    const int d = q.dim;
    if (box.dim != d) throw std::invalid_argument("count_on_quadric: dimension mismatch");
    if (d == 2) {
        BigInt disc = 4 * q.c[3] * q.c[4] - q.c[5] * q.c[5];
        if (disc == 0) throw std::invalid_argument("count_on_quadric: degenerate quadratic part");
    } else {
        // det of [[2c4, c5, c6], [c5, 2c7, c8], [c6, c8, 2c9]]
        const BigInt &a = q.c[4], &b = q.c[5], &c = q.c[6], &e = q.c[7], &f = q.c[8], &g = q.c[9];
        BigInt det = 2 * a * (4 * e * g - f * f) - b * (2 * b * g - c * f) + c * (b * f - 2 * c * e);
        if (det == 0) throw std::invalid_argument("count_on_quadric: degenerate quadratic part");
    }

    ExactCountResult res;
    const long long ylo = box.lo[static_cast<std::size_t>(d - 1)];
    const long long yhi = box.hi[static_cast<std::size_t>(d - 1)];
    BigInt Ylo(static_cast<long>(ylo)), Yhi(static_cast<long>(yhi));

    auto solve_column = [&](long long x0, long long x1, const BigInt& A, const BigInt& B,
                            const BigInt& C) {
        std::vector<long long> ys;
        auto push_if = [&](const BigInt& num, const BigInt& den) {
            // y = num/den if integral and in range
            if (den == 0) return;
            BigInt r, y;
            mpz_tdiv_qr(y.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
            if (r != 0) return;
            if (y < Ylo || y > Yhi) return;
            ys.push_back(mpz_get_si(y.get_mpz_t()));
        };
        if (A == 0) {
            if (B == 0) {
                if (C == 0)
                    for (long long y = ylo; y <= yhi; ++y) ys.push_back(y);
            } else {
                push_if(-C, B);
            }
        } else {
            BigInt D = B * B - 4 * A * C;
            if (D >= 0 && mpz_perfect_square_p(D.get_mpz_t())) {
                BigInt s;
                mpz_sqrt(s.get_mpz_t(), D.get_mpz_t());
                push_if(-B + s, 2 * A);
                if (s != 0) push_if(-B - s, 2 * A);
            }
        }
        std::sort(ys.begin(), ys.end());
        ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
        for (long long y : ys) {
            if (d == 2)
                res.points.push_back({x0, y, 0});
            else
                res.points.push_back({x0, x1, y});
        }
    };

    if (d == 2) {
        for (long long x = box.lo[0]; x <= box.hi[0]; ++x) {
            BigInt X(static_cast<long>(x));
            BigInt A = q.c[4];
            BigInt B = q.c[2] + q.c[5] * X;
            BigInt C = q.c[0] + q.c[1] * X + q.c[3] * X * X;
            solve_column(x, 0, A, B, C);
        }
    } else {
        for (long long x0 = box.lo[0]; x0 <= box.hi[0]; ++x0) {
            BigInt X0(static_cast<long>(x0));
            for (long long x1 = box.lo[1]; x1 <= box.hi[1]; ++x1) {
                BigInt X1(static_cast<long>(x1));
                BigInt A = q.c[9];
                BigInt B = q.c[3] + q.c[6] * X0 + q.c[8] * X1;
                BigInt C = q.c[0] + q.c[1] * X0 + q.c[2] * X1 + q.c[4] * X0 * X0 +
                           q.c[5] * X0 * X1 + q.c[7] * X1 * X1;
                solve_column(x0, x1, A, B, C);
            }
        }
    }
    res.count = static_cast<long long>(res.points.size());
    return res;
}

std::vector<OnCurveCountRow> heathbrown_scan(double axis_ratio_exponent,
                                             std::span<const long long> r_values, double theta,
                                             long long grid_denominator, Exec exec) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("heathbrown_scan: theta must be in (0,1)");
    if (grid_denominator < 1)
        throw std::invalid_argument("heathbrown_scan: grid_denominator >= 1 required");
    for (std::size_t i = 0; i + 1 < r_values.size(); ++i)
        if (r_values[i] >= r_values[i + 1])
            throw std::invalid_argument("heathbrown_scan: r_values must be strictly ascending");
    for (long long r : r_values)
        if (r < 1) throw std::invalid_argument("heathbrown_scan: r >= 1 required");

    const BigRational theta_q = rational_round(rational_from_double(theta), BigInt(1000000000));
    const long long g = grid_denominator;

    std::vector<OnCurveCountRow> rows(r_values.size());
    auto run_one = [&](std::size_t ridx) {
        const long long r = r_values[ridx];
        const long long r2 = static_cast<long long>(
            std::llround(std::pow(static_cast<double>(r), axis_ratio_exponent)));
        BigInt rpow27, rpow26, rb(static_cast<long>(r));
        mpz_pow_ui(rpow27.get_mpz_t(), rb.get_mpz_t(), 27);
        mpz_pow_ui(rpow26.get_mpz_t(), rb.get_mpz_t(), 26);
        BigRational th_x = theta_q / BigRational(rpow27);
        BigRational th_y = theta_q / BigRational(rpow26);

        OnCurveCountRow row;
        row.r = r;
        row.max_count = -1;
        for (long long a = 0; a < g; ++a) {
            for (long long b = 0; b < g; ++b) {
                BigRational tx(static_cast<long>(a), static_cast<long>(g));
                BigRational ty(static_cast<long>(b), static_cast<long>(g));
                tx.canonicalize();
                ty.canonicalize();
                NeighborhoodSpec<BigRational> spec(
                    2, {BigRational(static_cast<long>(r)), BigRational(static_cast<long>(r2)), BigRational(1)},
                    {tx, ty, BigRational(0)}, {th_x, th_y, BigRational(1, 2)});
                long long nb = count_in_neighborhood(spec).count;

                auto qi = to_primitive_integer(spec.quadric());
                IntBox box{{-r - 2, -r2 - 2, 0}, {r + 2, r2 + 2, 0}, 2};
                long long oc = count_on_quadric(qi, box).count;
                if (nb != oc)
                    throw std::logic_error(
                        "heathbrown_scan: thinned-neighborhood count disagrees with on-curve count");
                if (nb > row.max_count) {
                    row.max_count = nb;
                    row.best_translation_x = tx;
                    row.best_translation_y = ty;
                }
            }
        }
        rows[ridx] = row;
    };

    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::size_t i = 0; i < r_values.size(); ++i) run_one(i);
    } else {
        for (std::size_t i = 0; i < r_values.size(); ++i) run_one(i);
    }
    return rows;
}

} // namespace wrest
