#pragma once

// Independent brute-force oracles for the test suites. These deliberately
// avoid the library's optimized code paths: enumeration is full-box, ranks
// are naive rational elimination without pivot heuristics, and the Bessel
// reference is direct quadrature of the defining integral.

#include "wrest/conics.hpp"
#include "wrest/counting.hpp"
#include "wrest/exact.hpp"
#include "wrest/lattice.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace oracles {

// Full-box enumeration + membership filter.
inline wrest::CountResult brute_force_count(const wrest::DiagonalLattice& lattice,
                                            const wrest::NeighborhoodSpec<double>& spec) {
    const int d = spec.dim;
    wrest::Vec3 hw{0, 0, 1};
    for (int i = 0; i < d; ++i) {
        auto u = static_cast<std::size_t>(i);
        hw[u] = spec.semi_axes[u] + spec.thickness[u] + lattice.scale(i);
    }
    wrest::Box box(spec.translation, hw, d);
    wrest::CountResult res;
    res.dim = d;
    res.translation = spec.translation;
    for (const auto& p : wrest::enumerate_in_box(lattice, box)) {
        std::array<double, 3> q{p[0], p[1], p[2]};
        if (wrest::in_neighborhood(spec, q)) {
            res.witnesses.push_back(p);
            ++res.count;
        }
    }
    return res;
}

// Brute-force integer points on a 2-d quadric inside a box.
inline long long brute_force_on_quadric(const wrest::Quadric<wrest::BigInt>& q,
                                        const wrest::IntBox& box) {
    long long n = 0;
    for (long long x = box.lo[0]; x <= box.hi[0]; ++x)
        for (long long y = box.lo[1]; y <= box.hi[1]; ++y) {
            wrest::BigInt X(static_cast<long>(x)), Y(static_cast<long>(y));
            wrest::BigInt v = q.c[0] + q.c[1] * X + q.c[2] * Y + q.c[3] * X * X + q.c[4] * Y * Y +
                              q.c[5] * X * Y;
            if (v == 0) ++n;
        }
    return n;
}

// Naive rational Gaussian elimination rank (no pivoting heuristics, no
// fraction-free tricks); the independent route against exact::rank.
inline std::size_t naive_rank(std::vector<std::vector<wrest::BigRational>> m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (m[i][c] == 0) continue;
            wrest::BigRational f = m[i][c] / m[r][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

// J0(z) = (1/pi) * int_0^pi cos(z sin t) dt by composite midpoint-free
// Gauss-Legendre with a conservative node count.
inline double j0_quadrature(double z) {
    const int panels = std::max(16, static_cast<int>(std::ceil(std::abs(z))) + 8);
    // 12-point Gauss-Legendre base rule, nodes/weights via Newton.
    static const auto rule = [] {
        std::array<std::array<double, 2>, 12> r{};
        const int n = 12;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int j = 2; j <= n; ++j) {
                    double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            r[static_cast<std::size_t>(i)] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
        }
        return r;
    }();
    const double h = std::numbers::pi / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = h * (p + 0.5);
        for (const auto& nw : rule) sum += 0.5 * h * nw[1] * std::cos(z * std::sin(mid + 0.5 * h * nw[0]));
    }
    return sum / std::numbers::pi;
}

// Dense sampling of the translated ellipse; returns the minimal sup-norm-free
// Euclidean distance from p over the samples.
inline double ellipse_min_distance_sampled(const wrest::NeighborhoodSpec<double>& s,
                                           const wrest::Vec3& p, int samples = 100000) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const double ph = 2.0 * std::numbers::pi * i / samples;
        const double ex = s.translation[0] + s.semi_axes[0] * std::cos(ph);
        const double ey = s.translation[1] + s.semi_axes[1] * std::sin(ph);
        const double d = std::hypot(ex - p[0], ey - p[1]);
        best = std::min(best, d);
    }
    return best;
}

// True if some sampled ellipse point lies in the axis box around p.
inline bool ellipse_box_hit_sampled(const wrest::NeighborhoodSpec<double>& s, const wrest::Vec3& p,
                                    int samples = 100000) {
    for (int i = 0; i < samples; ++i) {
        const double ph = 2.0 * std::numbers::pi * i / samples;
        const double ex = s.translation[0] + s.semi_axes[0] * std::cos(ph);
        const double ey = s.translation[1] + s.semi_axes[1] * std::sin(ph);
        if (std::abs(ex - p[0]) <= s.thickness[0] && std::abs(ey - p[1]) <= s.thickness[1])
            return true;
    }
    return false;
}

} // namespace oracles
