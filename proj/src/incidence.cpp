#include "wrest/incidence.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>

namespace wrest {

namespace {
constexpr long long kOffset = 1LL << 30;
}

unsigned long long pack_point(long long x, long long y) {
    if (std::abs(x) >= kOffset || std::abs(y) >= kOffset)
        throw std::invalid_argument("pack_point: coordinate out of range");
    return (static_cast<unsigned long long>(x + kOffset) << 32) |
           static_cast<unsigned long long>(y + kOffset);
}

std::array<long long, 2> unpack_point(unsigned long long key) {
    long long x = static_cast<long long>(key >> 32) - kOffset;
    long long y = static_cast<long long>(key & 0xffffffffULL) - kOffset;
    return {x, y};
}

DiscreteCurve DiscreteCurve::parabola_trunc(long long R) {
    if (R < 0) throw std::invalid_argument("parabola_trunc: R >= 0 required");
    DiscreteCurve c;
    c.points.reserve(static_cast<std::size_t>(2 * R + 1));
    for (long long n = -R; n <= R; ++n) c.points.push_back({n, n * n});
    return c;
}

DiscreteCurve DiscreteCurve::circle_radius_sq(long long n) {
    if (n < 0) throw std::invalid_argument("circle_radius_sq: n >= 0 required");
    DiscreteCurve c;
    const long long xmax = static_cast<long long>(std::sqrt(static_cast<double>(n))) + 1;
    for (long long x = -xmax; x <= xmax; ++x) {
        const long long rem = n - x * x;
        if (rem < 0) continue;
        const long long y = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(rem))));
        for (long long yy = std::max(0LL, y - 1); yy <= y + 1; ++yy) {
            if (yy * yy == rem) {
                c.points.push_back({x, yy});
                if (yy != 0) c.points.push_back({x, -yy});
                break;
            }
        }
    }
    return c;
}

ConvMap convolve_indicator(const DiscreteCurve& gamma,
                           std::span<const std::array<long long, 2>> e_set, Exec exec,
                           const ConvLimits& limits) {
    const double ops = static_cast<double>(gamma.points.size()) * static_cast<double>(e_set.size());
    if (ops > limits.max_ops)
        throw std::runtime_error("convolve_indicator: |Gamma| * |E| exceeds the operation cap");

    if (exec == Exec::serial || e_set.size() < 1024) {
        ConvMap conv;
        conv.reserve(e_set.size() * 2);
        for (const auto& y : e_set)
            for (const auto& g : gamma.points) ++conv[pack_point(y[0] + g[0], y[1] + g[1])];
        return conv;
    }

    int nthreads = 1;
#pragma omp parallel
    {
#pragma omp single
        nthreads = omp_get_num_threads();
    }
    std::vector<ConvMap> partial(static_cast<std::size_t>(nthreads));
#pragma omp parallel
    {
        auto& local = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
        for (std::size_t i = 0; i < e_set.size(); ++i) {
            const auto& y = e_set[i];
            for (const auto& g : gamma.points) ++local[pack_point(y[0] + g[0], y[1] + g[1])];
        }
    }
    ConvMap conv = std::move(partial[0]);
    for (std::size_t t = 1; t < partial.size(); ++t)
        for (const auto& [key, val] : partial[t]) conv[key] += val;
    return conv;
}

long long rich_points(const ConvMap& conv, long long k) {
    if (k < 1) throw std::invalid_argument("rich_points: k >= 1 required");
    long long n = 0;
    for (const auto& [key, val] : conv)
        if (val > k) ++n;
    return n;
}

long long conv_mass(const ConvMap& conv) {
    long long m = 0;
    for (const auto& [key, val] : conv) m += val;
    return m;
}

std::vector<std::pair<long long, long long>> circle_contrast(std::span<const long long> n_values,
                                                             const IntBox& box) {
    std::vector<std::pair<long long, long long>> table;
    table.reserve(n_values.size());
    for (long long n : n_values) {
        if (n <= 0) throw std::invalid_argument("circle_contrast: n must be positive");
        Quadric<BigInt> q(2, {BigInt(static_cast<long>(-n)), BigInt(0), BigInt(0), BigInt(1),
                              BigInt(1), BigInt(0)});
        table.emplace_back(n, count_on_quadric(q, box).count);
    }
    return table;
}

} // namespace wrest
