#include "wrest/finite_field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wrest {
namespace {

bool is_prime(long long p) {
    if (p < 2) return false;
    for (long long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

} // namespace

PrimeField::PrimeField(long long p) : p_(p) {
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("PrimeField: p must be an odd prime");
    table_.resize(static_cast<std::size_t>(p));
    const double w = 2.0 * std::numbers::pi / static_cast<double>(p);
    for (long long t = 0; t < p; ++t)
        table_[static_cast<std::size_t>(t)] = {std::cos(w * static_cast<double>(t)),
                                               std::sin(w * static_cast<double>(t))};
}

FieldVariety make_variety(const PrimeField& f, FieldVariety::Kind kind) {
    const long long p = f.p();
    FieldVariety v;
    v.kind = kind;
    if (kind == FieldVariety::Kind::parabola) {
        v.points.reserve(static_cast<std::size_t>(p));
        for (long long t = 0; t < p; ++t) v.points.push_back({t, (t * t) % p});
        return v;
    }
    // roots[a] = all y with y^2 = a (mod p)
    std::vector<std::vector<long long>> roots(static_cast<std::size_t>(p));
    for (long long y = 0; y < p; ++y) roots[static_cast<std::size_t>((y * y) % p)].push_back(y);
    for (long long x = 0; x < p; ++x) {
        long long a = (1 - x * x) % p;
        if (a < 0) a += p;
        for (long long y : roots[static_cast<std::size_t>(a)]) v.points.push_back({x, y});
    }
    return v;
}

std::complex<double> fourier_coeff(const PrimeField& f, const FieldVariety& v,
                                   std::array<long long, 2> m) {
    const long long p = f.p();
    if (m[0] < 0 || m[0] >= p || m[1] < 0 || m[1] >= p)
        throw std::invalid_argument("fourier_coeff: m components must be in [0, p)");
    std::complex<double> s{0.0, 0.0};
    for (const auto& x : v.points) s += f.chi(-(x[0] * m[0] + x[1] * m[1]));
    return s / (static_cast<double>(p) * static_cast<double>(p));
}

CircleBoundReport circle_bound_check(const PrimeField& f, const FieldOptions& opts) {
    const long long p = f.p();
    if (p > opts.p_cap) throw std::runtime_error("circle_bound_check: p exceeds cap");
    const FieldVariety v = make_variety(f, FieldVariety::Kind::circle);
    const double norm = std::pow(static_cast<double>(p), 1.5);
    const double tol = static_cast<double>(p) * 1e-14;

    CircleBoundReport rep;
    rep.histogram.assign(100, 0);
    std::vector<double> row_max(static_cast<std::size_t>(p), 0.0);
    std::vector<std::vector<long long>> row_hist(static_cast<std::size_t>(p));
    std::vector<std::vector<std::array<long long, 2>>> row_viol(static_cast<std::size_t>(p));

    auto scan_row = [&](long long m0) {
        auto u = static_cast<std::size_t>(m0);
        row_hist[u].assign(100, 0);
        double mx = 0.0;
        for (long long m1 = (m0 == 0 ? 1 : 0); m1 < p; ++m1) {
            std::complex<double> s{0.0, 0.0};
            for (const auto& x : v.points) s += f.chi(-(x[0] * m0 + x[1] * m1));
            const double val = std::abs(s) / (static_cast<double>(p) * static_cast<double>(p)) * norm;
            mx = std::max(mx, val);
            const int bin = std::min(99, static_cast<int>(val / 2.0 * 100.0));
            ++row_hist[u][static_cast<std::size_t>(bin)];
            if (val > 2.0 + tol) row_viol[u].push_back({m0, m1});
        }
        row_max[u] = mx;
    };

    if (opts.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long m0 = 0; m0 < p; ++m0) scan_row(m0);
    } else {
        for (long long m0 = 0; m0 < p; ++m0) scan_row(m0);
    }
    for (long long m0 = 0; m0 < p; ++m0) {
        auto u = static_cast<std::size_t>(m0);
        rep.max_normalized = std::max(rep.max_normalized, row_max[u]);
        for (int b = 0; b < 100; ++b) rep.histogram[static_cast<std::size_t>(b)] += row_hist[u][static_cast<std::size_t>(b)];
        rep.violations.insert(rep.violations.end(), row_viol[u].begin(), row_viol[u].end());
    }
    return rep;
}

CensusReport small_coefficient_census(const PrimeField& f, double exponent,
                                      const FieldOptions& opts) {
    const long long p = f.p();
    if (p > opts.p_cap) throw std::runtime_error("small_coefficient_census: p exceeds cap");
    const FieldVariety v = make_variety(f, FieldVariety::Kind::circle);
    constexpr std::size_t kListCap = 200000;

    CensusReport rep;
    rep.exponent = exponent;
    rep.threshold = std::pow(static_cast<double>(p), -exponent);
    rep.total_m = p * p - 1;

    std::vector<std::vector<std::array<long long, 2>>> row_small(static_cast<std::size_t>(p));
    auto scan_row = [&](long long m0) {
        auto u = static_cast<std::size_t>(m0);
        for (long long m1 = (m0 == 0 ? 1 : 0); m1 < p; ++m1) {
            std::complex<double> s{0.0, 0.0};
            for (const auto& x : v.points) s += f.chi(-(x[0] * m0 + x[1] * m1));
            const double val = std::abs(s) / (static_cast<double>(p) * static_cast<double>(p));
            if (val < rep.threshold) row_small[u].push_back({m0, m1});
        }
    };
    if (opts.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long m0 = 0; m0 < p; ++m0) scan_row(m0);
    } else {
        for (long long m0 = 0; m0 < p; ++m0) scan_row(m0);
    }
    for (long long m0 = 0; m0 < p; ++m0) {
        auto u = static_cast<std::size_t>(m0);
        rep.count += static_cast<long long>(row_small[u].size());
        for (const auto& m : row_small[u]) {
            if (rep.small_m.size() < kListCap)
                rep.small_m.push_back(m);
            else
                rep.truncated = true;
        }
    }
    rep.fraction = static_cast<double>(rep.count) / static_cast<double>(rep.total_m);
    return rep;
}

} // namespace wrest
