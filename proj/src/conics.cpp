#include "wrest/conics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace wrest {

double SurfaceSpec::measure() const {
    switch (kind) {
        case Kind::circle:
            return 2.0 * std::numbers::pi;
        case Kind::parabola2d: {
            // Arc length of (t, t^2), |t| <= 1: [t/2*sqrt(1+4t^2) + asinh(2t)/4] at 1 minus at -1.
            return std::sqrt(5.0) + 0.5 * std::asinh(2.0);
        }
        case Kind::sphere3d:
            return 4.0 * std::numbers::pi;
    }
    return 0.0;
}

std::pair<Vec3, double> nearest_surface_point(const NeighborhoodSpec<double>& s, const Vec3& p) {
    const int d = s.dim;
    std::array<double, 3> u{0, 0, 0}, a2{1, 1, 1};
    double norm_u = 0.0;
    for (int i = 0; i < d; ++i) {
        auto k = static_cast<std::size_t>(i);
        u[k] = p[k] - s.translation[k];
        a2[k] = s.semi_axes[k] * s.semi_axes[k];
        norm_u += u[k] * u[k];
    }
    if (norm_u == 0.0)
        throw std::invalid_argument("nearest_surface_point: p at the ellipse center");

    // Nearest point has e_i = t_i + a_i^2 u_i / (a_i^2 + lambda) with
    // F(lambda) = sum a_i^2 u_i^2/(a_i^2+lambda)^2 - 1 = 0; F is strictly
    // decreasing on (-min a_i^2, inf).
    auto F = [&](double lam) {
        double f = -1.0;
        for (int i = 0; i < d; ++i) {
            auto k = static_cast<std::size_t>(i);
            double den = a2[k] + lam;
            f += a2[k] * u[k] * u[k] / (den * den);
        }
        return f;
    };
    auto dF = [&](double lam) {
        double f = 0.0;
        for (int i = 0; i < d; ++i) {
            auto k = static_cast<std::size_t>(i);
            double den = a2[k] + lam;
            f += -2.0 * a2[k] * u[k] * u[k] / (den * den * den);
        }
        return f;
    };

    // The pole relevant to the root comes from axes with u_i != 0; F -> +inf
    // there and F -> -1 at +inf, so the root is bracketed.
    double amin2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d; ++i) {
        auto k = static_cast<std::size_t>(i);
        if (u[k] != 0.0) amin2 = std::min(amin2, a2[k]);
    }
    double lo = -amin2 * (1.0 - 1e-9);
    double hi = 1.0;
    while (F(hi) > 0.0) hi = 2.0 * hi + amin2;
    for (int tries = 0; F(lo) < 0.0 && tries < 60; ++tries) lo = -amin2 + 0.0625 * (lo + amin2);

    double lam = 0.0;
    if (F(lam) < 0.0) hi = 0.0;
    else lo = 0.0;
    bool done = false;
    for (int it = 0; it < 100 && !done; ++it) {
        double f = F(lam);
        if (std::abs(f) < 1e-14) {
            done = true;
            break;
        }
        if (f > 0.0) lo = lam;
        else hi = lam;
        double step = dF(lam) != 0.0 ? lam - f / dF(lam) : std::numeric_limits<double>::infinity();
        lam = (step > lo && step < hi) ? step : 0.5 * (lo + hi);
    }
    if (!done && std::abs(F(lam)) > 1e-12)
        throw std::runtime_error("nearest_surface_point: no convergence in 100 iterations");

    Vec3 e{0, 0, 0};
    double gap = 0.0;
    for (int i = 0; i < d; ++i) {
        auto k = static_cast<std::size_t>(i);
        e[k] = s.translation[k] + a2[k] * u[k] / (a2[k] + lam);
        gap += (e[k] - p[k]) * (e[k] - p[k]);
    }
    return {e, std::sqrt(gap)};
}

Quadric<BigInt> to_primitive_integer(const Quadric<BigRational>& q) {
    BigInt l = 1;
    for (const auto& c : q.c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<BigInt> ic(q.c.size());
    BigInt g = 0;
    for (std::size_t i = 0; i < q.c.size(); ++i) {
        ic[i] = q.c[i].get_num() * (l / q.c[i].get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ic[i].get_mpz_t());
    }
    if (g > 1)
        for (auto& x : ic) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    for (const auto& x : ic) {
        if (x != 0) {
            if (x < 0)
                for (auto& y : ic) y = -y;
            break;
        }
    }
    return Quadric<BigInt>(q.dim, std::move(ic));
}

} // namespace wrest
