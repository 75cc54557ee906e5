#pragma once

#include "wrest/exact.hpp"
#include "wrest/lattice.hpp"

#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wrest {

/// Fixed monomial order of degree-<=2 monomials:
///   d = 2: (1, x, y, x^2, y^2, xy)
///   d = 3: (1, x1, x2, x3, x1^2, x1*x2, x1*x3, x2^2, x2*x3, x3^2)
inline constexpr int quadric_coeff_count(int dim) { return dim == 2 ? 6 : 10; }

template <class T>
std::vector<T> quadric_monomials(int dim, const std::array<T, 3>& p) {
    const T& x = p[0];
    const T& y = p[1];
    if (dim == 2) return {T(1), x, y, x * x, y * y, x * y};
    const T& z = p[2];
    return {T(1), x, y, z, x * x, x * y, x * z, y * y, y * z, z * z};
}

/// Quadratic hypersurface by coefficient vector in the fixed monomial order.
/// The zero set is sum_i c_i * monomial_i(p) = 0.
template <class T>
struct Quadric {
    int dim = 2;
    std::vector<T> c;

    Quadric(int d, std::vector<T> coeffs) : dim(d), c(std::move(coeffs)) {
        if (d != 2 && d != 3) throw std::invalid_argument("Quadric: dimension must be 2 or 3");
        if (c.size() != static_cast<std::size_t>(quadric_coeff_count(d)))
            throw std::invalid_argument("Quadric: wrong coefficient count");
        bool any = false, quad = false;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i] != T(0)) {
                any = true;
                if (i >= static_cast<std::size_t>(d + 1)) quad = true;
            }
        }
        if (!any) throw std::invalid_argument("Quadric: zero coefficient vector");
        if (!quad) throw std::invalid_argument("Quadric: quadratic part vanishes");
    }

    /// Indices of the purely quadratic coefficients.
    static std::vector<int> quadratic_indices(int d) {
        if (d == 2) return {3, 4, 5};
        return {4, 5, 6, 7, 8, 9};
    }
};

template <class T>
T eval_quadric(const Quadric<T>& q, const std::array<T, 3>& p) {
    auto mon = quadric_monomials(q.dim, p);
    T s(0);
    for (std::size_t i = 0; i < mon.size(); ++i) s += q.c[i] * mon[i];
    return s;
}

inline double eval_quadric(const Quadric<double>& q, const Vec3& p) {
    return eval_quadric<double>(q, p);
}

/// Translated origin-centered ellipse/ellipsoid with semi-axes `a`, thickened
/// by the Minkowski sum with the box [-thickness_i, thickness_i]^d.
template <class T>
struct NeighborhoodSpec {
    int dim = 2;
    std::array<T, 3> semi_axes{};
    std::array<T, 3> translation{};
    std::array<T, 3> thickness{};

    NeighborhoodSpec(int d, std::array<T, 3> a, std::array<T, 3> t, std::array<T, 3> th)
        : dim(d), semi_axes(a), translation(t), thickness(th) {
        if (d != 2 && d != 3)
            throw std::invalid_argument("NeighborhoodSpec: dimension must be 2 or 3");
        for (int i = 0; i < d; ++i) {
            auto u = static_cast<std::size_t>(i);
            if (!(semi_axes[u] > T(0)))
                throw std::invalid_argument("NeighborhoodSpec: semi-axes must be positive");
            if (!(thickness[u] > T(0)) || !(thickness[u] < semi_axes[u]))
                throw std::invalid_argument("NeighborhoodSpec: need 0 < thickness_i < a_i");
        }
    }

    /// Ellipse form sum_i ((x_i - t_i)/a_i)^2 - 1 as a Quadric.
    Quadric<T> quadric() const {
        std::vector<T> c(static_cast<std::size_t>(quadric_coeff_count(dim)), T(0));
        T constant(-1);
        for (int i = 0; i < dim; ++i) {
            auto u = static_cast<std::size_t>(i);
            T inv_a2 = T(1) / (semi_axes[u] * semi_axes[u]);
            constant += translation[u] * translation[u] * inv_a2;
            c[1 + u] = T(-2) * translation[u] * inv_a2;
            if (dim == 2)
                c[u == 0 ? 3 : 4] = inv_a2;
            else
                c[u == 0 ? 4 : (u == 1 ? 7 : 9)] = inv_a2;
        }
        c[0] = constant;
        return Quadric<T>(dim, std::move(c));
    }
};

template <class T>
T abs_value(const T& x) {
    return x < T(0) ? T(-x) : x;
}

/// Min of ((u - t_i)/a_i)^2 over u in [x - th_i, x + th_i].
template <class T>
T axis_min_contrib(const NeighborhoodSpec<T>& s, int axis, const T& x) {
    auto u = static_cast<std::size_t>(axis);
    T dist = abs_value(T(x - s.translation[u]));
    if (dist <= s.thickness[u]) return T(0);
    T v = (dist - s.thickness[u]) / s.semi_axes[u];
    return v * v;
}

/// Max of ((u - t_i)/a_i)^2 over u in [x - th_i, x + th_i].
template <class T>
T axis_max_contrib(const NeighborhoodSpec<T>& s, int axis, const T& x) {
    auto u = static_cast<std::size_t>(axis);
    T dist = abs_value(T(x - s.translation[u]));
    T v = (dist + s.thickness[u]) / s.semi_axes[u];
    return v * v;
}

/// Exact Minkowski-sum membership: the closed box around p of half-widths
/// `thickness` meets the translated ellipse iff the ellipse form's minimum
/// over the box is <= 1 and its maximum is >= 1 (the form is separable, so
/// both extremes are per-axis sums).
template <class T>
bool in_neighborhood(const NeighborhoodSpec<T>& s, const std::array<T, 3>& p) {
    T lo(0), hi(0);
    for (int i = 0; i < s.dim; ++i) {
        lo += axis_min_contrib(s, i, p[static_cast<std::size_t>(i)]);
        hi += axis_max_contrib(s, i, p[static_cast<std::size_t>(i)]);
    }
    return lo <= T(1) && T(1) <= hi;
}

/// Supported surfaces for the extension-norm experiments.
struct SurfaceSpec {
    enum class Kind { circle, parabola2d, sphere3d };
    Kind kind = Kind::circle;

    int dim() const { return kind == Kind::sphere3d ? 3 : 2; }
    /// Total measure (arc length / area) of the surface.
    double measure() const;
};

/// Point on the translated ellipse near p together with the achieved
/// distance. p must be within ~10% relative distance of the ellipse; Newton
/// iteration with a bisection safeguard, tolerance 1e-14, at most 100 steps.
std::pair<Vec3, double> nearest_surface_point(const NeighborhoodSpec<double>& s, const Vec3& p);

/// Clears denominators and divides by the content; first nonzero coefficient
/// made positive.
Quadric<BigInt> to_primitive_integer(const Quadric<BigRational>& q);

} // namespace wrest
