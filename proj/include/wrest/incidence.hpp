#pragma once

#include "wrest/counting.hpp"
#include "wrest/parallel.hpp"

#include <array>
#include <span>
#include <unordered_map>
#include <vector>

namespace wrest {

/// Finite point set on an integer curve.
struct DiscreteCurve {
    std::vector<std::array<long long, 2>> points;

    /// {(n, n^2) : |n| <= R}, 2R+1 points.
    static DiscreteCurve parabola_trunc(long long R);
    /// Integer points on x^2 + y^2 = n.
    static DiscreteCurve circle_radius_sq(long long n);
};

/// Sparse convolution counts keyed by packed (x, y); |x|, |y| < 2^30.
using ConvMap = std::unordered_map<unsigned long long, long long>;

unsigned long long pack_point(long long x, long long y);
std::array<long long, 2> unpack_point(unsigned long long key);

struct ConvLimits {
    double max_ops = 1e9;
};

/// x -> |{y in E : x - y in Gamma}| over all x with nonzero count.
ConvMap convolve_indicator(const DiscreteCurve& gamma,
                           std::span<const std::array<long long, 2>> e_set,
                           Exec exec = Exec::parallel, const ConvLimits& limits = {});

/// Number of x with conv value strictly greater than k.
long long rich_points(const ConvMap& conv, long long k);

/// Total mass sum_x conv(x); equals |Gamma| * |E| for any convolution.
long long conv_mass(const ConvMap& conv);

/// n -> number of integer points on x^2 + y^2 = n within the box.
std::vector<std::pair<long long, long long>> circle_contrast(std::span<const long long> n_values,
                                                             const IntBox& box);

} // namespace wrest
