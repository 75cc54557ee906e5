#include "wrest/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace wrest {

DiagonalLattice::DiagonalLattice(std::vector<double> scales) : scales_(std::move(scales)) {
    if (scales_.size() != 2 && scales_.size() != 3)
        throw std::invalid_argument("DiagonalLattice: dimension must be 2 or 3");
    for (double s : scales_)
        if (!(s > 0.0) || !std::isfinite(s))
            throw std::invalid_argument("DiagonalLattice: scales must be positive and finite");
}

DiagonalLattice DiagonalLattice::dual() const {
    std::vector<double> inv(scales_.size());
    for (std::size_t i = 0; i < scales_.size(); ++i) inv[i] = 1.0 / scales_[i];
    return DiagonalLattice(std::move(inv));
}

double DiagonalLattice::covolume() const {
    double v = 1.0;
    for (double s : scales_) v *= s;
    return v;
}

Box::Box(Vec3 c, Vec3 h, int d) : center(c), half_widths(h), dim(d) {
    if (d != 2 && d != 3) throw std::invalid_argument("Box: dimension must be 2 or 3");
    for (int i = 0; i < d; ++i)
        if (!(half_widths[static_cast<std::size_t>(i)] > 0.0))
            throw std::invalid_argument("Box: half_widths must be positive");
}

bool Box::contains(const Vec3& p) const {
    for (int i = 0; i < dim; ++i) {
        auto u = static_cast<std::size_t>(i);
        if (std::abs(p[u] - center[u]) > half_widths[u]) return false;
    }
    return true;
}

double point_count_estimate(const DiagonalLattice& lattice, const Box& box) {
    double est = 1.0;
    for (int i = 0; i < lattice.dim(); ++i) {
        auto u = static_cast<std::size_t>(i);
        est *= 2.0 * box.half_widths[u] / lattice.scale(i) + 1.0;
    }
    return est;
}

std::array<std::array<long long, 2>, 3> index_ranges(const DiagonalLattice& lattice,
                                                     const Box& box) {
    std::array<std::array<long long, 2>, 3> r{{{0, -1}, {0, -1}, {0, -1}}};
    for (int i = 0; i < lattice.dim(); ++i) {
        auto u = static_cast<std::size_t>(i);
        const double s = lattice.scale(i);
        const double lo = (box.center[u] - box.half_widths[u]) / s;
        const double hi = (box.center[u] + box.half_widths[u]) / s;
        // Candidate range widened by one index each way, then filtered by the
        // exact box predicate so boundary rounding cannot drop points.
        long long mlo = static_cast<long long>(std::ceil(lo)) - 1;
        long long mhi = static_cast<long long>(std::floor(hi)) + 1;
        while (mlo <= mhi && std::abs(mlo * s - box.center[u]) > box.half_widths[u]) ++mlo;
        while (mhi >= mlo && std::abs(mhi * s - box.center[u]) > box.half_widths[u]) --mhi;
        r[u] = {mlo, mhi};
    }
    return r;
}

std::vector<Vec3> enumerate_in_box(const DiagonalLattice& lattice, const Box& box,
                                   const EnumerationLimits& limits) {
    if (box.dim != lattice.dim())
        throw std::invalid_argument("enumerate_in_box: dimension mismatch");
    const double est = point_count_estimate(lattice, box);
    if (est > limits.max_points)
        throw std::runtime_error("enumerate_in_box: estimated point count " +
                                 std::to_string(est) + " exceeds cap " +
                                 std::to_string(limits.max_points));

    const int d = lattice.dim();
    const auto r = index_ranges(lattice, box);
    std::vector<Vec3> out;
    auto count_axis = [&](int i) {
        auto u = static_cast<std::size_t>(i);
        return r[u][1] >= r[u][0] ? r[u][1] - r[u][0] + 1 : 0;
    };
    long long total = 1;
    for (int i = 0; i < d; ++i) total *= count_axis(i);
    if (total <= 0) return out;
    out.reserve(static_cast<std::size_t>(total));

    const long long zlo = d == 3 ? r[2][0] : 0;
    const long long zhi = d == 3 ? r[2][1] : 0;
    for (long long m0 = r[0][0]; m0 <= r[0][1]; ++m0)
        for (long long m1 = r[1][0]; m1 <= r[1][1]; ++m1)
            for (long long m2 = zlo; m2 <= zhi; ++m2) {
                Vec3 p{static_cast<double>(m0) * lattice.scale(0),
                       static_cast<double>(m1) * lattice.scale(1),
                       d == 3 ? static_cast<double>(m2) * lattice.scale(2) : 0.0};
                out.push_back(p);
            }
    return out;
}

} // namespace wrest
