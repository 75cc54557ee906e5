#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace wrest {

// d-vectors are stored in fixed arrays with trailing zeros for d = 2; the
// owning object carries the dimension.
using Vec3 = std::array<double, 3>;
using IVec3 = std::array<long long, 3>;

/// Diagonal lattice {(m_1 s_1, ..., m_d s_d) : m in Z^d}, d in {2, 3}.
/// Immutable after construction.
class DiagonalLattice {
public:
    explicit DiagonalLattice(std::vector<double> scales);

    int dim() const { return static_cast<int>(scales_.size()); }
    double scale(int i) const { return scales_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& scales() const { return scales_; }

    DiagonalLattice dual() const;

    /// Lattice covolume (product of scales).
    double covolume() const;

private:
    std::vector<double> scales_;
};

/// Closed axis-aligned box, center +- half_widths.
struct Box {
    Vec3 center{0, 0, 0};
    Vec3 half_widths{0, 0, 0};
    int dim = 2;

    Box(Vec3 c, Vec3 h, int d);
    bool contains(const Vec3& p) const;
};

/// Expected number of lattice points in the box: prod_i (2 h_i / s_i + 1).
double point_count_estimate(const DiagonalLattice& lattice, const Box& box);

struct EnumerationLimits {
    double max_points = 1e8;
};

/// All lattice points p with |p_i - center_i| <= half_widths_i (closed box),
/// in lexicographic order of the integer coordinates. Throws if the
/// point_count_estimate exceeds the cap.
std::vector<Vec3> enumerate_in_box(const DiagonalLattice& lattice, const Box& box,
                                   const EnumerationLimits& limits = {});

/// Integer index ranges [lo_i, hi_i] per axis for the points of
/// enumerate_in_box; used by grid-structured consumers.
std::array<std::array<long long, 2>, 3> index_ranges(const DiagonalLattice& lattice,
                                                     const Box& box);

} // namespace wrest
