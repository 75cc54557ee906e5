#pragma once

#include "wrest/conics.hpp"
#include "wrest/exact.hpp"
#include "wrest/lattice.hpp"

#include <optional>
#include <span>
#include <vector>

namespace wrest {

/// Monomial vector of an integer point in the fixed quadric order.
struct VeroneseVector {
    int dim = 2;
    IVec3 source{0, 0, 0};
    std::vector<BigInt> entries;
};

VeroneseVector veronese(const IVec3& p, int dim = 2);

/// True iff the Veronese matrix of the 2-d points has rank <= 5, i.e. all
/// 6x6 minors vanish; computed as an exact rank, not by minor enumeration.
bool all_determinants_vanish(std::span<const IVec3> points);

struct DetectOptions {
    /// Denominator bound H for rational rounding of the nullspace
    /// coordinates; 0 starts at 2^16 and is raised geometrically until the
    /// rounded vector is within tau/10 of the exact least-squares optimum.
    BigInt height_bound = 0;
    int max_height_rounds = 8;
};

struct DetectionCertificate {
    enum class Status { common_quadric, full_rank, insufficient_points };
    Status status = Status::insufficient_points;
    std::optional<Quadric<BigRational>> quadric; // primitive integer entries
    int rank = 0;
    int nullspace_dim = 0;
    BigInt max_height{0};
    /// Whether the quadratic part, rescaled to the target's leading
    /// coefficient, is within tau of the target's quadratic part.
    bool target_match = false;
};

/// Certifies that all points lie on one common quadric with exact rational
/// coefficients, chosen nearest the target among the Veronese nullspace.
/// The returned quadric satisfies eval_quadric(q, p) = 0 exactly for every
/// input point whenever status == common_quadric.
DetectionCertificate detect_common_quadric(std::span<const IVec3> points,
                                           const Quadric<BigRational>& target, double tau,
                                           const DetectOptions& opts = {});

DetectionCertificate detect_common_quadric_3d(std::span<const IVec3> points,
                                              const Quadric<BigRational>& target, double tau,
                                              const DetectOptions& opts = {});

/// Rigorous upper bound on any 6x6 Veronese determinant of six points inside
/// the theta-thinned neighborhood of a translated ellipse with semi-axes
/// (r, r^2), |translation components| <= 1. Rows split into an on-ellipse
/// part with entry bounds (1, 2r, 2r^2, 2r^2, 2r^4, 2r^3) and an error part
/// with bounds (0, t1, t2, 10*t2, 10*t2*r^2, 10*t2*r) where
/// t1 = theta*r^{-(1-beta)/beta}, t2 = theta*r^{-(1-2beta)/beta}; the budget
/// sums every determinant expansion term containing at least one error entry.
/// Detection is certified whenever the budget is < 1.
double determinant_error_budget(double r, double beta, double theta);

} // namespace wrest
