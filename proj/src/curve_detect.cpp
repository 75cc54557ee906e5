#include "wrest/curve_detect.hpp"

#include <cmath>
#include <stdexcept>

namespace wrest {

VeroneseVector veronese(const IVec3& p, int dim) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("veronese: dimension must be 2 or 3");
    VeroneseVector v;
    v.dim = dim;
    v.source = p;
    std::array<BigInt, 3> q{BigInt(static_cast<long>(p[0])), BigInt(static_cast<long>(p[1])),
                            BigInt(static_cast<long>(p[2]))};
    v.entries = quadric_monomials<BigInt>(dim, q);
    return v;
}

namespace {

ExactMatrix veronese_matrix(std::span<const IVec3> points, int dim) {
    const auto K = static_cast<std::size_t>(quadric_coeff_count(dim));
    ExactMatrix m(points.size(), K);
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto v = veronese(points[i], dim);
        for (std::size_t j = 0; j < K; ++j) m.at(i, j) = BigRational(v.entries[j]);
    }
    return m;
}

// Gauss-Jordan solve A x = b over the rationals; free variables set to zero.
// Returns nothing if the system is inconsistent.
std::optional<std::vector<BigRational>> solve_linear(std::vector<std::vector<BigRational>> a,
                                                     std::vector<BigRational> b) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    std::vector<std::size_t> pivot_col_of_row;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t piv = row;
        while (piv < rows && a[piv][col] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[row]);
        std::swap(b[piv], b[row]);
        BigRational inv = a[row][col];
        for (std::size_t j = col; j < cols; ++j) a[row][j] /= inv;
        b[row] /= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == row || a[i][col] == 0) continue;
            BigRational f = a[i][col];
            for (std::size_t j = col; j < cols; ++j) a[i][j] -= f * a[row][j];
            b[i] -= f * b[row];
        }
        pivot_col_of_row.push_back(col);
        ++row;
    }
    for (std::size_t i = row; i < rows; ++i)
        if (b[i] != 0) return std::nullopt;
    std::vector<BigRational> x(cols, BigRational(0));
    for (std::size_t r = 0; r < pivot_col_of_row.size(); ++r) x[pivot_col_of_row[r]] = b[r];
    return x;
}

std::vector<BigRational> combine(const std::vector<std::vector<BigInt>>& basis,
                                 const std::vector<BigRational>& alpha, std::size_t K) {
    std::vector<BigRational> q(K, BigRational(0));
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i < K; ++i) q[i] += alpha[j] * BigRational(basis[j][i]);
    return q;
}

bool quad_part_nonzero(const std::vector<BigRational>& q, int dim) {
    for (int i : Quadric<BigRational>::quadratic_indices(dim))
        if (q[static_cast<std::size_t>(i)] != 0) return true;
    return false;
}

DetectionCertificate detect_impl(std::span<const IVec3> points,
                                 const Quadric<BigRational>& target, double tau,
                                 const DetectOptions& opts, int dim) {
    if (points.empty()) throw std::invalid_argument("detect_common_quadric: empty point list");
    if (target.dim != dim) throw std::invalid_argument("detect_common_quadric: target dimension");
    const auto K = static_cast<std::size_t>(quadric_coeff_count(dim));
    const std::size_t xi = dim == 2 ? 3 : 4; // x^2 coefficient index
    const auto quad_idx = Quadric<BigRational>::quadratic_indices(dim);

    ExactMatrix V = veronese_matrix(points, dim);
    const std::size_t k = rank(V);
    DetectionCertificate cert;
    cert.rank = static_cast<int>(k);
    if (k == K) {
        cert.status = DetectionCertificate::Status::full_rank;
        return cert;
    }

    auto basis = nullspace(V);
    cert.nullspace_dim = static_cast<int>(basis.size());
    const std::size_t m = basis.size();

    // Constrained least squares over the nullspace: minimize the distance of
    // the quadratic-part coefficients to the target's, subject to matching
    // the target's x^2 coefficient (the scale normalization of the proof).
    std::vector<std::vector<BigRational>> G(quad_idx.size(), std::vector<BigRational>(m));
    std::vector<BigRational> g(quad_idx.size());
    for (std::size_t qi = 0; qi < quad_idx.size(); ++qi) {
        auto qrow = static_cast<std::size_t>(quad_idx[qi]);
        for (std::size_t j = 0; j < m; ++j) G[qi][j] = BigRational(basis[j][qrow]);
        g[qi] = target.c[qrow];
    }
    std::vector<BigRational> cvec(m);
    bool constraint_feasible = false;
    for (std::size_t j = 0; j < m; ++j) {
        cvec[j] = BigRational(basis[j][xi]);
        if (cvec[j] != 0) constraint_feasible = true;
    }

    std::vector<BigRational> alpha;
    {
        // Normal equations 2G^T G alpha + lambda c = 2G^T g, c^T alpha = t_xi
        // (KKT); drop the constraint row when infeasible.
        const std::size_t n = constraint_feasible ? m + 1 : m;
        std::vector<std::vector<BigRational>> A(n, std::vector<BigRational>(n, BigRational(0)));
        std::vector<BigRational> b(n, BigRational(0));
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                BigRational s(0);
                for (std::size_t qi = 0; qi < quad_idx.size(); ++qi) s += G[qi][i] * G[qi][j];
                A[i][j] = BigRational(2) * s;
            }
            BigRational s(0);
            for (std::size_t qi = 0; qi < quad_idx.size(); ++qi) s += G[qi][i] * g[qi];
            b[i] = BigRational(2) * s;
        }
        if (constraint_feasible) {
            for (std::size_t j = 0; j < m; ++j) {
                A[j][m] = cvec[j];
                A[m][j] = cvec[j];
            }
            b[m] = target.c[xi];
        }
        auto sol = solve_linear(std::move(A), std::move(b));
        if (!sol) throw std::logic_error("detect_common_quadric: KKT system inconsistent");
        alpha.assign(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(m));
    }

    std::vector<BigRational> q_exact = combine(basis, alpha, K);
    bool exact_usable = quad_part_nonzero(q_exact, dim);
    if (!exact_usable) {
        // Degenerate target geometry; fall back to any nullspace vector with
        // a nonzero quadratic part (one always exists for nonzero nullspaces
        // of point sets: a linear annihilator L yields the quadratic x*L).
        for (std::size_t j = 0; j < m && !exact_usable; ++j) {
            std::vector<BigRational> cand(K);
            for (std::size_t i = 0; i < K; ++i) cand[i] = BigRational(basis[j][i]);
            if (quad_part_nonzero(cand, dim)) {
                q_exact = std::move(cand);
                exact_usable = true;
            }
        }
        if (!exact_usable) {
            for (std::size_t j = 0; j + 1 < m && !exact_usable; ++j) {
                std::vector<BigRational> cand(K);
                for (std::size_t i = 0; i < K; ++i)
                    cand[i] = BigRational(basis[j][i]) + BigRational(basis[j + 1][i]);
                if (quad_part_nonzero(cand, dim)) {
                    q_exact = std::move(cand);
                    exact_usable = true;
                }
            }
        }
        if (!exact_usable)
            throw std::logic_error("detect_common_quadric: no quadratic annihilator in nullspace");
    }

    // Height reduction: round the nullspace coordinates at denominator bound
    // H, raising H until the rounded vector is within tau/10 of the exact
    // optimum; keep the exact vector if rounding never gets close enough.
    const BigRational tau_q = rational_from_double(tau);
    const BigRational tau10 = tau_q / BigRational(10);
    std::vector<BigRational> q_sel = q_exact;
    {
        BigInt H = opts.height_bound > 0 ? opts.height_bound : (BigInt(1) << 16);
        for (int round = 0; round < opts.max_height_rounds; ++round) {
            std::vector<BigRational> ah(m);
            for (std::size_t j = 0; j < m; ++j) ah[j] = rational_round(alpha[j], H);
            auto qh = combine(basis, ah, K);
            BigRational err2(0);
            for (std::size_t i = 0; i < K; ++i) {
                BigRational d = qh[i] - q_exact[i];
                err2 += d * d;
            }
            if (err2 <= tau10 * tau10 && quad_part_nonzero(qh, dim)) {
                q_sel = std::move(qh);
                break;
            }
            H *= 4096;
        }
    }

    // Proximity to the target after rescaling to the target's x^2 coefficient.
    auto proximity_ok = [&](const std::vector<BigRational>& q) {
        if (q[xi] == 0 || target.c[xi] == 0) return false;
        BigRational scale = target.c[xi] / q[xi];
        BigRational dist2(0);
        for (int qi : quad_idx) {
            auto u = static_cast<std::size_t>(qi);
            BigRational d = q[u] * scale - target.c[u];
            dist2 += d * d;
        }
        return dist2 <= tau_q * tau_q;
    };
    if (proximity_ok(q_sel)) {
        cert.target_match = true;
    } else {
        cert.target_match = false;
        q_sel = q_exact; // unrounded least-squares optimum
    }

    Quadric<BigInt> prim = to_primitive_integer(Quadric<BigRational>(dim, q_sel));
    std::vector<BigRational> norm(K);
    for (std::size_t i = 0; i < K; ++i) {
        norm[i] = BigRational(prim.c[i]);
        BigInt a = abs(prim.c[i]);
        if (a > cert.max_height) cert.max_height = a;
    }
    cert.quadric = Quadric<BigRational>(dim, std::move(norm));
    cert.status = DetectionCertificate::Status::common_quadric;

    // Exact membership re-verification, every call.
    for (const auto& p : points) {
        std::array<BigRational, 3> pq{BigRational(static_cast<long>(p[0])),
                                      BigRational(static_cast<long>(p[1])),
                                      BigRational(static_cast<long>(p[2]))};
        if (eval_quadric(*cert.quadric, pq) != 0)
            throw std::logic_error("detect_common_quadric: re-verification failed");
    }
    return cert;
}

} // namespace

bool all_determinants_vanish(std::span<const IVec3> points) {
    if (points.size() < 6) return true;
    return rank(veronese_matrix(points, 2)) <= 5;
}

DetectionCertificate detect_common_quadric(std::span<const IVec3> points,
                                           const Quadric<BigRational>& target, double tau,
                                           const DetectOptions& opts) {
    return detect_impl(points, target, tau, opts, 2);
}

DetectionCertificate detect_common_quadric_3d(std::span<const IVec3> points,
                                              const Quadric<BigRational>& target, double tau,
                                              const DetectOptions& opts) {
    return detect_impl(points, target, tau, opts, 3);
}

double determinant_error_budget(double r, double beta, double theta) {
    if (!(r >= 2.0)) throw std::invalid_argument("determinant_error_budget: r >= 2 required");
    if (!(beta > 0.0 && beta <= 0.5))
        throw std::invalid_argument("determinant_error_budget: beta in (0, 1/2] required");
    if (!(theta >= 0.0 && theta < 1.0))
        throw std::invalid_argument("determinant_error_budget: theta in [0, 1) required");
    if (theta == 0.0) return 0.0;

    const double e1 = (1.0 - beta) / beta;
    const double e2 = (1.0 - 2.0 * beta) / beta;
    const double t1 = theta * std::pow(r, -e1);
    const double t2 = theta * std::pow(r, -e2);
    const double m[6] = {1.0, 2.0 * r, 2.0 * r * r, 2.0 * r * r, 2.0 * std::pow(r, 4.0),
                         2.0 * std::pow(r, 3.0)};
    const double n[6] = {0.0, t1, t2, 10.0 * t2, 10.0 * t2 * r * r, 10.0 * t2 * r};

    // Multilinear expansion of det(mu_j + nu_j): sum over the nonempty
    // subsets of rows taking the error part, each term bounded by the
    // permanent of the per-entry bounds, i.e. 6! * prod of mixed columns.
    // Summing subset products directly avoids the catastrophic cancellation
    // of 6!*(prod(m+n) - prod(m)).
    double budget = 0.0;
    for (unsigned mask = 1; mask < 64; ++mask) {
        double term = 1.0;
        for (int i = 0; i < 6; ++i) term *= (mask >> i) & 1u ? n[i] : m[i];
        budget += term;
    }
    return 720.0 * budget;
}

} // namespace wrest
