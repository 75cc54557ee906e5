#pragma once

#include "wrest/conics.hpp"
#include "wrest/lattice.hpp"
#include "wrest/parallel.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace wrest {

/// Bessel J0: power series for |z| <= 12, Hankel asymptotic expansion with
/// adaptive truncation beyond; absolute error <= 1e-10 over [0, ~1e4].
double bessel_j0(double z);

/// Evaluator for the inverse Fourier transform of the surface measure,
/// (d sigma)ˇ(x). The parabola kernel integrates the arc-length-weighted
/// oscillatory integrand with composite 32-point Gauss-Legendre panels
/// (at least 10 nodes per oscillation); circle and sphere kernels are
/// closed-form (Bessel / sinc).
struct SurfaceKernel {
    SurfaceSpec surface;
    /// Minimum total node count for the parabola quadrature.
    int quadrature_nodes = 64;
    /// Hard budget on quadrature nodes per evaluation.
    long long max_nodes = 1 << 18;
};

/// Real part of the kernel. The parabola kernel has a genuinely complex
/// value off the x2 = 0 axis; use kernel_eval_complex for the full value.
double kernel_eval(const SurfaceKernel& k, const Vec3& x);

/// Full kernel value; imaginary part is zero for circle and sphere and
/// serves as a diagnostic for the parabola (vanishes when x2 = 0).
std::complex<double> kernel_eval_complex(const SurfaceKernel& k, const Vec3& x);

struct NormEstimate {
    enum class Method { gram_power, svd_discretized, poisson_upper };
    double value = 0.0;
    int iterations = 0;
    double residual = 0.0; // last relative Rayleigh-quotient change
    Method method = Method::gram_power;
    bool converged = false;
    double min_rayleigh = 0.0; // PSD proxy: should stay >= -1e-6 * K(0) * |X|
};

struct GramOptions {
    double tol = 1e-7;
    int max_iter = 500;
    std::size_t cap = 30000;
    std::uint64_t seed = 0x5eedULL;
    Exec exec = Exec::parallel;
    enum class Path { automatic, direct, fft } path = Path::automatic;
};

/// M = ||E_S||: square root of the largest eigenvalue of the Hermitian
/// TT* kernel matrix [K(x_i - x_j)], by matrix-free power iteration. When X
/// is a full lattice grid (the usual case) the mat-vec is a convolution over
/// the difference grid with a precomputed kernel table, run either directly
/// (serial or OpenMP) or via FFT; otherwise a dense on-the-fly path is used.
NormEstimate gram_norm(std::span<const Vec3> points, const SurfaceKernel& k,
                       const GramOptions& opts = {});

/// Independent discretization route: largest singular value of the
/// |X| x n_nodes extension matrix A, A_ij = e^{2 pi i x_i . xi_j} sqrt(w_j),
/// by power iteration on A A*. Supports circle (uniform nodes) and parabola
/// (Gauss-Legendre nodes, arc-length weight).
NormEstimate svd_discretized_norm(std::span<const Vec3> points, const SurfaceSpec& surface,
                                  int n_nodes, const GramOptions& opts = {});

struct PoissonOptions {
    /// Annulus truncation: dual points within width/R of the unit surface.
    double annulus_width = 20.0;
    Exec exec = Exec::parallel;
};

/// Dual-lattice route: sup over offsets xi0 of
///   covol(L)^{-1} * sum_{xi in L*} Khat(xi - xi0),
/// where Khat is the surface measure mollified by the Gaussian pair
/// psi(x) = psi_hat(x) = exp(-pi |x|^2) at scale R. Returns the square root
/// of the sup. Circle (d=2) and sphere (d=3) only.
NormEstimate poisson_upper_bound(const DiagonalLattice& lattice, const SurfaceSpec& surface,
                                 double R, long long grid_steps,
                                 const PoissonOptions& opts = {});

/// Gaussian mollifier pair used by the Poisson route; nonnegative on both
/// sides by construction.
struct Mollifier {
    double scale = 1.0; // R
    double physical(const Vec3& x, int dim) const;
    double frequency(const Vec3& u, int dim) const;
};

} // namespace wrest
