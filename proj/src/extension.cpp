#include "wrest/extension.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>

namespace wrest {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
using cd = std::complex<double>;

double j0_series(double z) {
    const double q = 0.25 * z * z;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 400; ++k) {
        term *= -q / (static_cast<double>(k) * static_cast<double>(k));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
    }
    return sum;
}

double j0_asymptotic(double z) {
    // Hankel expansion: J0 = sqrt(2/(pi z)) (P cos w - Q sin w), w = z - pi/4,
    // P = 1 - c2 + c4 - ..., Q = -c1 + c3 - ..., c_k = ((2k-1)!!)^2/(k! (8z)^k).
    // Truncated at the minimal term.
    double P = 1.0, Q = 0.0;
    double ck = 1.0, prev = std::numeric_limits<double>::max();
    for (int k = 1; k < 64; ++k) {
        const double odd = 2.0 * k - 1.0;
        ck *= odd * odd / (8.0 * k * z);
        if (ck >= prev) break;
        prev = ck;
        if (k % 2 == 1) {
            Q += ((k % 4 == 1) ? -1.0 : 1.0) * ck;
        } else {
            P += ((k % 4 == 2) ? -1.0 : 1.0) * ck;
        }
    }
    const double w = z - 0.25 * kPi;
    return std::sqrt(2.0 / (kPi * z)) * (P * std::cos(w) - Q * std::sin(w));
}

struct GaussRule32 {
    std::array<double, 32> x{}, w{};
};

const GaussRule32& gauss32() {
    static const GaussRule32 rule = [] {
        GaussRule32 r;
        const int n = 32;
        for (int i = 0; i < n / 2; ++i) {
            double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int j = 2; j <= n; ++j) {
                    double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            r.x[static_cast<std::size_t>(i)] = -x;
            r.x[static_cast<std::size_t>(n - 1 - i)] = x;
            double wi = 2.0 / ((1.0 - x * x) * dp * dp);
            r.w[static_cast<std::size_t>(i)] = wi;
            r.w[static_cast<std::size_t>(n - 1 - i)] = wi;
        }
        return r;
    }();
    return rule;
}

cd parabola_kernel(const SurfaceKernel& k, double x1, double x2) {
    const double osc = std::abs(x1) + std::abs(x2) + 1.0;
    long long panels = static_cast<long long>(std::ceil(osc / 3.0));
    panels = std::max(panels, static_cast<long long>((k.quadrature_nodes + 31) / 32));
    if (panels * 32 > k.max_nodes)
        throw std::runtime_error("kernel_eval: quadrature node budget exceeded");
    const auto& gr = gauss32();
    double re = 0.0, im = 0.0;
    const double h = 2.0 / static_cast<double>(panels);
    for (long long p = 0; p < panels; ++p) {
        const double mid = -1.0 + h * (static_cast<double>(p) + 0.5);
        const double half = 0.5 * h;
        for (int j = 0; j < 32; ++j) {
            auto u = static_cast<std::size_t>(j);
            const double t = mid + half * gr.x[u];
            const double ph = kTwoPi * (x1 * t + x2 * t * t);
            const double wt = half * gr.w[u] * std::sqrt(1.0 + 4.0 * t * t);
            re += wt * std::cos(ph);
            im += wt * std::sin(ph);
        }
    }
    return {re, im};
}

double norm2d(const Vec3& x, int dim) {
    double s = x[0] * x[0] + x[1] * x[1];
    if (dim == 3) s += x[2] * x[2];
    return std::sqrt(s);
}

// ---- power iteration -------------------------------------------------------

template <class MatVec>
NormEstimate power_iterate(std::size_t n, MatVec&& mv, const GramOptions& opts,
                           NormEstimate::Method method, bool complex_start) {
    NormEstimate est;
    est.method = method;
    est.min_rayleigh = std::numeric_limits<double>::max();

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<cd> v(n), w(n);
    for (auto& z : v) {
        double re = U(rng);
        double im = complex_start ? U(rng) : 0.0;
        z = {re, im};
    }
    double nv = 0.0;
    for (const auto& z : v) nv += std::norm(z);
    nv = std::sqrt(nv);
    for (auto& z : v) z /= nv;

    double lambda = 0.0, lambda_prev = 0.0, res = std::numeric_limits<double>::max();
    int it = 0;
    for (it = 1; it <= opts.max_iter; ++it) {
        mv(v.data(), w.data());
        double ray = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            ray += v[i].real() * w[i].real() + v[i].imag() * w[i].imag();
        lambda = ray;
        est.min_rayleigh = std::min(est.min_rayleigh, lambda);
        double nw = 0.0;
        for (const auto& z : w) nw += std::norm(z);
        nw = std::sqrt(nw);
        if (nw == 0.0) {
            lambda = 0.0;
            est.converged = true;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
        if (it >= 2) {
            res = std::abs(lambda - lambda_prev) / std::max(std::abs(lambda), 1e-300);
            if (res < opts.tol) {
                est.converged = true;
                break;
            }
        }
        lambda_prev = lambda;
    }
    est.iterations = std::min(it, opts.max_iter);
    est.residual = res;
    est.value = std::sqrt(std::max(lambda, 0.0));
    return est;
}

// ---- grid structure --------------------------------------------------------

struct GridInfo {
    int dim = 2;
    std::array<long long, 3> n{1, 1, 1};
    std::array<double, 3> step{1, 1, 1};
    std::array<double, 3> origin{0, 0, 0};
    long long total() const { return n[0] * n[1] * n[2]; }
};

std::optional<GridInfo> detect_grid(std::span<const Vec3> pts, int dim) {
    GridInfo g;
    g.dim = dim;
    for (int ax = 0; ax < dim; ++ax) {
        auto u = static_cast<std::size_t>(ax);
        std::vector<double> vals;
        vals.reserve(pts.size());
        for (const auto& p : pts) vals.push_back(p[u]);
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        g.n[u] = static_cast<long long>(vals.size());
        g.origin[u] = vals.empty() ? 0.0 : vals.front();
        if (vals.size() >= 2) {
            const double st = vals[1] - vals[0];
            for (std::size_t i = 1; i + 1 < vals.size(); ++i)
                if (std::abs(vals[i + 1] - vals[i] - st) > 1e-9 * std::abs(st))
                    return std::nullopt;
            g.step[u] = st;
        }
    }
    if (g.total() != static_cast<long long>(pts.size())) return std::nullopt;
    // Lexicographic full-grid layout check.
    long long idx = 0;
    for (long long i0 = 0; i0 < g.n[0]; ++i0)
        for (long long i1 = 0; i1 < g.n[1]; ++i1)
            for (long long i2 = 0; i2 < g.n[2]; ++i2, ++idx) {
                const Vec3& p = pts[static_cast<std::size_t>(idx)];
                const double e0 = g.origin[0] + static_cast<double>(i0) * g.step[0];
                const double e1 = g.origin[1] + static_cast<double>(i1) * g.step[1];
                const double e2 = dim == 3 ? g.origin[2] + static_cast<double>(i2) * g.step[2] : 0.0;
                const double tol0 = 1e-9 * (std::abs(g.step[0]) + std::abs(e0));
                const double tol1 = 1e-9 * (std::abs(g.step[1]) + std::abs(e1));
                if (std::abs(p[0] - e0) > tol0 || std::abs(p[1] - e1) > tol1) return std::nullopt;
                if (dim == 3 && std::abs(p[2] - e2) > 1e-9 * (std::abs(g.step[2]) + std::abs(e2)))
                    return std::nullopt;
            }
    return g;
}

// Kernel values over the difference grid, dk_i in [-(n_i-1), n_i-1]; entry
// for -dk is the conjugate of the entry for dk, so only the lexicographically
// nonnegative half is evaluated.
std::vector<cd> kernel_table(const SurfaceKernel& k, const GridInfo& g, Exec exec) {
    const std::array<long long, 3> D{2 * g.n[0] - 1, 2 * g.n[1] - 1, 2 * g.n[2] - 1};
    const long long total = D[0] * D[1] * D[2];
    std::vector<cd> T(static_cast<std::size_t>(total));
    auto lex_nonneg = [](long long a, long long b, long long c) {
        if (a != 0) return a > 0;
        if (b != 0) return b > 0;
        return c >= 0;
    };
    auto fill = [&](long long f) {
        long long dk2 = f % D[2];
        long long rest = f / D[2];
        long long dk1 = rest % D[1];
        long long dk0 = rest / D[1];
        dk0 -= g.n[0] - 1;
        dk1 -= g.n[1] - 1;
        dk2 -= g.n[2] - 1;
        if (!lex_nonneg(dk0, dk1, dk2)) return;
        Vec3 x{static_cast<double>(dk0) * g.step[0], static_cast<double>(dk1) * g.step[1],
               g.dim == 3 ? static_cast<double>(dk2) * g.step[2] : 0.0};
        T[static_cast<std::size_t>(f)] = kernel_eval_complex(k, x);
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 64)
        for (long long f = 0; f < total; ++f) fill(f);
    } else {
        for (long long f = 0; f < total; ++f) fill(f);
    }
    // Mirror the other half.
    for (long long f = 0; f < total; ++f) {
        long long dk2 = f % D[2];
        long long rest = f / D[2];
        long long dk1 = rest % D[1];
        long long dk0 = rest / D[1];
        dk0 -= g.n[0] - 1;
        dk1 -= g.n[1] - 1;
        dk2 -= g.n[2] - 1;
        if (lex_nonneg(dk0, dk1, dk2)) continue;
        long long m = (-dk0 + g.n[0] - 1) * D[1] * D[2] + (-dk1 + g.n[1] - 1) * D[2] +
                      (-dk2 + g.n[2] - 1);
        T[static_cast<std::size_t>(f)] = std::conj(T[static_cast<std::size_t>(m)]);
    }
    return T;
}

// Direct convolution over the grid: out[m] = sum_k T[m - k] in[k].
void conv_direct(const GridInfo& g, const std::vector<cd>& T, const cd* in, cd* out, Exec exec) {
    const long long n0 = g.n[0], n1 = g.n[1], n2 = g.n[2];
    const long long D1 = 2 * n1 - 1, D2 = 2 * n2 - 1;
    const long long total = n0 * n1 * n2;
    auto row = [&](long long m) {
        long long m2 = m % n2;
        long long rest = m / n2;
        long long m1 = rest % n1;
        long long m0 = rest / n1;
        cd acc{0.0, 0.0};
        for (long long k0 = 0; k0 < n0; ++k0) {
            const long long off0 = (m0 - k0 + n0 - 1) * D1 * D2;
            for (long long k1 = 0; k1 < n1; ++k1) {
                const long long off1 = off0 + (m1 - k1 + n1 - 1) * D2;
                const cd* Tp = T.data() + off1 + (m2 + n2 - 1);
                const cd* ip = in + (k0 * n1 + k1) * n2;
                for (long long k2 = 0; k2 < n2; ++k2) acc += Tp[-k2] * ip[k2];
            }
        }
        out[m] = acc;
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (long long m = 0; m < total; ++m) row(m);
    } else {
        for (long long m = 0; m < total; ++m) row(m);
    }
}

long long next_pow2(long long v) {
    long long p = 1;
    while (p < v) p <<= 1;
    return p;
}

// FFT-backed circular convolution with zero padding (linear convolution on
// the grid). Plans use FFTW_ESTIMATE; single-threaded FFTW.
class FftConv {
public:
    FftConv(const GridInfo& g, const std::vector<cd>& T) : g_(g) {
        for (int i = 0; i < 3; ++i) {
            auto u = static_cast<std::size_t>(i);
            P_[u] = g.n[u] == 1 ? 1 : next_pow2(2 * g.n[u] - 1);
        }
        total_ = P_[0] * P_[1] * P_[2];
        buf_.assign(static_cast<std::size_t>(total_), cd{0.0, 0.0});
        khat_.assign(static_cast<std::size_t>(total_), cd{0.0, 0.0});

        int rank = g.dim;
        int dims[3];
        int nd = 0;
        for (int i = 0; i < 3; ++i)
            if (P_[static_cast<std::size_t>(i)] > 1 || i < g.dim)
                dims[nd++] = static_cast<int>(P_[static_cast<std::size_t>(i)]);
        rank = nd;
        auto* b = reinterpret_cast<fftw_complex*>(buf_.data());
        fwd_ = fftw_plan_dft(rank, dims, b, b, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft(rank, dims, b, b, FFTW_BACKWARD, FFTW_ESTIMATE);

        // Kernel placed circularly: index (dk mod P).
        const std::array<long long, 3> D{2 * g.n[0] - 1, 2 * g.n[1] - 1, 2 * g.n[2] - 1};
        std::fill(buf_.begin(), buf_.end(), cd{0.0, 0.0});
        for (long long f = 0; f < D[0] * D[1] * D[2]; ++f) {
            long long dk2 = f % D[2];
            long long rest = f / D[2];
            long long dk1 = rest % D[1];
            long long dk0 = rest / D[1];
            dk0 -= g.n[0] - 1;
            dk1 -= g.n[1] - 1;
            dk2 -= g.n[2] - 1;
            long long p0 = ((dk0 % P_[0]) + P_[0]) % P_[0];
            long long p1 = ((dk1 % P_[1]) + P_[1]) % P_[1];
            long long p2 = ((dk2 % P_[2]) + P_[2]) % P_[2];
            buf_[static_cast<std::size_t>((p0 * P_[1] + p1) * P_[2] + p2)] =
                T[static_cast<std::size_t>(f)];
        }
        fftw_execute(fwd_);
        khat_ = buf_;
        const double inv = 1.0 / static_cast<double>(total_);
        for (auto& z : khat_) z *= inv;
    }

    ~FftConv() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    FftConv(const FftConv&) = delete;
    FftConv& operator=(const FftConv&) = delete;

    void apply(const cd* in, cd* out) {
        std::fill(buf_.begin(), buf_.end(), cd{0.0, 0.0});
        for (long long i0 = 0; i0 < g_.n[0]; ++i0)
            for (long long i1 = 0; i1 < g_.n[1]; ++i1)
                for (long long i2 = 0; i2 < g_.n[2]; ++i2)
                    buf_[static_cast<std::size_t>((i0 * P_[1] + i1) * P_[2] + i2)] =
                        in[(i0 * g_.n[1] + i1) * g_.n[2] + i2];
        fftw_execute(fwd_);
        for (std::size_t i = 0; i < buf_.size(); ++i) buf_[i] *= khat_[i];
        fftw_execute(bwd_);
        for (long long i0 = 0; i0 < g_.n[0]; ++i0)
            for (long long i1 = 0; i1 < g_.n[1]; ++i1)
                for (long long i2 = 0; i2 < g_.n[2]; ++i2)
                    out[(i0 * g_.n[1] + i1) * g_.n[2] + i2] =
                        buf_[static_cast<std::size_t>((i0 * P_[1] + i1) * P_[2] + i2)];
    }

private:
    GridInfo g_;
    std::array<long long, 3> P_{1, 1, 1};
    long long total_ = 1;
    std::vector<cd> buf_, khat_;
    fftw_plan fwd_{}, bwd_{};
};

double i0e(double z) {
    // exp(-z) I0(z)
    if (z < 8.0) {
        const double q = 0.25 * z * z;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * static_cast<double>(k));
            sum += term;
            if (term < 1e-18 * sum) break;
        }
        return std::exp(-z) * sum;
    }
    double term = 1.0, sum = 1.0, prev = std::numeric_limits<double>::max();
    for (int k = 1; k < 40; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= odd * odd / (8.0 * k * z);
        if (term >= prev) break;
        prev = term;
        sum += term;
    }
    return sum / std::sqrt(kTwoPi * z);
}

double khat_circle(double R, double rho) {
    const double z = kTwoPi * R * R * rho;
    const double e = -kPi * R * R * (rho - 1.0) * (rho - 1.0);
    return kTwoPi * R * R * std::exp(e) * i0e(z);
}

double khat_sphere(double R, double rho) {
    const double z = kTwoPi * R * R * rho;
    if (z < 1e-6) {
        const double e = -kPi * R * R * (1.0 + rho * rho);
        return 2.0 * kTwoPi * R * R * R * std::exp(e) * (1.0 + z * z / 6.0);
    }
    const double ep = std::exp(-kPi * R * R * (rho - 1.0) * (rho - 1.0));
    const double em = std::exp(-kPi * R * R * (rho + 1.0) * (rho + 1.0));
    return kTwoPi * R * R * R * (ep - em) / (0.5 * z);
}

} // namespace

double bessel_j0(double z) {
    z = std::abs(z);
    return z <= 12.0 ? j0_series(z) : j0_asymptotic(z);
}

std::complex<double> kernel_eval_complex(const SurfaceKernel& k, const Vec3& x) {
    switch (k.surface.kind) {
        case SurfaceSpec::Kind::circle: {
            const double r = norm2d(x, 2);
            return {kTwoPi * bessel_j0(kTwoPi * r), 0.0};
        }
        case SurfaceSpec::Kind::parabola2d:
            return parabola_kernel(k, x[0], x[1]);
        case SurfaceSpec::Kind::sphere3d: {
            const double r = norm2d(x, 3);
            const double z = kTwoPi * r;
            if (z < 1e-8) return {2.0 * kTwoPi * (1.0 - z * z / 6.0), 0.0};
            return {2.0 * std::sin(z) / r, 0.0};
        }
    }
    return {0.0, 0.0};
}

double kernel_eval(const SurfaceKernel& k, const Vec3& x) {
    return kernel_eval_complex(k, x).real();
}

NormEstimate gram_norm(std::span<const Vec3> points, const SurfaceKernel& k,
                       const GramOptions& opts) {
    if (points.empty()) throw std::invalid_argument("gram_norm: empty point set");
    if (points.size() > opts.cap)
        throw std::runtime_error("gram_norm: |X| = " + std::to_string(points.size()) +
                                 " exceeds cap " + std::to_string(opts.cap));
    const int dim = k.surface.dim();
    const bool complex_kernel = k.surface.kind == SurfaceSpec::Kind::parabola2d;

    auto grid = detect_grid(points, dim);
    if (grid && opts.path != GramOptions::Path::direct) {
        auto T = kernel_table(k, *grid, opts.exec);
        const bool use_fft =
            opts.path == GramOptions::Path::fft ||
            (opts.path == GramOptions::Path::automatic && grid->total() >= 4096);
        if (use_fft) {
            FftConv conv(*grid, T);
            auto mv = [&](const cd* in, cd* out) { conv.apply(in, out); };
            return power_iterate(points.size(), mv, opts, NormEstimate::Method::gram_power,
                                 complex_kernel);
        }
        auto mv = [&](const cd* in, cd* out) { conv_direct(*grid, T, in, out, opts.exec); };
        return power_iterate(points.size(), mv, opts, NormEstimate::Method::gram_power,
                             complex_kernel);
    }
    if (grid) {
        auto T = kernel_table(k, *grid, opts.exec);
        auto mv = [&](const cd* in, cd* out) { conv_direct(*grid, T, in, out, opts.exec); };
        return power_iterate(points.size(), mv, opts, NormEstimate::Method::gram_power,
                             complex_kernel);
    }

    // Dense on-the-fly path for unstructured point lists.
    const auto n = points.size();
    auto mv = [&](const cd* in, cd* out) {
        auto rowfn = [&](std::size_t i) {
            cd acc{0.0, 0.0};
            for (std::size_t j = 0; j < n; ++j) {
                Vec3 d{points[i][0] - points[j][0], points[i][1] - points[j][1],
                       points[i][2] - points[j][2]};
                acc += kernel_eval_complex(k, d) * in[j];
            }
            out[i] = acc;
        };
        if (opts.exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
            for (std::size_t i = 0; i < n; ++i) rowfn(i);
        } else {
            for (std::size_t i = 0; i < n; ++i) rowfn(i);
        }
    };
    return power_iterate(n, mv, opts, NormEstimate::Method::gram_power, complex_kernel);
}

NormEstimate svd_discretized_norm(std::span<const Vec3> points, const SurfaceSpec& surface,
                                  int n_nodes, const GramOptions& opts) {
    if (points.empty()) throw std::invalid_argument("svd_discretized_norm: empty point set");
    if (points.size() > opts.cap)
        throw std::runtime_error("svd_discretized_norm: point cap exceeded");
    if (n_nodes < 64) throw std::invalid_argument("svd_discretized_norm: n_nodes >= 64 required");
    if (surface.kind == SurfaceSpec::Kind::sphere3d)
        throw std::invalid_argument("svd_discretized_norm: circle and parabola only");

    std::vector<Vec3> xi;
    std::vector<double> wq;
    if (surface.kind == SurfaceSpec::Kind::circle) {
        xi.resize(static_cast<std::size_t>(n_nodes));
        wq.assign(static_cast<std::size_t>(n_nodes), kTwoPi / n_nodes);
        for (int j = 0; j < n_nodes; ++j) {
            const double th = kTwoPi * j / n_nodes;
            xi[static_cast<std::size_t>(j)] = {std::cos(th), std::sin(th), 0.0};
        }
    } else {
        const auto& gr = gauss32();
        const long long panels = std::max<long long>(2, (n_nodes + 31) / 32);
        const double h = 2.0 / static_cast<double>(panels);
        for (long long p = 0; p < panels; ++p) {
            const double mid = -1.0 + h * (static_cast<double>(p) + 0.5);
            for (int j = 0; j < 32; ++j) {
                auto u = static_cast<std::size_t>(j);
                const double t = mid + 0.5 * h * gr.x[u];
                xi.push_back({t, t * t, 0.0});
                wq.push_back(0.5 * h * gr.w[u] * std::sqrt(1.0 + 4.0 * t * t));
            }
        }
    }
    const std::size_t nn = xi.size();
    const std::size_t np = points.size();

    // Extension matrix A[i][j] = e^{2 pi i x_i . xi_j} sqrt(w_j), cached when
    // it fits; power iteration on A A*.
    const bool cache = np * nn <= std::size_t(4e7);
    std::vector<cd> A;
    if (cache) {
        A.resize(np * nn);
        auto fill = [&](std::size_t i) {
            for (std::size_t j = 0; j < nn; ++j) {
                const double ph = kTwoPi * (points[i][0] * xi[j][0] + points[i][1] * xi[j][1]);
                A[i * nn + j] = cd{std::cos(ph), std::sin(ph)} * std::sqrt(wq[j]);
            }
        };
        if (opts.exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
            for (std::size_t i = 0; i < np; ++i) fill(i);
        } else {
            for (std::size_t i = 0; i < np; ++i) fill(i);
        }
    }

    std::vector<cd> tmp(nn);
    auto mv = [&](const cd* in, cd* out) {
        auto colfn = [&](std::size_t j) {
            cd acc{0.0, 0.0};
            if (cache) {
                for (std::size_t i = 0; i < np; ++i) acc += std::conj(A[i * nn + j]) * in[i];
            } else {
                for (std::size_t i = 0; i < np; ++i) {
                    const double ph = kTwoPi * (points[i][0] * xi[j][0] + points[i][1] * xi[j][1]);
                    acc += cd{std::cos(ph), -std::sin(ph)} * std::sqrt(wq[j]) * in[i];
                }
            }
            tmp[j] = acc;
        };
        auto rowfn = [&](std::size_t i) {
            cd acc{0.0, 0.0};
            if (cache) {
                for (std::size_t j = 0; j < nn; ++j) acc += A[i * nn + j] * tmp[j];
            } else {
                for (std::size_t j = 0; j < nn; ++j) {
                    const double ph = kTwoPi * (points[i][0] * xi[j][0] + points[i][1] * xi[j][1]);
                    acc += cd{std::cos(ph), std::sin(ph)} * std::sqrt(wq[j]) * tmp[j];
                }
            }
            out[i] = acc;
        };
        if (opts.exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
            for (std::size_t j = 0; j < nn; ++j) colfn(j);
#pragma omp parallel for schedule(static)
            for (std::size_t i = 0; i < np; ++i) rowfn(i);
        } else {
            for (std::size_t j = 0; j < nn; ++j) colfn(j);
            for (std::size_t i = 0; i < np; ++i) rowfn(i);
        }
    };
    return power_iterate(np, mv, opts, NormEstimate::Method::svd_discretized, true);
}

double Mollifier::physical(const Vec3& x, int dim) const {
    return std::exp(-kPi * norm2d(x, dim) * norm2d(x, dim));
}

double Mollifier::frequency(const Vec3& u, int dim) const { return physical(u, dim); }

NormEstimate poisson_upper_bound(const DiagonalLattice& lattice, const SurfaceSpec& surface,
                                 double R, long long grid_steps, const PoissonOptions& opts) {
    const int d = lattice.dim();
    if (surface.kind == SurfaceSpec::Kind::parabola2d)
        throw std::invalid_argument("poisson_upper_bound: circle and sphere only");
    if ((surface.kind == SurfaceSpec::Kind::circle && d != 2) ||
        (surface.kind == SurfaceSpec::Kind::sphere3d && d != 3))
        throw std::invalid_argument("poisson_upper_bound: lattice dimension mismatch");
    if (grid_steps < 1) throw std::invalid_argument("poisson_upper_bound: grid_steps >= 1");
    if (!(R > 1.0)) throw std::invalid_argument("poisson_upper_bound: R > 1 required");

    const DiagonalLattice dual = lattice.dual();
    const double band = opts.annulus_width / R;
    const double covol_inv = 1.0 / lattice.covolume();

    const long long nz = d == 3 ? grid_steps : 1;
    const long long total = grid_steps * grid_steps * nz;
    std::vector<double> sums(static_cast<std::size_t>(total), 0.0);

    auto cell = [&](long long c) {
        long long j2 = d == 3 ? c % grid_steps : 0;
        long long rest = d == 3 ? c / grid_steps : c;
        long long j1 = rest % grid_steps;
        long long j0 = rest / grid_steps;
        Vec3 xi0{static_cast<double>(j0) * dual.scale(0) / static_cast<double>(grid_steps),
                 static_cast<double>(j1) * dual.scale(1) / static_cast<double>(grid_steps),
                 d == 3 ? static_cast<double>(j2) * dual.scale(2) / static_cast<double>(grid_steps)
                        : 0.0};
        const double reach = 1.0 + band + 1e-12;
        std::array<long long, 2> rng[3];
        for (int i = 0; i < d; ++i) {
            auto u = static_cast<std::size_t>(i);
            const double s = dual.scale(i);
            rng[u][0] = static_cast<long long>(std::ceil((xi0[u] - reach) / s)) - 1;
            rng[u][1] = static_cast<long long>(std::floor((xi0[u] + reach) / s)) + 1;
        }
        if (d == 2) rng[2][0] = rng[2][1] = 0;
        double s = 0.0;
        for (long long m0 = rng[0][0]; m0 <= rng[0][1]; ++m0)
            for (long long m1 = rng[1][0]; m1 <= rng[1][1]; ++m1)
                for (long long m2 = rng[2][0]; m2 <= rng[2][1]; ++m2) {
                    const double e0 = static_cast<double>(m0) * dual.scale(0) - xi0[0];
                    const double e1 = static_cast<double>(m1) * dual.scale(1) - xi0[1];
                    const double e2 = d == 3 ? static_cast<double>(m2) * dual.scale(2) - xi0[2] : 0.0;
                    const double rho = std::sqrt(e0 * e0 + e1 * e1 + e2 * e2);
                    if (std::abs(rho - 1.0) > band) continue;
                    s += d == 2 ? khat_circle(R, rho) : khat_sphere(R, rho);
                }
        sums[static_cast<std::size_t>(c)] = s;
    };
    if (opts.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (long long c = 0; c < total; ++c) cell(c);
    } else {
        for (long long c = 0; c < total; ++c) cell(c);
    }

    double best = 0.0;
    for (double s : sums) best = std::max(best, s);
    NormEstimate est;
    est.method = NormEstimate::Method::poisson_upper;
    est.value = std::sqrt(std::max(best * covol_inv, 0.0));
    est.iterations = static_cast<int>(total);
    est.residual = 0.0;
    est.converged = true;
    est.min_rayleigh = 0.0;
    return est;
}

} // namespace wrest
