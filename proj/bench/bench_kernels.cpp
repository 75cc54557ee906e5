// Timings of the parallel kernels against their serial references, plus the
// FFT convolution path of the Gram mat-vec.

#include "wrest/counting.hpp"
#include "wrest/extension.hpp"
#include "wrest/finite_field.hpp"
#include "wrest/incidence.hpp"
#include "wrest/lattice.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

using namespace wrest;

namespace {

double time_it(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, double serial_s, double parallel_s) {
    std::printf("%-34s %10.3fs %10.3fs %8.2fx\n", name, serial_s, parallel_s,
                serial_s / parallel_s);
}

} // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-34s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

    {
        DiagonalLattice l({1.31, 0.83});
        auto X = enumerate_in_box(l, Box({0, 0, 0}, {40, 40, 1}, 2));
        SurfaceKernel k{SurfaceSpec{SurfaceSpec::Kind::circle}};
        GramOptions o;
        o.tol = 0.0; // run exactly max_iter mat-vecs
        o.max_iter = 12;
        o.cap = 100000;
        GramOptions os = o, op = o, of = o;
        os.path = GramOptions::Path::direct;
        os.exec = Exec::serial;
        op.path = GramOptions::Path::direct;
        op.exec = Exec::parallel;
        of.path = GramOptions::Path::fft;
        const double ts = time_it([&] { gram_norm(X, k, os); });
        const double tp = time_it([&] { gram_norm(X, k, op); });
        const double tf = time_it([&] { gram_norm(X, k, of); });
        row("gram mat-vec (direct), |X|~6k", ts, tp);
        std::printf("%-34s %10.3fs (vs direct serial %.2fx)\n", "gram mat-vec (fft)", tf, ts / tf);
    }

    {
        DiagonalLattice z({1, 1});
        NeighborhoodSpec<double> spec(2, {6, 6, 1}, {0, 0, 0}, {0.02, 0.02, 0.5});
        const double ts =
            time_it([&] { max_count_over_translations(z, spec, 128, Exec::serial); });
        const double tp =
            time_it([&] { max_count_over_translations(z, spec, 128, Exec::parallel); });
        row("translation grid scan, 128^2", ts, tp);
    }

    {
        PrimeField f(211);
        FieldOptions s;
        s.exec = Exec::serial;
        FieldOptions p;
        p.exec = Exec::parallel;
        const double ts = time_it([&] { circle_bound_check(f, s); });
        const double tp = time_it([&] { circle_bound_check(f, p); });
        row("finite-field coefficient scan", ts, tp);
    }

    {
        auto gamma = DiscreteCurve::parabola_trunc(48);
        std::vector<std::array<long long, 2>> E;
        for (long long x = -24; x < 24; ++x)
            for (long long y = -1152; y < 1152; ++y) E.push_back({x, y});
        const double ts = time_it([&] { convolve_indicator(gamma, E, Exec::serial); });
        const double tp = time_it([&] { convolve_indicator(gamma, E, Exec::parallel); });
        row("incidence convolution", ts, tp);
    }

    return 0;
}
