#pragma once

#include "wrest/parallel.hpp"

#include <array>
#include <complex>
#include <vector>

namespace wrest {

/// F_p for an odd prime p, with the additive character table
/// chi(t) = exp(2 pi i t / p).
class PrimeField {
public:
    explicit PrimeField(long long p);

    long long p() const { return p_; }
    /// chi(t) for any integer t (reduced mod p).
    std::complex<double> chi(long long t) const {
        long long r = t % p_;
        if (r < 0) r += p_;
        return table_[static_cast<std::size_t>(r)];
    }

private:
    long long p_;
    std::vector<std::complex<double>> table_;
};

struct FieldVariety {
    enum class Kind { circle, parabola };
    Kind kind = Kind::circle;
    std::vector<std::array<long long, 2>> points;
};

/// Point sets {x1^2 + x2^2 = 1} and {x2 = x1^2} over F_p^2.
FieldVariety make_variety(const PrimeField& f, FieldVariety::Kind kind);

/// p^{-2} sum_{x in V} chi(-x . m), direct summation over the point list.
std::complex<double> fourier_coeff(const PrimeField& f, const FieldVariety& v,
                                   std::array<long long, 2> m);

struct FieldOptions {
    long long p_cap = 2003;
    Exec exec = Exec::parallel;
};

struct CircleBoundReport {
    /// max over m != 0 of |Shat(m)| p^{3/2}
    double max_normalized = 0.0;
    /// 100 uniform bins over [0, 2] of the normalized coefficients
    std::vector<long long> histogram;
    /// m with normalized coefficient above 2 (tolerance p * 1e-14): must be empty
    std::vector<std::array<long long, 2>> violations;
};

/// Exhaustive scan of the circle's Fourier coefficients against the
/// square-root cancellation bound |Shat(m)| <= 2 p^{-3/2}.
CircleBoundReport circle_bound_check(const PrimeField& f, const FieldOptions& opts = {});

struct CensusReport {
    double exponent = 1.51;
    double threshold = 0.0; // p^{-exponent}
    long long total_m = 0;  // p^2 - 1
    long long count = 0;
    double fraction = 0.0;
    std::vector<std::array<long long, 2>> small_m;
    bool truncated = false; // small_m capped at a listing limit
};

/// Exact census of m != 0 with |Shat(m)| < p^{-exponent} for the circle.
CensusReport small_coefficient_census(const PrimeField& f, double exponent = 1.51,
                                      const FieldOptions& opts = {});

} // namespace wrest
