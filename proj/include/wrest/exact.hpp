#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace wrest {

using BigInt = mpz_class;
using BigRational = mpq_class;

/// Canonical rational from a num/den pair (den > 0, gcd 1 after this call).
BigRational make_rational(long long num, long long den);

/// Exact conversion: every finite double is a dyadic rational.
BigRational rational_from_double(double x);

/// max(|numerator|, denominator) of a canonical rational.
BigInt height(const BigRational& x);

/// Parses "num/den" or a plain integer/decimal string into an exact rational.
BigRational parse_rational(const std::string& s);

std::string rational_to_string(const BigRational& x);

// Dense matrix of exact rationals, row-major. Immutable by convention after
// construction; the elimination routines work on internal copies.
class ExactMatrix {
public:
    ExactMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    static ExactMatrix from_rows(const std::vector<std::vector<BigRational>>& rows);
    static ExactMatrix from_integer_rows(const std::vector<std::vector<long long>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    BigRational& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const BigRational& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

private:
    std::size_t rows_, cols_;
    std::vector<BigRational> a_;
};

/// Exact rank via fraction-free (Bareiss) elimination with partial pivoting
/// by magnitude. Row denominators are cleared first; this never changes rank.
std::size_t rank(const ExactMatrix& m);

/// Exact determinant of a square matrix (Bareiss on the cleared-denominator
/// integer matrix, divided back by the row clearing factors).
BigRational determinant(const ExactMatrix& m);

/// Basis of the right nullspace, each vector scaled to a primitive integer
/// vector with positive leading entry. Verifies M*v = 0 exactly per vector
/// and rank-nullity against rank() before returning.
std::vector<std::vector<BigInt>> nullspace(const ExactMatrix& m);

/// Best rational approximation of x with denominator <= den_bound, via
/// continued-fraction convergents and the final semiconvergent. Ties prefer
/// the smaller denominator.
BigRational rational_round(const BigRational& x, const BigInt& den_bound);

/// Componentwise rational rounding of a real vector (exact dyadic reading of
/// each double first).
std::vector<BigRational> rational_round(std::span<const double> xs, long long den_bound);

} // namespace wrest
