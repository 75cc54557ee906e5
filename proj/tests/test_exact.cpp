#include "wrest/exact.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <random>

using namespace wrest;

namespace {

ExactMatrix identity(std::size_t n) {
    ExactMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

std::vector<std::vector<long long>> circle25_veronese_rows() {
    // The 12 integer points of x^2 + y^2 = 25 as (1, x, y, x^2, y^2, xy).
    std::vector<std::array<long long, 2>> pts{{5, 0},  {-5, 0}, {0, 5},  {0, -5},
                                              {3, 4},  {3, -4}, {-3, 4}, {-3, -4},
                                              {4, 3},  {4, -3}, {-4, 3}, {-4, -3}};
    std::vector<std::vector<long long>> rows;
    for (auto [x, y] : pts) rows.push_back({1, x, y, x * x, y * y, x * y});
    return rows;
}

std::vector<std::vector<BigRational>> to_rational(const ExactMatrix& m) {
    std::vector<std::vector<BigRational>> out(m.rows(), std::vector<BigRational>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m.at(i, j);
    return out;
}

} // namespace

TEST_SUITE("exact") {

TEST_CASE("rank basics") {
    CHECK(rank(identity(6)) == 6);
    CHECK(rank(ExactMatrix(4, 5)) == 0);
}

TEST_CASE("rank of the circle Veronese matrix is 5") {
    auto rows = circle25_veronese_rows();
    auto m = ExactMatrix::from_integer_rows(rows);
    CHECK(rank(m) == 5);
    // Appending a point off the circle restores full rank.
    rows.push_back({1, 1, 1, 1, 1, 1});
    CHECK(rank(ExactMatrix::from_integer_rows(rows)) == 6);
}

TEST_CASE("nullspace basics") {
    CHECK(nullspace(identity(4)).empty());
    auto m = ExactMatrix::from_integer_rows({{1, 1}});
    auto ns = nullspace(m);
    REQUIRE(ns.size() == 1);
    CHECK(ns[0][0] == 1);
    CHECK(ns[0][1] == -1);
}

TEST_CASE("nullspace of the circle Veronese matrix is the circle") {
    auto ns = nullspace(ExactMatrix::from_integer_rows(circle25_veronese_rows()));
    REQUIRE(ns.size() == 1);
    // Primitive, positive leading entry: proportional to (-25, 0, 0, 1, 1, 0).
    std::vector<long long> expect{25, 0, 0, -1, -1, 0};
    for (std::size_t i = 0; i < 6; ++i) CHECK(ns[0][i] == BigInt(static_cast<long>(expect[i])));
}

TEST_CASE("determinant basics") {
    CHECK(determinant(identity(3)) == 1);
    auto m = ExactMatrix::from_integer_rows({{1, 2}, {3, 4}});
    CHECK(determinant(m) == -2);
    // Six points on one conic: Veronese rows are rank-deficient.
    auto rows = circle25_veronese_rows();
    rows.resize(6);
    CHECK(determinant(ExactMatrix::from_integer_rows(rows)) == 0);
}

TEST_CASE("determinant with rational entries") {
    ExactMatrix m(2, 2);
    m.at(0, 0) = make_rational(1, 2);
    m.at(0, 1) = make_rational(1, 3);
    m.at(1, 0) = make_rational(1, 5);
    m.at(1, 1) = make_rational(1, 7);
    CHECK(determinant(m) == make_rational(1, 14) - make_rational(1, 15));
}

TEST_CASE("rational_round examples") {
    CHECK(rational_round(make_rational(1, 2), BigInt(10)) == make_rational(1, 2));
    auto pi_approx = rational_round(rational_from_double(3.14159265358979323846), BigInt(113));
    CHECK(pi_approx == make_rational(355, 113));
    auto third = rational_round(parse_rational("0.333333"), BigInt(3));
    CHECK(third == make_rational(1, 3));
}

TEST_CASE("rational_round is within 1/H componentwise") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-20.0, 20.0);
    for (int t = 0; t < 200; ++t) {
        const double x = U(rng);
        const long long H = 1 + static_cast<long long>(rng() % 1000);
        BigRational r = rational_round(rational_from_double(x), BigInt(static_cast<long>(H)));
        CHECK(r.get_den() <= BigInt(static_cast<long>(H)));
        BigRational err = abs(rational_from_double(x) - r);
        CHECK(err <= make_rational(1, H));
    }
}

TEST_CASE("determinant flips sign under row swaps") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 2 + rng() % 4;
        std::vector<std::vector<long long>> rows(n, std::vector<long long>(n));
        for (auto& r : rows)
            for (auto& v : r) v = static_cast<long long>(rng() % 19) - 9;
        auto det = determinant(ExactMatrix::from_integer_rows(rows));
        std::size_t i = rng() % n, j = rng() % n;
        std::swap(rows[i], rows[j]);
        auto det2 = determinant(ExactMatrix::from_integer_rows(rows));
        if (i == j)
            CHECK(det2 == det);
        else
            CHECK(det2 == -det);
    }
}

TEST_CASE("rank matches naive elimination and rank-nullity holds") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 100; ++t) {
        const std::size_t rows = 1 + rng() % 7, cols = 1 + rng() % 7;
        std::vector<std::vector<long long>> a(rows, std::vector<long long>(cols));
        for (auto& r : a)
            for (auto& v : r) v = static_cast<long long>(rng() % 7) - 3;
        auto m = ExactMatrix::from_integer_rows(a);
        const std::size_t rk = rank(m);
        CHECK(rk == oracles::naive_rank(to_rational(m)));
        // nullspace() asserts M*v = 0 and rank-nullity internally.
        auto ns = nullspace(m);
        CHECK(rk + ns.size() == cols);
    }
}

TEST_CASE("parse_rational handles fractions and decimals") {
    CHECK(parse_rational("-3/6") == make_rational(-1, 2));
    CHECK(parse_rational("2.5e-1") == make_rational(1, 4));
    CHECK(parse_rational("100") == make_rational(100, 1));
    CHECK(rational_to_string(make_rational(-7, 3)) == "-7/3");
    CHECK(rational_to_string(make_rational(4, 2)) == "2");
    CHECK_THROWS(parse_rational("abc"));
}

TEST_CASE("height") {
    CHECK(height(make_rational(-355, 113)) == 355);
    CHECK(height(make_rational(1, 1000)) == 1000);
}

} // TEST_SUITE
