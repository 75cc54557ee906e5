#include "wrest/lattice.hpp"

#include "doctest.h"

#include <cmath>
#include <random>
#include <set>

using namespace wrest;

TEST_SUITE("lattice") {

TEST_CASE("dual examples") {
    DiagonalLattice l({2, 4});
    auto d = l.dual();
    CHECK(d.scale(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(d.scale(1) == doctest::Approx(0.25).epsilon(1e-15));

    DiagonalLattice z({1, 1});
    CHECK(z.dual().scale(0) == 1.0);
    CHECK(z.dual().scale(1) == 1.0);

    const double R = 100.0, beta = 1.0 / 28.0;
    DiagonalLattice a({std::pow(R, beta), std::pow(R, 2 * beta)});
    CHECK(a.dual().scale(0) == doctest::Approx(std::pow(R, -beta)).epsilon(1e-15));
    CHECK(a.dual().scale(1) == doctest::Approx(std::pow(R, -2 * beta)).epsilon(1e-15));
}

TEST_CASE("dual of dual is the identity to 1e-15") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.01, 100.0);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> s{U(rng), U(rng)};
        if (t % 2) s.push_back(U(rng));
        DiagonalLattice l(s);
        auto dd = l.dual().dual();
        for (int i = 0; i < l.dim(); ++i)
            CHECK(std::abs(dd.scale(i) - l.scale(i)) <= 1e-15 * l.scale(i));
    }
}

TEST_CASE("constructor rejects bad scales") {
    CHECK_THROWS(DiagonalLattice({1.0}));
    CHECK_THROWS(DiagonalLattice({1.0, 0.0}));
    CHECK_THROWS(DiagonalLattice({1.0, -2.0}));
    CHECK_THROWS(DiagonalLattice({1.0, std::numeric_limits<double>::infinity()}));
}

TEST_CASE("enumerate_in_box examples") {
    DiagonalLattice z({1, 1});
    auto pts = enumerate_in_box(z, Box({0, 0, 0}, {1, 1, 1}, 2));
    CHECK(pts.size() == 9);

    DiagonalLattice l24({2, 4});
    auto pts2 = enumerate_in_box(l24, Box({0, 0, 0}, {3, 3, 1}, 2));
    REQUIRE(pts2.size() == 3);
    CHECK(pts2[0][0] == -2);
    CHECK(pts2[0][1] == 0);
    CHECK(pts2[1][0] == 0);
    CHECK(pts2[2][0] == 2);
}

TEST_CASE("anisotropic weight-set count matches the brute-force integer loop") {
    const double R = 16.0, beta = 0.25;
    const double s1 = std::pow(R, beta), s2 = std::pow(R, 2 * beta);
    DiagonalLattice l({s1, s2});
    auto pts = enumerate_in_box(l, Box({0, 0, 0}, {R, R, 1}, 2));
    long long brute = 0;
    for (long long m1 = -100; m1 <= 100; ++m1)
        for (long long m2 = -100; m2 <= 100; ++m2)
            if (std::abs(m1 * s1) <= R && std::abs(m2 * s2) <= R) ++brute;
    CHECK(static_cast<long long>(pts.size()) == brute);
    CHECK(pts.size() == 17 * 9);
}

TEST_CASE("point_count_estimate examples") {
    DiagonalLattice z({1, 1});
    CHECK(point_count_estimate(z, Box({0, 0, 0}, {1, 1, 1}, 2)) == doctest::Approx(9.0));
    DiagonalLattice l({2, 4});
    CHECK(point_count_estimate(l, Box({0, 0, 0}, {3, 3, 1}, 2)) == doctest::Approx(10.0));
    DiagonalLattice z3({1, 1, 1});
    CHECK(point_count_estimate(z3, Box({0, 0, 0}, {2, 2, 2}, 3)) == doctest::Approx(125.0));
}

TEST_CASE("enumeration cap") {
    DiagonalLattice z({1e-6, 1e-6});
    CHECK_THROWS(enumerate_in_box(z, Box({0, 0, 0}, {100, 100, 1}, 2)));
    EnumerationLimits lim;
    lim.max_points = 1e3;
    CHECK_THROWS(enumerate_in_box(DiagonalLattice({1, 1}), Box({0, 0, 0}, {50, 50, 1}, 2), lim));
}

TEST_CASE("enumeration: dedup, membership, order, closed-form count") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> S(0.3, 3.0), C(-5.0, 5.0), H(0.5, 8.0);
    for (int t = 0; t < 60; ++t) {
        const int d = t % 2 ? 3 : 2;
        std::vector<double> sc{S(rng), S(rng)};
        if (d == 3) sc.push_back(S(rng));
        DiagonalLattice l(sc);
        Box box({C(rng), C(rng), d == 3 ? C(rng) : 0}, {H(rng), H(rng), d == 3 ? H(rng) : 1}, d);
        auto pts = enumerate_in_box(l, box);
        std::set<std::array<double, 3>> uniq(pts.begin(), pts.end());
        CHECK(uniq.size() == pts.size());
        for (const auto& p : pts) CHECK(box.contains(p));
        for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i - 1] < pts[i]);
    }
    // Integer lattice + integer boxes: count equals the per-axis product.
    for (int t = 0; t < 20; ++t) {
        DiagonalLattice z({1, 1});
        const double h1 = 1 + static_cast<double>(rng() % 8), h2 = 1 + static_cast<double>(rng() % 8);
        auto pts = enumerate_in_box(z, Box({0, 0, 0}, {h1, h2, 1}, 2));
        CHECK(pts.size() == (2 * static_cast<std::size_t>(h1) + 1) * (2 * static_cast<std::size_t>(h2) + 1));
    }
}

} // TEST_SUITE
