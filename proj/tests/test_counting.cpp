#include "wrest/counting.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <random>
#include <set>

using namespace wrest;

namespace {

NeighborhoodSpec<double> spec2(double a1, double a2, double t1, double t2, double th1, double th2) {
    return NeighborhoodSpec<double>(2, {a1, a2, 1}, {t1, t2, 0}, {th1, th2, 0.5});
}

} // namespace

TEST_SUITE("counting") {

TEST_CASE("radius-5 circle on the integer lattice") {
    DiagonalLattice z({1, 1});
    auto res = count_in_neighborhood(z, spec2(5, 5, 0, 0, 1e-6, 1e-6));
    CHECK(res.count == 12);
    std::set<std::pair<long long, long long>> got;
    for (const auto& w : res.witnesses)
        got.emplace(std::llround(w[0]), std::llround(w[1]));
    std::set<std::pair<long long, long long>> expect{{5, 0},  {-5, 0}, {0, 5},  {0, -5},
                                                     {3, 4},  {3, -4}, {-3, 4}, {-3, -4},
                                                     {4, 3},  {4, -3}, {-4, 3}, {-4, -3}};
    CHECK(got == expect);

    auto shifted = count_in_neighborhood(z, spec2(5, 5, 0.5, 0.5, 1e-6, 1e-6));
    CHECK(shifted.count == 0);
}

TEST_CASE("thick neighborhoods degenerate to the box-annulus region") {
    DiagonalLattice z({1, 1});
    auto s = spec2(4, 4, 0, 0, 3.2, 3.2);
    auto res = count_in_neighborhood(z, s);
    auto brute = oracles::brute_force_count(z, s);
    CHECK(res.count == brute.count);
    CHECK(res.witnesses == brute.witnesses);
}

TEST_CASE("column scan agrees with the brute-force oracle") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> A(0.6, 9.0), T(-1.5, 1.5), S(0.2, 2.0);
    for (int t = 0; t < 200; ++t) {
        double a1 = A(rng), a2 = A(rng);
        double th1 = std::min(0.8 * a1, std::pow(10.0, -1.0 - static_cast<double>(rng() % 5)));
        double th2 = std::min(0.8 * a2, std::pow(10.0, -1.0 - static_cast<double>(rng() % 5)));
        auto s = spec2(a1, a2, T(rng), T(rng), th1, th2);
        DiagonalLattice l({S(rng), S(rng)});
        auto fast = count_in_neighborhood(l, s);
        auto brute = oracles::brute_force_count(l, s);
        CHECK(fast.count == brute.count);
        CHECK(fast.witnesses == brute.witnesses);
    }
}

TEST_CASE("3-d column scan agrees with brute force") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> A(0.8, 5.0), T(-1.0, 1.0);
    for (int t = 0; t < 30; ++t) {
        NeighborhoodSpec<double> s(3, {A(rng), A(rng), A(rng)}, {T(rng), T(rng), T(rng)},
                                   {0.05, 0.05, 0.05});
        DiagonalLattice l({1, 1, 1});
        auto fast = count_in_neighborhood(l, s);
        auto brute = oracles::brute_force_count(l, s);
        CHECK(fast.count == brute.count);
        CHECK(fast.witnesses == brute.witnesses);
    }
}

TEST_CASE("translation invariance under lattice shifts") {
    DiagonalLattice z({1, 1});
    std::mt19937_64 rng(47);
    for (int t = 0; t < 40; ++t) {
        double t1 = static_cast<double>(rng() % 16) / 16.0;
        double t2 = static_cast<double>(rng() % 16) / 16.0;
        auto a = count_in_neighborhood(z, spec2(4, 7, t1, t2, 1e-3, 1e-3));
        auto b = count_in_neighborhood(z, spec2(4, 7, t1 + 3, t2 - 2, 1e-3, 1e-3));
        CHECK(a.count == b.count);
    }
}

TEST_CASE("monotonicity in thickness") {
    DiagonalLattice z({1, 1});
    std::mt19937_64 rng(53);
    for (int t = 0; t < 40; ++t) {
        double t1 = static_cast<double>(rng() % 32) / 32.0;
        double t2 = static_cast<double>(rng() % 32) / 32.0;
        double th = 1e-4 * std::pow(10.0, static_cast<double>(rng() % 4));
        auto small = count_in_neighborhood(z, spec2(6, 3, t1, t2, th, th));
        auto big = count_in_neighborhood(z, spec2(6, 3, t1, t2, 4 * th, 4 * th));
        CHECK(big.count >= small.count);
    }
}

TEST_CASE("exact integer counting matches the on-curve count") {
    // 25 x^2 + y^2 = 625 has the 12 points (x, 5k) with x^2 + k^2 = 25.
    NeighborhoodSpec<BigRational> s(2, {BigRational(5), BigRational(25), BigRational(1)},
                                    {BigRational(0), BigRational(0), BigRational(0)},
                                    {make_rational(1, 100000), make_rational(1, 100000),
                                     make_rational(1, 2)});
    auto nb = count_in_neighborhood(s);
    CHECK(nb.count == 12);
    auto qi = to_primitive_integer(s.quadric());
    auto oc = count_on_quadric(qi, IntBox{{-7, -27, 0}, {7, 27, 0}, 2});
    CHECK(oc.count == 12);
}

TEST_CASE("max_count_over_translations finds the integer-circle points") {
    DiagonalLattice z({1, 1});
    auto best = max_count_over_translations(z, spec2(5, 5, 0, 0, 1e-2, 1e-2), 256);
    CHECK(best.count >= 12);
}

TEST_CASE("max_count_over_translations matches per-cell oracle on a fixed grid") {
    DiagonalLattice z({1, 1});
    auto base = spec2(2.5, 2.5, 0, 0, 2e-2, 2e-2);
    const long long g = 128;
    auto best = max_count_over_translations(z, base, g);
    long long oracle_best = 0;
    for (long long i = 0; i < g; ++i)
        for (long long j = 0; j < g; ++j) {
            auto s = base;
            s.translation[0] += static_cast<double>(i) / static_cast<double>(g);
            s.translation[1] += static_cast<double>(j) / static_cast<double>(g);
            oracle_best = std::max(oracle_best, oracles::brute_force_count(z, s).count);
        }
    CHECK(best.count == oracle_best);
}

TEST_CASE("pitch rule") {
    DiagonalLattice z({1, 1});
    CHECK_THROWS(max_count_over_translations(z, spec2(5, 5, 0, 0, 1e-4, 1e-4), 64));
    CHECK_THROWS(max_count_over_translations(z, spec2(5, 5, 0, 0, 1e-2, 1e-2), 0));
}

TEST_CASE("serial and parallel translation scans agree") {
    DiagonalLattice z({1, 1});
    auto base = spec2(3, 4, 0, 0, 5e-2, 5e-2);
    auto a = max_count_over_translations(z, base, 64, Exec::serial);
    auto b = max_count_over_translations(z, base, 64, Exec::parallel);
    CHECK(a.count == b.count);
    CHECK(a.translation == b.translation);
}

TEST_CASE("count_on_quadric examples") {
    Quadric<BigInt> c25(2, {BigInt(-25), BigInt(0), BigInt(0), BigInt(1), BigInt(1), BigInt(0)});
    CHECK(count_on_quadric(c25, IntBox{{-10, -10, 0}, {10, 10, 0}, 2}).count == 12);

    Quadric<BigInt> c3(2, {BigInt(-3), BigInt(0), BigInt(0), BigInt(1), BigInt(1), BigInt(0)});
    CHECK(count_on_quadric(c3, IntBox{{-50, -50, 0}, {50, 50, 0}, 2}).count == 0);

    // 25 x^2 + y^2 = 625, box [-30, 30]^2; brute force is the oracle.
    Quadric<BigInt> ell(2, {BigInt(-625), BigInt(0), BigInt(0), BigInt(25), BigInt(1), BigInt(0)});
    IntBox box{{-30, -30, 0}, {30, 30, 0}, 2};
    const long long brute = oracles::brute_force_on_quadric(ell, box);
    CHECK(brute == 12);
    CHECK(count_on_quadric(ell, box).count == brute);
}

TEST_CASE("count_on_quadric is invariant under integer scaling") {
    std::mt19937_64 rng(59);
    for (int t = 0; t < 30; ++t) {
        long long c0 = static_cast<long long>(rng() % 41) - 20;
        Quadric<BigInt> q(2, {BigInt(static_cast<long>(c0)), BigInt(static_cast<long>(rng() % 5) - 2),
                              BigInt(static_cast<long>(rng() % 5) - 2), BigInt(1), BigInt(2),
                              BigInt(static_cast<long>(rng() % 3) - 1)});
        IntBox box{{-12, -12, 0}, {12, 12, 0}, 2};
        auto base = count_on_quadric(q, box);
        Quadric<BigInt> q3 = q;
        for (auto& c : q3.c) c *= 3;
        CHECK(count_on_quadric(q3, box).count == base.count);
        CHECK(count_on_quadric(q3, box).points == base.points);
    }
}

TEST_CASE("count_on_quadric rejects degenerate quadratic parts") {
    Quadric<BigInt> line_pairish(2, {BigInt(0), BigInt(0), BigInt(0), BigInt(1), BigInt(0), BigInt(0)});
    CHECK_THROWS(count_on_quadric(line_pairish, IntBox{{-5, -5, 0}, {5, 5, 0}, 2}));
}

TEST_CASE("count_on_quadric in three dimensions") {
    // Sphere x^2 + y^2 + z^2 = 25: 30 integer points.
    Quadric<BigInt> s(3, {BigInt(-25), BigInt(0), BigInt(0), BigInt(0), BigInt(1), BigInt(0),
                          BigInt(0), BigInt(1), BigInt(0), BigInt(1)});
    auto res = count_on_quadric(s, IntBox{{-6, -6, -6}, {6, 6, 6}, 3});
    CHECK(res.count == 30);
}

TEST_CASE("heathbrown_scan small radii") {
    std::vector<long long> rs{1, 2, 5};
    auto rows = heathbrown_scan(2.0, rs, 1e-3, 4);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].r == 1);
    CHECK(rows[0].max_count >= 4); // unit circle has 4 integer points
    CHECK(rows[2].r == 5);
    CHECK(rows[2].max_count >= 12); // translation 0 already gives 12
    for (const auto& row : rows) CHECK(row.max_count <= 16.0 * std::pow(row.r, 0.3));

    std::vector<long long> bad{5, 2};
    CHECK_THROWS(heathbrown_scan(2.0, bad, 1e-3, 4));
}

} // TEST_SUITE
