#include "doctest.h"

#include "asgem/error.hpp"
#include "asgem/wigner.hpp"
#include "racah_oracle.hpp"

#include <array>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

using namespace asgem;
using namespace asgem::literals;

namespace {

HalfInt h(int twice) { return HalfInt::from_twice(twice); }

double w3(int j1, int j2, int j3, int m1, int m2, int m3)
{
    return wigner_3j(h(j1), h(j2), h(j3), h(m1), h(m2), h(m3));
}

double w6(int a, int b, int c, int d, int e, int f) { return wigner_6j(h(a), h(b), h(c), h(d), h(e), h(f)); }

// Relative comparison with an absolute floor for values near zero.
bool close(double a, double b, double tol)
{
    return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// Random valid 3j argument set with j up to max_twice / 2.
std::array<int, 6> random_3j(std::mt19937_64& rng, int max_twice)
{
    std::uniform_int_distribution<int> jd(0, max_twice);
    for (;;) {
        const int j1 = jd(rng), j2 = jd(rng), j3 = jd(rng);
        if (!oracle::triangle(j1, j2, j3))
            continue;
        std::uniform_int_distribution<int> m1d(0, j1), m2d(0, j2);
        const int m1 = -j1 + 2 * m1d(rng), m2 = -j2 + 2 * m2d(rng);
        const int m3 = -m1 - m2;
        if (std::abs(m3) > j3)
            continue;
        return {j1, j2, j3, m1, m2, m3};
    }
}

std::array<int, 6> random_6j(std::mt19937_64& rng, int max_twice)
{
    std::uniform_int_distribution<int> jd(0, max_twice);
    for (;;) {
        std::array<int, 6> a{jd(rng), jd(rng), jd(rng), jd(rng), jd(rng), jd(rng)};
        if (oracle::triangle(a[0], a[1], a[2]) && oracle::triangle(a[0], a[4], a[5]) &&
            oracle::triangle(a[3], a[1], a[5]) && oracle::triangle(a[3], a[4], a[2]))
            return a;
    }
}

} // namespace

TEST_CASE("3j closed form with zero third momentum")
{
    CHECK(wigner_3j(1_j, 1_j, 0_j, 0_j, 0_j, 0_j) == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
    for (int j = 0; j <= 20; ++j) {
        for (int m = -j; m <= j; m += 2) {
            const double expected = (((j - m) / 2) % 2 == 0 ? 1.0 : -1.0) / std::sqrt(j + 1.0);
            CHECK(std::abs(w3(j, j, 0, m, -m, 0) - expected) <= 1e-14);
        }
    }
}

TEST_CASE("3j vanishes off the selection rules")
{
    CHECK(wigner_3j(1_j, 1_j, 3_j, 0_j, 0_j, 0_j) == 0.0);
    CHECK(w3(2, 2, 2, 2, 0, 0) == 0.0);
    // odd j1 + j2 + j3 with all m = 0
    CHECK(w3(2, 2, 2, 0, 0, 0) == 0.0);
    CHECK(w3(1, 1, 1, 1, 1, -1) == 0.0);
}

TEST_CASE("3j spin one half example against the oracle")
{
    const double v = wigner_3j(1_half, 1_half, 1_j, 1_half, 1_half, -1_j);
    CHECK(v == doctest::Approx(oracle::three_j(1, 1, 2, 1, 1, -2).value()).epsilon(1e-15));
    CHECK(v == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
}

TEST_CASE("3j rejects invalid projections")
{
    CHECK_THROWS_AS(wigner_3j(1_j, 1_j, 0_j, 2_j, -2_j, 0_j), DomainError);
    CHECK_THROWS_AS(wigner_3j(1_j, 1_j, 0_j, 1_half, -1_half, 0_j), DomainError);
    CHECK_THROWS_AS(wigner_3j(-1_j, 1_j, 0_j, 0_j, 0_j, 0_j), DomainError);
}

TEST_CASE("6j closed form with one zero argument")
{
    for (int a = 0; a <= 8; ++a)
        for (int b = 0; b <= 8; ++b)
            for (int c = std::abs(a - b); c <= a + b; c += 2) {
                const double expected =
                    (((a + b + c) / 2) % 2 == 0 ? 1.0 : -1.0) / std::sqrt((b + 1.0) * (c + 1.0));
                CHECK(std::abs(w6(a, b, c, 0, c, b) - expected) <= 1e-14);
            }
}

TEST_CASE("6j examples")
{
    CHECK(wigner_6j(1_j, 1_j, 1_j, 1_j, 1_j, 1_j) == doctest::Approx(oracle::six_j(2, 2, 2, 2, 2, 2).value()).epsilon(1e-15));
    CHECK(wigner_6j(1_j, 1_j, 1_j, 1_j, 1_j, 1_j) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(wigner_6j(1_j, 1_j, 3_j, 1_j, 1_j, 1_j) == 0.0);
    CHECK(wigner_6j(1_half, 1_half, 1_j, 3_half, 3_half, 2_j) ==
          doctest::Approx(oracle::six_j(1, 1, 2, 3, 3, 4).value()).epsilon(1e-15));
    CHECK_THROWS_AS(wigner_6j(-1_j, 1_j, 1_j, 1_j, 1_j, 1_j), DomainError);
}

TEST_CASE("3j orthogonality for all triads with j up to 4")
{
    double worst = 0.0;
    int triads = 0;
    for (int j1 = 0; j1 <= 8; ++j1)
        for (int j2 = 0; j2 <= 8; ++j2)
            for (int j3 = std::abs(j1 - j2); j3 <= std::min(8, j1 + j2); j3 += 2) {
                ++triads;
                for (int m3 = -j3; m3 <= j3; m3 += 2) {
                    double sum = 0.0;
                    for (int m1 = -j1; m1 <= j1; m1 += 2) {
                        const int m2 = -m1 - m3;
                        if (std::abs(m2) > j2)
                            continue;
                        const double v = w3(j1, j2, j3, m1, m2, m3);
                        sum += (j3 + 1) * v * v;
                    }
                    worst = std::max(worst, std::abs(sum - 1.0));
                }
                // different j3 at the same m3 are orthogonal
                for (int k3 = j3 + 2; k3 <= std::min(8, j1 + j2); k3 += 2) {
                    for (int m3 = -j3; m3 <= j3; m3 += 2) {
                        double sum = 0.0;
                        for (int m1 = -j1; m1 <= j1; m1 += 2) {
                            const int m2 = -m1 - m3;
                            if (std::abs(m2) > j2)
                                continue;
                            sum += w3(j1, j2, j3, m1, m2, m3) * w3(j1, j2, k3, m1, m2, m3);
                        }
                        worst = std::max(worst, std::abs(sum));
                    }
                }
            }
    CHECK(triads > 100);
    CHECK(worst <= 1e-12);
}

TEST_CASE("3j random arguments match the oracle and obey symmetries")
{
    std::mt19937_64 rng(20240611);
    for (int n = 0; n < 10000; ++n) {
        const auto [j1, j2, j3, m1, m2, m3] = random_3j(rng, 16);
        const double v = w3(j1, j2, j3, m1, m2, m3);
        CAPTURE(j1);
        CAPTURE(j2);
        CAPTURE(j3);
        CAPTURE(m1);
        CAPTURE(m2);
        REQUIRE(std::isfinite(v));
        REQUIRE(std::abs(v) <= 1.0);
        REQUIRE(close(v, oracle::three_j(j1, j2, j3, m1, m2, m3).value(), 1e-13));

        const double odd = ((j1 + j2 + j3) / 2) % 2 == 0 ? 1.0 : -1.0;
        REQUIRE(w3(j2, j3, j1, m2, m3, m1) == v);
        REQUIRE(w3(j3, j1, j2, m3, m1, m2) == v);
        REQUIRE(w3(j2, j1, j3, m2, m1, m3) == odd * v);
        REQUIRE(w3(j1, j3, j2, m1, m3, m2) == odd * v);
        REQUIRE(w3(j1, j2, j3, -m1, -m2, -m3) == odd * v);
    }
}

TEST_CASE("6j random arguments match the oracle and obey symmetries")
{
    std::mt19937_64 rng(77);
    for (int n = 0; n < 10000; ++n) {
        const auto [a, b, c, d, e, f] = random_6j(rng, 14);
        const double v = w6(a, b, c, d, e, f);
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(c);
        CAPTURE(d);
        CAPTURE(e);
        CAPTURE(f);
        REQUIRE(std::isfinite(v));
        REQUIRE(std::abs(v) <= 1.0);
        REQUIRE(close(v, oracle::six_j(a, b, c, d, e, f).value(), 1e-13));
        // column permutations
        REQUIRE(w6(b, a, c, e, d, f) == v);
        REQUIRE(w6(c, b, a, f, e, d) == v);
        REQUIRE(w6(b, c, a, e, f, d) == v);
        // upper and lower entries exchanged in two columns
        REQUIRE(w6(d, e, c, a, b, f) == v);
        REQUIRE(w6(a, e, f, d, b, c) == v);
        REQUIRE(w6(d, b, f, a, e, c) == v);
    }
}

TEST_CASE("6j equals its expansion in 3j symbols")
{
    // {j1 j2 j3; j4 j5 j6} = sum over m of (-1)^(sum_k j_k - m_k)
    //   (j1 j2 j3; -m1 -m2 -m3) (j1 j5 j6; m1 -m5 m6) (j4 j2 j6; m4 m2 -m6) (j4 j5 j3; -m4 m5 m3)
    std::mt19937_64 rng(5);
    for (int n = 0; n < 60; ++n) {
        const auto [a, b, c, d, e, f] = random_6j(rng, 6);
        double sum = 0.0;
        for (int m1 = -a; m1 <= a; m1 += 2)
            for (int m2 = -b; m2 <= b; m2 += 2)
                for (int m5 = -e; m5 <= e; m5 += 2) {
                    const int m3 = -m1 - m2;
                    const int m6 = m5 - m1;
                    const int m4 = m6 - m2;
                    if (std::abs(m3) > c || std::abs(m6) > f || std::abs(m4) > d)
                        continue;
                    const int S = (a - m1) + (b - m2) + (c - m3) + (d - m4) + (e - m5) + (f - m6);
                    const double sign = (S / 2) % 2 == 0 ? 1.0 : -1.0;
                    sum += sign * w3(a, b, c, -m1, -m2, -m3) * w3(a, e, f, m1, -m5, m6) * w3(d, b, f, m4, m2, -m6) *
                           w3(d, e, c, -m4, m5, m3);
                }
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(c);
        CAPTURE(d);
        CAPTURE(e);
        CAPTURE(f);
        CHECK(close(sum, w6(a, b, c, d, e, f), 1e-12));
    }
}

TEST_CASE("large arguments stay finite")
{
    const double v = w3(100, 120, 60, 10, -30, 20);
    CHECK(std::isfinite(v));
    CHECK(close(v, oracle::three_j(100, 120, 60, 10, -30, 20).value(), 1e-12));
}

TEST_CASE("concurrent callers see the serial values")
{
    std::mt19937_64 rng(99);
    std::vector<std::array<int, 6>> args;
    for (int n = 0; n < 400; ++n)
        args.push_back(random_3j(rng, 12));

    clear_wigner_cache();
    std::vector<double> serial;
    for (const auto& a : args)
        serial.push_back(w3(a[0], a[1], a[2], a[3], a[4], a[5]));
    CHECK(wigner_cache_size() > 0);

    clear_wigner_cache();
    std::vector<std::vector<double>> results(4);
    {
        std::vector<std::jthread> workers;
        for (int t = 0; t < 4; ++t)
            workers.emplace_back([&, t] {
                for (const auto& a : args)
                    results[t].push_back(w3(a[0], a[1], a[2], a[3], a[4], a[5]));
            });
    }
    for (const auto& r : results)
        CHECK(r == serial);
}
