#include "doctest.h"

#include <random>

#include "ellchar/padic.hpp"

using namespace ellchar;

namespace {

PadicNumber randomNonzero(std::mt19937_64& rng, long p, int N, int vmin = -3, int vmax = 3) {
    std::uniform_int_distribution<long> vd(vmin, vmax);
    std::uniform_int_distribution<unsigned long long> ud(1, ppow(p, N) - 1);
    unsigned long long u = ud(rng);
    while (u % (unsigned long long)p == 0) u = ud(rng);
    return PadicNumber::fromUnit(p, N, vd(rng), u);
}

} // namespace

TEST_CASE("prime config invariants") {
    CHECK_NOTHROW(PrimeConfig(3, 12, 2));
    CHECK_NOTHROW(PrimeConfig(7, 12, 3));
    CHECK_THROWS_AS(PrimeConfig(2, 12, 2), ConfigError);
    CHECK_THROWS_AS(PrimeConfig(9, 12, 2), ConfigError);
    CHECK_THROWS_AS(PrimeConfig(5, 12, 3), ConfigError);  // needs p > 2*ell
    CHECK_THROWS_AS(PrimeConfig(3, 4, 2), ConfigError);   // precision >= 8
    CHECK_NOTHROW(PrimeConfig(5, 12, 3, false));          // relaxed bound
}

TEST_CASE("p-adic multiplication and addition") {
    long p = 5;
    int N = 12;
    PadicNumber a = PadicNumber::fromUnit(p, N, 0, 2);
    PadicNumber b = PadicNumber::fromUnit(p, N, 1, 3);
    PadicNumber c = a * b;
    CHECK(c.valuation() == 1);
    CHECK(c.unit() == 6);

    PadicNumber x = PadicNumber::fromUnit(p, N, -2, 17);
    CHECK((x + (-x)).isZero());
}

TEST_CASE("division round trips (geometric series check)") {
    long p = 3;
    int N = 12;
    PadicNumber one = PadicNumber::fromInteger(p, N, 1);
    PadicNumber x = PadicNumber::fromInteger(p, N, 4); // 1 + 3
    PadicNumber inv = one / x;
    CHECK(inv * x == one);
    // digits of 1 - 3 + 9 - 27 + ... : unit congruent to the alternating sum
    long long acc = 0, pk = 1;
    for (int i = 0; i < N; ++i) { acc += (i % 2 == 0 ? pk : -pk); pk *= p; }
    PadicNumber series = PadicNumber::fromInteger(p, N, acc);
    CHECK(inv == series);

    std::mt19937_64 rng(42);
    for (int it = 0; it < 100; ++it) {
        PadicNumber u = randomNonzero(rng, 7, N), v = randomNonzero(rng, 7, N);
        CHECK((u * v) / v == u);
    }
}

TEST_CASE("square detection matches residue classes") {
    int N = 10;
    CHECK(isSquare(PadicNumber::fromInteger(3, N, 9)));            // 9 * 1
    CHECK(isSquare(PadicNumber::fromUnit(3, N, 2, 4)));            // 9 * (1 mod 3)
    CHECK_FALSE(isSquare(PadicNumber::fromInteger(3, N, 3)));      // odd valuation
    // squares mod 7 are {1, 2, 4}
    CHECK_FALSE(isSquare(PadicNumber::fromInteger(7, N, 3)));
    CHECK(isSquare(PadicNumber::fromInteger(7, N, 2)));
    CHECK(isSquare(PadicNumber::fromInteger(7, N, 4)));
}

TEST_CASE("four square classes for odd p") {
    std::mt19937_64 rng(5);
    for (long p : {3L, 5L, 7L}) {
        int N = 10;
        long ns = 2;
        while (legendre(ns, p) != -1) ++ns;
        PadicNumber u = PadicNumber::fromInteger(p, N, ns);
        for (int it = 0; it < 50; ++it) {
            PadicNumber x = randomNonzero(rng, p, N);
            CHECK(isSquare(x * x));
            CHECK_FALSE(isSquare(x * x * u));
        }
    }
}

TEST_CASE("hensel square roots with deterministic tie-break") {
    int N = 10;
    PadicNumber y = sqrtHensel(PadicNumber::fromInteger(5, N, 4));
    CHECK(y.residue() == 2);
    CHECK(y * y == PadicNumber::fromInteger(5, N, 4));

    CHECK(sqrtHensel(PadicNumber::fromInteger(5, N, 1)) == PadicNumber::fromInteger(5, N, 1));

    PadicNumber z = sqrtHensel(PadicNumber::fromInteger(7, N, 2));
    CHECK(z.residue() == 3); // 3^2 = 2 mod 7, 3 <= (7-1)/2
    CHECK(z * z == PadicNumber::fromInteger(7, N, 2));

    std::mt19937_64 rng(8);
    for (long p : {3L, 5L, 7L}) {
        for (int it = 0; it < 200; ++it) {
            PadicNumber x = randomNonzero(rng, p, N);
            PadicNumber sq = x * x;
            PadicNumber r = sqrtHensel(sq);
            CHECK(r * r == sq);
            CHECK(r.residue() <= (p - 1) / 2);
        }
    }
}

TEST_CASE("teichmuller representatives") {
    int N = 10;
    CHECK(teichmuller(5, N, 1) == PadicNumber::fromInteger(5, N, 1));

    PadicNumber t = teichmuller(5, N, 2);
    CHECK(t.residue() == 2);
    CHECK(t.pow(4) == PadicNumber::fromInteger(5, N, 1));

    for (long p : {3L, 5L, 7L}) {
        CHECK(teichmuller(p, N, p - 1) == PadicNumber::fromInteger(p, N, -1));
        for (long r = 1; r < p; ++r)
            CHECK(teichmuller(p, N, r).pow(p - 1) == PadicNumber::fromInteger(p, N, 1));
    }
}

TEST_CASE("cancellation tracks effective precision") {
    long p = 3;
    int N = 8;
    PadicNumber one = PadicNumber::fromInteger(p, N, 1);
    PadicNumber x = PadicNumber::fromUnit(p, N, 7, 2);
    PadicNumber d = (one + x) - one;
    CHECK(d.valuation() == 7);
    CHECK(d.unit() == 2);
    CHECK(d.digits() == 1); // seven digits cancelled
    CHECK_THROWS_AS(d.withDigits(0), PrecisionError);
    // full cancellation is an exact zero, not an error
    CHECK(((one + x) - (one + x)).isZero());
}
