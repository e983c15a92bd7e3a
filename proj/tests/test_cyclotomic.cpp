#include "doctest.h"

#include <random>

#include "ellchar/cyclotomic.hpp"

using namespace ellchar;

namespace {

CycInt randomCyc(std::mt19937_64& rng, long m, int nterms) {
    CycInt x;
    std::uniform_int_distribution<long long> expd(0, m - 1), cd(-4, 4);
    for (int i = 0; i < nterms; ++i)
        x += CycInt(cd(rng)) * CycInt::rootOfUnity(m, expd(rng));
    return x;
}

} // namespace

TEST_CASE("roots of unity reduce to canonical conductors") {
    CHECK(CycInt::rootOfUnity(2, 1) == CycInt(-1));
    CHECK(CycInt::rootOfUnity(1, 0) == CycInt(1));
    CHECK(CycInt::rootOfUnity(8, 2) == CycInt::rootOfUnity(4, 1));
    CHECK(CycInt::rootOfUnity(8, 2).conductor() == 4);
    CHECK(CycInt::rootOfUnity(6, 1).conductor() == 3); // -zeta_3^2
    CHECK(CycInt::rootOfUnity(6, 1) == -CycInt::rootOfUnity(3, 2));
}

TEST_CASE("basic cyclotomic arithmetic") {
    // i + (-i) = 0
    CHECK((CycInt::rootOfUnity(4, 1) + CycInt::rootOfUnity(4, 3)).isZero());
    // exponent addition
    CHECK(CycInt::rootOfUnity(8, 1) * CycInt::rootOfUnity(8, 1) == CycInt::rootOfUnity(4, 1));
    // reduction mod Phi_3: zeta_3 + zeta_3^2 = -1
    CHECK(CycInt::rootOfUnity(3, 1) + CycInt::rootOfUnity(3, 2) == CycInt(-1));
}

TEST_CASE("ring axioms on random samples at conductors <= 360") {
    std::mt19937_64 rng(20240811);
    for (long m : {4L, 9L, 12L, 45L, 360L}) {
        for (int it = 0; it < 20; ++it) {
            CycInt a = randomCyc(rng, m, 3), b = randomCyc(rng, m, 3), c = randomCyc(rng, m, 2);
            CHECK((a + b) + c == a + (b + c));
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a * b == b * a);
        }
    }
}

TEST_CASE("conjugation is an involutive ring homomorphism") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 30; ++it) {
        CycInt a = randomCyc(rng, 40, 3), b = randomCyc(rng, 40, 3);
        CHECK(a.conj().conj() == a);
        CHECK((a + b).conj() == a.conj() + b.conj());
        CHECK((a * b).conj() == a.conj() * b.conj());
    }
}

TEST_CASE("root orders are exact") {
    for (long m : {3L, 4L, 5L, 8L, 9L, 12L}) {
        for (long long k = 0; k < m; ++k) {
            CycInt z = CycInt::rootOfUnity(m, k);
            long ord = z.rootOrder();
            CHECK(z.pow(ord) == CycInt(1));
            for (long j = 1; j < ord; ++j) CHECK(z.pow(j) != CycInt(1));
        }
    }
}

TEST_CASE("power basis round trip is the identity") {
    std::mt19937_64 rng(99);
    for (long m : {5L, 8L, 12L, 36L}) {
        for (int it = 0; it < 10; ++it) {
            CycInt a = randomCyc(rng, m, 3);
            CycInt back = CycInt::fromPowerBasis(a.conductor(), a.powerBasis());
            CHECK(back == a);
        }
    }
}

TEST_CASE("cyclotomic builder agrees with term-by-term sums") {
    CycBuilder b(27);
    CycInt s;
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long long> expd(0, 26);
    for (int i = 0; i < 50; ++i) {
        long long e = expd(rng);
        b.add(e, 2);
        s += CycInt(2) * CycInt::rootOfUnity(27, e);
    }
    CHECK(b.take() == s);
}

TEST_CASE("exact values multiply and canonicalize") {
    // (q^{1/2} zeta_8) (q^{1/2} zeta_8^{-1}) = q
    ExactValue a(3, 1, CycInt::rootOfUnity(8, 1));
    ExactValue b(3, 1, CycInt::rootOfUnity(8, 7));
    CHECK(a * b == ExactValue::qPower(3, 2));
    // zero absorbs
    CHECK((ExactValue::zero(3) * a).isZero());
    // divide-out-q normalization: q^{-1/2} * 3 at q = 3 is q^{3/2}... with cyc 1
    ExactValue c(3, -1, CycInt(3));
    CHECK(c == ExactValue::qPower(3, 1));
    CHECK(c.halfExp() == 1);
    CHECK(c.cyc() == CycInt(1));
}

TEST_CASE("exact value addition requires matching half exponents") {
    ExactValue a(5, 2, CycInt(1)), b(5, 2, CycInt(2)), c(5, 1, CycInt(1));
    CHECK(add(a, b) == ExactValue(5, 2, CycInt(3)));
    CHECK(add(a, ExactValue::zero(5)) == a);
    CHECK_THROWS_AS(add(a, c), DomainError);
}

TEST_CASE("canonicalization is idempotent") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 20; ++it) {
        CycInt x = randomCyc(rng, 24, 4);
        ExactValue v(5, 0, CycInt(25) * x);
        ExactValue w(5, v.halfExp(), v.cyc());
        CHECK(v == w);
    }
}
