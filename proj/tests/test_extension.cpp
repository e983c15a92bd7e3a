#include "doctest.h"

#include <random>

#include "ellchar/extension.hpp"

using namespace ellchar;

namespace {

ExtElement randomElem(std::mt19937_64& rng, const TameExtension& E, int vmin = -2, int vmax = 2) {
    std::uniform_int_distribution<long> vd(vmin, vmax);
    std::uniform_int_distribution<long long> cd(0, ppow(E.config().p, 4) - 1);
    for (;;) {
        std::vector<long long> c(E.degree());
        bool any = false;
        for (auto& x : c) { x = cd(rng); any = any || (x % E.config().p != 0); }
        if (!any) continue;
        return E.fromIntCoeffs(vd(rng), c);
    }
}

ExtElement randomUnit(std::mt19937_64& rng, const TameExtension& E) {
    for (;;) {
        ExtElement w = randomElem(rng, E, 0, 0);
        if (E.valuation(w) == 0) return w;
    }
}

std::vector<TameExtension> testExtensions() {
    std::vector<TameExtension> out;
    PrimeConfig c3(3, 12, 2), c5(5, 12, 2), c7(7, 12, 3), c11(11, 12, 3);
    out.push_back(TameExtension::build(c3, ExtKind::UnramQuad));
    out.push_back(TameExtension::build(c3, ExtKind::RamQuad, PadicNumber::fromInteger(3, 12, 3)));
    out.push_back(TameExtension::build(c5, ExtKind::RamQuad, PadicNumber::fromInteger(5, 12, 10)));
    out.push_back(TameExtension::build(c7, ExtKind::UnramL));
    out.push_back(TameExtension::build(c7, ExtKind::RamGaloisL, PadicNumber::fromInteger(7, 12, 7)));
    out.push_back(TameExtension::build(c11, ExtKind::RamNonGaloisL, PadicNumber::fromInteger(11, 12, 11)));
    return out;
}

} // namespace

TEST_CASE("quadratic extension construction") {
    PrimeConfig cfg(5, 12, 2);
    TameExtension E = TameExtension::build(cfg, ExtKind::UnramQuad);
    CHECK(E.degree() == 2);
    CHECK(E.ramification() == 1);
    CHECK(E.residueCard() == 25);
    CHECK(legendre(E.delta().residue(), 5) == -1);
    // Frobenius sends delta to -delta
    ExtElement d = E.adjoinedRoot();
    CHECK(E.eq(E.galoisApply(1, d), E.neg(d)));

    PrimeConfig cfg3(3, 12, 2);
    TameExtension R = TameExtension::build(cfg3, ExtKind::RamQuad, PadicNumber::fromInteger(3, 12, 3));
    CHECK(R.ramification() == 2);
    CHECK(R.valuation(R.uniformizer()) == 1);
    CHECK(R.valuation(R.fromPadic(PadicNumber::fromInteger(3, 12, 3))) == 2);
}

TEST_CASE("degree-ell construction and Galois action") {
    PrimeConfig cfg(7, 12, 3);
    TameExtension E = TameExtension::build(cfg, ExtKind::RamGaloisL, PadicNumber::fromInteger(7, 12, 7));
    ExtElement x = E.adjoinedRoot();
    ExtElement sx = E.galoisApply(1, x);
    // sigma(x) = zeta_3 x with zeta_3 a cube root of unity
    ExtElement ratio = E.div(sx, x);
    CHECK(E.eq(E.pow(ratio, 3), E.one()));
    CHECK_FALSE(E.eq(ratio, E.one()));
    // sigma^3 = id on random elements
    std::mt19937_64 rng(1);
    for (int it = 0; it < 20; ++it) {
        ExtElement w = randomElem(rng, E);
        CHECK(E.eq(E.galoisApply(3, w), w));
    }

    TameExtension U = TameExtension::build(cfg, ExtKind::UnramL);
    // residue Frobenius: sigma(w) = w^p mod pi
    for (int it = 0; it < 20; ++it) {
        ExtElement w = randomUnit(rng, U);
        ExtElement diff = U.sub(U.galoisApply(1, w), U.frobResidue(w));
        CHECK((diff.isZero() || U.valuation(diff) >= 1));
    }

    // non-Galois kind rejects automorphisms and RamGaloisL checks ell | p-1
    PrimeConfig cfg11(11, 12, 3);
    CHECK_THROWS_AS(TameExtension::build(cfg11, ExtKind::RamGaloisL, PadicNumber::fromInteger(11, 12, 11)),
                    ConfigError);
    TameExtension NG = TameExtension::build(cfg11, ExtKind::RamNonGaloisL, PadicNumber::fromInteger(11, 12, 11));
    CHECK(NG.galoisOrder() == 1);
    CHECK_THROWS_AS(NG.galoisApply(1, NG.adjoinedRoot()), DomainError);
}

TEST_CASE("arithmetic identities in quadratic extensions") {
    std::mt19937_64 rng(2);
    PrimeConfig cfg(3, 12, 2);
    TameExtension E = TameExtension::build(cfg, ExtKind::RamQuad, PadicNumber::fromInteger(3, 12, 3));
    // (a + b d)(a - b d) = a^2 - b^2 Delta
    for (int it = 0; it < 30; ++it) {
        std::uniform_int_distribution<long long> cd(1, 80);
        long long a = cd(rng), b = cd(rng);
        ExtElement w = E.fromIntCoeffs(0, {a, b});
        ExtElement wc = E.fromIntCoeffs(0, {a, -b});
        ExtElement lhs = E.mul(w, wc);
        ExtElement rhs = E.fromIntCoeffs(0, {a * a - b * b * 3});
        CHECK(E.eq(lhs, rhs));
    }
    // pi^2 = p * unit
    ExtElement pi2 = E.pow(E.uniformizer(), 2);
    CHECK(E.valuation(pi2) == 2);
    CHECK(E.eq(pi2, E.fromPadic(PadicNumber::fromInteger(3, 12, 3))));
}

TEST_CASE("division round trips in all kinds") {
    std::mt19937_64 rng(3);
    for (const auto& E : testExtensions()) {
        for (int it = 0; it < 40; ++it) {
            ExtElement a = randomElem(rng, E), b = randomElem(rng, E);
            CHECK(E.eq(E.div(E.mul(a, b), b), a));
        }
    }
}

TEST_CASE("valuation is additive and ultrametric") {
    std::mt19937_64 rng(4);
    for (const auto& E : testExtensions()) {
        for (int it = 0; it < 100; ++it) {
            ExtElement a = randomElem(rng, E), b = randomElem(rng, E);
            CHECK(E.valuation(E.mul(a, b)) == E.valuation(a) + E.valuation(b));
            ExtElement s = E.add(a, b);
            if (!s.isZero())
                CHECK(E.valuation(s) >= std::min(E.valuation(a), E.valuation(b)));
        }
    }
}

TEST_CASE("norm and trace via the multiplication matrix") {
    std::mt19937_64 rng(5);
    // N(pi) = -p for the Eisenstein x^2 - p
    PrimeConfig cfg(3, 12, 2);
    TameExtension R = TameExtension::build(cfg, ExtKind::RamQuad, PadicNumber::fromInteger(3, 12, 3));
    CHECK(R.norm(R.uniformizer()) == PadicNumber::fromInteger(3, 12, -3));
    // Tr(delta) = 0 unramified
    TameExtension U = TameExtension::build(cfg, ExtKind::UnramQuad);
    CHECK(U.trace(U.adjoinedRoot()).isZero());

    for (const auto& E : testExtensions()) {
        for (int it = 0; it < 25; ++it) {
            ExtElement a = randomElem(rng, E), b = randomElem(rng, E);
            CHECK(E.norm(E.mul(a, b)) == E.norm(a) * E.norm(b));
            CHECK(E.trace(E.add(a, b)) == E.trace(a) + E.trace(b));
        }
        if (!E.isGalois()) continue;
        // norm = product of Galois conjugates
        for (int it = 0; it < 20; ++it) {
            ExtElement w = randomElem(rng, E);
            ExtElement prod = w;
            for (int k = 1; k < E.degree(); ++k) prod = E.mul(prod, E.galoisApply(k, w));
            CHECK(E.inFStar(prod));
            CHECK(E.constantPart(prod) == E.norm(w));
        }
    }
}

TEST_CASE("unit levels match the closed-form window lemmas") {
    std::mt19937_64 rng(6);
    PrimeConfig cfg(3, 12, 2);
    TameExtension R = TameExtension::build(cfg, ExtKind::RamQuad, PadicNumber::fromInteger(3, 12, 3));
    TameExtension U = TameExtension::build(cfg, ExtKind::UnramQuad);

    // ramified: u + v pi with units u, v sits exactly in F* U^1
    UnitLevel l1 = R.unitLevel(R.fromIntCoeffs(0, {2, 1}));
    CHECK(l1.inFUnits);
    CHECK(l1.level == 1);
    // odd valuation: not in F* U_E at all
    UnitLevel l2 = R.unitLevel(R.uniformizer());
    CHECK_FALSE(l2.inFUnits);

    // unramified: u + p v delta at level 1; delta * unit at level 0
    UnitLevel l3 = U.unitLevel(U.fromIntCoeffs(0, {2, 3}));
    CHECK(l3.inFUnits);
    CHECK(l3.level == 1);
    UnitLevel l4 = U.unitLevel(U.fromIntCoeffs(0, {0, 2}));
    CHECK(l4.inFUnits);
    CHECK(l4.level == 0);

    // closed forms on random decompositions: w = p^n u + p^m v delta
    for (int it = 0; it < 100; ++it) {
        std::uniform_int_distribution<long> nd(0, 3);
        std::uniform_int_distribution<long long> ud(1, 8);
        long n = nd(rng), m = nd(rng);
        long long u = ud(rng), v = ud(rng);
        if (u % 3 == 0 || v % 3 == 0) continue;
        long long pn = (long long)ppow(3, (int)n), pm = (long long)ppow(3, (int)m);
        // ramified
        ExtElement wr = R.fromIntCoeffs(0, {pn * u, pm * v});
        UnitLevel lr = R.unitLevel(wr);
        if (n <= m) {
            CHECK(lr.inFUnits);
            CHECK(lr.level == 2 * (m - n) + 1);
        } else {
            CHECK_FALSE(lr.inFUnits);
        }
        // unramified
        ExtElement wu = U.fromIntCoeffs(0, {pn * u, pm * v});
        UnitLevel lu = U.unitLevel(wu);
        CHECK(lu.inFUnits);
        if (n < m) CHECK(lu.level == m - n);
        else CHECK(lu.level == 0);
    }
}

TEST_CASE("teichmuller decomposition") {
    std::mt19937_64 rng(7);
    for (const auto& E : testExtensions()) {
        for (int it = 0; it < 15; ++it) {
            ExtElement w = randomElem(rng, E);
            auto dec = E.decompose(w);
            ExtElement rebuilt = E.mul(E.pow(E.uniformizer(), dec.v),
                                       E.mul(E.teichOfDlog(dec.tkDlog), dec.u1));
            CHECK(E.eq(rebuilt, w));
            if (!dec.u1.isZero()) {
                ExtElement u1m1 = E.sub(dec.u1, E.one());
                CHECK((u1m1.isZero() || E.valuation(u1m1) >= 1));
            }
        }
        // omega^{q-1} = 1 exactly
        ExtElement omega = E.teichOfDlog(1);
        CHECK(E.eq(E.pow(omega, E.residueCard() - 1), E.one()));
    }
}

TEST_CASE("log and exp on principal units") {
    std::mt19937_64 rng(8);
    for (const auto& E : testExtensions()) {
        long p = E.config().p;
        int e = E.ramification();
        CHECK(E.logU1(E.one()).isZero());
        ExtElement w = E.add(E.one(), E.fromPadic(PadicNumber::fromInteger(p, 12, p)));
        CHECK(E.eq(E.expSmall(E.logU1(w)), w));
        // exp is only defined past v > e/(p-1); round trips live there
        int vmin = (int)(e / (p - 1)) + 1;
        for (int it = 0; it < 25; ++it) {
            ExtElement a = randomElem(rng, E, 0, 1);
            ExtElement b = randomElem(rng, E, 0, 1);
            ExtElement u = E.add(E.one(), E.mul(E.pow(E.uniformizer(), vmin), a));
            ExtElement v = E.add(E.one(), E.mul(E.pow(E.uniformizer(), vmin), b));
            ExtElement lhs = E.logU1(E.mul(u, v));
            ExtElement rhs = E.add(E.logU1(u), E.logU1(v));
            CHECK(E.eq(lhs, rhs));
            CHECK(E.eq(E.expSmall(E.logU1(u)), u));
        }
        // log is a homomorphism on all of U^1 regardless
        for (int it = 0; it < 10; ++it) {
            ExtElement a = randomElem(rng, E, 0, 1);
            ExtElement b = randomElem(rng, E, 0, 1);
            ExtElement u = E.add(E.one(), E.mul(E.uniformizer(), a));
            ExtElement v = E.add(E.one(), E.mul(E.uniformizer(), b));
            CHECK(E.eq(E.logU1(E.mul(u, v)), E.add(E.logU1(u), E.logU1(v))));
        }
    }
}
