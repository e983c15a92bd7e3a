#include "doctest.h"

#include <random>

#include "ellchar/cover.hpp"

using namespace ellchar;

namespace {

std::shared_ptr<const TameExtension> make(long p, int ell, ExtKind k, long long delta = 0) {
    PrimeConfig cfg(p, 12, ell);
    std::optional<PadicNumber> D;
    if (delta != 0) D = PadicNumber::fromInteger(p, 12, delta);
    return std::make_shared<const TameExtension>(TameExtension::build(cfg, k, D));
}

struct CaseSetup {
    CoverCase tag;
    std::shared_ptr<const TameExtension> ext;
};

std::vector<CaseSetup> allSixCases() {
    std::vector<CaseSetup> out;
    auto U2 = make(3, 2, ExtKind::UnramQuad);
    auto R2 = make(3, 2, ExtKind::RamQuad, 3);
    auto G3 = make(7, 3, ExtKind::RamGaloisL, 7);
    auto N3 = make(11, 3, ExtKind::RamNonGaloisL, 11);
    out.push_back({CoverCase::PGL2, U2});
    out.push_back({CoverCase::GL2, R2});
    out.push_back({CoverCase::PGLlSplit, G3});
    out.push_back({CoverCase::GLlSplit, G3});
    out.push_back({CoverCase::PGLlDeltaNe1, N3});
    out.push_back({CoverCase::GLlDeltaNe1, N3});
    return out;
}

} // namespace

TEST_CASE("tau_o realizations restrict correctly and vary") {
    for (auto spec : {std::tuple<long, int, ExtKind, long long>{3, 2, ExtKind::UnramQuad, 0},
                      {3, 2, ExtKind::RamQuad, 3},
                      {5, 2, ExtKind::RamQuad, 10},
                      {7, 3, ExtKind::UnramL, 0},
                      {7, 3, ExtKind::RamGaloisL, 7}}) {
        auto ext = make(std::get<0>(spec), std::get<1>(spec), std::get<2>(spec), std::get<3>(spec));
        TauCharacter t0 = TauCharacter::make(ext, 0);
        TauCharacter t1 = TauCharacter::make(ext, 1);
        // construction self-checks ran; the variants must differ somewhere
        bool differ = false;
        const TameExtension& E = *ext;
        for (const auto& g : {E.uniformizer(), E.teichOfDlog(1)})
            differ = differ || (t0.evalT0(g) != t1.evalT0(g));
        CHECK(differ);
        // tau = t0 |.|: the absolute value lands in the half-exponent
        ExactValue v = t0.evalTau(E.pow(E.uniformizer(), 2));
        CHECK(v.halfExp() == -4 * E.residueDegree());
    }
}

TEST_CASE("kappa is bijective and preserves the lambda-square invariant") {
    int cutoff = 2; // full quotients at cutoff 3 run in the acceptance suite
    for (const auto& cs : allSixCases()) {
        const TameExtension& E = *cs.ext;
        TauCharacter tau = TauCharacter::make(cs.ext, 0);
        auto model = enumerateModel(cs.tag, E, cutoff);
        REQUIRE(model.size() > 2);
        std::vector<CoverElement> images;
        for (const auto& m : model) {
            CoverElement c = kappa(cs.tag, tau, m);
            // projection commutes: base is the torus part of the model
            CHECK(E.eq(c.base, m.w));
            // lambda^2 = tau(2 rho(base))
            CHECK(c.lambda * c.lambda == tau2Rho(tau, c.base));
            // round trip through the independent inverse
            ModelElement back = kappaInv(cs.tag, tau, c);
            CHECK(sameModelClass(cs.tag, E, back, m, cutoff));
            images.push_back(c);
        }
        // two-sided round trips make kappa a bijection; spot-check injectivity
        for (size_t i = 0; i < images.size() && i < 30; ++i)
            for (size_t j = i + 1; j < images.size() && j < 30; ++j)
                CHECK_FALSE(sameCoverClass(cs.tag, E, images[i], images[j], cutoff));
        // every fiber point (base, +-lambda) is hit: flip and invert
        long q = E.config().p;
        for (const auto& c : images) {
            CoverElement flip{c.tag, c.base, ExactValue::unimodular(q, CycInt(-1)) * c.lambda};
            ModelElement pre = kappaInv(cs.tag, tau, flip);
            CoverElement again = kappa(cs.tag, tau, pre);
            CHECK(sameCoverClass(cs.tag, E, again, flip, cutoff));
        }
    }
}

TEST_CASE("weyl action: group law and concrete-model simplification") {
    std::mt19937_64 rng(301);
    for (const auto& cs : allSixCases()) {
        const TameExtension& E = *cs.ext;
        if (!E.isGalois()) continue;
        TauCharacter tau = TauCharacter::make(cs.ext, 0);
        auto model = enumerateModel(cs.tag, E, 2);
        int d = E.galoisOrder();
        int checked = 0;
        for (const auto& m : model) {
            if (checked++ > 25) break;
            CoverElement c = kappa(cs.tag, tau, m);
            // identity acts trivially
            CoverElement c0 = weylAct(0, tau, c);
            CHECK(sameCoverClass(cs.tag, E, c0, c, 2));
            // s^d = id
            CoverElement cd = c;
            for (int k = 0; k < d; ++k) cd = weylAct(1, tau, cd);
            CHECK(sameCoverClass(cs.tag, E, cd, c, 2));
            // action is compatible: s . kappa(m) = kappa(s . m)
            for (int k = 1; k < d; ++k) {
                CoverElement lhs = weylAct(k, tau, c);
                CoverElement rhs = kappa(cs.tag, tau, weylActModel(cs.tag, E, k, m));
                CHECK(sameCoverClass(cs.tag, E, lhs, rhs, 2));
                // lambda-square invariant is preserved
                CHECK(lhs.lambda * lhs.lambda == tau2Rho(tau, lhs.base));
            }
            // group action: s.(t.c) = (st).c
            if (d > 2) {
                CoverElement ab = weylAct(1, tau, weylAct(1, tau, c));
                CoverElement ab2 = weylAct(2, tau, c);
                CHECK(sameCoverClass(cs.tag, E, ab, ab2, 2));
            }
        }
        // quadratic lambda transformation: s([w], l) = ([wbar], l t0(wbar/w))
        if (E.degree() == 2) {
            for (int it = 0; it < 10; ++it) {
                const auto& m = model[it % model.size()];
                CoverElement c = kappa(cs.tag, tau, m);
                CoverElement sc = weylAct(1, tau, c);
                ExactValue expect =
                    c.lambda * ExactValue::unimodular(E.config().p,
                                                      tau.evalT0(E.div(E.conjQuad(c.base), c.base)));
                CHECK(sc.lambda == expect);
            }
        }
    }
}

TEST_CASE("genuine characters: deck negation and round trips") {
    // GL2 over the ramified quadratic at p = 3
    auto R2 = make(3, 2, ExtKind::RamQuad, 3);
    const TameExtension& E = *R2;
    ExtElement alpha = E.div(E.fromIntCoeffs(0, {1}), E.uniformizer());
    CharPair pair(R2, MultCharacter(R2, CycInt(1), 0, alpha));
    REQUIRE(pair.regular());
    GenuineCharacter chi(CoverCase::GL2, pair);

    std::mt19937_64 rng(302);
    PadicNumber x0 = nonNorm(E);
    auto model = enumerateModel(CoverCase::GL2, E, 2);
    for (const auto& m : model) {
        // deck flip negates the value
        ModelElement flip = m;
        flip.z = E.mul(m.z, E.fromPadic(x0));
        CHECK(chi.eval(flip) == -chi.eval(m));
        // underlying character recovery
        ExtElement ratio = E.div(m.z, m.w);
        CycInt back = chi.eval(m) * cftCharacter(E, E.constantPart(ratio));
        CHECK(back == chi.underlying(m.w));
    }

    // split case: chi~(z, -1) = -chi(z)
    auto G3 = make(7, 3, ExtKind::RamGaloisL, 7);
    ExtElement a3 = G3->div(G3->fromIntCoeffs(0, {0, 1}), G3->pow(G3->uniformizer(), 3));
    CharPair p3(G3, MultCharacter(G3, CycInt(1), 0, a3));
    REQUIRE(p3.regular());
    GenuineCharacter chi3(CoverCase::GLlSplit, p3);
    ModelElement me{G3->teichOfDlog(2), G3->teichOfDlog(2), -1};
    CHECK(chi3.eval(me) == -chi3.underlying(me.w));

    // non-regular pairs are rejected; regularity is Weyl-stable
    FCharacter phi(3, 12, CycInt(1), 1, PadicNumber());
    CharPair pulled(R2, MultCharacter::pullbackNorm(R2, phi));
    CHECK_FALSE(pulled.regular());
    CHECK_THROWS_AS(GenuineCharacter(CoverCase::GL2, pulled), DomainError);
    for (int k = 0; k < 2; ++k) {
        CharPair twisted(R2, pair.chi().composeGalois(k));
        CHECK(twisted.regular() == pair.regular());
    }
}

TEST_CASE("cover splitting matches the hilbert criterion") {
    // p = 3 ramified: (-1, 3) = -1, non-split
    auto R3 = make(3, 2, ExtKind::RamQuad, 3);
    SplitReport r3 = coverSplitTest(*R3, 3);
    CHECK(r3.hilbertMinusOneDelta == -1);
    CHECK_FALSE(r3.splits);
    CHECK(r3.classesCovering == 2 * r3.classesBase);

    // p = 5 ramified: (-1, 5) = +1, split
    auto R5 = make(5, 2, ExtKind::RamQuad, 5);
    SplitReport r5 = coverSplitTest(*R5, 3);
    CHECK(r5.hilbertMinusOneDelta == 1);
    CHECK(r5.splits);

    // unramified quadratic always splits ( (-1, u0) = 1 )
    auto U3 = make(3, 2, ExtKind::UnramQuad);
    SplitReport ru = coverSplitTest(*U3, 3);
    CHECK(ru.hilbertMinusOneDelta == 1);
    CHECK(ru.splits);
}

TEST_CASE("PGL-model central conditions are enforced") {
    auto U2 = make(3, 2, ExtKind::UnramQuad);
    // chi with chi|_{F*} = aleph and a Frobenius-moving tame tail
    MultCharacter good(U2, CycInt(-1), 2, ExtElement());
    CharPair gp(U2, good);
    REQUIRE(gp.regular());
    CHECK_NOTHROW(GenuineCharacter(CoverCase::PGL2, gp));
    // trivial central character is rejected for PGL2
    MultCharacter bad(U2, CycInt(1), 2, ExtElement());
    CharPair bp(U2, bad);
    REQUIRE(bp.regular());
    CHECK_THROWS_AS(GenuineCharacter(CoverCase::PGL2, bp), DomainError);
}
