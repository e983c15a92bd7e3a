#pragma once

#include <memory>
#include <vector>

#include "ellchar/symbols.hpp"

namespace ellchar {

// Finite-order character of F* = Q_p*: a value on p, a tame exponent on the
// Teichmuller units (base: the canonical primitive root mod p), and a wild
// element alpha with phi(u) = psi(alpha log u) on U^1.  psi is the fixed
// level-one additive character.
class FCharacter {
public:
    FCharacter() = default;
    FCharacter(long p, int precision, CycInt pValue, long tameExp, PadicNumber wildAlpha);
    static FCharacter trivial(long p, int precision);
    // the quadratic character x -> (x, c)_F
    static FCharacter quadratic(long p, int precision, const PadicNumber& c);

    long p() const { return p_; }
    const CycInt& pValue() const { return pValue_; }
    long tameExp() const { return tameExp_; }
    const PadicNumber& wildAlpha() const { return wildAlpha_; }
    bool isTrivial() const;

    CycInt eval(const PadicNumber& x) const;
    FCharacter times(const FCharacter& o) const;
    FCharacter inverseChar() const;

private:
    long p_ = 0;
    int prec_ = 0;
    CycInt pValue_{1};
    long tameExp_ = 0;
    PadicNumber wildAlpha_; // zero = no wild part
};

// p-adic logarithm on 1 + p Z_p (F-side helper for FCharacter)
PadicNumber padicLogU1(const PadicNumber& u);

// Finite-order character of E*: value on the uniformizer, tame exponent t
// (on Teichmuller units, base the extension's residue generator), and wild
// element alpha acting through chi(u) = psi_E(alpha log u) on U^1.
class MultCharacter {
public:
    MultCharacter() = default;
    MultCharacter(std::shared_ptr<const TameExtension> ext, CycInt unifValue, long tameExp,
                  ExtElement alpha);

    const TameExtension& ext() const { return *ext_; }
    std::shared_ptr<const TameExtension> extPtr() const { return ext_; }
    const CycInt& unifValue() const { return unifValue_; }
    long tameExp() const { return tameExp_; }
    const ExtElement& wildAlpha() const { return alpha_; }
    bool hasWild() const { return !alpha_.isZero(); }

    CycInt eval(const ExtElement& w) const;
    CycInt evalU1(const ExtElement& u1) const; // wild part only

    MultCharacter times(const MultCharacter& o) const;
    MultCharacter inverseChar() const;
    MultCharacter composeGalois(int k) const; // chi o sigma^k
    static MultCharacter pullbackNorm(std::shared_ptr<const TameExtension> ext, const FCharacter& phi);

    // behavioral equality on generators of E* mod U^{cutoff+1}
    bool equals(const MultCharacter& o, int cutoff) const;
    bool trivialOnU1Depth(int k, int cutoff) const; // chi trivial on U^k

    int level() const; // smallest n with chi trivial on U^{n+1} (behavioral)

private:
    std::shared_ptr<const TameExtension> ext_;
    CycInt unifValue_{1};
    long tameExp_ = 0;
    ExtElement alpha_;
};

// Regular / admissible / minimal classification of a pair (E/F, chi),
// computed eagerly; immutable afterwards.
class CharPair {
public:
    CharPair(std::shared_ptr<const TameExtension> ext, MultCharacter chi);

    const TameExtension& ext() const { return *ext_; }
    std::shared_ptr<const TameExtension> extPtr() const { return ext_; }
    const MultCharacter& chi() const { return chi_; }
    int level() const { return level_; }
    bool regular() const { return regular_; }
    bool admissible() const { return admissible_; }
    bool minimal() const { return minimal_; }

private:
    std::shared_ptr<const TameExtension> ext_;
    MultCharacter chi_;
    int level_ = 0;
    bool regular_ = false, admissible_ = false, minimal_ = false;
};

// The true linearizer alpha(chi): solves chi(1+x) = psi_E(alpha x) on
// pp_E^{floor(n/2)+1} grade by grade and verifies the congruence.  Matches
// the stored wild element whenever p > 2 ell.
ExtElement alphaOfChi(const CharPair& pair);

// x_chi: the delta-coefficient of alpha(chi) as an element of F
PadicNumber xChi(const CharPair& pair);

// minimality of (alpha + pp^{-n+1}) cap F = emptyset, from the true alpha
bool alphaMinimal(const TameExtension& E, const ExtElement& alpha);

// the root of unity zeta(beta, pi) with beta pi^{-v(beta)} = zeta mod U^1
// (totally ramified kinds)
PadicNumber zetaRoot(const TameExtension& E, const ExtElement& beta);

// Delta_chi twists (all cases); ramified quadratic input is reduced to a
// minimal pair first via chi = chi' (phi o N)
MultCharacter deltaTwist(const CharPair& pair);

// delta_{E/F} = det Ind 1, as the quadratic character (., disc g)_F
FCharacter deltaEF(const TameExtension& E);
PadicNumber deltaEFDisc(const TameExtension& E);
bool deltaEFTrivial(const TameExtension& E);

// Reduce a regular pair to a minimal one: chi = chi_min * (phi o N).
struct MinimalReduction {
    CharPair pair;      // minimal (or level <= 0) pair
    FCharacter phi;     // accumulated F*-character
};
MinimalReduction minimalReduction(const CharPair& pair);

// generators of U^1/U^{cutoff+1} (lifted), used by behavioral tests
std::vector<ExtElement> principalUnitGenerators(const TameExtension& E, int cutoff);

} // namespace ellchar
