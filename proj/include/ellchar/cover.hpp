#pragma once

#include "ellchar/character.hpp"

namespace ellchar {

// The six concrete cover situations: PGL/GL at ell = 2, PGL/GL for odd ell
// with delta_{E/F} != 1 (ramified non-Galois E), and the split covers for
// odd ell with delta_{E/F} = 1 (Galois E).
enum class CoverCase { PGL2, GL2, PGLlDeltaNe1, GLlDeltaNe1, PGLlSplit, GLlSplit };

const char* coverCaseName(CoverCase c);
CoverCase coverCaseFromName(const std::string& s);
// the natural case tag for a pair (group = GL or PGL)
CoverCase coverCaseFor(const TameExtension& E, bool pgl);

// Concrete realization of tau_o: a character t0 of E* whose restriction to
// F* is aleph_{EL/L}|_{F*} (= aleph_{E/F} for ell = 2), with tau = t0 |.|_E.
// Two variants per extension witness the tau-independence statements.  The
// ramified non-Galois kind carries the trivial realization: rho_tau is the
// unit token there and t0 is never evaluated.
class TauCharacter {
public:
    static TauCharacter make(std::shared_ptr<const TameExtension> ext, int variant = 0);

    const TameExtension& ext() const { return *ext_; }
    std::shared_ptr<const TameExtension> extPtr() const { return ext_; }
    const MultCharacter& t0() const { return t0_; }
    bool trivialRealization() const { return trivialRealization_; }
    CycInt evalT0(const ExtElement& w) const;
    ExactValue evalTau(const ExtElement& w) const; // t0(w) q^{-f v_E(w)}
    int variant() const { return variant_; }

private:
    std::shared_ptr<const TameExtension> ext_;
    MultCharacter t0_;
    bool trivialRealization_ = false;
    int variant_ = 0;
};

// rho(w) as an element of E* (odd ell, Galois kinds):
// prod_i (sigma^{i-1} w / sigma^{ell-i} w)^{(ell+1)/2 - i}
ExtElement rhoOnTorus(const TameExtension& E, const ExtElement& w);
// rho_tau(w): t0(rho(w)) for Galois kinds, the unit token otherwise
ExactValue rhoTau(const TauCharacter& tau, const ExtElement& w);
// tau(2 rho(w)): the defining character of the cover, through the same
// realization (|2 rho| = 1 on elliptic tori)
ExactValue tau2Rho(const TauCharacter& tau, const ExtElement& w);

// Element of a concrete cover model.  PGL cases use w as a coset
// representative; GL cases carry the pair (w, [z]); split cases carry eps.
struct ModelElement {
    ExtElement w;
    ExtElement z;   // GL cases
    int eps = 1;    // split cases
};

// Point of T(F)_{tau o rho}: a torus element (coset representative for the
// PGL cases) and the lambda component with lambda^2 = tau(2 rho(base)).
struct CoverElement {
    CoverCase tag;
    ExtElement base;
    ExactValue lambda;
};

// subgroup membership at finite level (witness-based)
bool inFStarClass(const TameExtension& E, const ExtElement& x, int cutoff);      // x in F* U^cutoff
bool inNormClass(const TameExtension& E, const ExtElement& x, int cutoff);       // x in N(E*) U^cutoff
bool inKerDeltaClass(const TameExtension& E, const ExtElement& x, int cutoff);   // x in ker(delta) U^cutoff
// a fixed element of F* outside N(E*) (resp. ker delta)
PadicNumber nonNorm(const TameExtension& E);
PadicNumber nonKerDelta(const TameExtension& E);

CoverElement kappa(CoverCase tag, const TauCharacter& tau, const ModelElement& m);
ModelElement kappaInv(CoverCase tag, const TauCharacter& tau, const CoverElement& c);

// Weyl action s = sigma^k on cover elements and on concrete models
CoverElement weylAct(int k, const TauCharacter& tau, const CoverElement& c);
ModelElement weylActModel(CoverCase tag, const TameExtension& E, int k, const ModelElement& m);

// Genuine character attached to a regular pair in a given case.
class GenuineCharacter {
public:
    GenuineCharacter(CoverCase tag, CharPair pair);
    CoverCase tag() const { return tag_; }
    const CharPair& pair() const { return pair_; }
    CycInt eval(const ModelElement& m) const;
    // recover the underlying character of E* from the genuine one
    CycInt underlying(const ExtElement& w) const;

private:
    CoverCase tag_;
    CharPair pair_;
};

bool isRegularGenuine(const GenuineCharacter& chi);

// splitting test for the double cover E*/N(E*) -> E*/F* at finite level:
// the deck class is a square in the covering group iff the sequence splits
struct SplitReport {
    bool splits;
    int hilbertMinusOneDelta;
    int classesCovering, classesBase;
};
SplitReport coverSplitTest(const TameExtension& E, int cutoff);

// enumeration of the concrete model classes at finite level (for the
// bijectivity checks); returns deduplicated representatives
std::vector<ModelElement> enumerateModel(CoverCase tag, const TameExtension& E, int cutoff);
// class-equality of model elements at finite level
bool sameModelClass(CoverCase tag, const TameExtension& E, const ModelElement& a,
                    const ModelElement& b, int cutoff);
// class-equality of cover elements (base mod F*/exact for GL; lambda exact)
bool sameCoverClass(CoverCase tag, const TameExtension& E, const CoverElement& a,
                    const CoverElement& b, int cutoff);

} // namespace ellchar
