#pragma once

#include <map>

#include "ellchar/cover.hpp"

namespace ellchar {

// Depth of a torus element in the filtration Z(G) G'_t, G'_t = 1 + pp^{te}:
// n(w) = levelK / e when positive, with the decomposition w = central * unit.
struct DepthClass {
    bool positive = false;
    int levelK = 0;       // e * n(w)
    int e = 1;
    ExtElement central;   // F*-part (when positive)
    ExtElement unitPart;  // principal-unit part in U^{levelK}
};

DepthClass nDepth(const TameExtension& E, const ExtElement& w);

// Opaque positive normalization constants; multiplication concatenates
// exponents and equality compares the exponent vectors.
enum class NormFactor { DegPi, DegSigma, CPsiSub, CPsiAmb, EtaHalf };

class NormToken {
public:
    static NormToken one() { return NormToken(); }
    NormToken& mul(NormFactor f, int k);
    bool operator==(const NormToken& o) const { return e_ == o.e_; }
    bool operator!=(const NormToken& o) const { return !(*this == o); }
    std::string str() const;

private:
    std::map<NormFactor, int> e_;
};

struct FormulaValue {
    ExactValue exact;
    NormToken norm;
    bool operator==(const FormulaValue& o) const { return exact == o.exact && norm == o.norm; }
    bool operator!=(const FormulaValue& o) const { return !(*this == o); }
};

// Weyl denominator data: the unimodular collapsed part of tau(Delta^0) rho_tau
// and v_F(D(w)) with |D(w)|^{1/2} = q^{-v_F(D)/2}.  For ell = 2 the collapsed
// part is tau_o(w - wbar) (or its Delta^+-flip); for odd ell it is the
// constant tau_o((-1)^{sum k}) (trivial for every kind in scope).
struct WeylDenominator {
    CycInt collapsed;
    long vD = 0;
};

WeylDenominator weylDenominator(const TauCharacter& tau, const ExtElement& w, int deltaPlusLen);

// D(w) = prod_{roots} (1 - alpha(w)) as an element of F*, from the
// characteristic polynomial discriminant (no conjugates needed)
PadicNumber weylDiscriminant(const TameExtension& E, const ExtElement& w);

// epsilon(s) = (-1, Delta)^{l(s)(ell+1)}
int epsilonSign(int weylLen, const PadicNumber& delta, int ell);

// Gram matrix of Q_{(alpha,Y)}(V, W) = trace([alpha,W][V,Y])/2 on the
// perpendicular of E in gl(2): diag(4xy Delta, -4xy Delta^2)
QuadForm qFormMatrix(const TameExtension& E, const ExtElement& alpha, const ExtElement& Y);
// the same Gram matrix computed by raw 2x2 matrix algebra (test oracle)
QuadForm qFormMatrixBrute(const TameExtension& E, const ExtElement& alpha, const ExtElement& Y);

// gamma(alpha, Y): the Weil index of psi o Q
CycInt gammaFactor(const TameExtension& E, const ExtElement& alpha, const ExtElement& Y,
                   const AdditiveCharacter& psi, bool viaOracle = true);
CycInt gammaFactorClosed(const TameExtension& E, const ExtElement& alpha, const ExtElement& Y,
                         const AdditiveCharacter& psi);

// The character formula F(chi~)(w).  The exact part carries the full
// unimodular and q-half-power content; positive constants ride in the token.
// Throws DomainError when w is outside the window 0 <= n(w) <= r/2 or not
// regular.  deltaPlusLen is the length parity of the chosen positive system.
FormulaValue evalFormula(const GenuineCharacter& chi, const ExtElement& w, int deltaPlusLen,
                         const TauCharacter& tau);

// lambda(sigma) as used in the positive-depth constant: (-1)^{r+1} for
// unramified E (r the reduced level), 1 for totally ramified kinds
int lambdaSigma(const TameExtension& E, int reducedLevel);

// discriminant of a monic polynomial over Q_p (lower coefficients given)
PadicNumber discriminantMonic(const std::vector<PadicNumber>& lower, long p, int N);

} // namespace ellchar
