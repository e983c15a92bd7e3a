#pragma once

#include <vector>

#include "ellchar/cyclotomic.hpp"
#include "ellchar/extension.hpp"

namespace ellchar {

// Additive character of F = Q_p.  Convention: level n means trivial on
// p^n o_F and nontrivial on p^{n-1} o_F; the default is the level-one
// character psi(x) = exp(2 pi i {x/p}) twisted by an optional scale a
// (a psi : x -> psi(a x)).
struct AdditiveCharacter {
    long p = 3;
    int level = 1;
    PadicNumber scale; // zero means scale 1

    AdditiveCharacter() = default;
    AdditiveCharacter(long p_, int level_) : p(p_), level(level_) {}
    AdditiveCharacter(long p_, int level_, PadicNumber a) : p(p_), level(level_), scale(std::move(a)) {}
};

// psi(x) as an exact root of unity of p-power order
CycInt evalAdditive(const AdditiveCharacter& psi, const PadicNumber& x);
// psi_E = psi o Tr_{E/F}
CycInt evalAdditiveExt(const AdditiveCharacter& psi, const TameExtension& E, const ExtElement& x);

// Nondegenerate diagonal quadratic form over F.
struct QuadForm {
    std::vector<PadicNumber> diag;
};

// Hilbert symbol (a, b)_F for p odd: closed form via valuations and
// Legendre symbols, and an independent solvability oracle for a x^2 + b y^2
// = z^2 (residue conic search with a verified Hensel certificate).
int hilbert(const PadicNumber& a, const PadicNumber& b);
int hilbertOracle(const PadicNumber& a, const PadicNumber& b);

// Normalized Weil index gamma_F(a, psi) = gamma_F(a psi)/gamma_F(psi),
// a fourth root of unity for p odd.  The oracle evaluates the quadratic
// Gauss sums S_m(a) = sum psi(a x^2) over p^{-m} o / p^m o at two
// consecutive m and checks stabilization; the closed form goes through
// Legendre symbols and the classical Gauss-sum sign.
CycInt weilGammaOracle(const PadicNumber& a, const AdditiveCharacter& psi);
CycInt weilGammaClosed(const PadicNumber& a, const AdditiveCharacter& psi);
// raw normalized index of x -> psi(a x^2) (not divided by gamma(psi))
CycInt weilIndexRaw(const PadicNumber& a, const AdditiveCharacter& psi);

// Hasse invariant of a diagonal form: h_F(Q) = prod gamma(a_i, psi) /
// gamma(det Q, psi); always +-1.
int hasseInvariant(const QuadForm& Q, const AdditiveCharacter& psi, bool viaOracle = false);

// Langlands constant lambda_{E/F}(psi) for quadratic E: the Weil index of
// psi o N on the rank-2 form diag(1, -Delta).
CycInt langlandsLambda(const TameExtension& E, const AdditiveCharacter& psi);

// Local class field theory character of F* relative to E/F: quadratic E
// gives (x, Delta); unramified degree d gives zeta_d^{v(x)}; ramified Galois
// degree ell is computed from the norm-group structure (enumerated and
// verified at finite level at build time of the extension).
CycInt cftCharacter(const TameExtension& E, const PadicNumber& x);

// aleph_{EL/L} restricted to F*, where L/F is unramified of degree ell-1;
// the tau_o construction needs exactly this restriction.  For ell = 2 this
// is aleph_{E/F} itself.
CycInt cftCharacterELoverL(const TameExtension& E, const PadicNumber& x);

} // namespace ellchar
