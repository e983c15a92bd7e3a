#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ellchar/padic.hpp"

namespace ellchar {

enum class ExtKind { UnramQuad, RamQuad, UnramL, RamGaloisL, RamNonGaloisL };

const char* kindName(ExtKind k);
ExtKind kindFromName(const std::string& s);

// Result of the F* U_E^k membership search.
struct UnitLevel {
    bool inFUnits = false; // v_E(w) divisible by e
    int level = 0;         // largest k with w in F* U_E^k (0 = in F* U_E only)
    bool capped = false;   // indistinguishable from F* at working precision
};

// Element of a tame extension E/F, as p^{pPow} times a polynomial vector in
// the adjoined root, coefficients mod p^digits.  Pure value; all arithmetic
// goes through the owning TameExtension.
class ExtElement {
public:
    ExtElement() = default; // zero
    bool isZero() const { return zero_; }
    long pPow() const { return pPow_; }
    int digits() const { return digits_; }
    const std::vector<unsigned long long>& coeffs() const { return c_; }

private:
    long pPow_ = 0;
    int digits_ = 0;
    std::vector<unsigned long long> c_;
    bool zero_ = true;
    friend class TameExtension;
};

// A tame extension E = F[x]/(g) of F = Q_p: quadratic (unramified or
// ramified), or degree ell (unramified, ramified Galois when ell | p-1,
// ramified non-Galois when ell does not divide p-1).  Immutable after build;
// carries verified Galois generators, the uniformizer convention
// (pi = adjoined root for ramified kinds, pi = p for unramified ones),
// and residue-field tables.
class TameExtension {
public:
    static TameExtension build(const PrimeConfig& cfg, ExtKind kind,
                               std::optional<PadicNumber> delta = std::nullopt);

    const PrimeConfig& config() const { return cfg_; }
    ExtKind kind() const { return kind_; }
    bool isGalois() const { return kind_ != ExtKind::RamNonGaloisL; }
    bool isRamified() const { return e_ > 1; }
    int degree() const { return d_; }
    int ramification() const { return e_; }
    int residueDegree() const { return f_; }
    long residueCard() const { return qE_; }
    const PadicNumber& delta() const;                  // x^d = Delta (ramified/unram-quad kinds)
    std::vector<PadicNumber> definingPoly() const;     // constant..x^{d-1} of monic g

    // --- elements ---
    ExtElement zero() const { return ExtElement(); }
    ExtElement one() const;
    ExtElement fromPadic(const PadicNumber& x) const;
    ExtElement fromIntCoeffs(long pPow, const std::vector<long long>& coeffs) const;
    ExtElement uniformizer() const;  // pi
    ExtElement adjoinedRoot() const; // x (= delta for quadratic kinds)

    ExtElement add(const ExtElement& a, const ExtElement& b) const;
    ExtElement sub(const ExtElement& a, const ExtElement& b) const;
    ExtElement neg(const ExtElement& a) const;
    ExtElement mul(const ExtElement& a, const ExtElement& b) const;
    ExtElement div(const ExtElement& a, const ExtElement& b) const;
    ExtElement inv(const ExtElement& a) const;
    ExtElement pow(const ExtElement& a, long long e) const;
    ExtElement scalarMul(const PadicNumber& s, const ExtElement& a) const;
    ExtElement scalarDiv(const ExtElement& a, const PadicNumber& s) const;

    bool eq(const ExtElement& a, const ExtElement& b) const; // to shared precision
    long valuation(const ExtElement& a) const;               // v_E
    bool inFStar(const ExtElement& a) const;                 // lies in F* (to precision)
    PadicNumber constantPart(const ExtElement& a) const;     // requires inFStar
    // coefficient of x^i as a p-adic number (with the global p-power folded in)
    PadicNumber coeffPadic(const ExtElement& a, int i) const;

    // --- Galois ---
    int galoisOrder() const { return isGalois() ? d_ : 1; }
    ExtElement galoisApply(int k, const ExtElement& a) const;
    ExtElement conjQuad(const ExtElement& a) const; // d = 2 shortcut

    // --- norm and trace (multiplication-matrix route; works for all kinds) ---
    PadicNumber norm(const ExtElement& a) const;
    PadicNumber trace(const ExtElement& a) const;
    std::vector<PadicNumber> charPoly(const ExtElement& a) const; // monic, constant..x^{d-1}

    // --- residue field and multiplicative decomposition ---
    long residueEncode(const ExtElement& unit) const;  // residue vector, base-p digits
    int residueDlog(const ExtElement& unit) const;     // dlog in k_E^*
    long residueGeneratorEncoded() const { return resGenEnc_; }
    ExtElement teichOfDlog(long k) const;              // omega^k, exact Teichmuller
    ExtElement teichLift(const ExtElement& unit) const;
    ExtElement frobResidue(const ExtElement& unit) const; // residue Frobenius check helper
    struct Decomposition {
        long v;          // v_E(w)
        long tkDlog;     // dlog of the Teichmuller part
        ExtElement u1;   // principal unit part
    };
    Decomposition decompose(const ExtElement& w) const; // w = pi^v omega u1

    // --- unit filtration ---
    UnitLevel unitLevel(const ExtElement& w) const;
    bool inFUk(const ExtElement& w, int k) const; // membership w in F* U_E^k (search)
    // witness f in F* with w/f in U_E^k, when one exists
    std::optional<PadicNumber> fStarWitness(const ExtElement& w, int k) const;
    bool inUk(const ExtElement& w, int k) const;  // w in U_E^k

    // --- log / exp on principal units ---
    ExtElement logU1(const ExtElement& w) const;   // w in U_E^1
    ExtElement expSmall(const ExtElement& x) const; // v_E(x) >= 1

    std::string str(const ExtElement& a) const;

private:
    PrimeConfig cfg_;
    ExtKind kind_ = ExtKind::UnramQuad;
    int d_ = 2, e_ = 1, f_ = 2;
    long qE_ = 9;
    PadicNumber delta_;
    std::vector<unsigned long long> g_;                 // monic defining poly, coeffs mod p^N
    std::vector<std::vector<unsigned long long>> xred_; // x^{d+j} mod g
    std::vector<std::vector<unsigned long long>> galoisMat_; // sigma^k as d*d (k = 0..d-1)
    long resGenEnc_ = 0;
    std::vector<int> resLog_;          // encoded residue -> dlog (-1 for 0)
    std::vector<ExtElement> teichPow_; // omega^k
    unsigned long long pN_ = 0;

    TameExtension() = default;
    void buildResidueTables();
    void normalize(ExtElement& a) const;
    std::vector<unsigned long long> polyMulRed(const std::vector<unsigned long long>& a,
                                               const std::vector<unsigned long long>& b,
                                               unsigned long long mod) const;
    ExtElement applyMatrix(const std::vector<unsigned long long>& mat, const ExtElement& a) const;
    long resMul(long a, long b) const; // residue-field multiplication on encodings
};

} // namespace ellchar
