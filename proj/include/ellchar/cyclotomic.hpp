#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ellchar/errors.hpp"

namespace ellchar {

// Exact element of Z[zeta_m].  The conductor is kept with m != 2 (mod 4).
// Coordinates are stored sparsely in the tensor basis: writing
// m = q_1 ... q_r as a product of prime powers and eta_i = zeta_m^{m/q_i},
// the products prod_i eta_i^{j_i} with 0 <= j_i < phi(q_i) form a Z-basis.
// Representations are canonical per conductor, and the conductor itself is
// shrunk whenever the element visibly lives in a smaller cyclotomic ring,
// so equality after lifting to a common conductor is plain coordinate
// comparison.  No floating point anywhere.
class CycInt {
public:
    CycInt() = default;                    // zero
    explicit CycInt(long long n);          // rational integer
    static CycInt rootOfUnity(long m, long long k);
    static CycInt fromPowerBasis(long m, const std::vector<long long>& coeffs);

    long conductor() const { return m_; }
    bool isZero() const { return terms_.empty(); }
    bool isInteger() const;
    long long asInteger() const;           // requires isInteger()

    // Canonical power-basis coordinates (length deg Phi_m); conductor-capped.
    std::vector<long long> powerBasis() const;

    CycInt conj() const;                   // zeta -> zeta^{-1}
    CycInt galois(long long k) const;      // zeta -> zeta^k, gcd(k, m) = 1
    CycInt pow(long long e) const;         // e < 0 requires a root of unity
    bool isRootOfUnity() const;            // +- zeta^k test (x * conj x == 1)
    long rootOrder() const;                // order; requires isRootOfUnity()
    CycInt inverse() const;                // requires isRootOfUnity()

    bool divisibleBy(long long n) const;
    CycInt dividedBy(long long n) const;   // exact; requires divisibility

    friend CycInt operator+(const CycInt& a, const CycInt& b);
    friend CycInt operator-(const CycInt& a, const CycInt& b);
    friend CycInt operator-(const CycInt& a);
    friend CycInt operator*(const CycInt& a, const CycInt& b);
    CycInt& operator+=(const CycInt& b) { return *this = *this + b; }
    CycInt& operator*=(const CycInt& b) { return *this = *this * b; }
    bool operator==(const CycInt& b) const;
    bool operator!=(const CycInt& b) const { return !(*this == b); }

    std::string str() const;

    // Maximum conductor accepted before cyc_arith reports overflow.
    static constexpr long kMaxConductor = 4000000;

private:
    long m_ = 1;
    // sorted by flat tensor-basis index
    std::vector<std::pair<int64_t, long long>> terms_;

    CycInt liftTo(long M) const;
    void reduceConductorInPlace();
    friend class CycBuilder;
};

// Accumulates many monomials c * zeta_m^e at a fixed conductor with one
// final normalization; used for Gauss sums and Deligne-Lusztig sums.
class CycBuilder {
public:
    explicit CycBuilder(long m);
    void add(long long exponent, long long coeff);
    CycInt take();

private:
    long m_;
    std::vector<long long> dense_; // indexed by flat tensor index
};

// q^{r/2} times a cyclotomic integer; the value domain of all character
// formulas.  halfExp counts half-powers of q; canonical form divides every
// rational factor of q out of the cyclotomic part (adding 2 per factor).
class ExactValue {
public:
    ExactValue() = default;                       // zero with unset base
    ExactValue(long q, long halfExp, CycInt c);   // canonicalizes
    static ExactValue zero(long q) { return ExactValue(q, 0, CycInt()); }
    static ExactValue one(long q) { return ExactValue(q, 0, CycInt(1)); }
    static ExactValue qPower(long q, long halfExp) { return ExactValue(q, halfExp, CycInt(1)); }
    static ExactValue unimodular(long q, CycInt c) { return ExactValue(q, 0, std::move(c)); }

    long qbase() const { return q_; }
    long halfExp() const { return half_; }
    const CycInt& cyc() const { return cyc_; }
    bool isZero() const { return cyc_.isZero(); }

    friend ExactValue operator*(const ExactValue& a, const ExactValue& b);
    ExactValue& operator*=(const ExactValue& b) { return *this = *this * b; }
    ExactValue inverse() const;                   // cyc part must be a root of unity

    // Defined only when half-exponents agree (or one side is zero).
    friend ExactValue add(const ExactValue& a, const ExactValue& b);

    bool operator==(const ExactValue& b) const;
    bool operator!=(const ExactValue& b) const { return !(*this == b); }
    std::string str() const;

private:
    long q_ = 0;
    long half_ = 0;
    CycInt cyc_;
    void canonicalize();
};

} // namespace ellchar
