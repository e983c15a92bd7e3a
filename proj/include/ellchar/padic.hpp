#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ellchar/errors.hpp"

namespace ellchar {

// Run parameters for the base field F = Q_p.  precision is the number of
// stored p-digits of unit parts; ell is the rank prime of GL(ell, F).
struct PrimeConfig {
    long p = 3;
    int precision = 12;
    int ell = 2;
    bool strict = true;

    PrimeConfig() = default;
    PrimeConfig(long p_, int precision_, int ell_, bool strict_ = true);
    long q() const { return p; } // residue cardinality of F
};

bool isPrime(long n);
int legendre(long long a, long p); // (a|p) in {-1, 0, 1}

// Element of Q_p: zero, or p^v * u with u a unit known to `digits` p-digits.
// Arithmetic tracks effective precision; a nonzero result whose unit part is
// not determined to at least one digit raises PrecisionError.
class PadicNumber {
public:
    PadicNumber() = default; // zero at p = 0 (adopts partner's p in ops)
    static PadicNumber zero(long p, int digits);
    static PadicNumber fromInteger(long p, int digits, long long n);
    static PadicNumber fromUnit(long p, int digits, long v, unsigned long long unit);

    bool isZero() const { return zero_; }
    long p() const { return p_; }
    long valuation() const;             // throws on zero
    unsigned long long unit() const;    // unit part mod p^digits
    int digits() const { return digits_; }
    long long residue() const;          // unit mod p
    std::vector<long> unitDigits() const;

    PadicNumber withDigits(int digits) const; // truncate precision

    friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b);
    friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b);
    friend PadicNumber operator-(const PadicNumber& a);
    friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b);
    friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b);
    PadicNumber pow(long long e) const;

    // Equality to the shared known precision.
    bool operator==(const PadicNumber& b) const;
    bool operator!=(const PadicNumber& b) const { return !(*this == b); }

    std::string str() const;

private:
    long p_ = 0;
    int digits_ = 0;
    long v_ = 0;
    unsigned long long u_ = 0;
    bool zero_ = true;
    void normalize();
};

bool isSquare(const PadicNumber& x);               // x != 0
PadicNumber sqrtHensel(const PadicNumber& x);      // residue root in {1..(p-1)/2}
PadicNumber teichmuller(long p, int digits, long r); // r != 0 mod p

// p^k mod 2^64-safe helper for small k
unsigned long long powu(unsigned long long b, unsigned long long e);
unsigned long long ppow(long p, int k);

} // namespace ellchar
