#include "ellchar/padic.hpp"

#include <algorithm>
#include <sstream>

namespace ellchar {

namespace {

unsigned long long mulmod(unsigned long long a, unsigned long long b, unsigned long long m) {
    return (unsigned long long)((unsigned __int128)a * b % m);
}

unsigned long long powmod(unsigned long long b, unsigned long long e, unsigned long long m) {
    unsigned long long r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

// inverse of a unit mod p^k by Newton lifting from mod p
unsigned long long invmodpk(unsigned long long a, long p, int k) {
    unsigned long long pk = 1;
    for (int i = 0; i < k; ++i) pk *= (unsigned long long)p;
    unsigned long long x = powmod(a % p, (unsigned long long)(p - 2), (unsigned long long)p);
    unsigned long long mod = (unsigned long long)p;
    while (mod < pk) {
        unsigned __int128 m2 = (unsigned __int128)mod * mod;
        mod = (m2 > pk) ? pk : (unsigned long long)m2;
        // x <- x (2 - a x) mod `mod`
        unsigned long long ax = mulmod(a % mod, x % mod, mod);
        unsigned long long t = (2 % mod + mod - ax % mod) % mod;
        x = mulmod(x % mod, t, mod);
    }
    return x % pk;
}

} // namespace

unsigned long long powu(unsigned long long b, unsigned long long e) {
    unsigned long long r = 1;
    while (e--) r *= b;
    return r;
}

unsigned long long ppow(long p, int k) {
    unsigned long long r = 1;
    for (int i = 0; i < k; ++i) {
        if (r > (~0ULL) / (unsigned long long)p) throw Error("ppow overflow");
        r *= (unsigned long long)p;
    }
    return r;
}

bool isPrime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

int legendre(long long a, long p) {
    long long r = a % p;
    if (r < 0) r += p;
    if (r == 0) return 0;
    unsigned long long e = powmod((unsigned long long)r, (unsigned long long)((p - 1) / 2), (unsigned long long)p);
    return e == 1 ? 1 : -1;
}

PrimeConfig::PrimeConfig(long p_, int precision_, int ell_, bool strict_)
    : p(p_), precision(precision_), ell(ell_), strict(strict_) {
    if (!isPrime(p)) throw ConfigError("p must be prime");
    if (p == 2) throw ConfigError("p = 2 is out of scope");
    if (!isPrime(ell)) throw ConfigError("ell must be prime");
    if (precision < 8) throw ConfigError("precision must be at least 8");
    if (strict && ell != 2 && p <= 2 * ell)
        throw ConfigError("odd ell requires residual characteristic p > 2*ell");
    ppow(p, precision); // overflow guard
}

void PadicNumber::normalize() {
    if (zero_) return;
    unsigned long long pk = ppow(p_, digits_);
    u_ %= pk;
    while (digits_ > 0 && u_ % (unsigned long long)p_ == 0 && u_ != 0) {
        // absorb stray p factors into the valuation, losing a digit of precision
        u_ /= (unsigned long long)p_;
        v_ += 1;
        digits_ -= 1;
    }
    if (u_ == 0) {
        // zero to the working precision: treat as exact zero
        zero_ = true;
        v_ = 0;
        u_ = 0;
    } else if (digits_ < 1) {
        throw PrecisionError("p-adic precision exhausted");
    }
}

PadicNumber PadicNumber::zero(long p, int digits) {
    PadicNumber x;
    x.p_ = p;
    x.digits_ = digits;
    x.zero_ = true;
    return x;
}

PadicNumber PadicNumber::fromInteger(long p, int digits, long long n) {
    PadicNumber x;
    x.p_ = p;
    x.digits_ = digits;
    if (n == 0) return x;
    x.zero_ = false;
    x.v_ = 0;
    bool neg = n < 0;
    unsigned long long a = neg ? (unsigned long long)(-n) : (unsigned long long)n;
    while (a % (unsigned long long)p == 0) {
        a /= (unsigned long long)p;
        x.v_ += 1;
    }
    unsigned long long pk = ppow(p, digits);
    a %= pk;
    if (neg) a = (pk - a) % pk;
    x.u_ = a;
    x.normalize();
    return x;
}

PadicNumber PadicNumber::fromUnit(long p, int digits, long v, unsigned long long unit) {
    PadicNumber x;
    x.p_ = p;
    x.digits_ = digits;
    x.v_ = v;
    x.u_ = unit % ppow(p, digits);
    x.zero_ = false;
    if (x.u_ % (unsigned long long)p == 0)
        throw DomainError("fromUnit: unit part divisible by p");
    return x;
}

long PadicNumber::valuation() const {
    if (zero_) throw DomainError("valuation of zero");
    return v_;
}

unsigned long long PadicNumber::unit() const {
    if (zero_) throw DomainError("unit of zero");
    return u_;
}

long long PadicNumber::residue() const {
    if (zero_) throw DomainError("residue of zero");
    return (long long)(u_ % (unsigned long long)p_);
}

std::vector<long> PadicNumber::unitDigits() const {
    std::vector<long> d;
    unsigned long long u = zero_ ? 0 : u_;
    for (int i = 0; i < digits_; ++i) {
        d.push_back((long)(u % (unsigned long long)p_));
        u /= (unsigned long long)p_;
    }
    return d;
}

PadicNumber PadicNumber::withDigits(int digits) const {
    if (digits >= digits_) return *this;
    if (digits < 1) throw PrecisionError("withDigits: no precision left");
    PadicNumber x = *this;
    x.digits_ = digits;
    if (!x.zero_) x.u_ %= ppow(p_, digits);
    x.normalize();
    return x;
}

PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
    if (a.zero_) return b;
    if (b.zero_) return a;
    if (a.p_ != b.p_) throw DomainError("mixed primes");
    long p = a.p_;
    long v = std::min(a.v_, b.v_);
    // shared absolute precision, expressed in digits above p^v;
    // k <= max(digits) always since the shifted term saturates
    long k = std::min(a.v_ - v + a.digits_, b.v_ - v + b.digits_);
    if (k < 1) throw PrecisionError("p-adic addition: no shared precision");
    unsigned long long pk = ppow(p, (int)k);
    long sa = a.v_ - v, sb = b.v_ - v;
    unsigned long long ua = sa >= k ? 0 : mulmod(a.u_ % pk, ppow(p, (int)sa), pk);
    unsigned long long ub = sb >= k ? 0 : mulmod(b.u_ % pk, ppow(p, (int)sb), pk);
    PadicNumber r;
    r.p_ = p;
    r.digits_ = (int)k;
    r.v_ = v;
    r.u_ = (ua + ub) % pk;
    r.zero_ = false;
    r.normalize();
    return r;
}

PadicNumber operator-(const PadicNumber& a) {
    if (a.zero_) return a;
    PadicNumber r = a;
    unsigned long long pk = ppow(a.p_, a.digits_);
    r.u_ = (pk - a.u_ % pk) % pk;
    return r;
}

PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return a + (-b); }

PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
    if (a.zero_ || b.zero_) return PadicNumber::zero(a.p_ ? a.p_ : b.p_, std::max(a.digits_, b.digits_));
    if (a.p_ != b.p_) throw DomainError("mixed primes");
    int k = std::min(a.digits_, b.digits_);
    unsigned long long pk = ppow(a.p_, k);
    PadicNumber r;
    r.p_ = a.p_;
    r.digits_ = k;
    r.v_ = a.v_ + b.v_;
    r.u_ = mulmod(a.u_ % pk, b.u_ % pk, pk);
    r.zero_ = false;
    return r;
}

PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) {
    if (b.zero_) throw DomainError("division by zero");
    if (a.zero_) return a;
    if (a.p_ != b.p_) throw DomainError("mixed primes");
    int k = std::min(a.digits_, b.digits_);
    unsigned long long pk = ppow(a.p_, k);
    PadicNumber r;
    r.p_ = a.p_;
    r.digits_ = k;
    r.v_ = a.v_ - b.v_;
    r.u_ = mulmod(a.u_ % pk, invmodpk(b.u_ % pk, a.p_, k), pk);
    r.zero_ = false;
    return r;
}

PadicNumber PadicNumber::pow(long long e) const {
    if (zero_) {
        if (e <= 0) throw DomainError("pow of zero with e <= 0");
        return *this;
    }
    if (e < 0) {
        PadicNumber one = PadicNumber::fromInteger(p_, digits_, 1);
        return (one / *this).pow(-e);
    }
    PadicNumber r = PadicNumber::fromInteger(p_, digits_, 1);
    PadicNumber b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

bool PadicNumber::operator==(const PadicNumber& b) const {
    if (zero_ || b.zero_) return zero_ == b.zero_;
    if (p_ != b.p_ || v_ != b.v_) return false;
    int k = std::min(digits_, b.digits_);
    unsigned long long pk = ppow(p_, k);
    return u_ % pk == b.u_ % pk;
}

std::string PadicNumber::str() const {
    if (zero_) return "0";
    std::ostringstream os;
    os << u_;
    if (v_ != 0) os << "*" << p_ << "^" << v_;
    os << " (mod " << p_ << "^" << (v_ + digits_) << ")";
    return os.str();
}

bool isSquare(const PadicNumber& x) {
    if (x.isZero()) throw DomainError("isSquare of zero");
    if (x.valuation() % 2 != 0) return false;
    return legendre(x.residue(), x.p()) == 1;
}

PadicNumber sqrtHensel(const PadicNumber& x) {
    if (!isSquare(x)) throw DomainError("sqrtHensel: not a square");
    long p = x.p();
    // Tonelli-Shanks mod p, then Newton y <- (y + x'/y)/2
    long long a = x.residue();
    long long r0 = -1;
    for (long long y = 1; y <= (p - 1) / 2; ++y) {
        if ((y * y) % p == a) { r0 = y; break; }
    }
    if (r0 < 0) throw Error("sqrtHensel: residue root not found");
    int k = x.digits();
    PadicNumber xu = PadicNumber::fromUnit(p, k, 0, x.unit());
    PadicNumber y = PadicNumber::fromInteger(p, k, r0);
    PadicNumber half = PadicNumber::fromInteger(p, k, 1) / PadicNumber::fromInteger(p, k, 2);
    for (int i = 0; i < k + 2; ++i) {
        y = (y + xu / y) * half;
    }
    // tie-break: unit residue lifted from {1, ..., (p-1)/2}
    if (y.residue() > (p - 1) / 2) y = -y;
    return PadicNumber::fromUnit(p, k, x.valuation() / 2, y.unit());
}

PadicNumber teichmuller(long p, int digits, long r) {
    long rr = r % p;
    if (rr < 0) rr += p;
    if (rr == 0) throw DomainError("teichmuller of zero residue");
    PadicNumber x = PadicNumber::fromInteger(p, digits, rr);
    for (int i = 0; i <= digits + 1; ++i) x = x.pow(p);
    return x;
}

} // namespace ellchar
