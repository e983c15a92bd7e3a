#include "ellchar/extension.hpp"

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

unsigned long long invmodpk(unsigned long long a, long p, unsigned long long pk) {
    unsigned long long x = powmod(a % p, (unsigned long long)(p - 2), (unsigned long long)p);
    unsigned long long mod = (unsigned long long)p;
    while (mod < pk) {
        unsigned __int128 m2 = (unsigned __int128)mod * mod;
        mod = (m2 > pk) ? pk : (unsigned long long)m2;
        unsigned long long ax = mulmod(a % mod, x % mod, mod);
        x = mulmod(x % mod, (2 % mod + mod - ax) % mod, mod);
    }
    return x % pk;
}

int vp(unsigned long long x, long p, int cap) {
    if (x == 0) return cap;
    int v = 0;
    while (v < cap && x % (unsigned long long)p == 0) { x /= (unsigned long long)p; ++v; }
    return v;
}

long primitiveRoot(long p) {
    std::vector<long> fac;
    long m = p - 1;
    for (long d = 2; d * d <= m; ++d)
        if (m % d == 0) { fac.push_back(d); while (m % d == 0) m /= d; }
    if (m > 1) fac.push_back(m);
    for (long g = 2; g < p; ++g) {
        bool ok = true;
        for (long f : fac)
            if (powmod(g, (unsigned long long)((p - 1) / f), (unsigned long long)p) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw Error("no primitive root found");
}

using Poly = std::vector<long>; // coeffs mod p, constant first

Poly polyMulModP(const Poly& a, const Poly& b, const Poly& g, long p) {
    std::vector<long> c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = (long)((c[i + j] + (long long)a[i] * b[j]) % p);
    size_t d = g.size() - 1;
    for (size_t k = c.size(); k-- > d;) {
        long lead = c[k];
        if (lead == 0) continue;
        for (size_t j = 0; j < g.size(); ++j) {
            long long t = c[k - d + j] - (long long)lead * g[j];
            c[k - d + j] = (long)((t % p + p) % p);
        }
        c[k] = 0;
    }
    c.resize(d);
    return c;
}

Poly polyPowP(const Poly& base, unsigned long long e, const Poly& g, long p) {
    Poly r(g.size() - 1, 0);
    r[0] = 1;
    Poly b = base;
    while (e) {
        if (e & 1) r = polyMulModP(r, b, g, p);
        b = polyMulModP(b, b, g, p);
        e >>= 1;
    }
    return r;
}

bool isIrreduciblePrimeDeg(const Poly& g, long p, int ell) {
    // monic degree ell, ell prime: irreducible iff x^{p^ell} = x and x^p != x mod g
    Poly x(g.size() - 1, 0);
    x[1] = 1;
    Poly fp = x;
    for (int i = 0; i < ell; ++i) fp = polyPowP(fp, (unsigned long long)p, g, p);
    if (fp != x) return false;
    return polyPowP(x, (unsigned long long)p, g, p) != x;
}

} // namespace

const char* kindName(ExtKind k) {
    switch (k) {
        case ExtKind::UnramQuad: return "unram-quad";
        case ExtKind::RamQuad: return "ram-quad";
        case ExtKind::UnramL: return "unram-ell";
        case ExtKind::RamGaloisL: return "ram-galois-ell";
        case ExtKind::RamNonGaloisL: return "ram-nongalois-ell";
    }
    return "?";
}

ExtKind kindFromName(const std::string& s) {
    for (ExtKind k : {ExtKind::UnramQuad, ExtKind::RamQuad, ExtKind::UnramL,
                      ExtKind::RamGaloisL, ExtKind::RamNonGaloisL})
        if (s == kindName(k)) return k;
    throw ConfigError("unknown extension kind: " + s);
}

void TameExtension::normalize(ExtElement& a) const {
    if (a.zero_) return;
    long p = cfg_.p;
    if (a.digits_ < 1) throw PrecisionError("extension element: precision exhausted");
    unsigned long long pk = ppow(p, a.digits_);
    bool allZero = true;
    for (auto& c : a.c_) { c %= pk; if (c != 0) allZero = false; }
    if (allZero) { a = ExtElement(); return; }
    for (;;) {
        bool allDiv = true;
        for (auto c : a.c_)
            if (c % (unsigned long long)p != 0) { allDiv = false; break; }
        if (!allDiv) break;
        for (auto& c : a.c_) c /= (unsigned long long)p;
        a.pPow_ += 1;
        a.digits_ -= 1;
        if (a.digits_ < 1) throw PrecisionError("extension element: precision exhausted");
    }
}

ExtElement TameExtension::one() const { return fromIntCoeffs(0, {1}); }

ExtElement TameExtension::fromPadic(const PadicNumber& x) const {
    if (x.isZero()) return ExtElement();
    ExtElement a;
    a.zero_ = false;
    a.pPow_ = x.valuation();
    a.digits_ = x.digits();
    a.c_.assign(d_, 0);
    a.c_[0] = x.unit();
    return a;
}

ExtElement TameExtension::fromIntCoeffs(long pPow, const std::vector<long long>& coeffs) const {
    if ((int)coeffs.size() > d_) throw DomainError("too many coefficients");
    ExtElement a;
    a.zero_ = false;
    a.pPow_ = pPow;
    a.digits_ = cfg_.precision;
    a.c_.assign(d_, 0);
    for (size_t i = 0; i < coeffs.size(); ++i) {
        long long v = coeffs[i] % (long long)pN_;
        if (v < 0) v += (long long)pN_;
        a.c_[i] = (unsigned long long)v;
    }
    normalize(a);
    return a;
}

ExtElement TameExtension::uniformizer() const {
    if (e_ > 1) return adjoinedRoot();
    return fromPadic(PadicNumber::fromInteger(cfg_.p, cfg_.precision, cfg_.p));
}

ExtElement TameExtension::adjoinedRoot() const { return fromIntCoeffs(0, {0, 1}); }

const PadicNumber& TameExtension::delta() const {
    if (kind_ == ExtKind::UnramL) throw DomainError("unramified degree-ell extension has no Delta");
    return delta_;
}

std::vector<PadicNumber> TameExtension::definingPoly() const {
    // g(x) = x^d - sum_i red_[i] x^i; return the monic lower coefficients
    std::vector<PadicNumber> g;
    for (int i = 0; i < d_; ++i) {
        unsigned long long c = (pN_ - g_[i] % pN_) % pN_;
        if (c == 0) g.push_back(PadicNumber::zero(cfg_.p, cfg_.precision));
        else {
            int v = vp(c, cfg_.p, cfg_.precision);
            g.push_back(PadicNumber::fromUnit(cfg_.p, cfg_.precision - v, v, c / ppow(cfg_.p, v)));
        }
    }
    return g;
}

ExtElement TameExtension::add(const ExtElement& a, const ExtElement& b) const {
    if (a.zero_) return b;
    if (b.zero_) return a;
    long k0 = std::min(a.pPow_, b.pPow_);
    long k = std::min(a.pPow_ + a.digits_, b.pPow_ + b.digits_) - k0;
    if (k < 1) throw PrecisionError("extension addition: no shared precision");
    unsigned long long pk = ppow(cfg_.p, (int)k);
    ExtElement r;
    r.zero_ = false;
    r.pPow_ = k0;
    r.digits_ = (int)k;
    r.c_.assign(d_, 0);
    long sa = a.pPow_ - k0, sb = b.pPow_ - k0;
    unsigned long long fa = sa >= k ? 0 : ppow(cfg_.p, (int)sa);
    unsigned long long fb = sb >= k ? 0 : ppow(cfg_.p, (int)sb);
    for (int i = 0; i < d_; ++i) {
        unsigned long long x = fa ? mulmod(a.c_[i] % pk, fa, pk) : 0;
        unsigned long long y = fb ? mulmod(b.c_[i] % pk, fb, pk) : 0;
        r.c_[i] = (x + y) % pk;
    }
    normalize(r);
    return r;
}

ExtElement TameExtension::neg(const ExtElement& a) const {
    if (a.zero_) return a;
    ExtElement r = a;
    unsigned long long pk = ppow(cfg_.p, a.digits_);
    for (auto& c : r.c_) c = (pk - c % pk) % pk;
    normalize(r);
    return r;
}

ExtElement TameExtension::sub(const ExtElement& a, const ExtElement& b) const {
    return add(a, neg(b));
}

std::vector<unsigned long long> TameExtension::polyMulRed(
    const std::vector<unsigned long long>& a, const std::vector<unsigned long long>& b,
    unsigned long long mod) const {
    std::vector<unsigned long long> c(2 * d_ - 1, 0);
    for (int i = 0; i < d_; ++i) {
        if (a[i] % mod == 0) continue;
        for (int j = 0; j < d_; ++j) {
            if (b[j] % mod == 0) continue;
            c[i + j] = (c[i + j] + mulmod(a[i] % mod, b[j] % mod, mod)) % mod;
        }
    }
    for (int k = 2 * d_ - 2; k >= d_; --k) {
        unsigned long long lead = c[k] % mod;
        if (lead == 0) continue;
        const auto& red = xred_[k - d_]; // x^k = sum red[j] x^j
        for (int j = 0; j < d_; ++j)
            c[j] = (c[j] + mulmod(lead, red[j] % mod, mod)) % mod;
        c[k] = 0;
    }
    c.resize(d_);
    return c;
}

ExtElement TameExtension::mul(const ExtElement& a, const ExtElement& b) const {
    if (a.zero_ || b.zero_) return ExtElement();
    int k = std::min(a.digits_, b.digits_);
    unsigned long long pk = ppow(cfg_.p, k);
    ExtElement r;
    r.zero_ = false;
    r.pPow_ = a.pPow_ + b.pPow_;
    r.digits_ = k;
    r.c_ = polyMulRed(a.c_, b.c_, pk);
    normalize(r);
    return r;
}

ExtElement TameExtension::scalarMul(const PadicNumber& s, const ExtElement& a) const {
    if (s.isZero() || a.zero_) return ExtElement();
    int k = std::min(a.digits_, s.digits());
    unsigned long long pk = ppow(cfg_.p, k);
    ExtElement r = a;
    r.digits_ = k;
    r.pPow_ += s.valuation();
    for (auto& c : r.c_) c = mulmod(c % pk, s.unit() % pk, pk);
    normalize(r);
    return r;
}

ExtElement TameExtension::scalarDiv(const ExtElement& a, const PadicNumber& s) const {
    if (s.isZero()) throw DomainError("scalarDiv by zero");
    if (a.zero_) return a;
    int k = std::min(a.digits_, s.digits());
    unsigned long long pk = ppow(cfg_.p, k);
    unsigned long long si = invmodpk(s.unit() % pk, cfg_.p, pk);
    ExtElement r = a;
    r.digits_ = k;
    r.pPow_ -= s.valuation();
    for (auto& c : r.c_) c = mulmod(c % pk, si, pk);
    normalize(r);
    return r;
}

long TameExtension::valuation(const ExtElement& a) const {
    if (a.zero_) throw DomainError("valuation of zero");
    long best = (long)e_ * (a.digits_ + 2);
    for (int i = 0; i < d_; ++i) {
        if (a.c_[i] == 0) continue;
        long v = (long)e_ * vp(a.c_[i], cfg_.p, a.digits_) + (e_ > 1 ? i : 0);
        best = std::min(best, v);
    }
    return (long)e_ * a.pPow_ + best;
}

bool TameExtension::inFStar(const ExtElement& a) const {
    if (a.zero_) return false;
    unsigned long long pk = ppow(cfg_.p, a.digits_);
    for (int i = 1; i < d_; ++i)
        if (a.c_[i] % pk != 0) return false;
    return true;
}

PadicNumber TameExtension::constantPart(const ExtElement& a) const {
    if (!inFStar(a)) throw DomainError("element not in F*");
    return coeffPadic(a, 0);
}

PadicNumber TameExtension::coeffPadic(const ExtElement& a, int i) const {
    if (a.zero_) return PadicNumber::zero(cfg_.p, cfg_.precision);
    unsigned long long pk = ppow(cfg_.p, a.digits_);
    unsigned long long c = a.c_[i] % pk;
    if (c == 0) return PadicNumber::zero(cfg_.p, a.digits_);
    int v = vp(c, cfg_.p, a.digits_);
    return PadicNumber::fromUnit(cfg_.p, a.digits_ - v, a.pPow_ + v, c / ppow(cfg_.p, v));
}

ExtElement TameExtension::applyMatrix(const std::vector<unsigned long long>& mat,
                                      const ExtElement& a) const {
    unsigned long long pk = ppow(cfg_.p, a.digits_);
    ExtElement r;
    r.zero_ = false;
    r.pPow_ = a.pPow_;
    r.digits_ = a.digits_;
    r.c_.assign(d_, 0);
    for (int j = 0; j < d_; ++j) {
        unsigned long long aj = a.c_[j] % pk;
        if (aj == 0) continue;
        for (int i = 0; i < d_; ++i)
            r.c_[i] = (r.c_[i] + mulmod(mat[(size_t)j * d_ + i] % pk, aj, pk)) % pk;
    }
    normalize(r);
    return r;
}

ExtElement TameExtension::galoisApply(int k, const ExtElement& a) const {
    if (!isGalois()) {
        if (k == 0) return a;
        throw DomainError("non-Galois extension has no automorphisms");
    }
    int kk = ((k % d_) + d_) % d_;
    if (kk == 0 || a.zero_) return a;
    return applyMatrix(galoisMat_[kk], a);
}

ExtElement TameExtension::conjQuad(const ExtElement& a) const {
    if (d_ != 2) throw DomainError("conjQuad needs a quadratic extension");
    return galoisApply(1, a);
}

ExtElement TameExtension::pow(const ExtElement& a, long long e) const {
    if (e < 0) return pow(inv(a), -e);
    ExtElement r = one(), b = a;
    while (e) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

ExtElement TameExtension::inv(const ExtElement& a) const {
    if (a.zero_) throw DomainError("inverse of zero");
    ExtElement b = a;
    int s = 0;
    long t = valuation(b) % e_;
    if (t < 0) t += e_;
    if (t != 0) {
        s = e_ - (int)t;
        b = mul(b, pow(adjoinedRoot(), s));
    }
    long m = b.pPow_;
    ExtElement c = b;
    c.pPow_ = 0; // c is a unit of o_E
    int k = c.digits_;
    long p = cfg_.p;

    // first approximation: solve M_c y = e0 over F_p
    std::vector<std::vector<long>> M(d_, std::vector<long>(d_ + 1, 0));
    {
        ExtElement basis = one();
        for (int j = 0; j < d_; ++j) {
            ExtElement col = mul(c, basis);
            for (int i = 0; i < d_; ++i)
                M[i][j] = (col.pPow_ >= 1) ? 0 : (long)(col.c_[i] % (unsigned long long)p);
            basis = mul(basis, adjoinedRoot());
        }
        M[0][d_] = 1;
        for (int col = 0, row = 0; col < d_ && row < d_; ++col) {
            int pivot = -1;
            for (int i = row; i < d_; ++i)
                if (M[i][col] % p != 0) { pivot = i; break; }
            if (pivot < 0) throw DomainError("inverse: singular multiplication matrix");
            std::swap(M[pivot], M[row]);
            long inv0 = (long)powmod((unsigned long long)M[row][col], (unsigned long long)(p - 2),
                                     (unsigned long long)p);
            for (int j = col; j <= d_; ++j) M[row][j] = (long)(((long long)M[row][j] * inv0) % p);
            for (int i = 0; i < d_; ++i) {
                if (i == row || M[i][col] == 0) continue;
                long f = M[i][col];
                for (int j = col; j <= d_; ++j) {
                    long long v = M[i][j] - (long long)f * M[row][j];
                    M[i][j] = (long)((v % p + p) % p);
                }
            }
            ++row;
        }
    }
    std::vector<long long> y0(d_);
    for (int i = 0; i < d_; ++i) y0[i] = M[i][d_];
    ExtElement y = fromIntCoeffs(0, y0);
    y.digits_ = k;

    // Newton: y <- y (2 - c y), quadratic convergence
    ExtElement two = fromIntCoeffs(0, {2});
    int iter = 1;
    while ((1 << iter) < k + 2) ++iter;
    for (int i = 0; i <= iter; ++i)
        y = mul(y, sub(two, mul(c, y)));
    if (!eq(mul(c, y), one())) throw Error("inverse: Newton iteration failed");

    y.pPow_ -= m; // inv(b) = y p^{-m}
    if (s) y = mul(y, pow(adjoinedRoot(), s)); // inv(a) = inv(b) x^{s}
    return y;
}

ExtElement TameExtension::div(const ExtElement& a, const ExtElement& b) const {
    if (b.zero_) throw DomainError("division by zero");
    if (a.zero_) return a;
    return mul(a, inv(b));
}

bool TameExtension::eq(const ExtElement& a, const ExtElement& b) const {
    if (a.zero_ || b.zero_) return a.zero_ == b.zero_;
    return sub(a, b).isZero();
}

// ---- norm, trace, characteristic polynomial ----

std::vector<PadicNumber> TameExtension::charPoly(const ExtElement& a) const {
    long p = cfg_.p;
    int k = a.zero_ ? cfg_.precision : a.digits_;
    if (a.zero_) {
        std::vector<PadicNumber> out(d_, PadicNumber::zero(p, k));
        return out;
    }
    ExtElement c = a;
    long m = a.pPow_;
    c.pPow_ = 0;

    std::vector<std::vector<PadicNumber>> Mp(d_, std::vector<PadicNumber>(d_));
    ExtElement basis = one();
    for (int j = 0; j < d_; ++j) {
        ExtElement col = mul(c, basis);
        for (int i = 0; i < d_; ++i) Mp[i][j] = coeffPadic(col, i);
        basis = mul(basis, adjoinedRoot());
    }

    auto matTrace = [&](const std::vector<std::vector<PadicNumber>>& X) {
        PadicNumber s = PadicNumber::zero(p, k);
        for (int i = 0; i < d_; ++i) s = s + X[i][i];
        return s;
    };
    auto matMul = [&](const std::vector<std::vector<PadicNumber>>& X,
                      const std::vector<std::vector<PadicNumber>>& Y) {
        std::vector<std::vector<PadicNumber>> Z(
            d_, std::vector<PadicNumber>(d_, PadicNumber::zero(p, k)));
        for (int i = 0; i < d_; ++i)
            for (int l = 0; l < d_; ++l) {
                if (X[i][l].isZero()) continue;
                for (int j = 0; j < d_; ++j) Z[i][j] = Z[i][j] + X[i][l] * Y[l][j];
            }
        return Z;
    };

    // power sums tr(M^j), then Newton's identities (p > d keeps j invertible)
    std::vector<PadicNumber> t(d_ + 1, PadicNumber::zero(p, k));
    std::vector<std::vector<PadicNumber>> Mj = Mp;
    t[1] = matTrace(Mj);
    for (int j = 2; j <= d_; ++j) {
        Mj = matMul(Mj, Mp);
        t[j] = matTrace(Mj);
    }
    std::vector<PadicNumber> ee(d_ + 1, PadicNumber::zero(p, k));
    ee[0] = PadicNumber::fromInteger(p, k, 1);
    for (int j = 1; j <= d_; ++j) {
        PadicNumber s = PadicNumber::zero(p, k);
        for (int i = 1; i <= j; ++i) {
            PadicNumber term = ee[j - i] * t[i];
            if (i % 2 == 0) term = -term;
            s = s + term;
        }
        ee[j] = s / PadicNumber::fromInteger(p, k, j);
    }

    // charpoly(x) = sum_i (-1)^{d-i} e_{d-i} x^i, scaled for the stripped p^m
    std::vector<PadicNumber> out(d_);
    for (int i = 0; i < d_; ++i) {
        PadicNumber ci = ee[d_ - i];
        if ((d_ - i) % 2 == 1) ci = -ci;
        if (!ci.isZero() && m != 0)
            ci = PadicNumber::fromUnit(p, ci.digits(), ci.valuation() + m * (d_ - i), ci.unit());
        out[i] = ci;
    }
    return out;
}

PadicNumber TameExtension::trace(const ExtElement& a) const {
    if (a.zero_) return PadicNumber::zero(cfg_.p, cfg_.precision);
    auto cp = charPoly(a);
    return -cp[d_ - 1];
}

PadicNumber TameExtension::norm(const ExtElement& a) const {
    if (a.zero_) return PadicNumber::zero(cfg_.p, cfg_.precision);
    auto cp = charPoly(a);
    PadicNumber n = cp[0];
    if (d_ % 2 == 1) n = -n;
    return n;
}

// ---- residue field ----

long TameExtension::resMul(long a, long b) const {
    long p = cfg_.p;
    if (f_ == 1) return (long)(((long long)a * b) % p);
    Poly pa(f_, 0), pb(f_, 0), g(f_ + 1, 0);
    long x = a;
    for (int i = 0; i < f_; ++i) { pa[i] = x % p; x /= p; }
    x = b;
    for (int i = 0; i < f_; ++i) { pb[i] = x % p; x /= p; }
    for (int i = 0; i < d_; ++i)
        g[i] = (long)(((long long)p - (long long)(g_[i] % (unsigned long long)p)) % p); // monic lower part
    g[f_] = 1;
    Poly c = polyMulModP(pa, pb, g, p);
    long enc = 0, w = 1;
    for (int i = 0; i < f_; ++i) { enc += c[i] * w; w *= p; }
    return enc;
}

long TameExtension::residueEncode(const ExtElement& unit) const {
    if (unit.zero_ || valuation(unit) != 0) throw DomainError("residueEncode: not a unit");
    long p = cfg_.p, enc = 0, w = 1;
    int upTo = (e_ == 1) ? d_ : 1;
    for (int i = 0; i < upTo; ++i) {
        enc += (long)(unit.c_[i] % (unsigned long long)p) * w;
        w *= p;
    }
    return enc;
}

int TameExtension::residueDlog(const ExtElement& unit) const {
    long enc = residueEncode(unit);
    int l = resLog_[enc];
    if (l < 0) throw DomainError("residueDlog: zero residue");
    return l;
}

ExtElement TameExtension::teichOfDlog(long k) const {
    long m = qE_ - 1;
    long kk = ((k % m) + m) % m;
    return teichPow_[kk];
}

ExtElement TameExtension::teichLift(const ExtElement& unit) const {
    return teichOfDlog(residueDlog(unit));
}

ExtElement TameExtension::frobResidue(const ExtElement& unit) const {
    return pow(unit, cfg_.p);
}

TameExtension::Decomposition TameExtension::decompose(const ExtElement& w) const {
    if (w.zero_) throw DomainError("decompose zero");
    long v = valuation(w);
    ExtElement u = div(w, pow(uniformizer(), v));
    long dl = residueDlog(u);
    ExtElement u1 = div(u, teichOfDlog(dl));
    return {v, dl, u1};
}

// ---- unit filtration ----

UnitLevel TameExtension::unitLevel(const ExtElement& w) const {
    if (w.zero_) throw DomainError("unitLevel of zero");
    UnitLevel out;
    long v = valuation(w);
    if (v % e_ != 0) return out; // valuation obstruction: not in F* U_E
    out.inFUnits = true;
    ExtElement u = w;
    u.pPow_ -= v / e_; // now a unit of o_E
    long p = cfg_.p;
    int cap = e_ * (u.digits_ - 1);
    std::vector<unsigned long long> witnesses;
    for (long r = 1; r < p; ++r) witnesses.push_back((unsigned long long)r);
    int curDigits = 1;
    int level = 0;
    while (level < cap) {
        int target = level + 1;
        int need = (target + e_ - 1) / e_;
        while (curDigits < need) {
            std::vector<unsigned long long> ext;
            unsigned long long step = ppow(p, curDigits);
            for (auto wit : witnesses)
                for (long dgt = 0; dgt < p; ++dgt)
                    ext.push_back(wit + (unsigned long long)dgt * step);
            witnesses.swap(ext);
            ++curDigits;
        }
        std::vector<unsigned long long> keep;
        for (auto a : witnesses) {
            ExtElement diff = sub(u, fromIntCoeffs(0, {(long long)a}));
            if (diff.isZero() || valuation(diff) >= target) keep.push_back(a);
        }
        if (keep.empty()) break;
        witnesses.swap(keep);
        ++level;
    }
    out.level = level;
    out.capped = (level >= cap);
    return out;
}

bool TameExtension::inFUk(const ExtElement& w, int k) const {
    UnitLevel ul = unitLevel(w);
    if (!ul.inFUnits) return false;
    return ul.level >= k;
}

std::optional<PadicNumber> TameExtension::fStarWitness(const ExtElement& w, int k) const {
    if (w.zero_) throw DomainError("fStarWitness of zero");
    long v = valuation(w);
    if (v % e_ != 0) return std::nullopt;
    ExtElement u = w;
    u.pPow_ -= v / e_;
    long p = cfg_.p;
    int kk = std::max(k, 1);
    int need = std::min((kk + e_ - 1) / e_, u.digits_ - 1);
    if (need < 1) need = 1;
    // digit-by-digit search; a valid witness's prefix satisfies
    // v(u - prefix) >= min(k, e * cur), so survivors are never lost
    std::vector<unsigned long long> witnesses;
    for (long r = 1; r < p; ++r) witnesses.push_back((unsigned long long)r);
    for (int cur = 1; cur <= need; ++cur) {
        if (cur > 1) {
            std::vector<unsigned long long> ext;
            unsigned long long step = ppow(p, cur - 1);
            for (auto wit : witnesses)
                for (long dgt = 0; dgt < p; ++dgt)
                    ext.push_back(wit + (unsigned long long)dgt * step);
            witnesses.swap(ext);
        }
        long bound = std::min<long>(kk, (long)e_ * cur);
        std::vector<unsigned long long> keep;
        for (auto a : witnesses) {
            ExtElement diff = sub(u, fromIntCoeffs(0, {(long long)a}));
            if (diff.isZero() || valuation(diff) >= bound) keep.push_back(a);
        }
        if (keep.empty()) return std::nullopt;
        witnesses.swap(keep);
    }
    for (auto a : witnesses) {
        ExtElement diff = sub(u, fromIntCoeffs(0, {(long long)a}));
        if (diff.isZero() || valuation(diff) >= kk)
            return PadicNumber::fromUnit(p, cfg_.precision, v / e_, a);
    }
    return std::nullopt;
}

bool TameExtension::inUk(const ExtElement& w, int k) const {
    if (w.zero_) return false;
    if (valuation(w) != 0) return false;
    ExtElement d = sub(w, one());
    return d.isZero() || valuation(d) >= k;
}


// ---- log and exp on principal units ----

ExtElement TameExtension::logU1(const ExtElement& w) const {
    ExtElement x = sub(w, one());
    if (x.isZero()) return ExtElement();
    if (valuation(x) < 1) throw DomainError("logU1: not a principal unit");
    long p = cfg_.p;
    int N = cfg_.precision;
    long vx = valuation(x);
    long Ax = (long)e_ * (x.pPow_ + x.digits_); // absolute v_E window of x
    long Amin = Ax;
    // v(x^k / k) = k v(x) - e vp(k); cutoff safely past the target window
    int K = 2 * e_ * N + 8;
    ExtElement term = x, acc = x;
    long vfac = 0;
    for (int k = 2; k <= K; ++k) {
        term = mul(term, x);
        long vk = 0;
        for (long kk = k; kk % p == 0; kk /= p) ++vk;
        vfac = vk; // vp(k), not cumulative for log
        long trueV = (long)k * vx - (long)e_ * vfac;
        long Ak = Ax - (long)e_ * vfac;
        if (trueV < Amin) Amin = std::min(Amin, Ak);
        ExtElement t = scalarDiv(term, PadicNumber::fromInteger(p, N, k));
        if (k % 2 == 0) t = neg(t);
        if (!t.isZero() && valuation(t) <= e_ * N) acc = add(acc, t);
    }
    ExtElement out = acc;
    // re-claim only the digits actually guaranteed by the dropped tail
    if (!out.isZero()) {
        long coeffDigits = Amin / e_ - out.pPow_;
        if (coeffDigits < 1) throw PrecisionError("logU1: precision exhausted");
        if (coeffDigits < out.digits_) {
            out.digits_ = (int)coeffDigits;
            normalize(out);
        }
    }
    return out;
}

ExtElement TameExtension::expSmall(const ExtElement& x) const {
    if (x.isZero()) return one();
    // convergence needs v(x) > e/(p-1)
    if (valuation(x) * (cfg_.p - 1) <= e_)
        throw DomainError("expSmall: valuation too small for convergence");
    long p = cfg_.p;
    int N = cfg_.precision;
    long vx = valuation(x);
    long Ax = (long)e_ * (x.pPow_ + x.digits_);
    long Amin = Ax;
    // v(x^k / k!) >= k (v(x) - e/(p-1)); cutoff scales with p-1
    int K = (e_ * N + 2) * (int)(p - 1) + 4;
    ExtElement term = x, acc = add(one(), x);
    long vfact = 0;
    for (int k = 2; k <= K; ++k) {
        term = mul(term, x);
        long vk = 0;
        for (long kk = k; kk % p == 0; kk /= p) ++vk;
        vfact += vk;
        long trueV = (long)k * vx - (long)e_ * vfact;
        long Ak = Ax - (long)e_ * vfact;
        if (trueV < Amin) Amin = std::min(Amin, Ak);
        term = scalarDiv(term, PadicNumber::fromInteger(p, N, k));
        if (!term.isZero() && valuation(term) <= e_ * N) acc = add(acc, term);
    }
    ExtElement out = acc;
    if (!out.isZero()) {
        long coeffDigits = Amin / e_ - out.pPow_;
        if (coeffDigits < 1) throw PrecisionError("expSmall: precision exhausted");
        if (coeffDigits < out.digits_) {
            out.digits_ = (int)coeffDigits;
            normalize(out);
        }
    }
    return out;
}

std::string TameExtension::str(const ExtElement& a) const {
    if (a.zero_) return "0";
    std::ostringstream os;
    os << "p^" << a.pPow_ << "*(";
    for (int i = 0; i < d_; ++i) {
        if (i) os << " + ";
        os << a.c_[i];
        if (i == 1) os << "*x";
        if (i > 1) os << "*x^" << i;
    }
    os << ") [" << a.digits_ << " digits]";
    return os.str();
}

// ---- construction ----

void TameExtension::buildResidueTables() {
    long p = cfg_.p;
    int N = cfg_.precision;
    long q = qE_;
    resLog_.assign(q, -1);
    long gen = 0;
    if (f_ == 1) {
        gen = primitiveRoot(p);
    } else {
        std::vector<long> fac;
        long m = q - 1;
        for (long dd = 2; dd * dd <= m; ++dd)
            if (m % dd == 0) { fac.push_back(dd); while (m % dd == 0) m /= dd; }
        if (m > 1) fac.push_back(m);
        for (long cand = 2; cand < q && gen == 0; ++cand) {
            bool ok = true;
            for (long fct : fac) {
                long e = (q - 1) / fct, acc = 1, b = cand, ee = e;
                while (ee) {
                    if (ee & 1) acc = resMul(acc, b);
                    b = resMul(b, b);
                    ee >>= 1;
                }
                if (acc == 1) { ok = false; break; }
            }
            if (ok) gen = cand;
        }
        if (gen == 0) throw Error("no residue generator found");
    }
    resGenEnc_ = gen;
    long acc = 1;
    for (long k = 0; k < q - 1; ++k) {
        if (resLog_[acc] != -1) throw Error("residue generator has small order");
        resLog_[acc] = (int)k;
        acc = resMul(acc, gen);
    }
    ExtElement omega;
    if (f_ == 1) {
        omega = fromPadic(teichmuller(p, N, gen));
    } else {
        std::vector<long long> coeffs;
        long x = gen;
        for (int i = 0; i < f_; ++i) { coeffs.push_back(x % p); x /= p; }
        omega = fromIntCoeffs(0, coeffs);
        for (int i = 0; i <= N + 1; ++i) omega = pow(omega, q);
    }
    if (!eq(pow(omega, q - 1), one())) throw Error("Teichmuller lift failed");
    teichPow_.resize(q - 1);
    teichPow_[0] = one();
    for (long k = 1; k < q - 1; ++k) teichPow_[k] = mul(teichPow_[k - 1], omega);
}

TameExtension TameExtension::build(const PrimeConfig& cfg, ExtKind kind,
                                   std::optional<PadicNumber> delta) {
    TameExtension E;
    E.cfg_ = cfg;
    E.kind_ = kind;
    long p = cfg.p;
    int N = cfg.precision;
    E.pN_ = ppow(p, N);

    // normalize Delta to valuation 1 (ramified, mod d-th power scaling of p)
    // or to a nonsquare unit (unramified quadratic)
    auto takeRamDelta = [&](int dd) -> PadicNumber {
        if (!delta) throw ConfigError("this extension kind requires Delta");
        PadicNumber D = *delta;
        if (D.isZero()) throw ConfigError("Delta must be nonzero");
        long v = D.valuation();
        if ((v - 1) % dd != 0)
            throw ConfigError("Delta valuation incompatible with a degree-" + std::to_string(dd) +
                              " Eisenstein polynomial");
        if (v != 1) D = PadicNumber::fromUnit(p, D.digits(), 1, D.unit());
        return D;
    };

    switch (kind) {
        case ExtKind::UnramQuad: {
            E.d_ = 2; E.e_ = 1; E.f_ = 2;
            if (delta) {
                PadicNumber D = *delta;
                if (D.isZero() || D.valuation() % 2 != 0)
                    throw ConfigError("unramified quadratic kind needs an even-valuation Delta");
                if (D.valuation() != 0) D = PadicNumber::fromUnit(p, D.digits(), 0, D.unit());
                if (legendre(D.residue(), p) != -1)
                    throw ConfigError("unramified quadratic kind needs a nonsquare unit Delta");
                E.delta_ = D;
            } else {
                long ns = 2;
                while (legendre(ns, p) != -1) ++ns;
                E.delta_ = PadicNumber::fromInteger(p, N, ns);
            }
            E.g_.assign(2, 0);
            E.g_[0] = E.delta_.unit() % E.pN_; // x^2 = Delta
            break;
        }
        case ExtKind::RamQuad: {
            E.d_ = 2; E.e_ = 2; E.f_ = 1;
            E.delta_ = takeRamDelta(2);
            E.g_.assign(2, 0);
            E.g_[0] = mulmod(E.delta_.unit() % E.pN_, (unsigned long long)p, E.pN_);
            break;
        }
        case ExtKind::UnramL: {
            int ell = cfg.ell;
            if (ell == 2) throw ConfigError("UnramL expects odd ell in PrimeConfig");
            E.d_ = ell; E.e_ = 1; E.f_ = ell;
            Poly g(ell + 1, 0);
            g[ell] = 1;
            bool found = false;
            for (unsigned long long code = 1; code < ppow(p, ell) && !found; ++code) {
                unsigned long long x = code;
                for (int i = 0; i < ell; ++i) { g[i] = (long)(x % (unsigned long long)p); x /= (unsigned long long)p; }
                if (g[0] == 0) continue;
                if (isIrreduciblePrimeDeg(g, p, ell)) found = true;
            }
            if (!found) throw Error("no irreducible polynomial found");
            E.g_.assign(ell, 0);
            for (int i = 0; i < ell; ++i)
                E.g_[i] = (E.pN_ - (unsigned long long)g[i]) % E.pN_; // x^ell = -(lower part)
            break;
        }
        case ExtKind::RamGaloisL:
        case ExtKind::RamNonGaloisL: {
            int ell = cfg.ell;
            if (ell == 2) throw ConfigError("degree-ell kinds expect odd ell");
            bool divides = ((p - 1) % ell == 0);
            if (kind == ExtKind::RamGaloisL && !divides)
                throw ConfigError("RamGaloisL requires ell | p-1");
            if (kind == ExtKind::RamNonGaloisL && divides)
                throw ConfigError("RamNonGaloisL requires ell not dividing p-1");
            E.d_ = ell; E.e_ = ell; E.f_ = 1;
            E.delta_ = takeRamDelta(ell);
            E.g_.assign(ell, 0);
            E.g_[0] = mulmod(E.delta_.unit() % E.pN_, (unsigned long long)p, E.pN_); // x^ell = Delta
            break;
        }
    }
    E.qE_ = (long)ppow(p, E.f_);

    // x^{d+j} reduction table
    E.xred_.assign(std::max(E.d_ - 1, 1), std::vector<unsigned long long>(E.d_, 0));
    E.xred_[0] = E.g_;
    for (int j = 1; j < E.d_ - 1; ++j) {
        const auto& prev = E.xred_[j - 1];
        std::vector<unsigned long long> cur(E.d_, 0);
        unsigned long long top = prev[E.d_ - 1];
        for (int i = E.d_ - 1; i >= 1; --i) cur[i] = prev[i - 1];
        cur[0] = 0;
        if (top)
            for (int i = 0; i < E.d_; ++i)
                cur[i] = (cur[i] + mulmod(top, E.g_[i], E.pN_)) % E.pN_;
        E.xred_[j] = cur;
    }

    // Galois generator sigma and its powers, as matrices on the power basis
    if (E.isGalois()) {
        E.galoisMat_.assign(E.d_, std::vector<unsigned long long>());
        std::vector<unsigned long long> id((size_t)E.d_ * E.d_, 0);
        for (int i = 0; i < E.d_; ++i) id[(size_t)i * E.d_ + i] = 1;
        E.galoisMat_[0] = id;

        auto evalG = [&](const ExtElement& y) {
            // g(y) = y^d - sum g_[i] y^i
            ExtElement acc = E.pow(y, E.d_);
            for (int i = 0; i < E.d_; ++i) {
                if (E.g_[i] == 0) continue;
                ExtElement t = E.fromIntCoeffs(0, {(long long)(E.g_[i] % E.pN_)});
                acc = E.sub(acc, E.mul(t, E.pow(y, i)));
            }
            return acc;
        };
        auto evalGPrime = [&](const ExtElement& y) {
            ExtElement acc = E.scalarMul(PadicNumber::fromInteger(p, N, E.d_), E.pow(y, E.d_ - 1));
            for (int i = 1; i < E.d_; ++i) {
                if (E.g_[i] == 0) continue;
                unsigned long long ci = mulmod(E.g_[i], (unsigned long long)i, E.pN_);
                ExtElement t = E.fromIntCoeffs(0, {(long long)ci});
                acc = E.sub(acc, E.mul(t, E.pow(y, i - 1)));
            }
            return acc;
        };

        ExtElement r;
        if (kind == ExtKind::UnramQuad || kind == ExtKind::RamQuad) {
            r = E.neg(E.adjoinedRoot());
        } else if (kind == ExtKind::RamGaloisL) {
            long g0 = primitiveRoot(p);
            long c = (long)powmod((unsigned long long)g0,
                                  (unsigned long long)((p - 1) / cfg.ell), (unsigned long long)p);
            r = E.scalarMul(teichmuller(p, N, c), E.adjoinedRoot());
        } else { // UnramL: lift the Frobenius root from x^p mod p
            r = E.pow(E.adjoinedRoot(), p);
            for (int it = 0; it < N + 3; ++it) {
                ExtElement gy = evalG(r);
                if (gy.isZero()) break;
                r = E.sub(r, E.div(gy, evalGPrime(r)));
            }
            if (!evalG(r).isZero()) throw Error("Frobenius lift did not converge");
        }

        std::vector<unsigned long long> M((size_t)E.d_ * E.d_, 0);
        ExtElement rj = E.one();
        for (int j = 0; j < E.d_; ++j) {
            if (rj.pPow_ < 0) throw Error("Galois image is not integral");
            unsigned long long shift = ppow(p, (int)rj.pPow_);
            for (int i = 0; i < E.d_; ++i)
                M[(size_t)j * E.d_ + i] = mulmod(rj.c_[i] % E.pN_, shift, E.pN_);
            rj = E.mul(rj, r);
        }
        E.galoisMat_[1] = M;
        for (int k = 2; k < E.d_; ++k) {
            std::vector<unsigned long long> Z((size_t)E.d_ * E.d_, 0);
            const auto& A = E.galoisMat_[k - 1];
            for (int j = 0; j < E.d_; ++j)
                for (int l = 0; l < E.d_; ++l) {
                    unsigned long long a = A[(size_t)j * E.d_ + l];
                    if (!a) continue;
                    for (int i = 0; i < E.d_; ++i)
                        Z[(size_t)j * E.d_ + i] =
                            (Z[(size_t)j * E.d_ + i] + mulmod(M[(size_t)l * E.d_ + i], a, E.pN_)) % E.pN_;
                }
            E.galoisMat_[k] = Z;
        }

        ExtElement x = E.adjoinedRoot();
        if (!evalG(E.applyMatrix(E.galoisMat_[1], x)).isZero())
            throw Error("Galois generator does not satisfy the defining polynomial");
        ExtElement xd = x;
        for (int k = 0; k < E.d_; ++k) xd = E.applyMatrix(E.galoisMat_[1], xd);
        if (!E.eq(xd, x)) throw Error("Galois generator order mismatch");
    }

    E.buildResidueTables();
    return E;
}

} // namespace ellchar
