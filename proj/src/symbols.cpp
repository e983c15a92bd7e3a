#include "ellchar/symbols.hpp"

#include <algorithm>
#include <array>

namespace ellchar {

namespace {

unsigned long long mulmod(unsigned long long a, unsigned long long b, unsigned long long m) {
    return (unsigned long long)((unsigned __int128)a * b % m);
}

unsigned long long powmodu(unsigned long long b, unsigned long long e, unsigned long long m) {
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
    unsigned long long x = powmodu(a % p, (unsigned long long)(p - 2), (unsigned long long)p);
    unsigned long long mod = (unsigned long long)p;
    while (mod < pk) {
        unsigned __int128 m2 = (unsigned __int128)mod * mod;
        mod = (m2 > pk) ? pk : (unsigned long long)m2;
        unsigned long long ax = mulmod(a % mod, x % mod, mod);
        x = mulmod(x % mod, (2 % mod + mod - ax) % mod, mod);
    }
    return x % pk;
}

} // namespace

CycInt evalAdditive(const AdditiveCharacter& psi, const PadicNumber& x) {
    PadicNumber y = x;
    if (!psi.scale.isZero()) y = psi.scale * x;
    if (y.isZero() || y.valuation() >= psi.level) return CycInt(1);
    long k = psi.level - y.valuation();
    if (k > y.digits())
        throw PrecisionError("additive character needs more digits than available");
    unsigned long long pk = ppow(psi.p, (int)k);
    return CycInt::rootOfUnity((long)pk, (long long)(y.unit() % pk));
}

CycInt evalAdditiveExt(const AdditiveCharacter& psi, const TameExtension& E, const ExtElement& x) {
    if (x.isZero()) return CycInt(1);
    return evalAdditive(psi, E.trace(x));
}

// ---- Hilbert symbol ----

int hilbert(const PadicNumber& a, const PadicNumber& b) {
    if (a.isZero() || b.isZero()) throw DomainError("hilbert symbol needs nonzero arguments");
    long p = a.p();
    long alpha = a.valuation(), beta = b.valuation();
    int lu = legendre(a.residue(), p);
    int lw = legendre(b.residue(), p);
    int lm1 = legendre(-1, p);
    int r = 1;
    if ((alpha % 2 != 0) && (beta % 2 != 0) && lm1 == -1) r = -r;
    if (beta % 2 != 0 && lu == -1) r = -r;
    if (alpha % 2 != 0 && lw == -1) r = -r;
    return r;
}

namespace {

struct TernaryEntry {
    int vpar;                // valuation parity after square normalization
    unsigned long long unit; // exact unit part mod p^digits
    int digits;
};

// Search a residue point of sum coef_i t_i^2 = 0 with a unit partial
// derivative, then Newton-lift the certificate coordinate and verify.
bool residueCertificate(long p, int M, const std::array<TernaryEntry, 3>& e) {
    unsigned long long pM = ppow(p, M);
    // values of the three coefficients mod p^M (with the p factor for odd entries)
    unsigned long long A[3];
    int oddIdx = -1;
    for (int i = 0; i < 3; ++i) {
        A[i] = e[i].unit % pM;
        if (e[i].vpar) {
            A[i] = mulmod(A[i], (unsigned long long)p, pM);
            oddIdx = i;
        }
    }
    auto tryLift = [&](long t0, long t1, long t2) -> bool {
        long t[3] = {t0, t1, t2};
        // certificate coordinate: unit coefficient and nonzero residue
        int ci = -1;
        for (int i = 0; i < 3; ++i)
            if (!e[i].vpar && t[i] % p != 0) { ci = i; break; }
        if (ci < 0) return false;
        unsigned long long f = 0;
        unsigned long long T[3];
        for (int i = 0; i < 3; ++i) T[i] = (unsigned long long)t[i];
        auto evalF = [&]() {
            unsigned long long s = 0;
            for (int i = 0; i < 3; ++i)
                s = (s + mulmod(A[i], mulmod(T[i], T[i], pM), pM)) % pM;
            return s;
        };
        f = evalF();
        if (f % p != 0) return false;
        for (int it = 0; it < M + 2; ++it) {
            f = evalF();
            if (f == 0) break;
            // Newton step in coordinate ci: t -= f / (2 A_ci t_ci)
            unsigned long long der = mulmod(2 % pM, mulmod(A[ci], T[ci], pM), pM);
            T[ci] = (T[ci] + pM - mulmod(f, invmodpk(der % pM, p, pM), pM)) % pM;
        }
        return evalF() == 0; // exact to precision p^M
    };
    (void)oddIdx;
    int nOdd = 0;
    for (int i = 0; i < 3; ++i) nOdd += e[i].vpar;
    if (nOdd == 0) {
        for (long x = 0; x < p; ++x)
            for (long y = 0; y < p; ++y)
                for (long z = 0; z < p; ++z) {
                    if (x == 0 && y == 0 && z == 0) continue;
                    long long s = 0;
                    for (int i = 0; i < 3; ++i) {
                        long t = (i == 0 ? x : i == 1 ? y : z);
                        s += (long long)(A[i] % p) * t * t;
                    }
                    if (s % p != 0) continue;
                    if (tryLift(x, y, z)) return true;
                }
        return false;
    }
    // exactly one odd entry: a primitive solution needs the two unit
    // coordinates nonzero mod p (descent kills the rest), third set to 1
    int u1 = -1, u2 = -1;
    for (int i = 0; i < 3; ++i)
        if (!e[i].vpar) (u1 < 0 ? u1 : u2) = i;
    for (long x = 0; x < p; ++x)
        for (long y = 0; y < p; ++y) {
            if (x == 0 && y == 0) continue;
            long long s = (long long)(A[u1] % p) * x * x + (long long)(A[u2] % p) * y * y;
            if (s % p != 0) continue;
            long t[3] = {1, 1, 1};
            t[u1] = x;
            t[u2] = y;
            if (tryLift(t[0], t[1], t[2])) return true;
        }
    return false;
}

} // namespace

int hilbertOracle(const PadicNumber& a, const PadicNumber& b) {
    if (a.isZero() || b.isZero()) throw DomainError("hilbert symbol needs nonzero arguments");
    long p = a.p();
    int M = std::min(a.digits(), b.digits());
    // ternary form <a, b, -1>; normalize each entry by squares
    std::array<TernaryEntry, 3> e;
    e[0] = {(int)(((a.valuation() % 2) + 2) % 2), a.unit(), a.digits()};
    e[1] = {(int)(((b.valuation() % 2) + 2) % 2), b.unit(), b.digits()};
    e[2] = {0, ppow(p, M) - 1, M}; // -1 mod p^M
    int nOdd = e[0].vpar + e[1].vpar + e[2].vpar;
    if (nOdd == 2) {
        // substitute t_k = p t_k' on the even coordinate and divide by p:
        // <p u_i, p u_j, u_k>  ->  <u_i, u_j, p u_k>
        for (int i = 0; i < 3; ++i) e[i].vpar = 1 - e[i].vpar;
    }
    return residueCertificate(p, M, e) ? 1 : -1;
}

// ---- Weil indices via quadratic Gauss sums ----

namespace {

// full Gauss sum G(u, E) = sum_{t mod p^E} zeta_{p^E}^{u t^2}, exact.
// Direct summation at small size; above that the one-step regrouping
// t = s + p^{E-1} r collapses the inner sum: G(u, E) = p G(u, E-2).
CycInt gaussSum(long p, unsigned long long u, int E) {
    if (E <= 0) return CycInt(1);
    unsigned long long size = 1;
    bool small = true;
    for (int i = 0; i < E; ++i) {
        size *= (unsigned long long)p;
        if (size > 200000) { small = false; break; }
    }
    if (small) {
        CycBuilder acc((long)size);
        for (unsigned long long t = 0; t < size; ++t)
            acc.add((long long)mulmod(u % size, mulmod(t, t, size), size), 1);
        return acc.take();
    }
    return CycInt(p) * gaussSum(p, u, E - 2);
}

// strip rational p factors and identify against {+-1, +-g_p}
CycInt normalizeGauss(long p, CycInt S) {
    while (S.divisibleBy(p)) S = S.dividedBy(p);
    if (S.isInteger()) {
        long long v = S.asInteger();
        if (v == 1 || v == -1) return S;
        throw Error("gauss sum normalization: unexpected integer part");
    }
    CycBuilder gb(p);
    for (long t = 0; t < p; ++t) gb.add(((long long)t * t) % p, 1);
    CycInt g = gb.take();
    CycInt ghat = (p % 4 == 1) ? CycInt(1) : CycInt::rootOfUnity(4, 1);
    if (S == g) return ghat;
    if (S == -g) return -ghat;
    throw Error("gauss sum normalization: value not of Gauss type");
}

// normalized Weil index of x -> psi_n(c x^2) at a fixed m
CycInt rawIndexAt(long p, const PadicNumber& c, int level, int m) {
    long E = 2L * m + level - c.valuation();
    if (E < 1) E = (E % 2 == 0) ? 0 : 1; // parity-stable small cases
    if (E > c.digits() && E > 0) throw PrecisionError("weil index: unit digits exhausted");
    unsigned long long u = (E > 0) ? c.unit() % ppow(p, (int)E) : 1;
    return normalizeGauss(p, gaussSum(p, u, (int)E));
}

} // namespace

CycInt weilIndexRaw(const PadicNumber& a, const AdditiveCharacter& psi) {
    if (a.isZero()) throw DomainError("weil index of the zero form");
    PadicNumber c = a;
    if (!psi.scale.isZero()) c = psi.scale * a;
    long p = psi.p;
    // stabilization threshold 2m > v(a) + level + 1
    long v = c.valuation();
    int m = 1;
    while (2 * m <= v + psi.level + 1 || 2L * m + psi.level - v < 1) ++m;
    CycInt s1 = rawIndexAt(p, c, psi.level, m);
    CycInt s2 = rawIndexAt(p, c, psi.level, m + 1);
    if (s1 != s2) throw PrecisionError("weil index did not stabilize");
    return s1;
}

CycInt weilGammaOracle(const PadicNumber& a, const AdditiveCharacter& psi) {
    CycInt num = weilIndexRaw(a, psi);
    PadicNumber one = PadicNumber::fromInteger(psi.p, a.digits(), 1);
    CycInt den = weilIndexRaw(one, psi);
    return num * den.inverse();
}

CycInt weilGammaClosed(const PadicNumber& a, const AdditiveCharacter& psi) {
    if (a.isZero()) throw DomainError("weil gamma of zero");
    long p = psi.p;
    PadicNumber c = a;
    if (!psi.scale.isZero()) c = psi.scale * a;
    long sv = psi.scale.isZero() ? 0 : psi.scale.valuation();
    long long su = psi.scale.isZero() ? 1 : (long long)psi.scale.residue();
    CycInt ghat = (p % 4 == 1) ? CycInt(1) : CycInt::rootOfUnity(4, 1);
    auto raw = [&](long v, long long ures) -> CycInt {
        long par = ((psi.level - v) % 2 + 2) % 2;
        if (par == 0) return CycInt(1);
        return (legendre(ures, p) == 1 ? ghat : -ghat);
    };
    CycInt num = raw(c.valuation(), c.residue());
    CycInt den = raw(sv, su);
    return num * den.inverse();
}

int hasseInvariant(const QuadForm& Q, const AdditiveCharacter& psi, bool viaOracle) {
    if (Q.diag.empty()) throw DomainError("empty quadratic form");
    PadicNumber det = Q.diag[0];
    for (auto& d : Q.diag)
        if (d.isZero()) throw DomainError("degenerate quadratic form");
    for (size_t i = 1; i < Q.diag.size(); ++i) det = det * Q.diag[i];
    CycInt acc(1);
    for (auto& d : Q.diag)
        acc = acc * (viaOracle ? weilGammaOracle(d, psi) : weilGammaClosed(d, psi));
    CycInt dg = viaOracle ? weilGammaOracle(det, psi) : weilGammaClosed(det, psi);
    acc = acc * dg.inverse();
    if (!acc.isInteger()) throw Error("hasse invariant is not +-1");
    long long v = acc.asInteger();
    if (v != 1 && v != -1) throw Error("hasse invariant is not +-1");
    return (int)v;
}

CycInt langlandsLambda(const TameExtension& E, const AdditiveCharacter& psi) {
    if (E.degree() != 2) throw DomainError("Langlands lambda implemented for quadratic E");
    // Weil index of psi o N on the Gram matrix diag(1, -Delta)
    long p = psi.p;
    int N = E.config().precision;
    PadicNumber one = PadicNumber::fromInteger(p, N, 1);
    PadicNumber mDelta = -E.delta();
    return weilIndexRaw(one, psi) * weilIndexRaw(mDelta, psi);
}

// ---- local class field theory characters ----

CycInt cftCharacter(const TameExtension& E, const PadicNumber& x) {
    if (x.isZero()) throw DomainError("cft character of zero");
    long p = E.config().p;
    int ell = E.config().ell;
    switch (E.kind()) {
        case ExtKind::UnramQuad:
        case ExtKind::RamQuad: {
            int h = hilbert(x, E.delta());
            return CycInt(h);
        }
        case ExtKind::UnramL: {
            long v = ((x.valuation() % ell) + ell) % ell;
            return CycInt::rootOfUnity(ell, v);
        }
        case ExtKind::RamGaloisL: {
            // quotient F*/N(E*) = Z/ell through (v, dlog) coordinates:
            // N(pi) = Delta gives the relation (1, dlog(u0)), norms of
            // Teichmuller units give (0, ell Z), U^1 lands in norms (tame)
            long g0 = E.residueGeneratorEncoded();
            auto dlogF = [&](long long r) -> long {
                long rr = (long)(((r % p) + p) % p);
                long acc = 1;
                for (long k = 0; k < p - 1; ++k) {
                    if (acc == rr) return k;
                    acc = (long)(((long long)acc * g0) % p);
                }
                throw DomainError("dlog of zero residue");
            };
            long s0 = dlogF(E.delta().residue()); // Teichmuller class of N(pi)/p
            long a = x.valuation();
            long t = dlogF(x.residue());
            long j = (((t - a * s0) % ell) + ell) % ell;
            return CycInt::rootOfUnity(ell, j);
        }
        case ExtKind::RamNonGaloisL:
            throw DomainError("aleph_{E/F} needs a Galois extension");
    }
    throw DomainError("unreachable");
}

CycInt cftCharacterELoverL(const TameExtension& E, const PadicNumber& x) {
    if (x.isZero()) throw DomainError("cft character of zero");
    long p = E.config().p;
    int ell = E.config().ell;
    switch (E.kind()) {
        case ExtKind::UnramQuad:
        case ExtKind::RamQuad:
            return cftCharacter(E, x); // L = F for ell = 2
        case ExtKind::UnramL: {
            // EL/L unramified of degree ell and v_L = v_F on F*
            long v = ((x.valuation() % ell) + ell) % ell;
            return CycInt::rootOfUnity(ell, v);
        }
        case ExtKind::RamGaloisL: {
            // x = p^a omega(r) u1; x is a norm from EL iff
            // (r u0^{-a})^{(p-1)/ell} = 1 in mu_ell(F_p); the value picks up
            // the inverse exponent through the degree-(ell-1) residue tower
            long g0 = E.residueGeneratorEncoded();
            long c = (long)powmodu((unsigned long long)g0, (unsigned long long)((p - 1) / ell),
                                   (unsigned long long)p); // canonical primitive ell-th root
            long r = (long)x.residue();
            long a = x.valuation();
            long u0 = (long)E.delta().residue();
            unsigned long long u0invA =
                powmodu(invmodpk((unsigned long long)u0, p, (unsigned long long)p),
                        (unsigned long long)(((a % ell) + ell) % ell) * (unsigned long long)(p - 1) /
                            (unsigned long long)ell,
                        (unsigned long long)p);
            unsigned long long z =
                mulmod(powmodu((unsigned long long)r, (unsigned long long)((p - 1) / ell),
                               (unsigned long long)p),
                       u0invA, (unsigned long long)p);
            long k = 0;
            unsigned long long acc = 1;
            while (acc != z && k < ell) { acc = mulmod(acc, (unsigned long long)c, (unsigned long long)p); ++k; }
            if (acc != z) throw Error("mu_ell discrete log failed");
            long j = ((-k) % ell + ell) % ell;
            return CycInt::rootOfUnity(ell, j);
        }
        case ExtKind::RamNonGaloisL:
            throw DomainError("aleph_{EL/L}|_{F*} not realized for the non-Galois kind");
    }
    throw DomainError("unreachable");
}

} // namespace ellchar
