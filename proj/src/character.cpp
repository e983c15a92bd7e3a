#include "ellchar/character.hpp"

#include <algorithm>
#include <map>

namespace ellchar {

namespace {

long primRoot(long p) {
    std::vector<long> fac;
    long m = p - 1;
    for (long d = 2; d * d <= m; ++d)
        if (m % d == 0) { fac.push_back(d); while (m % d == 0) m /= d; }
    if (m > 1) fac.push_back(m);
    auto powm = [&](long long b, long long e) {
        long long r = 1; b %= p;
        while (e) { if (e & 1) r = r * b % p; b = b * b % p; e >>= 1; }
        return r;
    };
    for (long g = 2; g < p; ++g) {
        bool ok = true;
        for (long f : fac)
            if (powm(g, (p - 1) / f) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw Error("no primitive root");
}

long dlogModP(long p, long long r) {
    long g = primRoot(p);
    long rr = (long)(((r % p) + p) % p);
    if (rr == 0) throw DomainError("dlog of zero");
    long acc = 1;
    for (long k = 0; k < p - 1; ++k) {
        if (acc == rr) return k;
        acc = (long)(((long long)acc * g) % p);
    }
    throw Error("dlog failed");
}

const AdditiveCharacter& levelOnePsi(long p) {
    static std::map<long, AdditiveCharacter> cache;
    auto it = cache.find(p);
    if (it == cache.end()) it = cache.emplace(p, AdditiveCharacter(p, 1)).first;
    return it->second;
}

// determinant over Q_p with minimal-valuation pivoting
PadicNumber detPadic(std::vector<std::vector<PadicNumber>> M, long p, int N) {
    int n = (int)M.size();
    PadicNumber det = PadicNumber::fromInteger(p, N, 1);
    int sign = 1;
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        long best = 0;
        for (int i = col; i < n; ++i) {
            if (M[i][col].isZero()) continue;
            if (pivot < 0 || M[i][col].valuation() < best) { pivot = i; best = M[i][col].valuation(); }
        }
        if (pivot < 0) return PadicNumber::zero(p, N);
        if (pivot != col) { std::swap(M[pivot], M[col]); sign = -sign; }
        det = det * M[col][col];
        for (int i = col + 1; i < n; ++i) {
            if (M[i][col].isZero()) continue;
            PadicNumber f = M[i][col] / M[col][col];
            for (int j = col; j < n; ++j) M[i][j] = M[i][j] - f * M[col][j];
        }
    }
    return sign == 1 ? det : -det;
}

} // namespace

// ---- FCharacter ----

PadicNumber padicLogU1(const PadicNumber& u) {
    long p = u.p();
    PadicNumber one = PadicNumber::fromInteger(p, u.digits(), 1);
    PadicNumber x = u - one;
    if (x.isZero()) return PadicNumber::zero(p, u.digits());
    if (x.valuation() < 1) throw DomainError("padicLogU1: not a principal unit");
    int N = u.digits();
    long Amin = x.valuation() + x.digits();
    long vx = x.valuation();
    PadicNumber term = x, acc = x;
    int K = 2 * N + 8;
    for (int k = 2; k <= K; ++k) {
        term = term * x;
        long vk = 0;
        for (long kk = k; kk % p == 0; kk /= p) ++vk;
        long trueV = (long)k * vx - vk;
        long Ak = x.valuation() + x.digits() - vk;
        if (trueV < Amin) Amin = std::min(Amin, Ak);
        PadicNumber t = term / PadicNumber::fromInteger(p, N, k);
        if (k % 2 == 0) t = -t;
        if (!t.isZero() && t.valuation() <= N + 1) acc = acc + t;
    }
    if (!acc.isZero() && acc.valuation() + acc.digits() > Amin) {
        long nd = Amin - acc.valuation();
        if (nd < 1) throw PrecisionError("padicLogU1: precision exhausted");
        acc = acc.withDigits((int)nd);
    }
    return acc;
}

FCharacter::FCharacter(long p, int precision, CycInt pValue, long tameExp, PadicNumber wildAlpha)
    : p_(p), prec_(precision), pValue_(std::move(pValue)), tameExp_(tameExp),
      wildAlpha_(std::move(wildAlpha)) {
    if (!pValue_.isRootOfUnity()) throw DomainError("character value on p must be a root of unity");
    tameExp_ = ((tameExp_ % (p - 1)) + (p - 1)) % (p - 1);
}

FCharacter FCharacter::trivial(long p, int precision) {
    return FCharacter(p, precision, CycInt(1), 0, PadicNumber());
}

FCharacter FCharacter::quadratic(long p, int precision, const PadicNumber& c) {
    if (c.isZero()) throw DomainError("quadratic character of zero");
    PadicNumber pp = PadicNumber::fromInteger(p, precision, p);
    CycInt onP(hilbert(pp, c));
    long t = (c.valuation() % 2 != 0) ? (p - 1) / 2 : 0;
    return FCharacter(p, precision, onP, t, PadicNumber());
}

bool FCharacter::isTrivial() const {
    return pValue_ == CycInt(1) && tameExp_ == 0 && wildAlpha_.isZero();
}

CycInt FCharacter::eval(const PadicNumber& x) const {
    if (x.isZero()) throw DomainError("character of zero");
    long a = x.valuation();
    CycInt val = pValue_.pow(a);
    long long r = x.residue();
    if (tameExp_ != 0)
        val = val * CycInt::rootOfUnity(p_ - 1, tameExp_ * dlogModP(p_, r));
    if (!wildAlpha_.isZero()) {
        PadicNumber tr = teichmuller(p_, x.digits(), (long)r);
        PadicNumber u1 = PadicNumber::fromUnit(p_, x.digits(), 0, x.unit()) / tr;
        val = val * evalAdditive(levelOnePsi(p_), wildAlpha_ * padicLogU1(u1));
    }
    return val;
}

FCharacter FCharacter::times(const FCharacter& o) const {
    if (p_ != o.p_) throw DomainError("mixed primes");
    PadicNumber w = wildAlpha_;
    if (w.isZero()) w = o.wildAlpha_;
    else if (!o.wildAlpha_.isZero()) w = wildAlpha_ + o.wildAlpha_;
    return FCharacter(p_, prec_, pValue_ * o.pValue_, tameExp_ + o.tameExp_, w);
}

FCharacter FCharacter::inverseChar() const {
    PadicNumber w = wildAlpha_.isZero() ? wildAlpha_ : -wildAlpha_;
    return FCharacter(p_, prec_, pValue_.inverse(), (p_ - 1) - tameExp_, w);
}

// ---- MultCharacter ----

MultCharacter::MultCharacter(std::shared_ptr<const TameExtension> ext, CycInt unifValue,
                             long tameExp, ExtElement alpha)
    : ext_(std::move(ext)), unifValue_(std::move(unifValue)), tameExp_(tameExp),
      alpha_(std::move(alpha)) {
    if (!ext_) throw DomainError("character needs an extension");
    if (!unifValue_.isRootOfUnity()) throw DomainError("uniformizer value must be a root of unity");
    long m = ext_->residueCard() - 1;
    tameExp_ = ((tameExp_ % m) + m) % m;
}

CycInt MultCharacter::evalU1(const ExtElement& u1) const {
    if (alpha_.isZero()) return CycInt(1);
    const TameExtension& E = *ext_;
    ExtElement lg = E.logU1(u1);
    if (lg.isZero()) return CycInt(1);
    return evalAdditiveExt(levelOnePsi(E.config().p), E, E.mul(alpha_, lg));
}

CycInt MultCharacter::eval(const ExtElement& w) const {
    if (w.isZero()) throw DomainError("character of zero");
    const TameExtension& E = *ext_;
    auto dec = E.decompose(w);
    CycInt val = unifValue_.pow(dec.v);
    if (tameExp_ != 0 && dec.tkDlog != 0)
        val = val * CycInt::rootOfUnity(E.residueCard() - 1, tameExp_ * dec.tkDlog);
    return val * evalU1(dec.u1);
}

MultCharacter MultCharacter::times(const MultCharacter& o) const {
    if (ext_.get() != o.ext_.get()) throw DomainError("characters on different extensions");
    ExtElement a = alpha_;
    if (a.isZero()) a = o.alpha_;
    else if (!o.alpha_.isZero()) a = ext_->add(alpha_, o.alpha_);
    return MultCharacter(ext_, unifValue_ * o.unifValue_, tameExp_ + o.tameExp_, a);
}

MultCharacter MultCharacter::inverseChar() const {
    ExtElement a = alpha_.isZero() ? alpha_ : ext_->neg(alpha_);
    long m = ext_->residueCard() - 1;
    return MultCharacter(ext_, unifValue_.inverse(), m - tameExp_, a);
}

MultCharacter MultCharacter::composeGalois(int k) const {
    const TameExtension& E = *ext_;
    int kk = ((k % E.galoisOrder()) + E.galoisOrder()) % E.galoisOrder();
    if (kk == 0) return *this;
    // value on the uniformizer moves by the Teichmuller ratio sigma^k(pi)/pi
    CycInt u = eval(E.galoisApply(kk, E.uniformizer()));
    long s = E.residueDlog(E.galoisApply(kk, E.teichOfDlog(1)));
    ExtElement a = alpha_.isZero() ? alpha_ : E.galoisApply(-kk, alpha_);
    return MultCharacter(ext_, u, tameExp_ * s, a);
}

MultCharacter MultCharacter::pullbackNorm(std::shared_ptr<const TameExtension> ext,
                                          const FCharacter& phi) {
    const TameExtension& E = *ext;
    long p = E.config().p;
    CycInt u = phi.eval(E.norm(E.uniformizer()));
    // tame exponent through the residue norm
    long t = 0;
    if (phi.tameExp() != 0) {
        PadicNumber nt = E.norm(E.teichOfDlog(1));
        long s0 = dlogModP(p, nt.residue());
        long m = E.residueCard() - 1;
        t = (long)(((__int128)phi.tameExp() * s0 % m) * ((m / (p - 1))) % m);
        // phi(omega^j) = zeta_{p-1}^{t_phi s0 j}; as exponent mod q_E - 1
    }
    ExtElement a = phi.wildAlpha().isZero() ? ExtElement() : E.fromPadic(phi.wildAlpha());
    return MultCharacter(ext, u, t, a);
}

std::vector<ExtElement> principalUnitGenerators(const TameExtension& E, int cutoff) {
    std::vector<ExtElement> gens;
    ExtElement pi = E.uniformizer();
    for (int j = 1; j <= cutoff; ++j) {
        ExtElement pij = E.pow(pi, j);
        ExtElement b = E.one();
        for (int t = 0; t < E.residueDegree(); ++t) {
            gens.push_back(E.add(E.one(), E.mul(pij, b)));
            b = E.mul(b, E.adjoinedRoot());
        }
    }
    return gens;
}

bool MultCharacter::equals(const MultCharacter& o, int cutoff) const {
    if (ext_.get() != o.ext_.get()) throw DomainError("characters on different extensions");
    const TameExtension& E = *ext_;
    if (eval(E.uniformizer()) != o.eval(E.uniformizer())) return false;
    if (eval(E.teichOfDlog(1)) != o.eval(E.teichOfDlog(1))) return false;
    for (const auto& g : principalUnitGenerators(E, cutoff))
        if (evalU1(E.decompose(g).u1) != o.evalU1(E.decompose(g).u1)) return false;
    return true;
}

bool MultCharacter::trivialOnU1Depth(int k, int cutoff) const {
    const TameExtension& E = *ext_;
    ExtElement pi = E.uniformizer();
    for (int j = k; j <= cutoff; ++j) {
        ExtElement pij = E.pow(pi, j);
        ExtElement b = E.one();
        for (int t = 0; t < E.residueDegree(); ++t) {
            ExtElement u = E.add(E.one(), E.mul(pij, b));
            if (evalU1(u) != CycInt(1)) return false;
            b = E.mul(b, E.adjoinedRoot());
        }
    }
    return true;
}

int MultCharacter::level() const {
    const TameExtension& E = *ext_;
    if (alpha_.isZero()) return 0;
    int cap = (int)std::max<long>(1, -E.valuation(alpha_));
    for (int j = cap; j >= 1; --j) {
        ExtElement pij = E.pow(E.uniformizer(), j);
        ExtElement b = E.one();
        for (int t = 0; t < E.residueDegree(); ++t) {
            ExtElement u = E.add(E.one(), E.mul(pij, b));
            if (evalU1(u) != CycInt(1)) return j;
            b = E.mul(b, E.adjoinedRoot());
        }
    }
    return 0;
}

// ---- CharPair classification ----

// raw graded solve for alpha(chi); declared early for the constructor
ExtElement alphaOfChi0(const CharPair& pair);

namespace {

// trace-zero spanning set of pp/pp^{cutoff+1}
std::vector<ExtElement> traceZeroSpan(const TameExtension& E, int cutoff) {
    std::vector<ExtElement> out;
    long p = E.config().p;
    int N = E.config().precision;
    PadicNumber dinv = PadicNumber::fromInteger(p, N, 1) / PadicNumber::fromInteger(p, N, E.degree());
    for (int j = 1; j <= cutoff; ++j) {
        ExtElement pij = E.pow(E.uniformizer(), j);
        ExtElement b = E.one();
        for (int t = 0; t < E.degree(); ++t) {
            ExtElement z = E.mul(pij, b);
            PadicNumber tr = E.trace(z);
            if (!tr.isZero()) z = E.sub(z, E.fromPadic(tr * dinv));
            if (!z.isZero()) out.push_back(z);
            b = E.mul(b, E.adjoinedRoot());
        }
    }
    return out;
}

bool wildFactorsThroughNorm(const TameExtension& E, const MultCharacter& chi, int cutoff) {
    if (!chi.hasWild()) return true;
    if (E.isGalois()) {
        for (const auto& g : principalUnitGenerators(E, cutoff)) {
            ExtElement sg = E.galoisApply(1, g);
            if (chi.evalU1(sg) != chi.evalU1(g)) return false;
        }
        return true;
    }
    // non-Galois: ker N lies in U^1; chi kills it iff psi_E(alpha z) = 1 for
    // all trace-zero z
    const AdditiveCharacter& psi = levelOnePsi(E.config().p);
    for (const auto& z : traceZeroSpan(E, cutoff)) {
        if (evalAdditiveExt(psi, E, E.mul(chi.wildAlpha(), z)) != CycInt(1)) return false;
    }
    return true;
}

bool tameGaloisInvariant(const TameExtension& E, const MultCharacter& chi) {
    // restriction to Teichmuller units under the residue Frobenius action
    if (!E.isGalois()) return true; // handled through norms in the caller
    long m = E.residueCard() - 1;
    long s = E.residueDlog(E.galoisApply(1, E.teichOfDlog(1)));
    return ((__int128)chi.tameExp() * (s - 1)) % m == 0;
}

} // namespace

CharPair::CharPair(std::shared_ptr<const TameExtension> ext, MultCharacter chi)
    : ext_(std::move(ext)), chi_(std::move(chi)) {
    const TameExtension& E = *ext_;
    level_ = chi_.level();
    int cutoff = level_ + 2;
    if (E.isGalois()) {
        regular_ = !chi_.equals(chi_.composeGalois(1), cutoff);
    } else {
        // chi factors through N iff it kills ker N (contained in U^1 here,
        // since gcd(ell, p-1) = 1 makes the tame part always descend)
        regular_ = !wildFactorsThroughNorm(E, chi_, cutoff);
    }
    bool wildFactors = wildFactorsThroughNorm(E, chi_, cutoff);
    admissible_ = regular_ && (!wildFactors || !E.isRamified());
    if (level_ >= 1) {
        minimal_ = regular_ && alphaMinimal(E, alphaOfChi0(*this));
    } else {
        minimal_ = regular_ && !tameGaloisInvariant(E, chi_);
        if (!E.isGalois()) minimal_ = regular_;
    }
}

ExtElement alphaOfChi0(const CharPair& pair) {
    const TameExtension& E = pair.ext();
    const MultCharacter& chi = pair.chi();
    int n = pair.level();
    if (n < 1) throw DomainError("alpha(chi) requires positive level");
    int m = n / 2 + 1;
    const AdditiveCharacter& psi = levelOnePsi(E.config().p);
    ExtElement alpha; // zero
    ExtElement pi = E.uniformizer();
    for (int j = n; j >= m; --j) {
        // residual character of grade j after the part of alpha found so far
        ExtElement pij = E.pow(pi, j);
        std::vector<ExtElement> basis;
        std::vector<CycInt> target;
        ExtElement b = E.one();
        for (int t = 0; t < E.residueDegree(); ++t) {
            ExtElement x = E.mul(pij, b);
            CycInt want = chi.evalU1(E.decompose(E.add(E.one(), x)).u1);
            if (!alpha.isZero())
                want = want * evalAdditiveExt(psi, E, E.mul(alpha, x)).inverse();
            basis.push_back(x);
            target.push_back(want);
            b = E.mul(b, E.adjoinedRoot());
        }
        // solve the graded piece: alpha_j = pi^{-j} * (residue lift)
        bool found = false;
        for (long enc = 0; enc < E.residueCard() && !found; ++enc) {
            std::vector<long long> digits;
            long x = enc;
            for (int t = 0; t < E.residueDegree(); ++t) { digits.push_back(x % E.config().p); x /= E.config().p; }
            ExtElement cand = enc == 0 ? ExtElement() : E.fromIntCoeffs(0, digits);
            ExtElement aj = cand.isZero() ? ExtElement() : E.div(cand, pij);
            bool ok = true;
            for (size_t i = 0; i < basis.size() && ok; ++i) {
                CycInt got = aj.isZero() ? CycInt(1) : evalAdditiveExt(psi, E, E.mul(aj, basis[i]));
                ok = (got == target[i]);
            }
            if (ok) {
                if (!aj.isZero()) alpha = alpha.isZero() ? aj : E.add(alpha, aj);
                found = true;
            }
        }
        if (!found) throw Error("alpha(chi): graded solve failed");
    }
    if (alpha.isZero()) throw Error("alpha(chi): character has no wild part at its level");
    return alpha;
}

ExtElement alphaOfChi(const CharPair& pair) {
    ExtElement alpha = alphaOfChi0(pair);
    // verify the defining congruence on a spanning set
    const TameExtension& E = pair.ext();
    const AdditiveCharacter& psi = levelOnePsi(E.config().p);
    int n = pair.level();
    int m = n / 2 + 1;
    for (int j = m; j <= n; ++j) {
        ExtElement pij = E.pow(E.uniformizer(), j);
        ExtElement b = E.one();
        for (int t = 0; t < E.residueDegree(); ++t) {
            ExtElement x = E.mul(pij, b);
            CycInt lhs = pair.chi().evalU1(E.decompose(E.add(E.one(), x)).u1);
            CycInt rhs = evalAdditiveExt(psi, E, E.mul(alpha, x));
            if (lhs != rhs) throw Error("alpha(chi): defining relation failed verification");
            b = E.mul(b, E.adjoinedRoot());
        }
    }
    return alpha;
}

PadicNumber xChi(const CharPair& pair) {
    ExtElement alpha = alphaOfChi(pair);
    if (pair.ext().degree() != 2) throw DomainError("x_chi is a quadratic-case quantity");
    return pair.ext().coeffPadic(alpha, 1);
}

bool alphaMinimal(const TameExtension& E, const ExtElement& alpha) {
    if (alpha.isZero()) return false;
    long n = -E.valuation(alpha);
    if (n < 1) return false;
    // best F-approximation only adjusts the constant coordinate
    PadicNumber c0 = E.coeffPadic(alpha, 0);
    ExtElement rest = c0.isZero() ? alpha : E.sub(alpha, E.fromPadic(c0));
    if (rest.isZero()) return false; // alpha in F
    return E.valuation(rest) <= -n; // intersection with F empty iff tail is at full depth
}

PadicNumber zetaRoot(const TameExtension& E, const ExtElement& beta) {
    if (E.residueDegree() != 1 || !E.isRamified())
        throw DomainError("zeta(beta, pi) needs a totally ramified extension");
    if (beta.isZero()) throw DomainError("zeta of zero");
    long v = E.valuation(beta);
    ExtElement u = E.div(beta, E.pow(E.uniformizer(), v));
    long enc = E.residueEncode(u);
    return teichmuller(E.config().p, E.config().precision, enc);
}

// ---- Delta twists ----

MultCharacter deltaTwist(const CharPair& pair) {
    if (!pair.regular()) throw DomainError("Delta twist needs a regular pair");
    auto ext = pair.extPtr();
    const TameExtension& E = *ext;
    long p = E.config().p;
    int N = E.config().precision;

    auto trivialChar = [&]() { return MultCharacter(ext, CycInt(1), 0, ExtElement()); };
    auto quadUnram = [&]() { return MultCharacter(ext, CycInt(-1), 0, ExtElement()); };

    if (!E.isRamified()) {
        if (E.degree() == 2) return quadUnram(); // unique quadratic unramified character
        return deltaEFTrivial(E) ? trivialChar() : quadUnram();
    }
    if (E.degree() != 2) {
        // ramified degree ell: delta_{E/F} decides between trivial and
        // quadratic unramified (Galois kinds always give the trivial one)
        return deltaEFTrivial(E) ? trivialChar() : quadUnram();
    }

    // ramified quadratic: reduce to a minimal pair, then
    // Delta|U^1 = 1, Delta|F* = aleph, Delta(pi) = aleph(zeta(alpha,pi)) lambda^n
    MinimalReduction red = minimalReduction(pair);
    if (red.pair.level() < 1)
        throw DomainError("ramified quadratic Delta twist needs positive level after reduction");
    ExtElement alpha = alphaOfChi(red.pair);
    int n = red.pair.level();
    PadicNumber zeta = zetaRoot(E, alpha);
    CycInt alephZeta(hilbert(zeta, E.delta()));
    CycInt lambda = langlandsLambda(E, levelOnePsi(p));
    CycInt onPi = alephZeta * lambda.pow(n);
    MultCharacter Delta(ext, onPi, (p - 1) / 2, ExtElement());
    // consistency: Delta restricted to F* must be aleph_{E/F}
    PadicNumber pF = PadicNumber::fromInteger(p, N, p);
    if (Delta.eval(E.fromPadic(pF)) != cftCharacter(E, pF))
        throw Error("Delta twist fails aleph consistency on p");
    return Delta;
}

PadicNumber deltaEFDisc(const TameExtension& E) {
    long p = E.config().p;
    int N = E.config().precision;
    int d = E.degree();
    // disc(g) = (-1)^{d(d-1)/2} Res(g, g') for the monic defining polynomial
    std::vector<PadicNumber> g = E.definingPoly(); // lower coefficients
    g.push_back(PadicNumber::fromInteger(p, N, 1));
    std::vector<PadicNumber> gp; // derivative, degree d-1
    for (int i = 1; i <= d; ++i)
        gp.push_back(g[i] * PadicNumber::fromInteger(p, N, i));
    int rows = 2 * d - 1;
    std::vector<std::vector<PadicNumber>> S(rows, std::vector<PadicNumber>(rows, PadicNumber::zero(p, N)));
    // Sylvester matrix: d-1 shifted copies of g, d shifted copies of g'
    for (int i = 0; i < d - 1; ++i)
        for (int j = 0; j <= d; ++j) S[i][i + j] = g[d - j];
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= d - 1; ++j) S[d - 1 + i][i + j] = gp[d - 1 - j];
    PadicNumber res = detPadic(S, p, N);
    if ((d * (d - 1) / 2) % 2 != 0) res = -res;
    return res;
}

bool deltaEFTrivial(const TameExtension& E) {
    return isSquare(deltaEFDisc(E));
}

FCharacter deltaEF(const TameExtension& E) {
    return FCharacter::quadratic(E.config().p, E.config().precision, deltaEFDisc(E));
}

MinimalReduction minimalReduction(const CharPair& pair) {
    auto ext = pair.extPtr();
    const TameExtension& E = *ext;
    long p = E.config().p;
    int N = E.config().precision;
    CharPair cur = pair;
    FCharacter phi = FCharacter::trivial(p, N);
    for (int guard = 0; guard < 4 * N + 8; ++guard) {
        if (cur.level() < 1) break;
        ExtElement alpha = alphaOfChi(cur);
        if (alphaMinimal(E, alpha)) break;
        PadicNumber a = E.coeffPadic(alpha, 0);
        if (a.isZero()) break; // tail-only alpha is minimal already
        FCharacter step(p, N, CycInt(1), 0, a);
        phi = phi.times(step);
        MultCharacter chiNew = cur.chi().times(MultCharacter::pullbackNorm(ext, step).inverseChar());
        cur = CharPair(ext, chiNew);
    }
    return {cur, phi};
}

} // namespace ellchar
