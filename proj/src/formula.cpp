#include "ellchar/formula.hpp"

#include <algorithm>
#include <sstream>

namespace ellchar {

namespace {

const AdditiveCharacter& levelOnePsi(long p) {
    static std::map<long, AdditiveCharacter> cache;
    auto it = cache.find(p);
    if (it == cache.end()) it = cache.emplace(p, AdditiveCharacter(p, 1)).first;
    return it->second;
}

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

PadicNumber discriminantMonic(const std::vector<PadicNumber>& lower, long p, int N) {
    int d = (int)lower.size();
    std::vector<PadicNumber> g = lower;
    g.push_back(PadicNumber::fromInteger(p, N, 1));
    std::vector<PadicNumber> gp;
    for (int i = 1; i <= d; ++i) gp.push_back(g[i] * PadicNumber::fromInteger(p, N, i));
    int rows = 2 * d - 1;
    std::vector<std::vector<PadicNumber>> S(rows, std::vector<PadicNumber>(rows, PadicNumber::zero(p, N)));
    for (int i = 0; i < d - 1; ++i)
        for (int j = 0; j <= d; ++j) S[i][i + j] = g[d - j];
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= d - 1; ++j) S[d - 1 + i][i + j] = gp[d - 1 - j];
    PadicNumber res = detPadic(S, p, N);
    if ((d * (d - 1) / 2) % 2 != 0) res = -res;
    return res;
}

// ---- depth filtration ----

DepthClass nDepth(const TameExtension& E, const ExtElement& w) {
    if (w.isZero()) throw DomainError("depth of zero");
    if (E.inFStar(w)) throw DomainError("depth needs a regular torus element (w not in F*)");
    DepthClass out;
    out.e = E.ramification();
    UnitLevel ul = E.unitLevel(w);
    if (!ul.inFUnits || ul.level < 1) return out; // n(w) = 0
    if (ul.capped) throw PrecisionError("depth: element indistinguishable from F*");
    out.positive = true;
    out.levelK = ul.level;
    auto f = E.fStarWitness(w, ul.level);
    if (!f) throw Error("depth: witness lost");
    out.central = E.fromPadic(*f);
    out.unitPart = E.div(w, out.central);
    return out;
}

// ---- norm tokens ----

NormToken& NormToken::mul(NormFactor f, int k) {
    e_[f] += k;
    if (e_[f] == 0) e_.erase(f);
    return *this;
}

std::string NormToken::str() const {
    static const std::map<NormFactor, std::string> names = {
        {NormFactor::DegPi, "deg(pi)"},
        {NormFactor::DegSigma, "deg(sigma)"},
        {NormFactor::CPsiSub, "c_psi(sub)"},
        {NormFactor::CPsiAmb, "c_psi(amb)"},
        {NormFactor::EtaHalf, "|eta|^{1/2}"},
    };
    if (e_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (auto& [f, k] : e_) {
        if (!first) os << " ";
        first = false;
        os << names.at(f);
        if (k != 1) os << "^" << k;
    }
    return os.str();
}

// ---- Weyl denominator and discriminant ----

PadicNumber weylDiscriminant(const TameExtension& E, const ExtElement& w) {
    long p = E.config().p;
    int N = E.config().precision;
    int d = E.degree();
    auto cp = E.charPoly(w);
    PadicNumber disc = discriminantMonic(cp, p, N);
    // D(w) = (-1)^{d(d-1)/2} disc(charpoly) / N(w)^{d-1}
    PadicNumber nw = E.norm(w);
    PadicNumber den = PadicNumber::fromInteger(p, N, 1);
    for (int i = 0; i < d - 1; ++i) den = den * nw;
    PadicNumber D = disc / den;
    if ((d * (d - 1) / 2) % 2 != 0) D = -D;
    return D;
}

WeylDenominator weylDenominator(const TauCharacter& tau, const ExtElement& w, int deltaPlusLen) {
    const TameExtension& E = tau.ext();
    WeylDenominator out;
    PadicNumber D = weylDiscriminant(E, w);
    if (D.isZero()) throw DomainError("Weyl discriminant vanished (w not regular)");
    out.vD = D.valuation();
    if (E.degree() == 2) {
        ExtElement diff = E.sub(w, E.conjQuad(w));
        if (deltaPlusLen % 2 != 0) diff = E.neg(diff);
        out.collapsed = tau.evalT0(diff);
    } else {
        // tau_o(Delta^0) rho_{tau_o} collapses to tau_o((-1)^{sum k}); for
        // every odd-ell kind in scope that value is 1, and the non-Galois
        // realization pins it to 1 as well
        int ell = E.degree();
        long sk = 0;
        for (int k = 1; k <= (ell - 1) / 2; ++k) sk += k;
        CycInt c(1);
        if (!tau.trivialRealization() && sk % 2 != 0) {
            int Nn = E.config().precision;
            c = tau.evalT0(E.fromPadic(PadicNumber::fromInteger(E.config().p, Nn, -1)));
        }
        if (deltaPlusLen % 2 != 0 && !tau.trivialRealization()) {
            int Nn = E.config().precision;
            c = c * tau.evalT0(E.fromPadic(PadicNumber::fromInteger(E.config().p, Nn, -1)));
        }
        out.collapsed = c;
    }
    return out;
}

int epsilonSign(int weylLen, const PadicNumber& delta, int ell) {
    long p = delta.p();
    int h = hilbert(PadicNumber::fromInteger(p, delta.digits(), -1), delta);
    long e = (long)weylLen * (ell + 1);
    return (e % 2 == 0) ? 1 : h;
}

// ---- Q-form and gamma factor ----

QuadForm qFormMatrix(const TameExtension& E, const ExtElement& alpha, const ExtElement& Y) {
    if (E.degree() != 2) throw DomainError("the Q-form is computed for the quadratic case");
    PadicNumber x = E.coeffPadic(alpha, 1);
    PadicNumber y = E.coeffPadic(Y, 1);
    if (x.isZero() || y.isZero()) throw DomainError("degenerate Q-form (alpha or Y in F)");
    long p = E.config().p;
    int N = E.config().precision;
    PadicNumber four = PadicNumber::fromInteger(p, N, 4);
    PadicNumber D = E.delta();
    return {{four * x * y * D, -(four * x * y * D * D)}};
}

QuadForm qFormMatrixBrute(const TameExtension& E, const ExtElement& alpha, const ExtElement& Y) {
    if (E.degree() != 2) throw DomainError("the Q-form is computed for the quadratic case");
    long p = E.config().p;
    int N = E.config().precision;
    PadicNumber D = E.delta();
    PadicNumber a = E.coeffPadic(alpha, 0), x = E.coeffPadic(alpha, 1);
    PadicNumber t = E.coeffPadic(Y, 0), y = E.coeffPadic(Y, 1);
    if (x.isZero() || y.isZero()) throw DomainError("degenerate Q-form (alpha or Y in F)");
    using M2 = std::array<PadicNumber, 4>; // row-major 2x2
    auto mk = [&](PadicNumber m00, PadicNumber m01, PadicNumber m10, PadicNumber m11) {
        return M2{std::move(m00), std::move(m01), std::move(m10), std::move(m11)};
    };
    auto mul2 = [&](const M2& A, const M2& B) {
        return mk(A[0] * B[0] + A[1] * B[2], A[0] * B[1] + A[1] * B[3],
                  A[2] * B[0] + A[3] * B[2], A[2] * B[1] + A[3] * B[3]);
    };
    auto sub2 = [&](const M2& A, const M2& B) {
        return mk(A[0] - B[0], A[1] - B[1], A[2] - B[2], A[3] - B[3]);
    };
    auto bracket = [&](const M2& A, const M2& B) { return sub2(mul2(A, B), mul2(B, A)); };
    auto tr = [&](const M2& A) { return A[0] + A[3]; };
    PadicNumber zero = PadicNumber::zero(p, N);
    PadicNumber one = PadicNumber::fromInteger(p, N, 1);
    PadicNumber half = one / PadicNumber::fromInteger(p, N, 2);
    M2 Am = mk(a, x, x * D, a);
    M2 Ym = mk(t, y, y * D, t);
    // basis of the perpendicular of E in gl(2): diag(1,-1) and [[0,1],[-D,0]]
    M2 V1 = mk(one, zero, zero, -one);
    M2 V2 = mk(zero, one, -D, zero);
    auto Q = [&](const M2& V, const M2& W) { return tr(mul2(bracket(Am, W), bracket(V, Ym))) * half; };
    PadicNumber q11 = Q(V1, V1), q22 = Q(V2, V2), q12 = Q(V1, V2), q21 = Q(V2, V1);
    if (!q12.isZero() || !q21.isZero()) throw Error("Q-form Gram matrix is not diagonal");
    return {{q11, q22}};
}

CycInt gammaFactor(const TameExtension& E, const ExtElement& alpha, const ExtElement& Y,
                   const AdditiveCharacter& psi, bool viaOracle) {
    QuadForm Q = qFormMatrix(E, alpha, Y);
    if (!viaOracle) return gammaFactorClosed(E, alpha, Y, psi);
    return weilIndexRaw(Q.diag[0], psi) * weilIndexRaw(Q.diag[1], psi);
}

CycInt gammaFactorClosed(const TameExtension& E, const ExtElement& alpha, const ExtElement& Y,
                         const AdditiveCharacter& psi) {
    PadicNumber x = E.coeffPadic(alpha, 1);
    PadicNumber y = E.coeffPadic(Y, 1);
    if (x.isZero() || y.isZero()) throw DomainError("degenerate Q-form (alpha or Y in F)");
    const PadicNumber& D = E.delta();
    return CycInt(hilbert(x, D)) * CycInt(hilbert(y, D)) * weilGammaClosed(D, psi);
}

int lambdaSigma(const TameExtension& E, int reducedLevel) {
    if (!E.isRamified()) return (reducedLevel + 1) % 2 == 0 ? 1 : -1;
    return 1;
}

// ---- the character formula ----

FormulaValue evalFormula(const GenuineCharacter& chi, const ExtElement& w, int deltaPlusLen,
                         const TauCharacter& tau) {
    const TameExtension& E = chi.pair().ext();
    if (&E != &tau.ext()) throw DomainError("tau lives on a different extension");
    long p = E.config().p;
    long q = p;
    int N = E.config().precision;
    const AdditiveCharacter& psi = levelOnePsi(p);
    if (w.isZero() || E.inFStar(w)) throw DomainError("formula needs a regular torus element");

    DepthClass dc = nDepth(E, w);
    int k = dc.positive ? dc.levelK : 0;

    MinimalReduction red = minimalReduction(chi.pair());
    int lvl = red.pair.level();
    if (lvl == 0) {
        if (E.isRamified())
            throw DomainError("no depth-zero supercuspidal attaches to a ramified pair");
        if (k != 0) throw DomainError("outside the window: depth zero needs n(w) = 0");
    } else if (2 * k > lvl) {
        throw DomainError("outside the window 0 <= n(w) <= r/2");
    }

    const MultCharacter& chiMin = red.pair.chi();
    WeylDenominator den = weylDenominator(tau, w, deltaPlusLen);

    CycInt uni;
    NormToken tok;
    CycInt numerator;
    if (E.degree() == 2) {
        int m1d = hilbert(PadicNumber::fromInteger(p, N, -1), E.delta());
        numerator = chiMin.eval(w) + CycInt(m1d) * chiMin.eval(E.conjQuad(w));
        ExtElement twoDelta = E.scalarMul(PadicNumber::fromInteger(p, N, 2), E.adjoinedRoot());
        if (lvl >= 1) {
            PadicNumber x = xChi(red.pair);
            uni = CycInt(hilbert(x, E.delta())) * weilGammaClosed(E.delta(), psi) *
                  tau.evalT0(twoDelta);
            tok.mul(NormFactor::DegPi, 1)
                .mul(NormFactor::CPsiSub, 1)
                .mul(NormFactor::CPsiAmb, -1)
                .mul(NormFactor::EtaHalf, -1);
        } else {
            uni = -tau.evalT0(twoDelta);
            tok.mul(NormFactor::DegPi, 1).mul(NormFactor::DegSigma, -1);
        }
        if (deltaPlusLen % 2 != 0)
            uni = uni * tau.evalT0(E.fromPadic(PadicNumber::fromInteger(p, N, -1)));
    } else {
        MultCharacter dchi = deltaTwist(red.pair);
        numerator = CycInt(0);
        for (int s = 0; s < E.galoisOrder(); ++s) {
            ExtElement sw = E.galoisApply(s, w);
            numerator += chiMin.eval(sw) * dchi.eval(sw);
        }
        // collapsed constant of the denominator, times lambda(sigma) or the
        // depth-zero sign; the tau_o((-1)^{sum k}) factors cancel against the
        // denominator and are carried through den.collapsed
        if (lvl >= 1) {
            uni = CycInt(lambdaSigma(E, lvl));
            tok.mul(NormFactor::DegPi, 1)
                .mul(NormFactor::CPsiSub, 1)
                .mul(NormFactor::CPsiAmb, -1)
                .mul(NormFactor::EtaHalf, -1);
        } else {
            uni = CycInt((E.degree() + 1) % 2 == 0 ? 1 : -1); // (-1)^{ell+1}
            tok.mul(NormFactor::DegPi, 1).mul(NormFactor::DegSigma, -1);
        }
        long sk = 0;
        for (int i = 1; i <= (E.degree() - 1) / 2; ++i) sk += i;
        if (!tau.trivialRealization()) {
            CycInt tm1 = tau.evalT0(E.fromPadic(PadicNumber::fromInteger(p, N, -1)));
            if (sk % 2 != 0) uni = uni * tm1;            // epsilon-constant factor
            if (deltaPlusLen % 2 != 0) uni = uni * tm1;  // epsilon(s Delta^+)
        }
    }

    // exact part: uni * numerator / (collapsed |D|^{1/2}), then the twist
    CycInt invden = den.collapsed.inverse();
    CycInt total = uni * numerator * invden;
    if (!red.phi.isTrivial()) total = total * red.phi.eval(E.norm(w));
    ExactValue exact = total.isZero() ? ExactValue::zero(q) : ExactValue(q, den.vD, total);
    return {exact, tok};
}

} // namespace ellchar
