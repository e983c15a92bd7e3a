#include "ellchar/cyclotomic.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace ellchar {

namespace {

long long normMod(long long a, long long m) {
    long long r = a % m;
    return r < 0 ? r + m : r;
}

long long mulMod(long long a, long long b, long long m) {
    return static_cast<long long>((__int128)a * b % m);
}

long long invMod(long long a, long long m) {
    long long g = m, x = 0, x1 = 1, a1 = normMod(a, m);
    while (a1 != 0) {
        long long q = g / a1;
        g -= q * a1; std::swap(g, a1);
        x -= q * x1; std::swap(x, x1);
    }
    if (g != 1) throw DomainError("invMod: not invertible");
    return normMod(x, m);
}

struct Dim {
    long q;        // p^a
    long p;
    long pa1;      // p^{a-1}
    long phi;      // q - pa1
    long M;        // m / q
    long crtN;     // M^{-1} mod q
    int64_t stride;
};

struct ConductorInfo {
    long m = 1;
    std::vector<Dim> dims;
    int64_t phiTotal = 1;
};

const ConductorInfo& info(long m) {
    static std::map<long, ConductorInfo> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    if (m < 1 || m > CycInt::kMaxConductor || m % 4 == 2)
        throw Error("cyclotomic conductor out of range: " + std::to_string(m));
    ConductorInfo ci;
    ci.m = m;
    long rest = m;
    for (long p = 2; p * p <= rest; ++p) {
        if (rest % p == 0) {
            long q = 1;
            while (rest % p == 0) { rest /= p; q *= p; }
            ci.dims.push_back({q, p, q / p, q - q / p, 0, 0, 0});
        }
    }
    if (rest > 1) ci.dims.push_back({rest, rest, 1, rest - 1, 0, 0, 0});
    int64_t stride = 1;
    for (auto& d : ci.dims) {
        d.M = m / d.q;
        d.crtN = invMod(d.M % d.q, d.q);
        d.stride = stride;
        stride *= d.phi;
    }
    ci.phiTotal = stride;
    return cache.emplace(m, std::move(ci)).first->second;
}

std::vector<long> coordsOfIndex(const ConductorInfo& ci, int64_t idx) {
    std::vector<long> c(ci.dims.size());
    for (size_t i = 0; i < ci.dims.size(); ++i) {
        c[i] = static_cast<long>(idx % ci.dims[i].phi);
        idx /= ci.dims[i].phi;
    }
    return c;
}

long long exponentOfCoords(const ConductorInfo& ci, const std::vector<long>& c) {
    long long e = 0;
    for (size_t i = 0; i < ci.dims.size(); ++i)
        e = normMod(e + (long long)c[i] * ci.dims[i].M, ci.m);
    return e;
}

// Adds c * prod eta_i^{j_i} (0 <= j_i < q_i) to acc, rewriting coordinates
// j >= phi(q) through Phi_{p^a}: eta^j = -sum_{k=1}^{p-1} eta^{j - k p^{a-1}}.
template <typename Sink>
void addCoords(const ConductorInfo& ci, std::vector<long>& c, long long coeff,
               size_t dim, Sink&& sink) {
    if (coeff == 0) return;
    for (size_t i = dim; i < ci.dims.size(); ++i) {
        if (c[i] >= ci.dims[i].phi) {
            long j = c[i];
            for (long k = 1; k < ci.dims[i].p; ++k) {
                c[i] = j - k * ci.dims[i].pa1;
                addCoords(ci, c, -coeff, i + 1, sink);
            }
            c[i] = j;
            return;
        }
    }
    int64_t idx = 0;
    for (size_t i = 0; i < ci.dims.size(); ++i) idx += (int64_t)c[i] * ci.dims[i].stride;
    sink(idx, coeff);
}

template <typename Sink>
void addExponent(const ConductorInfo& ci, long long e, long long coeff, Sink&& sink) {
    e = normMod(e, ci.m);
    std::vector<long> c(ci.dims.size());
    for (size_t i = 0; i < ci.dims.size(); ++i)
        c[i] = static_cast<long>(mulMod(ci.dims[i].crtN, e % ci.dims[i].q, ci.dims[i].q));
    addCoords(ci, c, coeff, 0, sink);
}

// zeta_m^e with m = 2 (mod 4) rewritten at conductor m/2 (odd):
// zeta_{2n}^e = (-1)^e zeta_n^{e (n+1)/2}.
void normalizeConductorExp(long& m, long long& e, long long& coeff) {
    e = normMod(e, m);
    long long g = std::gcd((long long)m, e);
    if (e == 0) g = m;
    m = static_cast<long>(m / g);
    e /= g;
    if (m % 4 == 2) {
        long n = m / 2;
        if (e % 2 != 0) coeff = -coeff;
        e = normMod(e * ((n + 1) / 2), n);
        m = n;
    }
}

using TermMap = std::map<int64_t, long long>;

std::vector<std::pair<int64_t, long long>> compress(TermMap&& t) {
    std::vector<std::pair<int64_t, long long>> out;
    out.reserve(t.size());
    for (auto& kv : t)
        if (kv.second != 0) out.push_back(kv);
    return out;
}

// dense Phi_m, memoized; only needed for power-basis conversion
const std::vector<long long>& cyclotomicPoly(long m) {
    static std::map<long, std::vector<long long>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;

    // f := x^m - 1, divided by Phi_d for all proper divisors d
    std::function<std::vector<long long>(long)> phi = [&](long n) -> std::vector<long long> {
        auto hit = cache.find(n);
        if (hit != cache.end()) return hit->second;
        std::vector<long long> f(n + 1, 0);
        f[0] = -1; f[n] = 1;
        for (long d = 1; d < n; ++d) {
            if (n % d != 0) continue;
            auto g = phi(d);
            // exact division f /= g (both monic up to sign of constant)
            std::vector<long long> quot(f.size() - g.size() + 1, 0);
            std::vector<long long> rem = f;
            for (long long i = (long long)quot.size() - 1; i >= 0; --i) {
                long long c = rem[i + g.size() - 1] / g.back();
                quot[i] = c;
                if (c != 0)
                    for (size_t j = 0; j < g.size(); ++j) rem[i + j] -= c * g[j];
            }
            f = quot;
        }
        cache[n] = f;
        return f;
    };
    phi(m);
    return cache.at(m);
}

} // namespace

CycInt::CycInt(long long n) {
    if (n != 0) terms_.push_back({0, n});
}

CycInt CycInt::rootOfUnity(long m, long long k) {
    if (m < 1) throw DomainError("rootOfUnity: conductor must be positive");
    long long coeff = 1;
    normalizeConductorExp(m, k, coeff);
    CycInt r;
    r.m_ = m;
    TermMap acc;
    addExponent(info(m), k, coeff, [&](int64_t i, long long c) { acc[i] += c; });
    r.terms_ = compress(std::move(acc));
    r.reduceConductorInPlace();
    return r;
}

CycInt CycInt::fromPowerBasis(long m, const std::vector<long long>& coeffs) {
    if (m % 4 == 2) throw DomainError("fromPowerBasis: conductor 2 mod 4 not canonical");
    CycInt r;
    r.m_ = m;
    const auto& ci = info(m);
    TermMap acc;
    for (size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i] != 0)
            addExponent(ci, (long long)i, coeffs[i], [&](int64_t j, long long c) { acc[j] += c; });
    r.terms_ = compress(std::move(acc));
    r.reduceConductorInPlace();
    return r;
}

bool CycInt::isInteger() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 0);
}

long long CycInt::asInteger() const {
    if (terms_.empty()) return 0;
    if (!isInteger()) throw DomainError("asInteger: not a rational integer");
    return terms_[0].second;
}

CycInt CycInt::liftTo(long M) const {
    if (M == m_) return *this;
    if (M % m_ != 0) throw DomainError("liftTo: not a multiple conductor");
    CycInt r;
    r.m_ = M;
    const auto& src = info(m_);
    const auto& dst = info(M);
    long long scale = M / m_;
    TermMap acc;
    for (auto& [idx, c] : terms_) {
        long long e = exponentOfCoords(src, coordsOfIndex(src, idx));
        addExponent(dst, e * scale, c, [&](int64_t j, long long cc) { acc[j] += cc; });
    }
    r.terms_ = compress(std::move(acc));
    return r;
}

void CycInt::reduceConductorInPlace() {
    if (terms_.empty()) { m_ = 1; return; }
    bool changed = true;
    while (changed && m_ > 1) {
        changed = false;
        const auto& ci = info(m_);
        for (size_t i = 0; i < ci.dims.size() && !changed; ++i) {
            bool allZero = true, allDivP = ci.dims[i].q > ci.dims[i].p;
            for (auto& [idx, c] : terms_) {
                long j = coordsOfIndex(ci, idx)[i];
                if (j != 0) allZero = false;
                if (j % ci.dims[i].p != 0) allDivP = false;
            }
            long newM = 0;
            if (allZero) newM = m_ / ci.dims[i].q;
            else if (allDivP) newM = m_ / ci.dims[i].p;
            if (newM == 0) continue;
            const auto& cj = info(newM);
            TermMap acc;
            for (auto& [idx, c] : terms_) {
                auto coords = coordsOfIndex(ci, idx);
                if (allZero) coords.erase(coords.begin() + i);
                else coords[i] /= ci.dims[i].p;
                // coords are already within the reduced ranges
                int64_t nidx = 0;
                for (size_t l = 0; l < cj.dims.size(); ++l)
                    nidx += (int64_t)coords[l] * cj.dims[l].stride;
                acc[nidx] += c;
            }
            m_ = newM;
            terms_ = compress(std::move(acc));
            changed = true;
        }
    }
    if (terms_.empty()) m_ = 1;
}

CycInt operator+(const CycInt& a, const CycInt& b) {
    long M = static_cast<long>(std::lcm((long long)a.m_, (long long)b.m_));
    if (M > CycInt::kMaxConductor) throw Error("cyclotomic conductor overflow");
    CycInt x = a.liftTo(M), y = b.liftTo(M);
    TermMap acc;
    for (auto& t : x.terms_) acc[t.first] += t.second;
    for (auto& t : y.terms_) acc[t.first] += t.second;
    CycInt r;
    r.m_ = M;
    r.terms_ = compress(std::move(acc));
    r.reduceConductorInPlace();
    return r;
}

CycInt operator-(const CycInt& a) {
    CycInt r = a;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
}

CycInt operator-(const CycInt& a, const CycInt& b) { return a + (-b); }

CycInt operator*(const CycInt& a, const CycInt& b) {
    if (a.isZero() || b.isZero()) return CycInt();
    long M = static_cast<long>(std::lcm((long long)a.m_, (long long)b.m_));
    if (M > CycInt::kMaxConductor) throw Error("cyclotomic conductor overflow");
    CycInt x = a.liftTo(M), y = b.liftTo(M);
    const auto& ci = info(M);
    TermMap acc;
    std::vector<long> cs(ci.dims.size());
    for (auto& [ia, ca] : x.terms_) {
        auto A = coordsOfIndex(ci, ia);
        for (auto& [ib, cb] : y.terms_) {
            auto B = coordsOfIndex(ci, ib);
            for (size_t i = 0; i < cs.size(); ++i) {
                cs[i] = A[i] + B[i];
                if (cs[i] >= ci.dims[i].q) cs[i] -= ci.dims[i].q;
            }
            auto tmp = cs;
            addCoords(ci, tmp, ca * cb, 0, [&](int64_t j, long long c) { acc[j] += c; });
        }
    }
    CycInt r;
    r.m_ = M;
    r.terms_ = compress(std::move(acc));
    r.reduceConductorInPlace();
    return r;
}

bool CycInt::operator==(const CycInt& b) const {
    if (m_ == b.m_) return terms_ == b.terms_;
    long M = static_cast<long>(std::lcm((long long)m_, (long long)b.m_));
    return liftTo(M).terms_ == b.liftTo(M).terms_;
}

CycInt CycInt::galois(long long k) const {
    if (std::gcd((long long)m_, normMod(k, m_)) != 1)
        throw DomainError("galois: exponent not coprime to conductor");
    CycInt r;
    r.m_ = m_;
    const auto& ci = info(m_);
    TermMap acc;
    for (auto& [idx, c] : terms_) {
        long long e = exponentOfCoords(ci, coordsOfIndex(ci, idx));
        addExponent(ci, mulMod(normMod(k, m_), e, m_), c,
                    [&](int64_t j, long long cc) { acc[j] += cc; });
    }
    r.terms_ = compress(std::move(acc));
    r.reduceConductorInPlace();
    return r;
}

CycInt CycInt::conj() const {
    if (m_ == 1) return *this;
    return galois(m_ - 1);
}

bool CycInt::isRootOfUnity() const {
    if (isZero()) return false;
    CycInt n = *this * conj();
    return n.isInteger() && n.asInteger() == 1;
}

CycInt CycInt::inverse() const {
    if (!isRootOfUnity()) throw DomainError("inverse: only roots of unity are invertible here");
    return conj();
}

long CycInt::rootOrder() const {
    if (!isRootOfUnity()) throw DomainError("rootOrder: not a root of unity");
    long bound = (m_ % 2 == 0) ? m_ : 2 * m_;
    CycInt y = *this;
    CycInt one(1);
    for (long k = 1; k <= bound; ++k) {
        if (y == one) return k;
        y = y * *this;
    }
    throw Error("rootOrder: order exceeds conductor bound");
}

CycInt CycInt::pow(long long e) const {
    if (e < 0) return inverse().pow(-e);
    CycInt r(1), b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

bool CycInt::divisibleBy(long long n) const {
    if (n == 0) return isZero();
    for (auto& t : terms_)
        if (t.second % n != 0) return false;
    return true;
}

CycInt CycInt::dividedBy(long long n) const {
    if (!divisibleBy(n)) throw DomainError("dividedBy: not divisible");
    CycInt r = *this;
    for (auto& t : r.terms_) t.second /= n;
    return r;
}

std::vector<long long> CycInt::powerBasis() const {
    const auto& ci = info(m_);
    const auto& Phi = cyclotomicPoly(m_);
    size_t deg = Phi.size() - 1;
    std::vector<long long> out(deg, 0);
    for (auto& [idx, c] : terms_) {
        long long e = exponentOfCoords(ci, coordsOfIndex(ci, idx));
        // x^e mod Phi_m by long division
        std::vector<long long> mono(e + 1, 0);
        mono[e] = c;
        for (long long d = e; d >= (long long)deg; --d) {
            long long lead = mono[d];
            if (lead == 0) continue;
            for (size_t j = 0; j < Phi.size(); ++j) mono[d - deg + j] -= lead * Phi[j];
        }
        for (size_t i = 0; i < deg && i < mono.size(); ++i) out[i] += mono[i];
    }
    return out;
}

std::string CycInt::str() const {
    if (terms_.empty()) return "0";
    const auto& ci = info(m_);
    std::ostringstream os;
    bool first = true;
    for (auto& [idx, c] : terms_) {
        long long e = exponentOfCoords(ci, coordsOfIndex(ci, idx));
        if (!first) os << (c >= 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        first = false;
        long long a = c >= 0 ? c : -c;
        if (e == 0) { os << a; continue; }
        if (a != 1) os << a << "*";
        os << "z" << m_;
        if (e != 1) os << "^" << e;
    }
    return os.str();
}

CycBuilder::CycBuilder(long m) : m_(m) {
    const auto& ci = info(m);
    dense_.assign(ci.phiTotal, 0);
}

void CycBuilder::add(long long exponent, long long coeff) {
    addExponent(info(m_), exponent, coeff, [&](int64_t i, long long c) { dense_[i] += c; });
}

CycInt CycBuilder::take() {
    CycInt r;
    r.m_ = m_;
    for (int64_t i = 0; i < (int64_t)dense_.size(); ++i)
        if (dense_[i] != 0) r.terms_.push_back({i, dense_[i]});
    r.reduceConductorInPlace();
    dense_.clear();
    return r;
}

ExactValue::ExactValue(long q, long halfExp, CycInt c) : q_(q), half_(halfExp), cyc_(std::move(c)) {
    canonicalize();
}

void ExactValue::canonicalize() {
    if (cyc_.isZero()) { half_ = 0; return; }
    if (q_ < 2) throw DomainError("ExactValue: base q must be >= 2");
    while (cyc_.divisibleBy(q_)) {
        cyc_ = cyc_.dividedBy(q_);
        half_ += 2;
    }
}

ExactValue operator*(const ExactValue& a, const ExactValue& b) {
    if (a.isZero()) return ExactValue::zero(b.q_ ? b.q_ : a.q_);
    if (b.isZero()) return ExactValue::zero(a.q_);
    if (a.q_ != b.q_) throw DomainError("ExactValue: mixed q bases");
    return ExactValue(a.q_, a.half_ + b.half_, a.cyc_ * b.cyc_);
}

ExactValue ExactValue::inverse() const {
    if (isZero()) throw DomainError("ExactValue: inverse of zero");
    return ExactValue(q_, -half_, cyc_.inverse());
}

ExactValue add(const ExactValue& a, const ExactValue& b) {
    if (a.isZero()) return b;
    if (b.isZero()) return a;
    if (a.q_ != b.q_) throw DomainError("ExactValue: mixed q bases");
    if (a.half_ != b.half_)
        throw DomainError("ExactValue: sum of mismatched q-half-powers");
    return ExactValue(a.q_, a.half_, a.cyc_ + b.cyc_);
}

bool ExactValue::operator==(const ExactValue& b) const {
    if (isZero() || b.isZero()) return isZero() && b.isZero();
    return q_ == b.q_ && half_ == b.half_ && cyc_ == b.cyc_;
}

std::string ExactValue::str() const {
    if (isZero()) return "0";
    std::ostringstream os;
    if (half_ != 0) {
        os << "q^(" << half_ << "/2) * ";
    }
    os << "(" << cyc_.str() << ")";
    return os.str();
}

} // namespace ellchar
