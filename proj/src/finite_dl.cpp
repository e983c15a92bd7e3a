#include "ellchar/finite_dl.hpp"

#include <algorithm>

namespace ellchar {

namespace {

// polynomial helpers over F_p, constant first, reduced mod a monic poly
std::vector<long> polyMulMod(const std::vector<long>& a, const std::vector<long>& b,
                             const std::vector<long>& mod, long p) {
    size_t f = mod.size();
    std::vector<long> c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = (long)((c[i + j] + (long long)a[i] * b[j]) % p);
    for (size_t k = c.size(); k-- > f;) {
        long lead = c[k];
        if (!lead) continue;
        c[k] = 0;
        for (size_t j = 0; j < f; ++j) {
            long long t = c[k - f + j] - (long long)lead * mod[j];
            c[k - f + j] = (long)((t % p + p) % p);
        }
    }
    c.resize(f);
    return c;
}

bool irreduciblePoly(const std::vector<long>& mod, long p) {
    size_t f = mod.size();
    if (f == 1) return true;
    std::vector<long> x(f, 0);
    x[1 % f] = 1;
    // x^{p^f} = x and x^{p^d} != x for maximal proper divisor degrees
    auto powp = [&](std::vector<long> v, int times) {
        for (int i = 0; i < times; ++i) {
            std::vector<long> r(f, 0);
            r[0] = 1;
            std::vector<long> b = v;
            long e = p;
            while (e) {
                if (e & 1) r = polyMulMod(r, b, mod, p);
                b = polyMulMod(b, b, mod, p);
                e >>= 1;
            }
            v = r;
        }
        return v;
    };
    if (powp(x, (int)f) != x) return false;
    for (size_t d = 1; d < f; ++d) {
        if (f % d != 0) continue;
        if (powp(x, (int)d) == x) return false;
    }
    return true;
}

} // namespace

FqField::FqField(long p, int f) : p_(p), f_(f) {
    q_ = 1;
    for (int i = 0; i < f; ++i) q_ *= p;
    if (f == 1) {
        mod_ = {0};
        buildTables();
        return;
    }
    std::vector<long> mod(f, 0);
    bool found = false;
    for (long code = 1; code < q_ && !found; ++code) {
        long x = code;
        for (int i = 0; i < f; ++i) { mod[i] = x % p; x /= p; }
        if (mod[0] == 0) continue;
        if (irreduciblePoly(mod, p)) found = true;
    }
    if (!found) throw Error("no irreducible polynomial for FqField");
    mod_ = mod;
    buildTables();
}

FqField::FqField(long p, int f, const std::vector<long>& mod) : p_(p), f_(f), mod_(mod) {
    q_ = 1;
    for (int i = 0; i < f; ++i) q_ *= p;
    if ((int)mod_.size() != f) throw ConfigError("FqField: modulus degree mismatch");
    if (f > 1 && !irreduciblePoly(mod_, p)) throw ConfigError("FqField: reducible modulus");
    buildTables();
}

void FqField::buildTables() {
    if (q_ > 4096) throw ConfigError("FqField: table size exceeds the configured bound");
    logT_.assign(q_, -1);
    expT_.assign(q_ - 1, 0);
    // generator: smallest encoding of full order (matches TameExtension)
    std::vector<long> fac;
    long m = q_ - 1;
    for (long d = 2; d * d <= m; ++d)
        if (m % d == 0) { fac.push_back(d); while (m % d == 0) m /= d; }
    if (m > 1) fac.push_back(m);
    for (long cand = 2; cand < q_ && gen_ == 0; ++cand) {
        bool ok = true;
        for (long fct : fac)
            if (pow(cand, (q_ - 1) / fct) == 1) { ok = false; break; }
        if (ok) gen_ = cand;
    }
    if (q_ == 2) gen_ = 1;
    if (gen_ == 0) throw Error("FqField: no generator");
    long acc = 1;
    for (long k = 0; k < q_ - 1; ++k) {
        logT_[acc] = (int)k;
        expT_[k] = acc;
        acc = mul(acc, gen_);
    }
}

long FqField::add(long a, long b) const {
    long r = 0, w = 1;
    for (int i = 0; i < f_; ++i) {
        long da = (a / w) % p_, db = (b / w) % p_;
        r += ((da + db) % p_) * w;
        w *= p_;
    }
    return r;
}

long FqField::neg(long a) const {
    long r = 0, w = 1;
    for (int i = 0; i < f_; ++i) {
        long da = (a / w) % p_;
        r += ((p_ - da) % p_) * w;
        w *= p_;
    }
    return r;
}

long FqField::sub(long a, long b) const { return add(a, neg(b)); }

long FqField::mul(long a, long b) const {
    if (a == 0 || b == 0) return 0;
    if (f_ == 1) return (long)(((long long)a * b) % p_);
    std::vector<long> pa(f_), pb(f_);
    long x = a;
    for (int i = 0; i < f_; ++i) { pa[i] = x % p_; x /= p_; }
    x = b;
    for (int i = 0; i < f_; ++i) { pb[i] = x % p_; x /= p_; }
    auto c = polyMulMod(pa, pb, mod_, p_);
    long r = 0, w = 1;
    for (int i = 0; i < f_; ++i) { r += c[i] * w; w *= p_; }
    return r;
}

long FqField::pow(long a, long long e) const {
    if (a == 0) {
        if (e <= 0) throw DomainError("0^e with e <= 0");
        return 0;
    }
    long long m = q_ - 1;
    long long ee = e % m;
    if (ee < 0) ee += m;
    long r = 1, b = a;
    while (ee) {
        if (ee & 1) r = mul(r, b);
        b = mul(b, b);
        ee >>= 1;
    }
    return r;
}

long FqField::inv(long a) const {
    if (a == 0) throw DomainError("inverse of zero in F_q");
    return pow(a, q_ - 2);
}

long FqField::dlog(long a) const {
    if (a == 0) throw DomainError("dlog of zero");
    return logT_[a];
}

long FqField::fromDlog(long k) const {
    long m = q_ - 1;
    return expT_[((k % m) + m) % m];
}

// ---- GL(n, q) ----

GLnq::GLnq(int n, long q, bool enumerate)
    : n_(n), enumerated_(enumerate), base_(q, 1), ext_(q, n) { build(); }

GLnq::GLnq(int n, long q, const std::vector<long>& extMod, bool enumerate)
    : n_(n), enumerated_(enumerate), base_(q, 1), ext_(q, n, extMod) { build(); }

long GLnq::order() const {
    unsigned long long expect = 1, qn = (unsigned long long)ext_.q(), qi = 1;
    for (int i = 0; i < n_; ++i) { expect *= qn - qi; qi *= (unsigned long long)base_.q(); }
    return (long)expect;
}

unsigned long long GLnq::key(const Mat& m) const {
    unsigned long long k = 0;
    for (long v : m) k = k * (unsigned long long)base_.q() + (unsigned long long)v;
    return k;
}

long GLnq::det(const Mat& a) const {
    // Gaussian elimination over F_q
    long p = base_.q();
    Mat m = a;
    long d = 1;
    for (int col = 0; col < n_; ++col) {
        int piv = -1;
        for (int r = col; r < n_; ++r)
            if (m[r * n_ + col] != 0) { piv = r; break; }
        if (piv < 0) return 0;
        if (piv != col) {
            for (int j = 0; j < n_; ++j) std::swap(m[piv * n_ + j], m[col * n_ + j]);
            d = base_.neg(d);
        }
        long pv = m[col * n_ + col];
        d = base_.mul(d, pv);
        long pvInv = base_.inv(pv);
        for (int r = col + 1; r < n_; ++r) {
            long f = base_.mul(m[r * n_ + col], pvInv);
            if (!f) continue;
            for (int j = col; j < n_; ++j)
                m[r * n_ + j] = base_.sub(m[r * n_ + j], base_.mul(f, m[col * n_ + j]));
        }
    }
    (void)p;
    return d;
}

GLnq::Mat GLnq::matMul(const Mat& a, const Mat& b) const {
    Mat c(n_ * n_, 0);
    for (int i = 0; i < n_; ++i)
        for (int k = 0; k < n_; ++k) {
            long aik = a[i * n_ + k];
            if (!aik) continue;
            for (int j = 0; j < n_; ++j)
                c[i * n_ + j] = base_.add(c[i * n_ + j], base_.mul(aik, b[k * n_ + j]));
        }
    return c;
}

GLnq::Mat GLnq::matInv(const Mat& a) const {
    Mat m = a;
    Mat inv(n_ * n_, 0);
    for (int i = 0; i < n_; ++i) inv[i * n_ + i] = 1;
    for (int col = 0; col < n_; ++col) {
        int piv = -1;
        for (int r = col; r < n_; ++r)
            if (m[r * n_ + col] != 0) { piv = r; break; }
        if (piv < 0) throw DomainError("singular matrix");
        if (piv != col)
            for (int j = 0; j < n_; ++j) {
                std::swap(m[piv * n_ + j], m[col * n_ + j]);
                std::swap(inv[piv * n_ + j], inv[col * n_ + j]);
            }
        long pvInv = base_.inv(m[col * n_ + col]);
        for (int j = 0; j < n_; ++j) {
            m[col * n_ + j] = base_.mul(m[col * n_ + j], pvInv);
            inv[col * n_ + j] = base_.mul(inv[col * n_ + j], pvInv);
        }
        for (int r = 0; r < n_; ++r) {
            if (r == col) continue;
            long f = m[r * n_ + col];
            if (!f) continue;
            for (int j = 0; j < n_; ++j) {
                m[r * n_ + j] = base_.sub(m[r * n_ + j], base_.mul(f, m[col * n_ + j]));
                inv[r * n_ + j] = base_.sub(inv[r * n_ + j], base_.mul(f, inv[col * n_ + j]));
            }
        }
    }
    return inv;
}

std::vector<long> GLnq::charPolyFq(const Mat& a) const {
    // det(x I - a) by expansion for n <= 3
    long q = base_.q();
    if (n_ == 2) {
        long tr = base_.add(a[0], a[3]);
        long de = det(a);
        return {de, base_.neg(tr)};
    }
    if (n_ == 3) {
        long tr = base_.add(base_.add(a[0], a[4]), a[8]);
        long m01 = base_.sub(base_.mul(a[0], a[4]), base_.mul(a[1], a[3]));
        long m02 = base_.sub(base_.mul(a[0], a[8]), base_.mul(a[2], a[6]));
        long m12 = base_.sub(base_.mul(a[4], a[8]), base_.mul(a[5], a[7]));
        long c2 = base_.add(base_.add(m01, m02), m12);
        long de = det(a);
        return {base_.neg(de), c2, base_.neg(tr)};
    }
    (void)q;
    throw DomainError("charPolyFq supports n <= 3");
}

GLnq::Mat GLnq::torusEmbed(long extCode) const {
    // column j holds the coordinates of alpha * y^j
    Mat m(n_ * n_, 0);
    long yj = extCode;
    long y = base_.q(); // encoding of the generator y of F_{q^n}
    for (int j = 0; j < n_; ++j) {
        long v = yj;
        for (int i = 0; i < n_; ++i) {
            m[i * n_ + j] = v % base_.q();
            v /= base_.q();
        }
        yj = ext_.mul(yj, y);
    }
    return m;
}

std::optional<long> GLnq::torusLookup(const Mat& m) const {
    auto it = torusMap_.find(key(m));
    if (it == torusMap_.end()) return std::nullopt;
    return it->second;
}

bool GLnq::regularSemisimple(long sCode) const {
    if (sCode == 0) return false;
    long s = sCode;
    long fr = s;
    for (int i = 1; i < n_; ++i) {
        fr = ext_.frob(fr);
        if (fr == s) return false;
    }
    return true;
}

bool GLnq::thetaRegular(const FqMultChar& theta) const {
    long m = ext_.q() - 1;
    long k = ((theta.exp % m) + m) % m;
    long kk = k;
    for (int i = 1; i < n_; ++i) {
        kk = (long)(((long long)kk * base_.q()) % m);
        if (kk == k) return false;
    }
    return true;
}

void GLnq::build() {
    long q = base_.q();
    if (ext_.q() > 729) throw ConfigError("GLnq: q^n exceeds the discrete-log bound 3^6");
    for (long code = 1; code < ext_.q(); ++code)
        torusMap_.emplace(key(torusEmbed(code)), code);
    if (!enumerated_) return;
    unsigned long long total = 1;
    for (int i = 0; i < n_ * n_; ++i) {
        total *= (unsigned long long)q;
        if (total > 40000000ULL) throw ConfigError("GLnq: enumeration too large");
    }
    elements_.reserve(1 << 10);
    Mat m(n_ * n_, 0);
    for (unsigned long long code = 0; code < total; ++code) {
        unsigned long long v = code;
        for (int i = 0; i < n_ * n_; ++i) { m[i] = (long)(v % (unsigned long long)q); v /= (unsigned long long)q; }
        if (det(m) != 0) elements_.push_back(m);
    }
    if ((unsigned long long)order() != elements_.size())
        throw Error("GL(n,q) enumeration count mismatch");
    inverses_.reserve(elements_.size());
    for (auto& g : elements_) inverses_.push_back(matInv(g));
    // normalizer of the torus: conjugation preserves the embedded image
    long genT = ext_.generator();
    Mat tg = torusEmbed(genT);
    for (size_t i = 0; i < elements_.size(); ++i) {
        Mat conj = matMul(inverses_[i], matMul(tg, elements_[i]));
        if (torusLookup(conj)) normalizer_.push_back(i);
    }
}

CycInt thetaValue(const FqField& ext, const FqMultChar& theta, long x) {
    long m = ext.q() - 1;
    return CycInt::rootOfUnity(m, theta.exp * ext.dlog(x));
}

CycInt carterSum(const GLnq& G, long sCode, const FqMultChar& theta) {
    if (!G.enumerated()) throw DomainError("carter sum needs the enumerated group");
    if (!G.regularSemisimple(sCode))
        throw DomainError("carter sum needs a regular semisimple torus element");
    long m = G.ext().q() - 1;
    GLnq::Mat s = G.torusEmbed(sCode);
    std::vector<long long> counts(m, 0);
    for (size_t i = 0; i < G.elements().size(); ++i) {
        GLnq::Mat conj = G.matMul(G.inverseOf(i), G.matMul(s, G.elements()[i]));
        auto t = G.torusLookup(conj);
        if (!t) continue;
        counts[((theta.exp * G.ext().dlog(*t)) % m + m) % m] += 1;
    }
    CycInt out;
    for (long e = 0; e < m; ++e)
        if (counts[e]) out += CycInt(counts[e]) * CycInt::rootOfUnity(m, e);
    return out;
}

CycInt dlValue(const GLnq& G, long sCode, const FqMultChar& theta) {
    if (!G.regularSemisimple(sCode)) throw DomainError("dl value needs regular semisimple s");
    if (!G.thetaRegular(theta)) throw DomainError("dl value needs a regular theta");
    CycInt sum;
    long s = sCode;
    for (int i = 0; i < G.n(); ++i) {
        sum += thetaValue(G.ext(), theta, s);
        s = G.ext().frob(s);
    }
    // (-1)^{n+1} = epsilon_T * epsilon_{C0(s)}
    if (G.n() % 2 == 0) sum = -sum;
    return sum;
}

CycInt dlValueViaCarter(const GLnq& G, long sCode, const FqMultChar& theta) {
    CycInt cs = carterSum(G, sCode, theta);
    long tOrder = G.ext().q() - 1;
    // |C0(s)^Phi|_p = 1 for regular s; divide by |T^Phi| and apply the signs
    CycInt scaled = cs.dividedBy(tOrder);
    int sign = epsTorus(G) * epsGroupRank(G);
    return sign == 1 ? scaled : -scaled;
}

bool normalizerIdentity(const GLnq& G, long sCode, const FqMultChar& theta) {
    // {g : g^{-1} s g in T} must be exactly the torus normalizer, and the
    // full sum must equal |T| * sum over N/T
    GLnq::Mat s = G.torusEmbed(sCode);
    long m = G.ext().q() - 1;
    CycInt bySet;
    size_t hits = 0;
    for (size_t i = 0; i < G.elements().size(); ++i) {
        GLnq::Mat conj = G.matMul(G.inverseOf(i), G.matMul(s, G.elements()[i]));
        auto t = G.torusLookup(conj);
        if (t) ++hits;
    }
    if (hits != G.torusNormalizer().size()) return false;
    if (G.torusNormalizer().size() != (size_t)(m * G.n())) return false; // |N/T| = n
    CycInt orbit;
    long sc = sCode;
    for (int i = 0; i < G.n(); ++i) {
        orbit += thetaValue(G.ext(), theta, sc);
        sc = G.ext().frob(sc);
    }
    bySet = carterSum(G, sCode, theta);
    return bySet == CycInt(m) * orbit;
}

int epsTorus(const GLnq& G) {
    // q-rank of the elliptic torus: Frobenius orbits on the cocharacter
    // basis, i.e. orbits of the n-cycle
    std::vector<bool> seen(G.n(), false);
    int orbits = 0;
    for (int i = 0; i < G.n(); ++i) {
        if (seen[i]) continue;
        ++orbits;
        int j = i;
        while (!seen[j]) { seen[j] = true; j = (j + 1) % G.n(); }
    }
    return orbits % 2 == 0 ? 1 : -1;
}

int epsGroupRank(const GLnq& G) {
    return G.n() % 2 == 0 ? 1 : -1;
}

} // namespace ellchar
