#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "ellchar/cyclotomic.hpp"
#include "ellchar/extension.hpp"

namespace ellchar {

// F_{p^f} with exp/log tables.  Elements are encoded as base-p digit
// vectors packed into a long (little-endian); the generator is the smallest
// encoding of full multiplicative order, matching the residue-field tables
// of TameExtension for the same defining polynomial.
class FqField {
public:
    FqField(long p, int f);                               // search an irreducible
    FqField(long p, int f, const std::vector<long>& mod); // monic lower coeffs, length f

    long p() const { return p_; }
    int f() const { return f_; }
    long q() const { return q_; }
    const std::vector<long>& modPoly() const { return mod_; }

    long add(long a, long b) const;
    long sub(long a, long b) const;
    long neg(long a) const;
    long mul(long a, long b) const;
    long inv(long a) const;
    long pow(long a, long long e) const;
    long frob(long a) const { return pow(a, p_); }

    long generator() const { return gen_; }
    long dlog(long a) const; // a != 0
    long fromDlog(long k) const;

private:
    long p_, q_;
    int f_;
    std::vector<long> mod_;
    long gen_ = 0;
    std::vector<int> logT_;
    std::vector<long> expT_;
    void buildTables();
};

// theta(x) = zeta_{q^n-1}^{k dlog(x)} on the elliptic torus F_{q^n}*
struct FqMultChar {
    long exp; // k mod q^n - 1
};

// GL(n, q) for prime q, fully enumerated, with the elliptic torus
// T = F_{q^n}* embedded by the regular representation on the power basis.
class GLnq {
public:
    using Mat = std::vector<long>; // n*n entries over F_q, row-major

    // enumerate = false skips the group enumeration (orbit-sum values only)
    explicit GLnq(int n, long q, bool enumerate = true);
    GLnq(int n, long q, const std::vector<long>& extMod, bool enumerate = true);

    int n() const { return n_; }
    long q() const { return base_.q(); }
    const FqField& base() const { return base_; }
    const FqField& ext() const { return ext_; }
    bool enumerated() const { return enumerated_; }
    long order() const;
    const std::vector<Mat>& elements() const { return elements_; }
    const Mat& inverseOf(size_t idx) const { return inverses_[idx]; }

    Mat torusEmbed(long extCode) const;
    std::optional<long> torusLookup(const Mat& m) const;
    bool regularSemisimple(long sCode) const; // elliptic: Frobenius orbit has size n
    bool thetaRegular(const FqMultChar& theta) const;

    Mat matMul(const Mat& a, const Mat& b) const;
    Mat matInv(const Mat& a) const;
    long det(const Mat& a) const;
    std::vector<long> charPolyFq(const Mat& a) const; // monic, lower coeffs

    // indices of elements normalizing the torus
    const std::vector<size_t>& torusNormalizer() const { return normalizer_; }

private:
    int n_;
    bool enumerated_ = true;
    FqField base_;
    FqField ext_;
    std::vector<Mat> elements_;
    std::vector<Mat> inverses_;
    std::unordered_map<unsigned long long, long> torusMap_;
    std::vector<size_t> normalizer_;
    unsigned long long key(const Mat& m) const;
    void build();
};

CycInt thetaValue(const FqField& ext, const FqMultChar& theta, long x);

// brute-force sum over all g in GL(n,q) with g^{-1} s g in T
CycInt carterSum(const GLnq& G, long sCode, const FqMultChar& theta);

// R_{T,theta}(s) on elliptic regular semisimple s: the signed orbit sum
CycInt dlValue(const GLnq& G, long sCode, const FqMultChar& theta);
// the same value assembled from carterSum and the sign constants
CycInt dlValueViaCarter(const GLnq& G, long sCode, const FqMultChar& theta);

// the full-group sum collapses onto the torus normalizer
bool normalizerIdentity(const GLnq& G, long sCode, const FqMultChar& theta);

// sign constants recomputed from q-ranks (orbit count of Frobenius on the
// cocharacters of the elliptic torus; rank n for the group)
int epsTorus(const GLnq& G);
int epsGroupRank(const GLnq& G);

} // namespace ellchar
