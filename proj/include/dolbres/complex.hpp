#pragma once

#include "dolbres/matrix.hpp"

#include <map>
#include <optional>
#include <utility>

namespace dolbres {

/// Bounded cochain complex of finite dimensional rational vector spaces.
/// Degrees run over lo() .. hi(); differential(n): C^n -> C^{n+1}.
class CochainComplex {
public:
    CochainComplex() : lo_(0) {}
    CochainComplex(int lo, std::vector<int> dims, std::vector<Mat> d);

    /// The complex 0 -> Q^k -> 0 concentrated in the given degree.
    static CochainComplex concentrated(int degree, int dim);

    int lo() const { return lo_; }
    int hi() const { return lo_ + int(dims_.size()) - 1; }
    int dim(int n) const;
    const std::vector<int>& dims() const { return dims_; }
    /// Differential out of degree n (zero matrix of the right shape if absent).
    Mat differential(int n) const;

    bool operator==(const CochainComplex& o) const {
        return lo_ == o.lo_ && dims_ == o.dims_ && d_ == o.d_;
    }

    /// Exactness of the pair d(n), d(n-1) is part of construction; this
    /// revalidates shapes and d.d = 0 and throws on violation.
    void validate() const;

    std::vector<int> cohomology_dims() const;

    /// Representatives: for each degree, a matrix whose columns are cocycles
    /// spanning the cohomology (independent modulo coboundaries).
    std::vector<Mat> cohomology_bases() const;

    Int euler_characteristic() const;

private:
    int lo_;
    std::vector<int> dims_;
    std::vector<Mat> d_;  // d_[k] : degree lo_+k -> lo_+k+1 ; size dims_.size()-1 (or 0)
};

/// Degreewise map of cochain complexes commuting with the differentials.
struct ChainMap {
    CochainComplex source;
    CochainComplex target;
    std::map<int, Mat> parts;  // degree -> matrix (missing degrees are zero maps)

    Mat part(int n) const;
    void validate() const;
};

ChainMap identity_chain_map(const CochainComplex& c);

/// Mapping cone with the convention cone^n = source^{n+1} (+) target^n,
/// d(a,b) = (-d_src a, phi(a) + d_tgt b).
CochainComplex cone(const ChainMap& phi);

bool is_quasi_iso(const ChainMap& phi);

/// Matrices of the maps induced on cohomology, in the canonical representative
/// bases of cohomology_bases(); keyed by degree (union of both ranges).
std::map<int, Mat> induced_cohomology_maps(const ChainMap& phi);

/// Two-direction multicomplex on a rectangular grid of bidegrees
/// (p,q), p in 0..p_max, q in q_lo..q_hi.  dp : (p,q)->(p+1,q),
/// dq : (p,q)->(p,q+1).  All rectangles must anti-commute exactly.
class Multicomplex {
public:
    Multicomplex(int p_max, int q_lo, int q_hi);

    void set_dim(int p, int q, int dim);
    int dim(int p, int q) const;
    void set_dp(int p, int q, Mat m);
    void set_dq(int p, int q, Mat m);
    Mat dp(int p, int q) const;
    Mat dq(int p, int q) const;

    int p_max() const { return p_max_; }
    int q_lo() const { return q_lo_; }
    int q_hi() const { return q_hi_; }

    /// Throws with the offending (p,q) named if some rectangle fails to
    /// anti-commute (dq.dp + dp.dq != 0) or a differential fails d.d = 0.
    void validate_anticommute() const;

    /// Simple complex: degree n = (+) over p+q=n, differential the plain sum
    /// of the two direction differentials (signs are already in the data).
    CochainComplex total() const;

    /// Offset of block p within total degree n (ordered by increasing p).
    int total_offset(int n, int p) const;

private:
    int p_max_, q_lo_, q_hi_;
    std::map<std::pair<int, int>, int> dims_;
    std::map<std::pair<int, int>, Mat> dp_, dq_;
};

}  // namespace dolbres
