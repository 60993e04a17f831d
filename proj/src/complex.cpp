#include "dolbres/complex.hpp"

#include <sstream>

namespace dolbres {

CochainComplex::CochainComplex(int lo, std::vector<int> dims, std::vector<Mat> d)
    : lo_(lo), dims_(std::move(dims)), d_(std::move(d)) {
    if (dims_.empty()) dims_.push_back(0);
    if (d_.size() + 1 != dims_.size())
        throw std::invalid_argument("cochain complex needs one differential per adjacent pair");
    validate();
}

CochainComplex CochainComplex::concentrated(int degree, int dim) {
    return CochainComplex(degree, {dim}, {});
}

int CochainComplex::dim(int n) const {
    if (n < lo_ || n > hi()) return 0;
    return dims_[n - lo_];
}

Mat CochainComplex::differential(int n) const {
    int k = n - lo_;
    if (k < 0 || k + 1 >= int(dims_.size())) return Mat::zero(dim(n + 1), dim(n));
    return d_[k];
}

void CochainComplex::validate() const {
    for (size_t k = 0; k + 1 < dims_.size(); ++k) {
        if (d_[k].rows() != dims_[k + 1] || d_[k].cols() != dims_[k]) {
            std::ostringstream os;
            os << "differential at degree " << lo_ + int(k) << " has shape " << d_[k].rows() << "x"
               << d_[k].cols() << ", expected " << dims_[k + 1] << "x" << dims_[k];
            throw std::invalid_argument(os.str());
        }
    }
    for (size_t k = 0; k + 2 < dims_.size(); ++k) {
        if (!(d_[k + 1] * d_[k]).is_zero()) {
            std::ostringstream os;
            os << "d.d != 0 out of degree " << lo_ + int(k);
            throw std::invalid_argument(os.str());
        }
    }
}

std::vector<int> CochainComplex::cohomology_dims() const {
    std::vector<int> h(dims_.size());
    for (size_t k = 0; k < dims_.size(); ++k) {
        int ker = dims_[k] - rank(differential(lo_ + int(k)));
        int im = (k == 0) ? 0 : rank(differential(lo_ + int(k) - 1));
        h[k] = ker - im;
    }
    return h;
}

std::vector<Mat> CochainComplex::cohomology_bases() const {
    std::vector<Mat> out;
    for (size_t k = 0; k < dims_.size(); ++k) {
        int n = lo_ + int(k);
        Mat ker = kernel_basis(differential(n));
        Mat im = (k == 0) ? Mat::zero(dims_[k], 0) : differential(n - 1);
        // Keep kernel basis vectors independent modulo the image, greedily in
        // the canonical kernel order.
        Mat span = column_space_canonical(im);
        int base_rank = span.cols();
        Mat reps(dims_[k], 0);
        for (int j = 0; j < ker.cols(); ++j) {
            Mat cand(dims_[k], 1);
            for (int i = 0; i < dims_[k]; ++i) cand.at(i, 0) = ker.at(i, j);
            Mat trial = span.hstack(cand);
            if (rank(trial) > base_rank + reps.cols()) {
                reps = reps.hstack(cand);
                span = trial;
            }
        }
        out.push_back(reps);
    }
    return out;
}

Int CochainComplex::euler_characteristic() const {
    Int e = 0;
    for (size_t k = 0; k < dims_.size(); ++k) {
        if ((lo_ + int(k)) % 2 == 0)
            e += dims_[k];
        else
            e -= dims_[k];
    }
    return e;
}

Mat ChainMap::part(int n) const {
    auto it = parts.find(n);
    if (it != parts.end()) return it->second;
    return Mat::zero(target.dim(n), source.dim(n));
}

void ChainMap::validate() const {
    for (auto& [n, m] : parts) {
        if (m.rows() != target.dim(n) || m.cols() != source.dim(n)) {
            std::ostringstream os;
            os << "chain map part at degree " << n << " has wrong shape";
            throw std::invalid_argument(os.str());
        }
    }
    int lo = std::min(source.lo(), target.lo());
    int hi = std::max(source.hi(), target.hi());
    for (int n = lo; n <= hi; ++n) {
        Mat lhs = target.differential(n) * part(n);
        Mat rhs = part(n + 1) * source.differential(n);
        if (!(lhs - rhs).is_zero()) {
            std::ostringstream os;
            os << "chain map does not commute with differentials at degree " << n;
            throw std::invalid_argument(os.str());
        }
    }
}

ChainMap identity_chain_map(const CochainComplex& c) {
    ChainMap m{c, c, {}};
    for (int n = c.lo(); n <= c.hi(); ++n) m.parts[n] = Mat::identity(c.dim(n));
    return m;
}

CochainComplex cone(const ChainMap& phi) {
    phi.validate();
    const CochainComplex& A = phi.source;
    const CochainComplex& B = phi.target;
    int lo = std::min(A.lo() - 1, B.lo());
    int hi = std::max(A.hi() - 1, B.hi());
    std::vector<int> dims;
    for (int n = lo; n <= hi; ++n) dims.push_back(A.dim(n + 1) + B.dim(n));
    std::vector<Mat> d;
    for (int n = lo; n < hi; ++n) {
        Mat da = -A.differential(n + 1);
        Mat f = phi.part(n + 1);
        Mat db = B.differential(n);
        Mat z = Mat::zero(B.dim(n + 1), 0);
        std::vector<int> rdims{A.dim(n + 2), B.dim(n + 1)};
        std::vector<int> cdims{A.dim(n + 1), B.dim(n)};
        Mat zero_tr = Mat::zero(A.dim(n + 2), B.dim(n));
        d.push_back(block_matrix(rdims, cdims, {{&da, &zero_tr}, {&f, &db}}));
    }
    return CochainComplex(lo, dims, d);
}

bool is_quasi_iso(const ChainMap& phi) {
    CochainComplex c = cone(phi);
    for (int h : c.cohomology_dims())
        if (h != 0) return false;
    return true;
}

std::map<int, Mat> induced_cohomology_maps(const ChainMap& phi) {
    phi.validate();
    std::vector<Mat> src_reps = phi.source.cohomology_bases();
    std::vector<Mat> tgt_reps = phi.target.cohomology_bases();
    std::map<int, Mat> out;
    int lo = std::min(phi.source.lo(), phi.target.lo());
    int hi = std::max(phi.source.hi(), phi.target.hi());
    for (int n = lo; n <= hi; ++n) {
        Mat sr = (n >= phi.source.lo() && n <= phi.source.hi()) ? src_reps[n - phi.source.lo()]
                                                                : Mat::zero(0, 0);
        Mat tr = (n >= phi.target.lo() && n <= phi.target.hi()) ? tgt_reps[n - phi.target.lo()]
                                                                : Mat::zero(phi.target.dim(n), 0);
        Mat mapped = phi.part(n) * ((sr.rows() == 0 && phi.source.dim(n) == 0)
                                        ? Mat::zero(0, sr.cols())
                                        : sr);
        // Express mapped representatives in (target reps | coboundaries).
        Mat bound = phi.target.differential(n - 1);
        Mat full = tr.hstack(bound);
        Mat coords = express_in_basis(full.cols() ? full : Mat::zero(phi.target.dim(n), 0),
                                      mapped.cols() ? mapped : Mat::zero(phi.target.dim(n), 0));
        Mat h(tr.cols(), mapped.cols());
        for (int i = 0; i < tr.cols(); ++i)
            for (int j = 0; j < mapped.cols(); ++j) h.at(i, j) = coords.at(i, j);
        out[n] = h;
    }
    return out;
}

Multicomplex::Multicomplex(int p_max, int q_lo, int q_hi) : p_max_(p_max), q_lo_(q_lo), q_hi_(q_hi) {}

void Multicomplex::set_dim(int p, int q, int dim) { dims_[{p, q}] = dim; }

int Multicomplex::dim(int p, int q) const {
    auto it = dims_.find({p, q});
    return it == dims_.end() ? 0 : it->second;
}

void Multicomplex::set_dp(int p, int q, Mat m) { dp_[{p, q}] = std::move(m); }
void Multicomplex::set_dq(int p, int q, Mat m) { dq_[{p, q}] = std::move(m); }

Mat Multicomplex::dp(int p, int q) const {
    auto it = dp_.find({p, q});
    return it == dp_.end() ? Mat::zero(dim(p + 1, q), dim(p, q)) : it->second;
}

Mat Multicomplex::dq(int p, int q) const {
    auto it = dq_.find({p, q});
    return it == dq_.end() ? Mat::zero(dim(p, q + 1), dim(p, q)) : it->second;
}

void Multicomplex::validate_anticommute() const {
    for (int p = 0; p <= p_max_; ++p)
        for (int q = q_lo_; q <= q_hi_; ++q) {
            if (dim(p, q) == 0) continue;
            if (p + 2 <= p_max_ && !(dp(p + 1, q) * dp(p, q)).is_zero()) {
                std::ostringstream os;
                os << "p-direction d.d != 0 at (" << p << "," << q << ")";
                throw std::invalid_argument(os.str());
            }
            if (q + 2 <= q_hi_ && !(dq(p, q + 1) * dq(p, q)).is_zero()) {
                std::ostringstream os;
                os << "q-direction d.d != 0 at (" << p << "," << q << ")";
                throw std::invalid_argument(os.str());
            }
            if (p + 1 <= p_max_ && q + 1 <= q_hi_) {
                Mat r = dq(p + 1, q) * dp(p, q) + dp(p, q + 1) * dq(p, q);
                if (!r.is_zero()) {
                    std::ostringstream os;
                    os << "rectangle at (" << p << "," << q << ") does not anti-commute";
                    throw std::invalid_argument(os.str());
                }
            }
        }
}

CochainComplex Multicomplex::total() const {
    validate_anticommute();
    int n_lo = q_lo_, n_hi = p_max_ + q_hi_;
    std::vector<int> dims;
    for (int n = n_lo; n <= n_hi; ++n) {
        int dsum = 0;
        for (int p = 0; p <= p_max_; ++p) dsum += dim(p, n - p);
        dims.push_back(dsum);
    }
    std::vector<Mat> d;
    for (int n = n_lo; n < n_hi; ++n) {
        std::vector<int> rdims, cdims;
        for (int p = 0; p <= p_max_; ++p) rdims.push_back(dim(p, n + 1 - p));
        for (int p = 0; p <= p_max_; ++p) cdims.push_back(dim(p, n - p));
        std::vector<Mat> store;
        store.reserve(2 * size_t(p_max_ + 1));
        std::vector<std::vector<const Mat*>> blocks(p_max_ + 1,
                                                    std::vector<const Mat*>(p_max_ + 1, nullptr));
        for (int p = 0; p <= p_max_; ++p) {
            int q = n - p;
            if (dim(p, q) == 0) continue;
            if (dim(p, q + 1) > 0) {
                store.push_back(dq(p, q));
                blocks[p][p] = &store.back();
            }
            if (p + 1 <= p_max_ && dim(p + 1, q) > 0) {
                store.push_back(dp(p, q));
                blocks[p + 1][p] = &store.back();
            }
        }
        d.push_back(block_matrix(rdims, cdims, blocks));
    }
    return CochainComplex(n_lo, dims, d);
}

int Multicomplex::total_offset(int n, int p) const {
    int off = 0;
    for (int pp = 0; pp < p; ++pp) off += dim(pp, n - pp);
    return off;
}

}  // namespace dolbres
