#include "dolbres/matrix.hpp"

#include <sstream>

namespace dolbres {

Rat parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    return Rat(num, den);
}

std::string rational_to_string(const Rat& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << "/" << denominator(r);
    return os.str();
}

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

bool Mat::is_zero() const {
    for (const auto& x : a_)
        if (x != 0) return false;
    return true;
}

bool Mat::is_identity() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (at(i, j) != Rat(i == j ? 1 : 0)) return false;
    return true;
}

Mat Mat::operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
    Mat r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Rat& x = at(i, k);
            if (x == 0) continue;
            for (int j = 0; j < o.cols_; ++j) {
                const Rat& y = o.at(k, j);
                if (y != 0) r.at(i, j) += x * y;
            }
        }
    return r;
}

Mat Mat::operator+(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum shape mismatch");
    Mat r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

Mat Mat::operator-(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix difference shape mismatch");
    Mat r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

Mat Mat::operator-() const {
    Mat r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = -a_[i];
    return r;
}

Mat Mat::scaled(const Rat& c) const {
    Mat r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = c * a_[i];
    return r;
}

Mat Mat::transpose() const {
    Mat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

Mat Mat::kron(const Mat& o) const {
    Mat r(rows_ * o.rows_, cols_ * o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) {
            if (at(i, j) == 0) continue;
            for (int p = 0; p < o.rows_; ++p)
                for (int q = 0; q < o.cols_; ++q)
                    r.at(i * o.rows_ + p, j * o.cols_ + q) = at(i, j) * o.at(p, q);
        }
    return r;
}

Mat Mat::vstack(const Mat& o) const {
    if (cols_ != o.cols_) throw std::invalid_argument("vstack shape mismatch");
    Mat r(rows_ + o.rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
    for (int i = 0; i < o.rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(rows_ + i, j) = o.at(i, j);
    return r;
}

Mat Mat::hstack(const Mat& o) const {
    if (rows_ != o.rows_) throw std::invalid_argument("hstack shape mismatch");
    Mat r(rows_, cols_ + o.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
        for (int j = 0; j < o.cols_; ++j) r.at(i, cols_ + j) = o.at(i, j);
    }
    return r;
}

Mat Mat::select_rows(const std::vector<int>& idx) const {
    Mat r(int(idx.size()), cols_);
    for (size_t i = 0; i < idx.size(); ++i)
        for (int j = 0; j < cols_; ++j) r.at(int(i), j) = at(idx[i], j);
    return r;
}

std::vector<Rat> Mat::apply(const std::vector<Rat>& v) const {
    if (int(v.size()) != cols_) throw std::invalid_argument("apply shape mismatch");
    std::vector<Rat> r(rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (at(i, j) != 0 && v[j] != 0) r[i] += at(i, j) * v[j];
    return r;
}

std::string Mat::to_string() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows_; ++i) {
        os << (i ? "; " : "");
        for (int j = 0; j < cols_; ++j) os << (j ? "," : "") << rational_to_string(at(i, j));
    }
    os << "]";
    return os.str();
}

Mat block_matrix(const std::vector<int>& row_dims, const std::vector<int>& col_dims,
                 const std::vector<std::vector<const Mat*>>& blocks) {
    int R = 0, C = 0;
    std::vector<int> roff(row_dims.size()), coff(col_dims.size());
    for (size_t i = 0; i < row_dims.size(); ++i) { roff[i] = R; R += row_dims[i]; }
    for (size_t j = 0; j < col_dims.size(); ++j) { coff[j] = C; C += col_dims[j]; }
    Mat r(R, C);
    for (size_t i = 0; i < blocks.size(); ++i)
        for (size_t j = 0; j < blocks[i].size(); ++j) {
            const Mat* b = blocks[i][j];
            if (!b) continue;
            if (b->rows() != row_dims[i] || b->cols() != col_dims[j])
                throw std::invalid_argument("block shape mismatch");
            for (int p = 0; p < b->rows(); ++p)
                for (int q = 0; q < b->cols(); ++q) r.at(roff[i] + p, coff[j] + q) = b->at(p, q);
        }
    return r;
}

std::vector<int> rref_inplace(Mat& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int piv = -1;
        for (int i = row; i < m.rows(); ++i)
            if (m.at(i, col) != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < m.cols(); ++j) std::swap(m.at(piv, j), m.at(row, j));
        Rat inv = Rat(1) / m.at(row, col);
        for (int j = col; j < m.cols(); ++j) m.at(row, j) *= inv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == row || m.at(i, col) == 0) continue;
            Rat f = m.at(i, col);
            for (int j = col; j < m.cols(); ++j) m.at(i, j) -= f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

int rank(const Mat& m) {
    Mat c = m;
    return int(rref_inplace(c).size());
}

Mat kernel_basis(const Mat& m) {
    Mat r = m;
    std::vector<int> pivots = rref_inplace(r);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int p : pivots) is_pivot[p] = true;
    std::vector<int> free_cols;
    for (int j = 0; j < m.cols(); ++j)
        if (!is_pivot[j]) free_cols.push_back(j);
    Mat k(m.cols(), int(free_cols.size()));
    for (size_t f = 0; f < free_cols.size(); ++f) {
        int fc = free_cols[f];
        k.at(fc, int(f)) = 1;
        for (size_t pi = 0; pi < pivots.size(); ++pi) k.at(pivots[pi], int(f)) = -r.at(int(pi), fc);
    }
    return k;
}

Mat column_space_canonical(const Mat& m) {
    Mat t = m.transpose();
    std::vector<int> pivots = rref_inplace(t);
    Mat r(m.rows(), int(pivots.size()));
    for (size_t i = 0; i < pivots.size(); ++i)
        for (int j = 0; j < m.rows(); ++j) r.at(j, int(i)) = t.at(int(i), j);
    return r;
}

bool same_column_space(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows()) return false;
    return column_space_canonical(a) == column_space_canonical(b);
}

bool solve_columns(const Mat& basis, const std::vector<Rat>& v, std::vector<Rat>& out) {
    Mat aug(basis.rows(), basis.cols() + 1);
    for (int i = 0; i < basis.rows(); ++i) {
        for (int j = 0; j < basis.cols(); ++j) aug.at(i, j) = basis.at(i, j);
        aug.at(i, basis.cols()) = v[i];
    }
    std::vector<int> pivots = rref_inplace(aug);
    out.assign(basis.cols(), Rat(0));
    for (size_t pi = 0; pi < pivots.size(); ++pi) {
        if (pivots[pi] == basis.cols()) return false;  // inconsistent
        out[pivots[pi]] = aug.at(int(pi), basis.cols());
    }
    return true;
}

Mat express_in_basis(const Mat& basis, const Mat& vecs) {
    if (basis.rows() != vecs.rows()) throw std::invalid_argument("express_in_basis shape mismatch");
    Mat out(basis.cols(), vecs.cols());
    std::vector<Rat> v(basis.rows()), c;
    for (int j = 0; j < vecs.cols(); ++j) {
        for (int i = 0; i < vecs.rows(); ++i) v[i] = vecs.at(i, j);
        if (!solve_columns(basis, v, c)) throw std::runtime_error("vector not in span of basis");
        for (int i = 0; i < basis.cols(); ++i) out.at(i, j) = c[i];
    }
    return out;
}

Mat inverse(const Mat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
    Mat aug = m.hstack(Mat::identity(m.rows()));
    std::vector<int> pivots = rref_inplace(aug);
    if (int(pivots.size()) != m.rows()) throw std::runtime_error("matrix not invertible");
    Mat r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r.at(i, j) = aug.at(i, m.cols() + j);
    return r;
}

}  // namespace dolbres
