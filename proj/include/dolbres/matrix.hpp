#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dolbres {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

Rat parse_rational(const std::string& s);
std::string rational_to_string(const Rat& r);

/// Dense matrix over the exact rationals.  All arithmetic is exact; there are
/// no floating point values anywhere in this library.
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {}

    static Mat identity(int n);
    static Mat zero(int rows, int cols) { return Mat(rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rat& at(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const Rat& at(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

    bool operator==(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    bool is_zero() const;
    bool is_identity() const;

    Mat operator*(const Mat& o) const;
    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat operator-() const;
    Mat scaled(const Rat& c) const;
    Mat transpose() const;

    /// Kronecker product (row-major tensor of bases).
    Mat kron(const Mat& o) const;

    /// Stacks `o` below / to the right of this matrix.
    Mat vstack(const Mat& o) const;
    Mat hstack(const Mat& o) const;

    /// Column selection / row selection by index list.
    Mat select_rows(const std::vector<int>& idx) const;

    std::vector<Rat> apply(const std::vector<Rat>& v) const;

    std::string to_string() const;

private:
    int rows_, cols_;
    std::vector<Rat> a_;
};

/// Block matrix assembled from a grid of blocks; block (i,j) has shape
/// row_dims[i] x col_dims[j].  Missing blocks are zero.
Mat block_matrix(const std::vector<int>& row_dims, const std::vector<int>& col_dims,
                 const std::vector<std::vector<const Mat*>>& blocks);

int rank(const Mat& m);

/// Reduced row echelon form; returns pivot column indices.
std::vector<int> rref_inplace(Mat& m);

/// Basis of the null space, as columns of the returned matrix.  The basis is
/// the canonical RREF kernel basis, deterministic for fixed input.
Mat kernel_basis(const Mat& m);

/// Canonical basis of the column space (columns of the result), obtained from
/// the RREF of the transpose.  Equal subspaces yield equal results.
Mat column_space_canonical(const Mat& m);

bool same_column_space(const Mat& a, const Mat& b);

/// Solves basis * x = v exactly.  Returns false if inconsistent.
bool solve_columns(const Mat& basis, const std::vector<Rat>& v, std::vector<Rat>& out);

/// Expresses each column of `vecs` in the given column basis.
/// Throws if some column is not in the span.
Mat express_in_basis(const Mat& basis, const Mat& vecs);

Mat inverse(const Mat& m);

}  // namespace dolbres
