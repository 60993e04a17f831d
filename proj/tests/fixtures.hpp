#pragma once

#include "dolbres/sharp.hpp"

#include <random>

namespace dolbres::testing {

// Four point model of the circle: 0,1 minimal; 2,3 maximal; 0<2, 0<3, 1<2, 1<3.
inline PosetPtr s1circ() {
    return PosetSpace::from_relations(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
}

inline std::vector<std::vector<int>> s1circ_cover() {
    return {{0, 2, 3}, {1, 2, 3}};  // U_a, U_b
}

inline Mat mat(int rows, int cols, const std::vector<int>& entries) {
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = entries[size_t(i) * cols + j];
    return m;
}

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) {
    return int(lo + rng() % std::uint64_t(hi - lo + 1));
}

inline Mat random_matrix(Rng& rng, int rows, int cols, int span = 2) {
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = uniform(rng, -span, span);
    return m;
}

inline Mat random_invertible(Rng& rng, int n) {
    while (true) {
        Mat m = random_matrix(rng, n, n, 1);
        if (rank(m) == n) return m;
    }
}

// Random bounded complex: a direct sum of elementary pieces conjugated by
// random invertible degreewise changes of basis.
inline CochainComplex random_complex(Rng& rng, int max_deg = 3, int max_pieces = 4) {
    int lo = 0, hi = std::max(1, max_deg);
    std::vector<int> dims(hi - lo + 1, 0);
    std::vector<std::vector<std::pair<int, int>>> unit_blocks(hi - lo);  // (row offset, col offset)
    int pieces = uniform(rng, 1, max_pieces);
    for (int p = 0; p < pieces; ++p) {
        if (uniform(rng, 0, 2) == 0) {
            dims[uniform(rng, 0, hi - lo)] += 1;  // one-dimensional summand with zero differential
        } else {
            int k = uniform(rng, 0, hi - lo - 1);  // acyclic pair in degrees k, k+1
            unit_blocks[k].push_back({dims[k + 1], dims[k]});
            dims[k] += 1;
            dims[k + 1] += 1;
        }
    }
    std::vector<Mat> d;
    for (int k = 0; k + 1 < int(dims.size()); ++k) {
        Mat m(dims[k + 1], dims[k]);
        for (auto& [r, c] : unit_blocks[k]) m.at(r, c) = 1;
        d.push_back(m);
    }
    std::vector<Mat> P, Pinv;
    for (int k = 0; k < int(dims.size()); ++k) {
        Mat p = random_invertible(rng, dims[k]);
        P.push_back(p);
        Pinv.push_back(inverse(p));
    }
    for (int k = 0; k + 1 < int(dims.size()); ++k) d[k] = P[k + 1] * d[k] * Pinv[k];
    return CochainComplex(lo, dims, d);
}

// Random chain map between two complexes (an exact solve of the commuting
// constraints, then a random combination of the solution basis).
inline ChainMap random_chain_map(Rng& rng, const CochainComplex& A, const CochainComplex& B) {
    int lo = std::min(A.lo(), B.lo());
    int hi = std::max(A.hi(), B.hi());
    std::vector<int> off{0};
    for (int n = lo; n <= hi; ++n) off.push_back(off.back() + B.dim(n) * A.dim(n));
    std::vector<std::vector<Rat>> rows;
    for (int n = lo; n < hi; ++n) {
        // dB(n) * u_n - u_{n+1} * dA(n) = 0
        Mat dB = B.differential(n), dA = A.differential(n);
        for (int i = 0; i < B.dim(n + 1); ++i)
            for (int j = 0; j < A.dim(n); ++j) {
                std::vector<Rat> row(off.back());
                for (int k = 0; k < B.dim(n); ++k)
                    if (dB.at(i, k) != 0) row[off[n - lo] + k * A.dim(n) + j] += dB.at(i, k);
                for (int k = 0; k < A.dim(n + 1); ++k)
                    if (dA.at(k, j) != 0) row[off[n + 1 - lo] + i * A.dim(n + 1) + k] -= dA.at(k, j);
                rows.push_back(std::move(row));
            }
    }
    Mat C(int(rows.size()), off.back());
    for (size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < off.back(); ++j) C.at(int(i), j) = rows[i][j];
    Mat K = kernel_basis(C);
    std::vector<Rat> combo(off.back(), Rat(0));
    for (int c = 0; c < K.cols(); ++c) {
        int w = uniform(rng, -2, 2);
        if (w == 0) continue;
        for (int i = 0; i < K.rows(); ++i) combo[i] += Rat(w) * K.at(i, c);
    }
    ChainMap m{A, B, {}};
    for (int n = lo; n <= hi; ++n) {
        Mat u(B.dim(n), A.dim(n));
        for (int i = 0; i < B.dim(n); ++i)
            for (int j = 0; j < A.dim(n); ++j) u.at(i, j) = combo[off[n - lo] + i * A.dim(n) + j];
        m.parts[n] = u;
    }
    return m;
}

// Random poset on n points: random covering relations on a shuffled order.
inline PosetPtr random_poset(Rng& rng, int n, int edge_percent = 35) {
    std::vector<std::pair<int, int>> rel;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (uniform(rng, 0, 99) < edge_percent) rel.emplace_back(i, j);
    return PosetSpace::from_relations(n, rel);
}

// Random sheaf: a sum of open indicators and down-set skyscrapers.
inline SheafPtr random_sheaf(Rng& rng, PosetPtr X, int summands = 2) {
    SheafPtr F = zero_sheaf(X);
    for (int s = 0; s < summands; ++s) {
        if (uniform(rng, 0, 1) == 0) {
            int p = uniform(rng, 0, X->size() - 1);
            F = direct_sum(F, open_indicator(X, X->up_set(p), uniform(rng, 1, 2)));
        } else {
            F = direct_sum(F, downset_skyscraper(X, uniform(rng, 0, X->size() - 1)));
        }
    }
    return F;
}

// Random twisted locally constant sheaf: invertible restrictions along
// covering pairs, consistent by construction (one invertible matrix per point
// relative to a fixed frame).
inline SheafPtr random_local_system(Rng& rng, PosetPtr X, int k) {
    std::vector<Mat> frame;
    for (int x = 0; x < X->size(); ++x) frame.push_back(random_invertible(rng, k));
    std::map<std::pair<int, int>, Mat> res;
    for (int x = 0; x < X->size(); ++x)
        for (int y = 0; y < X->size(); ++y)
            if (X->lt(x, y)) res[{x, y}] = frame[y] * inverse(frame[x]);
    return SheafRep::from_all_pairs(X, std::vector<int>(X->size(), k), std::move(res));
}

}  // namespace dolbres::testing
