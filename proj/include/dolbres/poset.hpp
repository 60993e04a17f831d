#pragma once

#include "dolbres/simplicial.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace dolbres {

/// Finite poset carrying the up-set (Alexandrov) topology: open sets are the
/// up-closed subsets, closed sets the down-closed ones, and U_x = {y | y >= x}
/// is the minimal open neighbourhood of x.
class PosetSpace {
public:
    /// Builds from a relation list; takes the reflexive-transitive closure and
    /// rejects relations whose closure violates antisymmetry.
    static std::shared_ptr<const PosetSpace> from_relations(
        int n, const std::vector<std::pair<int, int>>& less_than);

    int size() const { return n_; }
    bool leq(int x, int y) const { return leq_[x][y]; }
    bool lt(int x, int y) const { return x != y && leq_[x][y]; }

    std::vector<int> up_set(int x) const;  // U_x
    std::vector<int> up_closure(const std::vector<int>& pts) const;
    std::vector<int> down_closure(const std::vector<int>& pts) const;
    bool is_up_closed(const std::vector<int>& pts) const;
    bool is_down_closed(const std::vector<int>& pts) const;

    std::vector<int> all_points() const;

    /// Unique minimum of the subset, if it exists.
    std::optional<int> minimum_of(const std::vector<int>& pts) const;

    /// Covering pairs (Hasse edges) of the induced subposet on pts.
    std::vector<std::pair<int, int>> covering_pairs_in(const std::vector<int>& pts) const;
    /// All strict pairs x < y within pts.
    std::vector<std::pair<int, int>> strict_pairs_in(const std::vector<int>& pts) const;

    /// Strict chains x0 < ... < xn of length n inside pts, lexicographic.
    std::vector<std::vector<int>> strict_chains_in(const std::vector<int>& pts, int n) const;

    int height() const;  // longest strict chain length (number of steps)

private:
    int n_ = 0;
    std::vector<std::vector<bool>> leq_;
};

using PosetPtr = std::shared_ptr<const PosetSpace>;

PosetPtr point_space();
PosetPtr chain_space(int n);  // 0 < 1 < ... < n-1

/// Monotone (hence continuous) map of poset spaces.
struct SpaceMap {
    PosetPtr src;
    PosetPtr tgt;
    std::vector<int> f;

    int operator()(int x) const { return f[x]; }
    bool is_monotone() const;
    void validate() const;
    std::vector<int> preimage(const std::vector<int>& pts) const;
    bool is_injective() const;
    /// x <= y iff f(x) <= f(y); with injectivity this embeds the order.
    bool is_order_embedding() const;
    bool image_is_down_closed() const;
    std::vector<int> image() const;
};

bool same_map(const SpaceMap& a, const SpaceMap& b);
SpaceMap identity_map(PosetPtr X);
SpaceMap compose(const SpaceMap& g, const SpaceMap& f);
SpaceMap collapse_map(PosetPtr X);  // X -> point

/// Open subspace with its inclusion; point i of the subspace is pts[i]
/// (pts sorted increasingly, so the relabeling is order preserving).
struct Subspace {
    PosetPtr space;
    std::vector<int> points;
    SpaceMap inclusion;
};
Subspace open_subspace(PosetPtr X, std::vector<int> pts);

struct ProductSpace {
    PosetPtr space;
    std::vector<PosetPtr> factors;
    std::vector<SpaceMap> projections;
    std::vector<std::vector<int>> tuples;  // point -> factor coordinates
    int index_of(const std::vector<int>& tuple) const;
};
ProductSpace product_space(const std::vector<PosetPtr>& factors);

/// Nerve of an open cover: vertices are cover positions; a subset is a simplex
/// iff the corresponding intersection is nonempty.  Rejects non-open members
/// and families that fail to cover.
SimplicialComplex nerve(const PosetSpace& X, const std::vector<std::vector<int>>& cover);

std::vector<int> intersect_sorted(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace dolbres
