#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dolbres {

/// A simplex is a strictly increasing list of integer vertices.  The fixed
/// total order on vertices is integer order throughout.
using Simplex = std::vector<int>;

std::string simplex_to_string(const Simplex& s);

/// Length |a| = Card(a) - 1.
inline int simplex_length(const Simplex& a) { return int(a.size()) - 1; }

/// j-th vertex removed (counting from 0 in increasing order).
Simplex face(const Simplex& a, int j);

/// Alternating coefficient of the edge (a; j).
inline int face_sign(const Simplex& a, int j) {
    if (j < 0 || j > simplex_length(a)) throw std::out_of_range("face index out of range");
    return (j % 2 == 0) ? 1 : -1;
}

/// Finite simplicial complex: vertex set I with a family of nonempty finite
/// subsets closed under nonempty subsets and containing all singletons.
class SimplicialComplex {
public:
    SimplicialComplex() = default;

    /// Builds the complex, completing the subset closure automatically.
    static SimplicialComplex build(const std::vector<int>& vertices,
                                   const std::vector<Simplex>& simplexes);

    const std::vector<int>& vertices() const { return vertices_; }
    const std::vector<Simplex>& simplexes() const { return simplexes_; }  // sorted, by (size, lex)
    bool contains(const Simplex& s) const { return set_.count(s) > 0; }
    int dim() const;

    std::vector<Simplex> simplexes_of_length(int len) const;

    bool operator==(const SimplicialComplex& o) const {
        return vertices_ == o.vertices_ && simplexes_ == o.simplexes_;
    }

private:
    std::vector<int> vertices_;
    std::vector<Simplex> simplexes_;
    std::set<Simplex> set_;
};

/// K(pt): the complex over one vertex {0}.
SimplicialComplex point_complex();

/// Vertex map between simplicial complexes carrying simplexes to simplexes.
struct SimplicialMorphism {
    SimplicialComplex source;
    SimplicialComplex target;
    std::map<int, int> vertex_map;

    Simplex apply(const Simplex& a) const;
    int apply_vertex(int v) const;
    bool is_non_decreasing() const;
    void validate() const;
};

SimplicialMorphism identity_morphism(const SimplicialComplex& k);
SimplicialMorphism collapse_to_point(const SimplicialComplex& k);
SimplicialMorphism compose(const SimplicialMorphism& g, const SimplicialMorphism& f);

/// Relabels the source vertices (stably by image, then by old label) so that
/// the given vertex map becomes non-decreasing.  Returns the relabeled complex
/// together with the old->new vertex dictionary.
std::pair<SimplicialComplex, std::map<int, int>> reindex_for_monotonicity(
    const SimplicialComplex& k, const std::map<int, int>& vertex_map);

/// I(gamma, i): simplexes of the source mapping onto gamma with length
/// |gamma| + i, in lexicographic order.
std::vector<Simplex> fiber_simplexes(const SimplicialMorphism& f, const Simplex& gamma, int i);

}  // namespace dolbres
