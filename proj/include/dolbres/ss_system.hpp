#pragma once

#include "dolbres/sheaf.hpp"

#include <map>

namespace dolbres {

/// Semi-simplicial system of poset spaces over an index complex: one space per
/// simplex and compatible connecting maps rho(a,b) : X_b -> X_a for a inside b.
struct SSSpace {
    SimplicialComplex K;
    std::map<Simplex, PosetPtr> spaces;
    std::map<std::pair<Simplex, Simplex>, SpaceMap> maps;

    PosetPtr space(const Simplex& a) const { return spaces.at(a); }
    SpaceMap rho(const Simplex& a, const Simplex& b) const;  // identity when a == b
    ValidationReport validate() const;
};

/// One space seen as a system over the one-vertex complex.
SSSpace point_system(PosetPtr X);

/// Product system: X_a = prod_{i in a} X_i with the projections as
/// connecting maps.
struct ProductSystem {
    SSSpace ss;
    std::map<Simplex, ProductSpace> products;
};
ProductSystem product_system(const SimplicialComplex& K, const std::vector<PosetPtr>& factors);

/// The system of an open cover: spaces are the intersections U_a (as open
/// subspaces), connecting maps the inclusions; also records the inclusions
/// into the total space.
struct CoverSystem {
    SSSpace ss;
    PosetPtr total;
    std::vector<std::vector<int>> cover;
    std::map<Simplex, Subspace> pieces;       // subspace data of U_a
    std::map<Simplex, SpaceMap> to_total;     // U_a -> X
};
CoverSystem cover_system(PosetPtr X, const std::vector<std::vector<int>>& cover);

/// Module over an s.s. space: a sheaf per simplex with connecting morphisms
/// F_a -> rho(a,b)_* F_b, stored in adjoint stalkwise form.
struct SSModule {
    const SSSpace* base = nullptr;
    std::map<Simplex, SheafPtr> sheaves;
    std::map<std::pair<Simplex, Simplex>, StalkwiseOver> conn;  // for a strictly inside b

    SheafPtr sheaf(const Simplex& a) const { return sheaves.at(a); }
    StalkwiseOver connector(const Simplex& a, const Simplex& b) const;
    ValidationReport validate() const;
};

/// Alternate module: only the edge connectors (a; j), with anti-commuting
/// face rectangles.
struct AltSSModule {
    const SSSpace* base = nullptr;
    std::map<Simplex, SheafPtr> sheaves;
    std::map<std::pair<Simplex, int>, StalkwiseOver> edges;  // (a, j) with |a| >= 1

    SheafPtr sheaf(const Simplex& a) const { return sheaves.at(a); }
    const StalkwiseOver& edge(const Simplex& a, int j) const { return edges.at({a, j}); }
    ValidationReport validate() const;
};

AltSSModule alt(const SSModule& F);
SSModule alt_inv(const AltSSModule& F);

bool ss_module_data_equal(const SSModule& a, const SSModule& b);

/// Morphism of modules over the identity of the base system.
struct SSModuleMorphism {
    const SSModule* src = nullptr;
    const SSModule* tgt = nullptr;
    std::map<Simplex, SheafMorphism> at;

    ValidationReport validate() const;
};

/// Complex of modules: per-simplex sheaf complexes (common degree range 0..len)
/// with connectors per degree; `alternate` marks anti-morphism differentials
/// together with anti-commuting edge rectangles.
struct SSComplex {
    const SSSpace* base = nullptr;
    int len = 0;  // degrees 0..len
    std::map<Simplex, SheafComplex> comp;
    std::map<std::pair<Simplex, Simplex>, std::vector<StalkwiseOver>> conn;  // per degree

    ValidationReport validate() const;
};

struct AltSSComplex {
    const SSSpace* base = nullptr;
    int len = 0;
    std::map<Simplex, SheafComplex> comp;
    std::map<std::pair<Simplex, int>, std::vector<StalkwiseOver>> edges;  // per degree

    ValidationReport validate() const;
};

AltSSComplex alt(const SSComplex& C);
SSComplex alt_inv(const AltSSComplex& C);

/// F|U as a module over the cover system; equals the inverse image of F along
/// the inclusion morphism of systems.
SSModule restrict_to_cover(const CoverSystem& U, SheafPtr F);

SSModule tensor_ss(const SSModule& F, const SSModule& G);
SSModule constant_system_module(const SSSpace& X, int k);

}  // namespace dolbres
