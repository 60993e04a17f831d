#pragma once

#include "dolbres/complex.hpp"
#include "dolbres/poset.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>

namespace dolbres {

struct ValidationReport {
    bool ok = true;
    std::string message;
};

/// Space of sections of a sheaf over an open set, with a canonical basis.
/// Sections are stored flat over the stalks of the points of U (sorted
/// increasingly).  If U has a minimum m the basis is the family of sections
/// extending the standard basis of the stalk at m; otherwise it is the
/// canonical RREF kernel basis of the compatibility system.
struct SectionSpace {
    std::vector<int> points;
    std::vector<int> offsets;  // offsets.size() == points.size()+1; flat block of each point
    Mat basis;                 // flat_dim x dim

    int dim() const { return basis.cols(); }
    int flat_dim() const { return offsets.empty() ? 0 : offsets.back(); }
    int block_offset(int point) const;
    int block_dim(int point) const;
    /// Rows of the basis belonging to one point: the point evaluation map
    /// Gamma(U) -> F_x in the canonical bases.
    Mat evaluation_at(int point) const;
};

class SheafRep;
using SheafPtr = std::shared_ptr<const SheafRep>;

/// Sheaf on a finite Alexandrov space presented as a functor: one stalk per
/// point, one restriction matrix per comparable pair.
class SheafRep : public std::enable_shared_from_this<SheafRep> {
public:
    /// Restrictions given for all strict pairs x < y (missing ones default to
    /// zero matrices only when a stalk is zero dimensional).
    static SheafPtr from_all_pairs(PosetPtr base, std::vector<int> stalks,
                                   std::map<std::pair<int, int>, Mat> res);
    /// Restrictions given on covering pairs only; the rest are completed by
    /// composition.  Path independence is validated.
    static SheafPtr from_covering_pairs(PosetPtr base, std::vector<int> stalks,
                                        const std::map<std::pair<int, int>, Mat>& res);

    PosetPtr base() const { return base_; }
    int stalk_dim(int x) const { return stalks_[x]; }
    const std::vector<int>& stalk_dims() const { return stalks_; }
    /// res(x,y): F_x -> F_y for x <= y.
    Mat res(int x, int y) const;

    bool data_equal(const SheafRep& o) const;

    /// Canonical section space over the open set U; cached.
    const SectionSpace& sections(const std::vector<int>& U) const;

    /// Gamma(U) -> Gamma(V) for V open subset of U, in the canonical bases.
    Mat section_restriction(const std::vector<int>& U, const std::vector<int>& V) const;

    bool is_flasque() const;

    /// Provenance: set when this sheaf was produced as a pushforward, so that
    /// iterated pushforwards compose on the nose.
    std::shared_ptr<const SheafRep> origin_sheaf;
    std::optional<SpaceMap> origin_map;

private:
    PosetPtr base_;
    std::vector<int> stalks_;
    std::map<std::pair<int, int>, Mat> res_;
    mutable std::map<std::vector<int>, SectionSpace> section_cache_;

    friend ValidationReport validate_sheaf(const SheafRep& F);
};

ValidationReport validate_sheaf(const SheafRep& F);

SheafPtr constant_sheaf(PosetPtr X, int k);
SheafPtr zero_sheaf(PosetPtr X);
/// Constant Q^k on the open set U, zero outside, identity restrictions inside.
SheafPtr open_indicator(PosetPtr X, const std::vector<int>& U, int k = 1);
/// Stalk Q on the closed set down(z), identity restrictions inside, zero out;
/// flasque building block.
SheafPtr downset_skyscraper(PosetPtr X, int z);
SheafPtr direct_sum(SheafPtr F, SheafPtr G);
SheafPtr tensor_sheaf(SheafPtr F, SheafPtr G);

/// Morphism of sheaves over the identity of the base.
struct SheafMorphism {
    SheafPtr src;
    SheafPtr tgt;
    std::vector<Mat> at;  // per point

    void validate() const;
    bool data_equal(const SheafMorphism& o) const;
};

SheafMorphism identity_morphism(SheafPtr F);
SheafMorphism zero_morphism(SheafPtr F, SheafPtr G);
SheafMorphism compose(const SheafMorphism& v, const SheafMorphism& u);
SheafMorphism direct_sum_morphism(const SheafMorphism& u, const SheafMorphism& v);
SheafMorphism tensor_morphism(const SheafMorphism& u, const SheafMorphism& v);
/// Basis of the space of morphisms F -> G (solving the naturality system).
std::vector<SheafMorphism> hom_basis(SheafPtr F, SheafPtr G);

/// Gamma(U, u) in the canonical section bases.
Mat sections_of_morphism(const SheafMorphism& u, const std::vector<int>& U);

SheafPtr pushforward(const SpaceMap& f, SheafPtr F);
SheafMorphism pushforward_morphism(const SpaceMap& f, const SheafMorphism& u);
SheafPtr inverse_image(const SpaceMap& f, SheafPtr G);
SheafMorphism inverse_image_morphism(const SpaceMap& f, const SheafMorphism& u);
/// F|U as a sheaf on the open subspace, with the inclusion.
std::pair<SheafPtr, Subspace> restrict_open(SheafPtr F, const std::vector<int>& U);

/// Adjunction data between inverse image and pushforward.
SheafMorphism adjunction_unit(const SpaceMap& f, SheafPtr G);    // G -> f_* f^{-1} G
SheafMorphism adjunction_counit(const SpaceMap& f, SheafPtr F);  // f^{-1} f_* F -> F

/// The unit map G -> f_* F for an F whose data equals f^{-1} G (the stalk of F
/// at x must be the stalk of G at f(x), with matching restrictions).
SheafMorphism unit_morphism_into(const SpaceMap& f, SheafPtr G, SheafPtr F);

/// Independent cohomology oracle: the cochain complex of strict chains
/// C^n = prod_{x0<...<xn} F_{xn} with the alternating face differential.
CochainComplex bar_complex(const SheafRep& F);
std::vector<int> bar_cohomology(const SheafRep& F);
std::vector<int> bar_cohomology_on(const SheafRep& F, const std::vector<int>& U);

/// Bounded complex of sheaves on a common base.
struct SheafComplex {
    PosetPtr base;
    int lo = 0;
    std::vector<SheafPtr> terms;
    std::vector<SheafMorphism> d;  // d[k] : terms[k] -> terms[k+1]

    int hi() const { return lo + int(terms.size()) - 1; }
    void validate() const;  // shapes, naturality, stalkwise d.d = 0
    CochainComplex stalk_complex(int x) const;
    CochainComplex sections_complex(const std::vector<int>& U) const;
    bool data_equal(const SheafComplex& o) const;
};

SheafComplex concentrated_complex(SheafPtr F, int degree = 0);
SheafComplex pushforward_complex(const SpaceMap& f, const SheafComplex& C);
SheafComplex inverse_image_complex(const SpaceMap& f, const SheafComplex& C);

/// Degreewise morphism of sheaf complexes commuting with the differentials.
struct SheafComplexMap {
    SheafComplex src;
    SheafComplex tgt;
    std::map<int, SheafMorphism> parts;

    void validate() const;
    ChainMap sections_chain_map(const std::vector<int>& U) const;
    ChainMap stalk_chain_map(int x) const;
    bool is_stalkwise_quasi_iso() const;
};

/// Augmented flasque resolution 0 -> F -> C^0 -> ... -> C^h -> 0 whose degree
/// n term has stalk prod over chains x <= x0 < ... < xn of F_{xn}.  Global
/// sections recover the bar complex of F.
struct FlasqueResolution {
    SheafPtr input;
    SheafComplex complex;
    SheafMorphism augmentation;
    /// chains[n][x]: the indexing chains of the degree n stalk at x.
    std::vector<std::vector<std::vector<std::vector<int>>>> chains;
};

FlasqueResolution flasque_bar_resolution(SheafPtr F);

/// Stalkwise presentation of a morphism F -> g_* G for g : B -> A, i.e. the
/// adjoint family of maps (F at g(x)) -> (G at x) natural in x.
struct StalkwiseOver {
    SpaceMap over;     // g : B -> A
    SheafPtr down;     // F on A
    SheafPtr up;       // G on B
    std::vector<Mat> at;  // indexed by points of B

    void validate() const;
};

StalkwiseOver compose_over(const StalkwiseOver& second, const StalkwiseOver& first);
StalkwiseOver identity_over(SheafPtr F);
StalkwiseOver scale_over(const StalkwiseOver& c, const Rat& s);

/// Naturality of the flasque bar construction: the stalkwise map between the
/// degree n terms of the resolutions of F (on A) and G (on B) over g : B -> A,
/// induced by a coefficient map (F at g(x)) -> (G at x).  Chains whose image
/// under g degenerates are sent to zero.
StalkwiseOver bar_functorial_over(const FlasqueResolution& RA, const FlasqueResolution& RB,
                                  const StalkwiseOver& coeff, int degree);

/// Functoriality of the resolution in the sheaf: degreewise morphism induced
/// by u : F -> G over the identity.
SheafComplexMap bar_functorial_map(const FlasqueResolution& RF, const FlasqueResolution& RG,
                                   const SheafMorphism& u);

/// Direct Cech machinery (independent of the semi-simplicial route).
SheafComplex cech_sheaf_complex(PosetPtr X, const std::vector<std::vector<int>>& cover, SheafPtr F);
SheafComplexMap cech_augmentation(PosetPtr X, const std::vector<std::vector<int>>& cover, SheafPtr F);
/// Classic Cech cochain complex of the cover, built directly from section
/// spaces of the intersections.
CochainComplex cech_cochain_complex(PosetPtr X, const std::vector<std::vector<int>>& cover,
                                    SheafPtr F);

}  // namespace dolbres
