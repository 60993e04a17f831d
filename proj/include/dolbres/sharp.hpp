#pragma once

#include "dolbres/ss_system.hpp"

namespace dolbres {

/// Morphism of s.s. spaces over a simplicial map f (required non-decreasing
/// for the direct image calculus): components F_a : X_a -> Y_{f(a)} with
/// commuting compatibility squares.
struct SSMapOverF {
    const SSSpace* src = nullptr;
    const SSSpace* tgt = nullptr;
    SimplicialMorphism f;
    std::map<Simplex, SpaceMap> comp;

    ValidationReport validate() const;
};

SSMapOverF identity_ss_map(const SSSpace& X);
SSMapOverF compose(const SSMapOverF& G, const SSMapOverF& F);
/// The inclusion morphism of a cover system into its total space (seen over
/// the collapse of the nerve to a point).
SSMapOverF cover_inclusion_map(const CoverSystem& U, const SSSpace& Xpt);

/// Inverse image of a module along a morphism of systems (componentwise, with
/// relabelled connectors).
SSModule inverse_image_ss(const SSMapOverF& F, const SSModule& G);

/// One factor of a product of direct images: a carrier sheaf pushed into the
/// current base along a composite map, remembered by its source simplex.
struct Component {
    Simplex label;
    SpaceMap to_base;
    SheafPtr carrier;
};

/// Finite product of pushed carriers over a common base.  The realization as
/// a plain sheaf has stalk at q the direct sum of the carrier sections over
/// the preimages of U_q, in component order.
struct LabelledSheaf {
    PosetPtr base;
    std::vector<Component> comps;

    int stalk_dim(int q) const;
    std::vector<int> comp_dims(int q) const;
    SheafPtr realize() const;  // cached

    bool same_shape(const LabelledSheaf& o) const;

private:
    mutable SheafPtr realized_;
};

LabelledSheaf single_component(const Simplex& label, SheafPtr carrier);
LabelledSheaf push_labelled(const SpaceMap& g, const LabelledSheaf& T);

/// Morphism of labelled sheaves over the identity, stored per point in the
/// realized stalk coordinates.
struct LabelledMorphism {
    std::vector<Mat> at;
};

/// Morphism src -> g_* tgt over g in adjoint form: at[q] maps the realized
/// stalk of src at over(q) to the realized stalk of tgt at q.
struct LabelledOver {
    SpaceMap over;
    std::vector<Mat> at;
};

/// Alternate complex of alternate modules with labelled-product terms over an
/// s.s. space; degrees 0..len.  This is both the input and output type of the
/// direct image functor: a primitive alternate module or complex embeds via
/// the converters below.
struct AltLabelledComplex {
    const SSSpace* base = nullptr;
    int len = 0;
    std::map<Simplex, std::vector<LabelledSheaf>> terms;
    std::map<Simplex, std::vector<LabelledMorphism>> diff;           // d^i : i -> i+1
    std::map<std::pair<Simplex, int>, std::vector<LabelledOver>> edges;  // per degree

    ValidationReport validate() const;
    /// Plain sheaf complex of the component at a simplex.
    SheafComplex component_complex(const Simplex& a) const;
};

AltLabelledComplex from_alt_module(const AltSSModule& F);
AltLabelledComplex from_alt_complex(const AltSSComplex& C);

/// The direct image: per target simplex, the simple complex of the fiber
/// multicomplex of pushed components.  Input degrees are preserved as the
/// second grading; the fiber index is the first.
AltLabelledComplex sharp(const SSMapOverF& F, const AltLabelledComplex& input);

/// sharp for a plain module / complex (conjugation by alt).
AltLabelledComplex sharp_module(const SSMapOverF& F, const AltSSModule& M);

/// Equality after canonical flattening: components sorted by label, block
/// matrices permuted accordingly; carriers compared by identity, maps
/// pointwise.
bool labelled_complex_equal_after_flatten(const AltLabelledComplex& A, const AltLabelledComplex& B,
                                          std::string* why = nullptr);

/// Degree zero cocycles of sharp(F, alt(M)) as a module over the target
/// system, together with the flat embeddings of its stalks into the realized
/// degree zero stalks.
struct StarPushforward {
    SSModule module;
    std::map<Simplex, std::vector<Mat>> embedding;  // per point: realized deg0 stalk <- kernel basis
    AltLabelledComplex sharp_of_input;
};
StarPushforward star_pushforward(const SSMapOverF& F, const SSModule& M);

/// Composition law check: sharp over the composite versus composed sharps,
/// exact data equality after flattening; also compares the degree zero
/// cocycle modules as subspaces in the common flat realization.
struct CompositionCheck {
    bool sharp_equal = false;
    bool star_equal = false;
    std::string diff_report;
};
CompositionCheck check_composition_law(const SSMapOverF& F, const SSMapOverF& G, const SSModule& M);

/// Assembly of a morphism G -> F_sharp(M) from components u[(gamma, alpha)]
/// with alpha in I(gamma, 0); validates the two square conditions and names
/// the first failing instance.
struct AssembleResult {
    bool ok = false;
    std::string message;
    /// On success: the component family of the induced morphism into the
    /// degree zero term of sharp_module(F, alt(M)), per target simplex.
    std::map<Simplex, std::vector<Mat>> into_degree0;  // per point of Y_gamma
};
AssembleResult assemble_to_sharp(const SSMapOverF& F, const SSModule& M, const SSModule& G,
                                 const std::map<std::pair<Simplex, Simplex>, SheafMorphism>& u);

/// Dual assembly: a morphism F^*(G) -> M from components v[alpha], alpha with
/// f injective on alpha (fiber degree zero); checks the dual conditions and
/// the adjunction correspondence with assemble_to_sharp.
struct AssembleFromPullbackResult {
    bool ok = false;
    std::string message;
    std::map<Simplex, SheafMorphism> components;  // full family on all simplexes
};
AssembleFromPullbackResult assemble_from_pullback(const SSMapOverF& F, const SSModule& M,
                                                  const SSModule& G,
                                                  const std::map<Simplex, SheafMorphism>& v);

/// Adjoint transpose of a valid to-sharp family into a from-pullback family.
std::map<Simplex, SheafMorphism> transpose_to_pullback(
    const SSMapOverF& F, const SSModule& M, const SSModule& G,
    const std::map<std::pair<Simplex, Simplex>, SheafMorphism>& u);

/// The direct image of an adjoint-form connector: the sheaf morphism
/// m_* down -> (m . over)_* up on the target of m, computed sectionwise.
SheafMorphism pushed_connector(const StalkwiseOver& c, const SpaceMap& m_down);

}  // namespace dolbres
