#pragma once

#include "dolbres/sharp.hpp"

#include <optional>

namespace dolbres {

/// A chart embedding: injective order embedding of the domain into an ambient
/// space.  Whether the image is down-closed (closed in the Alexandrov
/// topology) is recorded; the resolution machinery only needs the embedding
/// property, and induced product embeddings generally fail closedness on
/// finite models.
struct EmbeddingTriple {
    PosetPtr domain;
    PosetPtr ambient;
    SpaceMap emb;

    ValidationReport validate() const;
    bool image_closed() const { return emb.image_is_down_closed(); }
};

struct AtlasChart {
    std::vector<int> open_set;  // U_i as points of the total space
    Subspace piece;             // U_i as a space
    EmbeddingTriple triple;     // (U_i, k_i, D_i)
};

struct Atlas {
    PosetPtr X;
    std::vector<AtlasChart> charts;

    std::vector<std::vector<int>> cover() const;
    ValidationReport validate() const;
};

/// Atlas whose charts are the opens themselves with identity embeddings.
Atlas identity_atlas(PosetPtr X, const std::vector<std::vector<int>>& cover);
/// One chart atlas (X, i, D); the chart open is all of X.
Atlas single_chart_atlas(PosetPtr X, PosetPtr D, const SpaceMap& emb);

/// The associated semi-simplicial embedding triple of an atlas: intersections
/// over the nerve, products of chart ambients, componentwise embeddings.
struct SSEmbeddingTriple {
    CoverSystem cover;
    ProductSystem ambient;
    std::map<Simplex, SpaceMap> k;  // U_a -> D_a
    std::map<Simplex, bool> k_image_closed;

    ValidationReport validate() const;
};
SSEmbeddingTriple associated_ss_triple(const Atlas& A);

/// Resolution of a sheaf on a chart domain through its ambient embedding:
/// push to the ambient, resolve there, pull back.
struct ChartComplex {
    SpaceMap k;
    SheafPtr pushed;             // k_* F on the ambient
    FlasqueResolution upstairs;  // resolution of the pushed sheaf
    SheafComplex complex;        // pulled back to the domain
    SheafMorphism augmentation;  // F -> complex[0]
};
ChartComplex dolb_chart(const EmbeddingTriple& T, SheafPtr F);

/// The assembled resolution of F for a locally embedded space (X, A): the
/// total complex of the double complex of chart resolutions pushed into the
/// base along the cover inclusions, with alternating-sign Cech blocks.
/// The structure retains the per-chart summands so direct images along maps
/// compose exactly.
struct DolbComplex {
    PosetPtr base;   // X, or the target after pushing forward
    SpaceMap from_x; // X -> base
    SheafPtr F;
    SimplicialComplex nerve;
    SSEmbeddingTriple triple;
    std::map<Simplex, ChartComplex> charts;
    std::map<Simplex, SpaceMap> b;  // composite U_a -> base
    std::map<Simplex, std::vector<SheafPtr>> pushed;  // per q
    std::map<Simplex, std::vector<SheafMorphism>> dq;  // signed, per q
    std::map<std::pair<Simplex, int>, std::vector<SheafMorphism>> dp;  // signed, per q
    std::map<std::pair<Simplex, Simplex>, std::vector<StalkwiseOver>> conn;  // chart connectors per q

    struct Block {
        Simplex alpha;
        int q;
    };
    std::vector<std::vector<Block>> layout;  // per total degree
    SheafComplex total;
    std::optional<SheafComplexMap> augmentation;  // present when base == X

    int max_q(const Simplex& a) const { return int(charts.at(a).complex.terms.size()) - 1; }
    /// Offsets of the blocks inside the realized degree-n stalk at x.
    std::vector<int> block_offsets(int n, int x) const;
    /// The double complex of stalks at x (p = Cech direction).
    Multicomplex stalk_double(int x) const;
    /// The double complex of sections over the open U.
    Multicomplex sections_double(const std::vector<int>& U) const;
};

/// When `shared_triple` is supplied the associated semi-simplicial triple is
/// reused, so complexes of different sheaves over the same atlas live on
/// literally the same spaces (required by dolb_map and tensor_comparison).
DolbComplex dolb_atlas(PosetPtr X, const Atlas& A, SheafPtr F,
                       const SSEmbeddingTriple* shared_triple = nullptr);
/// Direct image of the whole structure along f, summand by summand.
DolbComplex push_dolb(const SpaceMap& f, const DolbComplex& D);

/// Functorial action on a sheaf morphism: Dolb(A, u) : Dolb(A, F1) -> Dolb(A, F2).
SheafComplexMap dolb_map(const DolbComplex& D1, const DolbComplex& D2, const SheafMorphism& u);

/// The comparison morphism Dolb(A, Q^1) (x) F -> Dolb(A, F), degreewise.
SheafComplexMap tensor_comparison(const DolbComplex& DQ, const DolbComplex& DF);

/// Morphism of locally embedded spaces (f, tau, (ftilde_i)).
struct LocalizedMorphism {
    SpaceMap f;  // X -> Y
    const Atlas* src = nullptr;
    const Atlas* tgt = nullptr;
    std::vector<int> tau;
    std::vector<SpaceMap> ftilde;  // D_i -> D'_{tau(i)}

    ValidationReport validate() const;
};

LocalizedMorphism identity_localized(const Atlas& A);
LocalizedMorphism compose(const LocalizedMorphism& g, const LocalizedMorphism& f);

/// Blockwise pullback morphism data: for each nerve simplex alpha of the
/// source atlas, per q, the morphism from the (tau(alpha), q) summand of the
/// target-atlas complex into the (alpha, q) summand of the pushed source
/// complex.
struct DolbPullback {
    std::map<Simplex, Simplex> source_of;
    std::map<Simplex, std::vector<SheafMorphism>> blocks;

    SheafComplexMap as_map(const DolbComplex& from, const DolbComplex& pushed_to) const;
    bool data_equal(const DolbPullback& o) const;
};

/// f^*(u) : Dolb(B, G) -> f_* Dolb(A, F), where u : G -> f_* F has its target
/// constructed by pushforward(f, F).  Returns both the blockwise data and the
/// pushed source complex it lands in.
struct PullbackResult {
    DolbComplex pushed;  // f_* Dolb(A, F)
    DolbPullback data;
    SheafComplexMap map;  // Dolb(B, G).total -> pushed.total
};
PullbackResult pullback_morphism(const LocalizedMorphism& fm, const DolbComplex& DB,
                                 const DolbComplex& DA, const SheafMorphism& u);

/// Direct image of blockwise pullback data along g (rebinds the summands of
/// the supplied pushed complexes).
DolbPullback push_pullback(const SpaceMap& g, const DolbPullback& P, const DolbComplex& src_pushed,
                           const DolbComplex& tgt_pushed);

/// Product atlas A x_tau B on X for f-compliant atlases, with the two
/// projection morphisms.
struct AtlasProduct {
    Atlas product;
    LocalizedMorphism p1;  // (id, id, first projection)  : (X, AxB) -> (X, A)
    LocalizedMorphism p2;  // (f, tau, second projection) : (X, AxB) -> (Y, B)
};
AtlasProduct atlas_product(const Atlas& A, const SpaceMap& f, const std::vector<int>& tau,
                           const Atlas& B);

/// Triple product A x_{tau1 tau2} B with projections onto both single
/// products (refinement-independence data).
struct AtlasDoubleProduct {
    Atlas product;
    LocalizedMorphism to_first;   // -> A x_{tau1} B
    LocalizedMorphism to_second;  // -> A x_{tau2} B
    AtlasProduct first, second;
};
AtlasDoubleProduct atlas_double_product(const Atlas& A, const SpaceMap& f,
                                        const std::vector<int>& tau1, const std::vector<int>& tau2,
                                        const Atlas& B);

/// The two-leg representation of the derived pullback through the product
/// atlas: left leg a quasi-isomorphism, right leg the pullback of u.
struct Zigzag {
    AtlasProduct prod;
    DolbComplex mid;          // f_* Dolb(A x B, F)
    DolbComplex left_source;  // f_* Dolb(A, F)
    SheafComplexMap left;     // f_* Dolb(A, F)  -> f_* Dolb(AxB, F)
    SheafComplexMap right;    // Dolb(B, G)      -> f_* Dolb(AxB, F)
};
Zigzag derived_zigzag(const SpaceMap& f, const SheafMorphism& u, const Atlas& A, const Atlas& B,
                      const std::vector<int>& tau, const DolbComplex& DA, const DolbComplex& DB);

/// Monotone refinement search; empty when none exists.
std::optional<std::vector<int>> find_monotone_refinement(const SpaceMap& f, const Atlas& A,
                                                         const Atlas& B);

/// Induced map on cohomology of global sections represented by a zigzag:
/// H(right) composed with the inverse of H(left), in the canonical bases.
std::map<int, Mat> zigzag_induced_map(const Zigzag& Z);

/// h^*(w) against g_*(f^*(u)) . g^*(v): exact blockwise data comparison.
struct TripleCompositionCheck {
    bool ok = false;
    std::string message;
};
TripleCompositionCheck check_triple_composition(const LocalizedMorphism& fm,
                                                const LocalizedMorphism& gm, const DolbComplex& DA,
                                                const DolbComplex& DB, const DolbComplex& DC,
                                                const SheafMorphism& u, const SheafMorphism& v);

}  // namespace dolbres
