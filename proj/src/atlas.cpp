#include "dolbres/atlas.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace dolbres {

namespace {

Mat express_sections(const SheafRep& carrier, const std::vector<int>& V, const Mat& flat_cols) {
    const SectionSpace& S = carrier.sections(V);
    auto mn = carrier.base()->minimum_of(S.points);
    if (mn) {
        int off = S.block_offset(*mn), d = S.block_dim(*mn);
        std::vector<int> rows(d);
        for (int i = 0; i < d; ++i) rows[i] = off + i;
        return flat_cols.select_rows(rows);
    }
    return express_in_basis(S.basis, flat_cols);
}

int index_in(const std::vector<int>& sorted, int value) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), value);
    if (it == sorted.end() || *it != value) throw std::logic_error("point lookup failed");
    return int(it - sorted.begin());
}

// Section restriction between restrictions of the same sheaf to two nested
// open pieces, phrased through the two subspace presentations.
Mat cross_restriction(const Subspace& SA, SheafPtr FA, const std::vector<int>& WA,
                      const Subspace& SB, SheafPtr FB, const std::vector<int>& WB) {
    const SectionSpace& Sa = FA->sections(WA);
    const SectionSpace& Sb = FB->sections(WB);
    std::vector<int> rows;
    for (int u : Sb.points) {
        int xpt = SB.points[u];
        int ua = index_in(SA.points, xpt);
        int off = Sa.block_offset(ua), d = Sa.block_dim(ua);
        for (int i = 0; i < d; ++i) rows.push_back(off + i);
    }
    Mat restricted = Sa.basis.select_rows(rows);
    return express_sections(*FB, WB, restricted);
}

int sign_of(int j) { return j % 2 == 0 ? 1 : -1; }

SheafMorphism rebind(const SheafMorphism& u, SheafPtr src, SheafPtr tgt) {
    return SheafMorphism{src, tgt, u.at};
}

}  // namespace

ValidationReport EmbeddingTriple::validate() const {
    if (emb.src != domain || emb.tgt != ambient) return {false, "embedding endpoints mismatch"};
    if (!emb.is_monotone()) return {false, "embedding is not monotone"};
    if (!emb.is_injective()) return {false, "embedding is not injective"};
    if (!emb.is_order_embedding()) return {false, "map is not an order embedding"};
    return {};
}

std::vector<std::vector<int>> Atlas::cover() const {
    std::vector<std::vector<int>> c;
    for (auto& ch : charts) c.push_back(ch.open_set);
    return c;
}

ValidationReport Atlas::validate() const {
    std::vector<bool> covered(X->size(), false);
    for (auto& ch : charts) {
        if (!X->is_up_closed(ch.open_set)) return {false, "chart open is not up-closed"};
        for (int x : ch.open_set) covered[x] = true;
        auto rep = ch.triple.validate();
        if (!rep.ok) return rep;
        if (ch.triple.domain != ch.piece.space) return {false, "chart domain is not its open piece"};
    }
    for (int x = 0; x < X->size(); ++x)
        if (!covered[x]) return {false, "charts do not cover the space"};
    return {};
}

Atlas identity_atlas(PosetPtr X, const std::vector<std::vector<int>>& cover) {
    Atlas A;
    A.X = X;
    for (auto& U : cover) {
        AtlasChart ch;
        ch.open_set = U;
        std::sort(ch.open_set.begin(), ch.open_set.end());
        ch.piece = open_subspace(X, ch.open_set);
        ch.triple = EmbeddingTriple{ch.piece.space, ch.piece.space, identity_map(ch.piece.space)};
        A.charts.push_back(std::move(ch));
    }
    auto rep = A.validate();
    if (!rep.ok) throw std::invalid_argument(rep.message);
    return A;
}

Atlas single_chart_atlas(PosetPtr X, PosetPtr D, const SpaceMap& emb) {
    Atlas A;
    A.X = X;
    AtlasChart ch;
    ch.open_set = X->all_points();
    ch.piece = open_subspace(X, ch.open_set);
    SpaceMap k{ch.piece.space, D, {}};
    for (int u = 0; u < ch.piece.space->size(); ++u) k.f.push_back(emb.f[ch.piece.points[u]]);
    ch.triple = EmbeddingTriple{ch.piece.space, D, k};
    A.charts.push_back(std::move(ch));
    auto rep = A.validate();
    if (!rep.ok) throw std::invalid_argument(rep.message);
    return A;
}

ValidationReport SSEmbeddingTriple::validate() const {
    for (auto& [a, ka] : k) {
        EmbeddingTriple T{cover.ss.spaces.at(a), ambient.ss.spaces.at(a), ka};
        auto rep = T.validate();
        if (!rep.ok)
            return {false, "component embedding at " + simplex_to_string(a) + ": " + rep.message};
    }
    for (const Simplex& b : cover.ss.K.simplexes())
        for (const Simplex& a : cover.ss.K.simplexes()) {
            if (a == b || !std::includes(b.begin(), b.end(), a.begin(), a.end())) continue;
            SpaceMap lhs = compose(k.at(a), cover.ss.rho(a, b));
            SpaceMap rhs = compose(ambient.ss.rho(a, b), k.at(b));
            if (lhs.f != rhs.f)
                return {false, "embedding square fails for " + simplex_to_string(a) + " in " +
                                   simplex_to_string(b)};
        }
    return {};
}

SSEmbeddingTriple associated_ss_triple(const Atlas& A) {
    auto rep0 = A.validate();
    if (!rep0.ok) throw std::invalid_argument(rep0.message);
    SSEmbeddingTriple T;
    T.cover = cover_system(A.X, A.cover());
    std::vector<PosetPtr> ambients;
    for (auto& ch : A.charts) ambients.push_back(ch.triple.ambient);
    T.ambient = product_system(T.cover.ss.K, ambients);
    for (const Simplex& a : T.cover.ss.K.simplexes()) {
        const Subspace& piece = T.cover.pieces.at(a);
        const ProductSpace& P = T.ambient.products.at(a);
        SpaceMap ka{piece.space, P.space, {}};
        for (int u = 0; u < piece.space->size(); ++u) {
            int xpt = piece.points[u];
            std::vector<int> tuple;
            for (int i : a) {
                const AtlasChart& ch = A.charts[i];
                int ui = index_in(ch.piece.points, xpt);
                tuple.push_back(ch.triple.emb(ui));
            }
            ka.f.push_back(P.index_of(tuple));
        }
        T.k[a] = std::move(ka);
        T.k_image_closed[a] = T.k.at(a).image_is_down_closed();
    }
    auto rep = T.validate();
    if (!rep.ok) throw std::invalid_argument(rep.message);
    return T;
}

ChartComplex dolb_chart(const EmbeddingTriple& T, SheafPtr F) {
    auto rep = T.validate();
    if (!rep.ok) throw std::invalid_argument(rep.message);
    if (F->base() != T.domain) throw std::invalid_argument("chart sheaf base mismatch");
    ChartComplex C;
    C.k = T.emb;
    C.pushed = pushforward(T.emb, F);
    C.upstairs = flasque_bar_resolution(C.pushed);
    C.complex = inverse_image_complex(T.emb, C.upstairs.complex);
    SheafMorphism aug0 = inverse_image_morphism(T.emb, C.upstairs.augmentation);
    if (!aug0.src->data_equal(*F))
        throw std::logic_error("pulled back unit is not the identity on the chart sheaf");
    C.augmentation = rebind(aug0, F, C.complex.terms[0]);
    SheafComplexMap guard{concentrated_complex(F), C.complex, {{0, C.augmentation}}};
    if (!guard.is_stalkwise_quasi_iso())
        throw std::runtime_error("chart resolution is not a stalkwise resolution");
    return C;
}

std::vector<int> DolbComplex::block_offsets(int n, int x) const {
    std::vector<int> off{0};
    for (auto& bl : layout[n]) off.push_back(off.back() + pushed.at(bl.alpha)[bl.q]->stalk_dim(x));
    return off;
}

namespace {

SheafComplex assemble_total(const DolbComplex& D) {
    SheafComplex total;
    total.base = D.base;
    total.lo = 0;
    for (size_t n = 0; n < D.layout.size(); ++n) {
        SheafPtr term = zero_sheaf(D.base);
        for (auto& bl : D.layout[n]) term = direct_sum(term, D.pushed.at(bl.alpha)[bl.q]);
        total.terms.push_back(term);
    }
    for (size_t n = 0; n + 1 < D.layout.size(); ++n) {
        SheafMorphism dm{total.terms[n], total.terms[n + 1], {}};
        for (int x = 0; x < D.base->size(); ++x) {
            std::vector<int> soff = D.block_offsets(int(n), x);
            std::vector<int> toff = D.block_offsets(int(n) + 1, x);
            Mat m(toff.back(), soff.back());
            for (size_t s = 0; s < D.layout[n].size(); ++s) {
                const auto& sb = D.layout[n][s];
                for (size_t t = 0; t < D.layout[n + 1].size(); ++t) {
                    const auto& tb = D.layout[n + 1][t];
                    const Mat* blk = nullptr;
                    if (tb.alpha == sb.alpha && tb.q == sb.q + 1) {
                        blk = &D.dq.at(sb.alpha)[sb.q].at[x];
                    } else if (tb.q == sb.q &&
                               simplex_length(tb.alpha) == simplex_length(sb.alpha) + 1) {
                        int j = -1;
                        for (int jj = 0; jj <= simplex_length(tb.alpha); ++jj)
                            if (face(tb.alpha, jj) == sb.alpha) { j = jj; break; }
                        if (j < 0) continue;
                        auto it = D.dp.find({tb.alpha, j});
                        if (it == D.dp.end() || sb.q >= int(it->second.size())) continue;
                        blk = &it->second[sb.q].at[x];
                    } else {
                        continue;
                    }
                    for (int i = 0; i < blk->rows(); ++i)
                        for (int jj = 0; jj < blk->cols(); ++jj)
                            if (blk->at(i, jj) != 0)
                                m.at(toff[t] + i, soff[s] + jj) = blk->at(i, jj);
                }
            }
            dm.at.push_back(std::move(m));
        }
        total.d.push_back(std::move(dm));
    }
    return total;
}

}  // namespace

DolbComplex dolb_atlas(PosetPtr X, const Atlas& A, SheafPtr F,
                       const SSEmbeddingTriple* shared_triple) {
    if (F->base() != X) throw std::invalid_argument("sheaf must live on the atlas space");
    DolbComplex D;
    D.base = X;
    D.from_x = identity_map(X);
    D.F = F;
    D.triple = shared_triple ? *shared_triple : associated_ss_triple(A);
    D.nerve = D.triple.cover.ss.K;

    for (const Simplex& a : D.nerve.simplexes()) {
        SheafPtr Fa = inverse_image(D.triple.cover.to_total.at(a), F);
        EmbeddingTriple Ta{D.triple.cover.ss.spaces.at(a), D.triple.ambient.ss.spaces.at(a),
                           D.triple.k.at(a)};
        D.charts.emplace(a, dolb_chart(Ta, Fa));
        D.b[a] = D.triple.cover.to_total.at(a);
    }

    // edge connectors of the chart complexes
    for (const Simplex& bsx : D.nerve.simplexes()) {
        int nb = simplex_length(bsx);
        if (nb < 1) continue;
        for (int j = 0; j <= nb; ++j) {
            Simplex sg = face(bsx, j);
            if (D.conn.count({sg, bsx})) continue;
            const ChartComplex& CS = D.charts.at(sg);
            const ChartComplex& CB = D.charts.at(bsx);
            const Subspace& PS = D.triple.cover.pieces.at(sg);
            const Subspace& PB = D.triple.cover.pieces.at(bsx);
            SpaceMap p = D.triple.ambient.ss.rho(sg, bsx);  // D_b -> D_s
            StalkwiseOver coeff{p, CS.pushed, CB.pushed, {}};
            for (int d = 0; d < p.src->size(); ++d) {
                std::vector<int> Ws = CS.k.preimage(p.tgt->up_set(p(d)));
                std::vector<int> Wb = CB.k.preimage(p.src->up_set(d));
                coeff.at.push_back(cross_restriction(PS, CS.augmentation.src, Ws, PB,
                                                     CB.augmentation.src, Wb));
            }
            coeff.validate();
            std::vector<StalkwiseOver> per_q;
            size_t len = std::max(CS.complex.terms.size(), CB.complex.terms.size());
            for (size_t q = 0; q < len; ++q) {
                StalkwiseOver up = bar_functorial_over(CS.upstairs, CB.upstairs, coeff, int(q));
                SpaceMap rho = D.triple.cover.ss.rho(sg, bsx);
                SheafPtr downT =
                    q < CS.complex.terms.size() ? CS.complex.terms[q] : zero_sheaf(PS.space);
                SheafPtr upT =
                    q < CB.complex.terms.size() ? CB.complex.terms[q] : zero_sheaf(PB.space);
                StalkwiseOver cu{rho, downT, upT, {}};
                for (int u = 0; u < rho.src->size(); ++u) cu.at.push_back(up.at[CB.k(u)]);
                cu.validate();
                per_q.push_back(std::move(cu));
            }
            D.conn[{sg, bsx}] = std::move(per_q);
        }
    }

    // pushed summands and signed blocks
    for (const Simplex& a : D.nerve.simplexes()) {
        const ChartComplex& C = D.charts.at(a);
        std::vector<SheafPtr> ps;
        for (auto& t : C.complex.terms) ps.push_back(pushforward(D.b.at(a), t));
        D.pushed[a] = ps;
        std::vector<SheafMorphism> dqs;
        for (size_t q = 0; q + 1 < C.complex.terms.size(); ++q) {
            SheafMorphism m = pushforward_morphism(D.b.at(a), C.complex.d[q]);
            m = rebind(m, ps[q], ps[q + 1]);
            if (simplex_length(a) % 2 == 1)
                for (auto& mm : m.at) mm = -mm;
            dqs.push_back(std::move(m));
        }
        D.dq[a] = std::move(dqs);
    }
    for (const Simplex& bsx : D.nerve.simplexes()) {
        int nb = simplex_length(bsx);
        if (nb < 1) continue;
        for (int j = 0; j <= nb; ++j) {
            Simplex sg = face(bsx, j);
            const auto& per_q = D.conn.at({sg, bsx});
            std::vector<SheafMorphism> blocks;
            size_t len = std::min(D.pushed.at(sg).size(), D.pushed.at(bsx).size());
            for (size_t q = 0; q < len && q < per_q.size(); ++q) {
                SheafMorphism m = pushed_connector(per_q[q], D.b.at(sg));
                m = rebind(m, D.pushed.at(sg)[q], D.pushed.at(bsx)[q]);
                if (sign_of(j) < 0)
                    for (auto& mm : m.at) mm = -mm;
                blocks.push_back(std::move(m));
            }
            D.dp[{bsx, j}] = std::move(blocks);
        }
    }

    // layout and the total complex
    int pmax = D.nerve.dim();
    int qmax = 0;
    for (auto& [a, C] : D.charts) qmax = std::max(qmax, int(C.complex.terms.size()) - 1);
    for (int n = 0; n <= pmax + qmax; ++n) {
        std::vector<DolbComplex::Block> blocks;
        for (int p = 0; p <= pmax; ++p) {
            int q = n - p;
            if (q < 0) continue;
            for (const Simplex& a : D.nerve.simplexes_of_length(p))
                if (q <= D.max_q(a)) blocks.push_back({a, q});
        }
        D.layout.push_back(std::move(blocks));
    }
    while (D.layout.size() > 1 && D.layout.back().empty()) D.layout.pop_back();
    D.total = assemble_total(D);

    // augmentation
    SheafMorphism aug{F, D.total.terms[0], {}};
    for (int x = 0; x < X->size(); ++x) {
        std::vector<int> off = D.block_offsets(0, x);
        Mat m(off.back(), F->stalk_dim(x));
        for (size_t t = 0; t < D.layout[0].size(); ++t) {
            const Simplex& a = D.layout[0][t].alpha;
            SheafMorphism unit = unit_morphism_into(D.b.at(a), F, D.charts.at(a).augmentation.src);
            SheafMorphism pa = pushforward_morphism(D.b.at(a), D.charts.at(a).augmentation);
            Mat blk = pa.at[x] * unit.at[x];
            for (int i = 0; i < blk.rows(); ++i)
                for (int jj = 0; jj < blk.cols(); ++jj) m.at(off[t] + i, jj) = blk.at(i, jj);
        }
        aug.at.push_back(std::move(m));
    }
    D.augmentation = SheafComplexMap{concentrated_complex(F), D.total, {{0, aug}}};
    return D;
}

Multicomplex DolbComplex::stalk_double(int x) const {
    int pmax = nerve.dim();
    int qmax = 0;
    for (auto& [a, C] : charts) qmax = std::max(qmax, int(C.complex.terms.size()) - 1);
    Multicomplex K(pmax, 0, qmax);
    for (int p = 0; p <= pmax; ++p)
        for (int q = 0; q <= qmax; ++q) {
            int dim = 0;
            for (const Simplex& a : nerve.simplexes_of_length(p))
                if (q <= max_q(a)) dim += pushed.at(a)[q]->stalk_dim(x);
            K.set_dim(p, q, dim);
        }
    auto offs = [&](int p, int q) {
        std::vector<int> off{0};
        for (const Simplex& a : nerve.simplexes_of_length(p))
            off.push_back(off.back() + (q <= max_q(a) ? pushed.at(a)[q]->stalk_dim(x) : 0));
        return off;
    };
    for (int p = 0; p <= pmax; ++p)
        for (int q = 0; q <= qmax; ++q) {
            if (K.dim(p, q) == 0) continue;
            if (q < qmax) {
                Mat m(K.dim(p, q + 1), K.dim(p, q));
                auto so = offs(p, q), to = offs(p, q + 1);
                auto sims = nerve.simplexes_of_length(p);
                for (size_t i = 0; i < sims.size(); ++i) {
                    if (q + 1 > max_q(sims[i])) continue;
                    const Mat& blk = dq.at(sims[i])[q].at[x];
                    for (int r = 0; r < blk.rows(); ++r)
                        for (int c = 0; c < blk.cols(); ++c)
                            if (blk.at(r, c) != 0) m.at(to[i] + r, so[i] + c) = blk.at(r, c);
                }
                K.set_dq(p, q, std::move(m));
            }
            if (p < pmax) {
                Mat m(K.dim(p + 1, q), K.dim(p, q));
                auto so = offs(p, q), to = offs(p + 1, q);
                auto ssims = nerve.simplexes_of_length(p);
                auto tsims = nerve.simplexes_of_length(p + 1);
                for (size_t t = 0; t < tsims.size(); ++t) {
                    if (q > max_q(tsims[t])) continue;
                    for (int j = 0; j <= simplex_length(tsims[t]); ++j) {
                        Simplex fa = face(tsims[t], j);
                        auto it = std::find(ssims.begin(), ssims.end(), fa);
                        if (it == ssims.end() || q > max_q(fa)) continue;
                        size_t s = size_t(it - ssims.begin());
                        const Mat& blk = dp.at({tsims[t], j})[q].at[x];
                        for (int r = 0; r < blk.rows(); ++r)
                            for (int c = 0; c < blk.cols(); ++c)
                                if (blk.at(r, c) != 0) m.at(to[t] + r, so[s] + c) += blk.at(r, c);
                    }
                }
                K.set_dp(p, q, std::move(m));
            }
        }
    return K;
}

Multicomplex DolbComplex::sections_double(const std::vector<int>& U) const {
    int pmax = nerve.dim();
    int qmax = 0;
    for (auto& [a, C] : charts) qmax = std::max(qmax, int(C.complex.terms.size()) - 1);
    Multicomplex K(pmax, 0, qmax);
    auto secdim = [&](const Simplex& a, int q) { return pushed.at(a)[q]->sections(U).dim(); };
    for (int p = 0; p <= pmax; ++p)
        for (int q = 0; q <= qmax; ++q) {
            int dim = 0;
            for (const Simplex& a : nerve.simplexes_of_length(p))
                if (q <= max_q(a)) dim += secdim(a, q);
            K.set_dim(p, q, dim);
        }
    auto offs = [&](int p, int q) {
        std::vector<int> off{0};
        for (const Simplex& a : nerve.simplexes_of_length(p))
            off.push_back(off.back() + (q <= max_q(a) ? secdim(a, q) : 0));
        return off;
    };
    for (int p = 0; p <= pmax; ++p)
        for (int q = 0; q <= qmax; ++q) {
            if (K.dim(p, q) == 0) continue;
            if (q < qmax) {
                Mat m(K.dim(p, q + 1), K.dim(p, q));
                auto so = offs(p, q), to = offs(p, q + 1);
                auto sims = nerve.simplexes_of_length(p);
                for (size_t i = 0; i < sims.size(); ++i) {
                    if (q + 1 > max_q(sims[i])) continue;
                    Mat blk = sections_of_morphism(dq.at(sims[i])[q], U);
                    for (int r = 0; r < blk.rows(); ++r)
                        for (int c = 0; c < blk.cols(); ++c)
                            if (blk.at(r, c) != 0) m.at(to[i] + r, so[i] + c) = blk.at(r, c);
                }
                K.set_dq(p, q, std::move(m));
            }
            if (p < pmax) {
                Mat m(K.dim(p + 1, q), K.dim(p, q));
                auto so = offs(p, q), to = offs(p + 1, q);
                auto ssims = nerve.simplexes_of_length(p);
                auto tsims = nerve.simplexes_of_length(p + 1);
                for (size_t t = 0; t < tsims.size(); ++t) {
                    if (q > max_q(tsims[t])) continue;
                    for (int j = 0; j <= simplex_length(tsims[t]); ++j) {
                        Simplex fa = face(tsims[t], j);
                        auto it = std::find(ssims.begin(), ssims.end(), fa);
                        if (it == ssims.end() || q > max_q(fa)) continue;
                        size_t s = size_t(it - ssims.begin());
                        Mat blk = sections_of_morphism(dp.at({tsims[t], j})[q], U);
                        for (int r = 0; r < blk.rows(); ++r)
                            for (int c = 0; c < blk.cols(); ++c)
                                if (blk.at(r, c) != 0) m.at(to[t] + r, so[s] + c) += blk.at(r, c);
                    }
                }
                K.set_dp(p, q, std::move(m));
            }
        }
    return K;
}

DolbComplex push_dolb(const SpaceMap& f, const DolbComplex& D) {
    if (f.src != D.base) throw std::invalid_argument("push base mismatch");
    DolbComplex P = D;
    P.base = f.tgt;
    P.from_x = compose(f, D.from_x);
    for (auto& [a, m] : P.b) m = compose(f, m);
    for (auto& [a, ps] : P.pushed)
        for (auto& s : ps) s = pushforward(f, s);
    for (auto& [a, ds] : P.dq)
        for (size_t q = 0; q < ds.size(); ++q) {
            SheafMorphism m = pushforward_morphism(f, D.dq.at(a)[q]);
            ds[q] = rebind(m, P.pushed.at(a)[q], P.pushed.at(a)[q + 1]);
        }
    for (auto& [key, ds] : P.dp)
        for (size_t q = 0; q < ds.size(); ++q) {
            SheafMorphism m = pushforward_morphism(f, D.dp.at(key)[q]);
            ds[q] =
                rebind(m, P.pushed.at(face(key.first, key.second))[q], P.pushed.at(key.first)[q]);
        }
    P.total = assemble_total(P);
    if (D.augmentation) {
        SheafMorphism a0 = pushforward_morphism(f, D.augmentation->parts.at(0));
        SheafPtr PF = pushforward(f, D.F);
        P.augmentation = SheafComplexMap{concentrated_complex(PF), P.total,
                                         {{0, rebind(a0, PF, P.total.terms[0])}}};
    }
    return P;
}

SheafComplexMap dolb_map(const DolbComplex& D1, const DolbComplex& D2, const SheafMorphism& u) {
    if (D1.base != D2.base) throw std::invalid_argument("functorial map base mismatch");
    std::map<Simplex, std::vector<SheafMorphism>> blocks;
    for (const Simplex& a : D1.nerve.simplexes()) {
        const ChartComplex& C1 = D1.charts.at(a);
        const ChartComplex& C2 = D2.charts.at(a);
        SheafMorphism ua = inverse_image_morphism(D1.triple.cover.to_total.at(a), u);
        ua = rebind(ua, C1.augmentation.src, C2.augmentation.src);
        SheafMorphism ga = pushforward_morphism(C1.k, ua);
        ga = rebind(ga, C1.pushed, C2.pushed);
        SheafComplexMap bars = bar_functorial_map(C1.upstairs, C2.upstairs, ga);
        std::vector<SheafMorphism> bs;
        for (size_t q = 0; q < C1.complex.terms.size(); ++q) {
            SheafMorphism tq = inverse_image_morphism(C1.k, bars.parts.at(int(q)));
            tq = rebind(tq, C1.complex.terms[q], C2.complex.terms[q]);
            SheafMorphism pq = pushforward_morphism(D1.b.at(a), tq);
            bs.push_back(rebind(pq, D1.pushed.at(a)[q], D2.pushed.at(a)[q]));
        }
        blocks[a] = std::move(bs);
    }
    SheafComplexMap out{D1.total, D2.total, {}};
    for (size_t n = 0; n < D1.layout.size(); ++n) {
        SheafMorphism part{D1.total.terms[n], D2.total.terms[n], {}};
        for (int x = 0; x < D1.base->size(); ++x) {
            std::vector<int> so = D1.block_offsets(int(n), x);
            std::vector<int> to = D2.block_offsets(int(n), x);
            Mat m(to.back(), so.back());
            for (size_t i = 0; i < D1.layout[n].size(); ++i) {
                const auto& bl = D1.layout[n][i];
                const Mat& blk = blocks.at(bl.alpha)[bl.q].at[x];
                for (int r = 0; r < blk.rows(); ++r)
                    for (int c = 0; c < blk.cols(); ++c)
                        if (blk.at(r, c) != 0) m.at(to[i] + r, so[i] + c) = blk.at(r, c);
            }
            part.at.push_back(std::move(m));
        }
        out.parts[int(n)] = std::move(part);
    }
    return out;
}

SheafComplexMap tensor_comparison(const DolbComplex& DQ, const DolbComplex& DF) {
    SheafPtr F = DF.F;
    PosetPtr X = DQ.base;
    SheafComplex lhs;
    lhs.base = X;
    lhs.lo = 0;
    for (auto& t : DQ.total.terms) lhs.terms.push_back(tensor_sheaf(t, F));
    for (auto& d : DQ.total.d) lhs.d.push_back(tensor_morphism(d, identity_morphism(F)));

    SheafComplexMap out{lhs, DF.total, {}};
    for (size_t n = 0; n < DQ.layout.size(); ++n) {
        SheafMorphism part{lhs.terms[n], DF.total.terms[n], {}};
        for (int x = 0; x < X->size(); ++x) {
            int fdim = F->stalk_dim(x);
            std::vector<int> qoff = DQ.block_offsets(int(n), x);
            std::vector<int> foff = DF.block_offsets(int(n), x);
            Mat m(foff.back(), qoff.back() * fdim);
            for (size_t t = 0; t < DQ.layout[n].size(); ++t) {
                const Simplex& a = DQ.layout[n][t].alpha;
                int q = DQ.layout[n][t].q;
                const ChartComplex& CQ = DQ.charts.at(a);
                const ChartComplex& CF = DF.charts.at(a);
                const Subspace& piece = DQ.triple.cover.pieces.at(a);
                std::vector<int> W = DQ.b.at(a).preimage(X->up_set(x));
                const SectionSpace& SQ = CQ.complex.terms[q]->sections(W);
                const SectionSpace& SF = CF.complex.terms[q]->sections(W);
                for (int i = 0; i < SQ.dim(); ++i) {
                    for (int j = 0; j < fdim; ++j) {
                        Mat tf(SF.flat_dim(), 1);
                        for (size_t pi = 0; pi < SQ.points.size(); ++pi) {
                            int uu = SQ.points[pi];
                            int du = CQ.k(uu);
                            const auto& chains = CQ.upstairs.chains[q][du];
                            int qpos = SQ.offsets[pi];
                            int fpos = SF.offsets[pi];
                            for (auto& c : chains) {
                                std::vector<int> Wtop = CQ.k.preimage(CQ.k.tgt->up_set(c.back()));
                                const SectionSpace& Qsec = CQ.augmentation.src->sections(Wtop);
                                const SectionSpace& Fsec = CF.augmentation.src->sections(Wtop);
                                Mat qc(Qsec.dim(), 1);
                                for (int r = 0; r < Qsec.dim(); ++r)
                                    qc.at(r, 0) = SQ.basis.at(qpos + r, i);
                                Mat qflat = Qsec.basis * qc;
                                Mat fflat(Fsec.flat_dim(), 1);
                                for (size_t zi = 0; zi < Qsec.points.size(); ++zi) {
                                    int z = Qsec.points[zi];
                                    int xpt = piece.points[z];
                                    Mat r = F->res(x, xpt);
                                    const Rat& qv = qflat.at(Qsec.offsets[zi], 0);
                                    if (qv != 0)
                                        for (int rr = 0; rr < r.rows(); ++rr)
                                            fflat.at(Fsec.offsets[zi] + rr, 0) = qv * r.at(rr, j);
                                }
                                Mat fc = express_sections(*CF.augmentation.src, Wtop, fflat);
                                for (int r = 0; r < fc.rows(); ++r) tf.at(fpos + r, 0) = fc.at(r, 0);
                                qpos += Qsec.dim();
                                fpos += Fsec.dim();
                            }
                        }
                        Mat fcoord = express_sections(*CF.complex.terms[q], W, tf);
                        int col = (qoff[t] + i) * fdim + j;
                        for (int r = 0; r < fcoord.rows(); ++r)
                            m.at(foff[t] + r, col) = fcoord.at(r, 0);
                    }
                }
            }
            part.at.push_back(std::move(m));
        }
        out.parts[int(n)] = std::move(part);
    }
    return out;
}

ValidationReport LocalizedMorphism::validate() const {
    if (!f.is_monotone()) return {false, "underlying map not monotone"};
    if (tau.size() != src->charts.size()) return {false, "refinement map has wrong length"};
    for (size_t i = 0; i < src->charts.size(); ++i) {
        int j = tau[i];
        if (j < 0 || j >= int(tgt->charts.size())) return {false, "refinement index out of range"};
        const AtlasChart& ci = src->charts[i];
        const AtlasChart& cj = tgt->charts[j];
        std::set<int> vj(cj.open_set.begin(), cj.open_set.end());
        for (int x : ci.open_set)
            if (!vj.count(f(x)))
                return {false, "image of chart " + std::to_string(i) + " leaves chart " +
                                   std::to_string(j)};
        const SpaceMap& ft = ftilde[i];
        if (ft.src != ci.triple.ambient || ft.tgt != cj.triple.ambient)
            return {false, "ambient map endpoints mismatch at chart " + std::to_string(i)};
        if (!ft.is_monotone()) return {false, "ambient map not monotone"};
        for (int u = 0; u < ci.piece.space->size(); ++u) {
            int xpt = ci.piece.points[u];
            int vidx = index_in(cj.piece.points, f(xpt));
            if (cj.triple.emb(vidx) != ft(ci.triple.emb(u)))
                return {false, "embedding square fails at chart " + std::to_string(i)};
        }
    }
    return {};
}

LocalizedMorphism identity_localized(const Atlas& A) {
    LocalizedMorphism m;
    m.f = identity_map(A.X);
    m.src = &A;
    m.tgt = &A;
    for (size_t i = 0; i < A.charts.size(); ++i) {
        m.tau.push_back(int(i));
        m.ftilde.push_back(identity_map(A.charts[i].triple.ambient));
    }
    return m;
}

LocalizedMorphism compose(const LocalizedMorphism& g, const LocalizedMorphism& f) {
    LocalizedMorphism h;
    h.f = compose(g.f, f.f);
    h.src = f.src;
    h.tgt = g.tgt;
    for (size_t i = 0; i < f.tau.size(); ++i) {
        h.tau.push_back(g.tau[f.tau[i]]);
        h.ftilde.push_back(compose(g.ftilde[f.tau[i]], f.ftilde[i]));
    }
    return h;
}

SheafComplexMap DolbPullback::as_map(const DolbComplex& from, const DolbComplex& pushed_to) const {
    SheafComplexMap out{from.total, pushed_to.total, {}};
    for (size_t n = 0; n < pushed_to.layout.size(); ++n) {
        SheafPtr src_term =
            n < from.total.terms.size() ? from.total.terms[n] : zero_sheaf(from.base);
        SheafMorphism part{src_term, pushed_to.total.terms[n], {}};
        for (int y = 0; y < pushed_to.base->size(); ++y) {
            std::vector<int> toff = pushed_to.block_offsets(int(n), y);
            std::vector<int> soff =
                n < from.layout.size() ? from.block_offsets(int(n), y) : std::vector<int>{0};
            Mat m(toff.back(), soff.back());
            if (n < from.layout.size()) {
                for (size_t t = 0; t < pushed_to.layout[n].size(); ++t) {
                    const auto& tb = pushed_to.layout[n][t];
                    auto bit = blocks.find(tb.alpha);
                    if (bit == blocks.end() || tb.q >= int(bit->second.size())) continue;
                    Simplex g = source_of.at(tb.alpha);
                    int sidx = -1;
                    for (size_t s = 0; s < from.layout[n].size(); ++s)
                        if (from.layout[n][s].alpha == g && from.layout[n][s].q == tb.q) {
                            sidx = int(s);
                            break;
                        }
                    if (sidx < 0) continue;
                    const Mat& blk = bit->second[tb.q].at[y];
                    for (int r = 0; r < blk.rows(); ++r)
                        for (int c = 0; c < blk.cols(); ++c)
                            if (blk.at(r, c) != 0) m.at(toff[t] + r, soff[sidx] + c) = blk.at(r, c);
                }
            }
            part.at.push_back(std::move(m));
        }
        out.parts[int(n)] = std::move(part);
    }
    return out;
}

bool DolbPullback::data_equal(const DolbPullback& o) const {
    if (source_of != o.source_of) return false;
    if (blocks.size() != o.blocks.size()) return false;
    for (auto& [a, bs] : blocks) {
        auto it = o.blocks.find(a);
        if (it == o.blocks.end() || bs.size() != it->second.size()) return false;
        for (size_t q = 0; q < bs.size(); ++q) {
            if (bs[q].at != it->second[q].at) return false;
            if (!bs[q].src->data_equal(*it->second[q].src)) return false;
            if (!bs[q].tgt->data_equal(*it->second[q].tgt)) return false;
        }
    }
    return true;
}

PullbackResult pullback_morphism(const LocalizedMorphism& fm, const DolbComplex& DB,
                                 const DolbComplex& DA, const SheafMorphism& u) {
    auto rep = fm.validate();
    if (!rep.ok) throw std::invalid_argument(rep.message);
    for (size_t i = 0; i + 1 < fm.tau.size(); ++i)
        if (fm.tau[i] > fm.tau[i + 1])
            throw std::invalid_argument(
                "refinement map is not non-decreasing; relabel the source atlas charts first");
    const SpaceMap& f = fm.f;
    PullbackResult out{push_dolb(f, DA), {}, {}};

    for (const Simplex& a : DA.nerve.simplexes()) {
        Simplex g;
        for (int i : a) g.push_back(fm.tau[i]);
        std::sort(g.begin(), g.end());
        if (std::adjacent_find(g.begin(), g.end()) != g.end()) continue;  // tau collapses a
        if (!DB.nerve.contains(g)) throw std::logic_error("refined simplex missing from the nerve");
        out.data.source_of[a] = g;

        const ChartComplex& CA = DA.charts.at(a);
        const ChartComplex& CB = DB.charts.at(g);
        const Subspace& PA = DA.triple.cover.pieces.at(a);
        const Subspace& PB = DB.triple.cover.pieces.at(g);

        const ProductSpace& QA = DA.triple.ambient.products.at(a);
        const ProductSpace& QB = DB.triple.ambient.products.at(g);
        SpaceMap ft{QA.space, QB.space, {}};
        for (int d = 0; d < QA.space->size(); ++d) {
            std::vector<int> tuple;
            for (int j : g) {
                int pos = -1;
                for (size_t ii = 0; ii < a.size(); ++ii)
                    if (fm.tau[a[ii]] == j) { pos = int(ii); break; }
                tuple.push_back(fm.ftilde[a[pos]](QA.tuples[d][pos]));
            }
            ft.f.push_back(QB.index_of(tuple));
        }

        StalkwiseOver coeff{ft, CB.pushed, CA.pushed, {}};
        for (int d = 0; d < QA.space->size(); ++d) {
            std::vector<int> Wb = CB.k.preimage(QB.space->up_set(ft(d)));
            std::vector<int> Wa = CA.k.preimage(QA.space->up_set(d));
            const SectionSpace& Sb = CB.augmentation.src->sections(Wb);
            const SectionSpace& Sa = CA.augmentation.src->sections(Wa);
            Mat flat(Sa.flat_dim(), Sb.dim());
            for (int col = 0; col < Sb.dim(); ++col) {
                for (size_t pi = 0; pi < Sa.points.size(); ++pi) {
                    int xu = Sa.points[pi];
                    int xpt = PA.points[xu];
                    int y = f(xpt);
                    int vy = index_in(PB.points, y);
                    int boff = Sb.block_offset(vy);
                    std::vector<Rat> gval(size_t(Sb.block_dim(vy)));
                    for (size_t r = 0; r < gval.size(); ++r)
                        gval[r] = Sb.basis.at(boff + int(r), col);
                    std::vector<Rat> fsec = u.at[y].apply(gval);
                    const SectionSpace& SFy =
                        u.tgt->origin_sheaf
                            ? u.tgt->origin_sheaf->sections(
                                  u.tgt->origin_map->preimage(f.tgt->up_set(y)))
                            : DA.F->sections(f.preimage(f.tgt->up_set(y)));
                    Mat ev = SFy.evaluation_at(xpt);
                    Mat fv(int(fsec.size()), 1);
                    for (size_t r = 0; r < fsec.size(); ++r) fv.at(int(r), 0) = fsec[r];
                    Mat val = ev * fv;
                    for (int r = 0; r < val.rows(); ++r)
                        flat.at(Sa.offsets[pi] + r, col) = val.at(r, 0);
                }
            }
            coeff.at.push_back(express_sections(*CA.augmentation.src, Wa, flat));
        }
        coeff.validate();

        size_t len = std::min(CA.complex.terms.size(), CB.complex.terms.size());
        std::vector<SheafMorphism> per_q;
        for (size_t q = 0; q < len; ++q) {
            StalkwiseOver up = bar_functorial_over(CB.upstairs, CA.upstairs, coeff, int(q));
            SpaceMap fa{PA.space, PB.space, {}};
            for (int uu = 0; uu < PA.space->size(); ++uu)
                fa.f.push_back(index_in(PB.points, f(PA.points[uu])));
            StalkwiseOver cu{fa, CB.complex.terms[q], CA.complex.terms[q], {}};
            for (int uu = 0; uu < PA.space->size(); ++uu) cu.at.push_back(up.at[CA.k(uu)]);
            cu.validate();
            SheafMorphism blk = pushed_connector(cu, DB.b.at(g));
            per_q.push_back(rebind(blk, DB.pushed.at(g)[q], out.pushed.pushed.at(a)[q]));
        }
        out.data.blocks[a] = std::move(per_q);
    }
    out.map = out.data.as_map(DB, out.pushed);
    out.map.validate();
    return out;
}

DolbPullback push_pullback(const SpaceMap& g, const DolbPullback& P, const DolbComplex& src_pushed,
                           const DolbComplex& tgt_pushed) {
    DolbPullback out;
    out.source_of = P.source_of;
    for (auto& [a, bs] : P.blocks) {
        std::vector<SheafMorphism> nbs;
        for (size_t q = 0; q < bs.size(); ++q) {
            SheafMorphism m = pushforward_morphism(g, bs[q]);
            nbs.push_back(
                rebind(m, src_pushed.pushed.at(P.source_of.at(a))[q], tgt_pushed.pushed.at(a)[q]));
        }
        out.blocks[a] = std::move(nbs);
    }
    return out;
}

AtlasProduct atlas_product(const Atlas& A, const SpaceMap& f, const std::vector<int>& tau,
                           const Atlas& B) {
    AtlasProduct out;
    out.product.X = A.X;
    for (size_t i = 0; i < A.charts.size(); ++i) {
        const AtlasChart& ci = A.charts[i];
        const AtlasChart& cj = B.charts.at(tau[i]);
        std::set<int> vj(cj.open_set.begin(), cj.open_set.end());
        for (int x : ci.open_set)
            if (!vj.count(f(x)))
                throw std::invalid_argument("refinement fails: chart " + std::to_string(i) +
                                            " does not land in chart " + std::to_string(tau[i]));
        AtlasChart ch;
        ch.open_set = ci.open_set;
        ch.piece = ci.piece;
        ProductSpace amb = product_space({ci.triple.ambient, cj.triple.ambient});
        SpaceMap emb{ci.piece.space, amb.space, {}};
        for (int u = 0; u < ci.piece.space->size(); ++u) {
            int xpt = ci.piece.points[u];
            int vidx = index_in(cj.piece.points, f(xpt));
            emb.f.push_back(amb.index_of({ci.triple.emb(u), cj.triple.emb(vidx)}));
        }
        ch.triple = EmbeddingTriple{ci.piece.space, amb.space, emb};
        out.p1.ftilde.push_back(amb.projections[0]);
        out.p2.ftilde.push_back(amb.projections[1]);
        out.product.charts.push_back(std::move(ch));
    }
    auto rep = out.product.validate();
    if (!rep.ok) throw std::invalid_argument("product atlas invalid: " + rep.message);
    out.p1.f = identity_map(A.X);
    out.p1.tgt = &A;
    for (size_t i = 0; i < A.charts.size(); ++i) out.p1.tau.push_back(int(i));
    out.p2.f = f;
    out.p2.tgt = &B;
    out.p2.tau = tau;
    return out;
}

AtlasDoubleProduct atlas_double_product(const Atlas& A, const SpaceMap& f,
                                        const std::vector<int>& tau1, const std::vector<int>& tau2,
                                        const Atlas& B) {
    AtlasDoubleProduct out;
    out.first = atlas_product(A, f, tau1, B);
    out.second = atlas_product(A, f, tau2, B);
    out.product.X = A.X;
    for (size_t i = 0; i < A.charts.size(); ++i) {
        const AtlasChart& ci = A.charts[i];
        const AtlasChart& c1 = B.charts.at(tau1[i]);
        const AtlasChart& c2 = B.charts.at(tau2[i]);
        AtlasChart ch;
        ch.open_set = ci.open_set;
        ch.piece = ci.piece;
        ProductSpace amb = product_space({ci.triple.ambient, c1.triple.ambient, c2.triple.ambient});
        SpaceMap emb{ci.piece.space, amb.space, {}};
        for (int u = 0; u < ci.piece.space->size(); ++u) {
            int xpt = ci.piece.points[u];
            int v1 = index_in(c1.piece.points, f(xpt));
            int v2 = index_in(c2.piece.points, f(xpt));
            emb.f.push_back(amb.index_of({ci.triple.emb(u), c1.triple.emb(v1), c2.triple.emb(v2)}));
        }
        ch.triple = EmbeddingTriple{ci.piece.space, amb.space, emb};
        // projections onto the binary products; the binary ambients are built
        // with the same factor order, so the index arithmetic matches
        auto proj_onto = [&](const AtlasChart& target, int keep) {
            SpaceMap m{amb.space, target.triple.ambient, {}};
            int second_size = (keep == 1 ? c1.triple.ambient->size() : c2.triple.ambient->size());
            for (int d = 0; d < amb.space->size(); ++d) {
                int t0 = amb.tuples[d][0];
                int t1 = amb.tuples[d][keep];
                m.f.push_back(t0 * second_size + t1);
            }
            return m;
        };
        out.to_first.ftilde.push_back(proj_onto(out.first.product.charts[i], 1));
        out.to_second.ftilde.push_back(proj_onto(out.second.product.charts[i], 2));
        out.product.charts.push_back(std::move(ch));
    }
    auto rep = out.product.validate();
    if (!rep.ok) throw std::invalid_argument("double product atlas invalid: " + rep.message);
    out.to_first.f = identity_map(A.X);
    out.to_second.f = identity_map(A.X);
    out.to_first.tgt = &out.first.product;
    out.to_second.tgt = &out.second.product;
    for (size_t i = 0; i < A.charts.size(); ++i) {
        out.to_first.tau.push_back(int(i));
        out.to_second.tau.push_back(int(i));
    }
    return out;
}

std::optional<std::vector<int>> find_monotone_refinement(const SpaceMap& f, const Atlas& A,
                                                         const Atlas& B) {
    std::vector<std::vector<int>> candidates(A.charts.size());
    for (size_t i = 0; i < A.charts.size(); ++i)
        for (size_t j = 0; j < B.charts.size(); ++j) {
            std::set<int> vj(B.charts[j].open_set.begin(), B.charts[j].open_set.end());
            bool inside = true;
            for (int x : A.charts[i].open_set)
                if (!vj.count(f(x))) { inside = false; break; }
            if (inside) candidates[i].push_back(int(j));
        }
    std::vector<int> tau;
    int last = 0;
    for (size_t i = 0; i < A.charts.size(); ++i) {
        int pick = -1;
        for (int j : candidates[i])
            if (j >= last) { pick = j; break; }
        if (pick < 0) return std::nullopt;
        tau.push_back(pick);
        last = pick;
    }
    return tau;
}

Zigzag derived_zigzag(const SpaceMap& f, const SheafMorphism& u, const Atlas& A, const Atlas& B,
                      const std::vector<int>& tau, const DolbComplex& DA, const DolbComplex& DB) {
    Zigzag Z{atlas_product(A, f, tau, B), {}, {}, {}, {}};
    Z.prod.p1.src = &Z.prod.product;
    Z.prod.p2.src = &Z.prod.product;
    DolbComplex DP = dolb_atlas(A.X, Z.prod.product, DA.F);

    SheafMorphism uid{DA.F, pushforward(identity_map(A.X), DA.F), {}};
    for (int x = 0; x < A.X->size(); ++x) uid.at.push_back(Mat::identity(DA.F->stalk_dim(x)));
    PullbackResult left_on_x = pullback_morphism(Z.prod.p1, DA, DP, uid);
    PullbackResult right = pullback_morphism(Z.prod.p2, DB, DP, u);

    Z.mid = right.pushed;
    Z.left_source = push_dolb(f, DA);
    DolbPullback pushed_left = push_pullback(f, left_on_x.data, Z.left_source, Z.mid);
    Z.left = pushed_left.as_map(Z.left_source, Z.mid);
    Z.left.validate();
    Z.right = right.map;
    return Z;
}

std::map<int, Mat> zigzag_induced_map(const Zigzag& Z) {
    std::vector<int> allY = Z.mid.base->all_points();
    ChainMap right = Z.right.sections_chain_map(allY);
    ChainMap left = Z.left.sections_chain_map(allY);
    if (!is_quasi_iso(left)) throw std::runtime_error("zigzag left leg is not a quasi-isomorphism");
    std::map<int, Mat> hr = induced_cohomology_maps(right);
    std::map<int, Mat> hl = induced_cohomology_maps(left);
    std::map<int, Mat> out;
    for (auto& [n, m] : hr) out[n] = inverse(hl.at(n)) * m;
    return out;
}

TripleCompositionCheck check_triple_composition(const LocalizedMorphism& fm,
                                                const LocalizedMorphism& gm, const DolbComplex& DA,
                                                const DolbComplex& DB, const DolbComplex& DC,
                                                const SheafMorphism& u, const SheafMorphism& v) {
    TripleCompositionCheck out;
    LocalizedMorphism hm = compose(gm, fm);
    SheafMorphism gu = pushforward_morphism(gm.f, u);
    SheafMorphism w{v.src, gu.tgt, {}};
    for (size_t z = 0; z < v.at.size(); ++z) w.at.push_back(gu.at[z] * v.at[z]);

    PullbackResult PH = pullback_morphism(hm, DC, DA, w);
    PullbackResult PU = pullback_morphism(fm, DB, DA, u);
    PullbackResult PV = pullback_morphism(gm, DC, DB, v);

    DolbComplex gPU_target = push_dolb(gm.f, PU.pushed);
    DolbComplex gDB = push_dolb(gm.f, DB);
    DolbPullback gPU = push_pullback(gm.f, PU.data, gDB, gPU_target);

    for (auto& [a, bs] : PH.data.blocks)
        for (size_t q = 0; q < bs.size(); ++q)
            if (!PH.pushed.pushed.at(a)[q]->data_equal(*gPU_target.pushed.at(a)[q])) {
                out.message = "pushed targets differ at " + simplex_to_string(a);
                return out;
            }
    if (PH.data.source_of.size() != gPU.source_of.size()) {
        out.message = "block index sets differ";
        return out;
    }
    for (auto& [a, g] : PH.data.source_of) {
        auto it = gPU.source_of.find(a);
        if (it == gPU.source_of.end()) {
            out.message = "missing block at " + simplex_to_string(a);
            return out;
        }
        Simplex mid = it->second;
        Simplex src = PV.data.source_of.at(mid);
        if (src != g) {
            out.message = "source simplex mismatch at " + simplex_to_string(a);
            return out;
        }
        const auto& hb = PH.data.blocks.at(a);
        const auto& ub = gPU.blocks.at(a);
        const auto& vb = PV.data.blocks.at(mid);
        size_t len = std::min({hb.size(), ub.size(), vb.size()});
        for (size_t q = 0; q < len; ++q)
            for (int z = 0; z < DC.base->size(); ++z) {
                Mat composite = ub[q].at[z] * vb[q].at[z];
                if (!(composite - hb[q].at[z]).is_zero()) {
                    out.message = "block mismatch at " + simplex_to_string(a) + " degree " +
                                  std::to_string(q) + " point " + std::to_string(z);
                    return out;
                }
            }
        for (size_t q = len; q < hb.size(); ++q)
            for (auto& m : hb[q].at)
                if (!m.is_zero()) {
                    out.message = "trailing block mismatch at " + simplex_to_string(a);
                    return out;
                }
    }
    out.ok = true;
    return out;
}

}  // namespace dolbres
