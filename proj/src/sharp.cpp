#include "dolbres/sharp.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace dolbres {

namespace {

bool strict_subset(const Simplex& a, const Simplex& b) {
    return a != b && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Coordinates of flat column vectors in the canonical section basis.
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

}  // namespace

ValidationReport SSMapOverF::validate() const {
    try {
        f.validate();
    } catch (const std::exception& e) {
        return {false, std::string("index map invalid: ") + e.what()};
    }
    if (!f.is_non_decreasing())
        return {false, "index map is not non-decreasing; relabel the source complex first"};
    for (const Simplex& a : src->K.simplexes()) {
        auto it = comp.find(a);
        if (it == comp.end()) return {false, "missing component map at " + simplex_to_string(a)};
        if (it->second.src != src->spaces.at(a) || it->second.tgt != tgt->spaces.at(f.apply(a)))
            return {false, "component map endpoints mismatch at " + simplex_to_string(a)};
        if (!it->second.is_monotone()) return {false, "component map not monotone"};
    }
    for (const Simplex& b : src->K.simplexes())
        for (const Simplex& a : src->K.simplexes()) {
            if (!strict_subset(a, b)) continue;
            SpaceMap lhs = compose(comp.at(a), src->rho(a, b));
            SpaceMap rhs = compose(tgt->rho(f.apply(a), f.apply(b)), comp.at(b));
            if (lhs.f != rhs.f)
                return {false, "compatibility square fails for " + simplex_to_string(a) + " in " +
                                   simplex_to_string(b)};
        }
    return {};
}

SSMapOverF identity_ss_map(const SSSpace& X) {
    SSMapOverF F;
    F.src = &X;
    F.tgt = &X;
    F.f = identity_morphism(X.K);
    for (const Simplex& a : X.K.simplexes()) F.comp[a] = identity_map(X.spaces.at(a));
    return F;
}

SSMapOverF compose(const SSMapOverF& G, const SSMapOverF& F) {
    if (F.tgt != G.src) throw std::invalid_argument("s.s. morphisms not composable");
    SSMapOverF H;
    H.src = F.src;
    H.tgt = G.tgt;
    H.f = compose(G.f, F.f);
    for (const Simplex& a : F.src->K.simplexes())
        H.comp[a] = compose(G.comp.at(F.f.apply(a)), F.comp.at(a));
    return H;
}

SSMapOverF cover_inclusion_map(const CoverSystem& U, const SSSpace& Xpt) {
    SSMapOverF F;
    F.src = &U.ss;
    F.tgt = &Xpt;
    F.f = collapse_to_point(U.ss.K);
    for (const Simplex& a : U.ss.K.simplexes()) F.comp[a] = U.to_total.at(a);
    return F;
}

SSModule inverse_image_ss(const SSMapOverF& F, const SSModule& G) {
    auto rep = F.validate();
    if (!rep.ok) throw std::invalid_argument(rep.message);
    SSModule M;
    M.base = F.src;
    for (const Simplex& a : F.src->K.simplexes())
        M.sheaves[a] = inverse_image(F.comp.at(a), G.sheaves.at(F.f.apply(a)));
    for (const Simplex& b : F.src->K.simplexes())
        for (const Simplex& a : F.src->K.simplexes()) {
            if (!strict_subset(a, b)) continue;
            Simplex fa = F.f.apply(a), fb = F.f.apply(b);
            SpaceMap r = F.src->rho(a, b);
            const SpaceMap& Fb = F.comp.at(b);
            StalkwiseOver c{r, M.sheaves.at(a), M.sheaves.at(b), {}};
            for (int x = 0; x < r.src->size(); ++x) {
                if (fa == fb) {
                    c.at.push_back(Mat::identity(G.sheaves.at(fb)->stalk_dim(Fb(x))));
                } else {
                    c.at.push_back(G.conn.at({fa, fb}).at[Fb(x)]);
                }
            }
            auto check = [&]() {
                try {
                    c.validate();
                    return true;
                } catch (...) {
                    return false;
                }
            };
            if (!check())
                throw std::invalid_argument("inverse image connector fails naturality at " +
                                            simplex_to_string(a) + " in " + simplex_to_string(b));
            M.conn.emplace(std::make_pair(a, b), std::move(c));
        }
    return M;
}

int LabelledSheaf::stalk_dim(int q) const {
    int d = 0;
    for (auto& c : comps) d += c.carrier->sections(c.to_base.preimage(base->up_set(q))).dim();
    return d;
}

std::vector<int> LabelledSheaf::comp_dims(int q) const {
    std::vector<int> out;
    for (auto& c : comps) out.push_back(c.carrier->sections(c.to_base.preimage(base->up_set(q))).dim());
    return out;
}

SheafPtr LabelledSheaf::realize() const {
    if (realized_) return realized_;
    std::vector<int> stalks(base->size());
    for (int q = 0; q < base->size(); ++q) stalks[q] = stalk_dim(q);
    std::map<std::pair<int, int>, Mat> res;
    for (int q = 0; q < base->size(); ++q)
        for (int r = 0; r < base->size(); ++r) {
            if (!base->lt(q, r)) continue;
            std::vector<int> rdims, cdims;
            std::vector<Mat> store;
            store.reserve(comps.size());
            std::vector<std::vector<const Mat*>> grid(comps.size(),
                                                      std::vector<const Mat*>(comps.size(), nullptr));
            for (size_t c = 0; c < comps.size(); ++c) {
                auto Vq = comps[c].to_base.preimage(base->up_set(q));
                auto Vr = comps[c].to_base.preimage(base->up_set(r));
                rdims.push_back(comps[c].carrier->sections(Vr).dim());
                cdims.push_back(comps[c].carrier->sections(Vq).dim());
                store.push_back(comps[c].carrier->section_restriction(Vq, Vr));
                grid[c][c] = &store.back();
            }
            res[{q, r}] = block_matrix(rdims, cdims, grid);
        }
    realized_ = SheafRep::from_all_pairs(base, std::move(stalks), std::move(res));
    return realized_;
}

bool LabelledSheaf::same_shape(const LabelledSheaf& o) const {
    if (base != o.base || comps.size() != o.comps.size()) return false;
    for (size_t i = 0; i < comps.size(); ++i) {
        if (comps[i].label != o.comps[i].label) return false;
        if (comps[i].carrier != o.comps[i].carrier) return false;
        if (comps[i].to_base.f != o.comps[i].to_base.f) return false;
        if (comps[i].to_base.src != o.comps[i].to_base.src) return false;
    }
    return true;
}

LabelledSheaf single_component(const Simplex& label, SheafPtr carrier) {
    LabelledSheaf T;
    T.base = carrier->base();
    T.comps.push_back(Component{label, identity_map(carrier->base()), carrier});
    return T;
}

LabelledSheaf push_labelled(const SpaceMap& g, const LabelledSheaf& T) {
    LabelledSheaf out;
    out.base = g.tgt;
    for (auto& c : T.comps) out.comps.push_back(Component{c.label, compose(g, c.to_base), c.carrier});
    return out;
}

namespace {

// Matrix of the map between pushed labelled section spaces induced by
// pointwise realized matrices `at` along rho : XB -> XA.
Mat induced_block(const LabelledSheaf& A, const SpaceMap& mA, const std::vector<int>& WA,
                  const LabelledSheaf& B, const SpaceMap& mB, const std::vector<int>& WB,
                  const SpaceMap& rho, const std::vector<Mat>& at) {
    PosetPtr XA = mA.src, XB = mB.src;
    // source/target component section spaces over the pushed opens
    std::vector<std::vector<int>> Vsrc, Vtgt;
    std::vector<int> soff{0}, toff{0};
    for (auto& c : A.comps) {
        Vsrc.push_back(c.to_base.preimage(mA.preimage(WA)));
        soff.push_back(soff.back() + c.carrier->sections(Vsrc.back()).dim());
    }
    for (auto& c : B.comps) {
        Vtgt.push_back(c.to_base.preimage(mB.preimage(WB)));
        toff.push_back(toff.back() + c.carrier->sections(Vtgt.back()).dim());
    }
    int sdim = soff.back(), tdim = toff.back();
    std::vector<int> XBpts = mB.preimage(WB);

    // per x in XBpts: matrix from source coordinates to realized-B values at x
    // realized-A coords at rho(x) = blockdiag of carrier restrictions applied
    // to source coordinates.
    // target flat vector: one row group per (target comp, carrier point).
    std::vector<std::vector<int>> tflat_off(B.comps.size());
    std::vector<int> tflat_base(B.comps.size() + 1, 0);
    for (size_t c = 0; c < B.comps.size(); ++c) {
        const SectionSpace& S = B.comps[c].carrier->sections(Vtgt[c]);
        tflat_off[c] = S.offsets;
        tflat_base[c + 1] = tflat_base[c] + S.flat_dim();
    }
    Mat tflat(tflat_base.back(), sdim);

    for (int x : XBpts) {
        int ax = rho.f.empty() ? x : rho(x);
        // source coords -> realized A at ax
        std::vector<int> adims;
        std::vector<Mat> ablocks;
        for (size_t c = 0; c < A.comps.size(); ++c) {
            auto Vx = A.comps[c].to_base.preimage(XA->up_set(ax));
            ablocks.push_back(A.comps[c].carrier->section_restriction(Vsrc[c], Vx));
            adims.push_back(ablocks.back().rows());
        }
        std::vector<int> cdims;
        for (size_t c = 0; c < A.comps.size(); ++c) cdims.push_back(soff[c + 1] - soff[c]);
        std::vector<std::vector<const Mat*>> grid(A.comps.size(),
                                                  std::vector<const Mat*>(A.comps.size(), nullptr));
        for (size_t c = 0; c < A.comps.size(); ++c) grid[c][c] = &ablocks[c];
        Mat toA = block_matrix(adims, cdims, grid);
        Mat vals = at[x] * toA;  // realized B at x  <-  source coords
        // expand realized-B coords at x into target flat rows owned by x
        int row0 = 0;
        for (size_t c = 0; c < B.comps.size(); ++c) {
            auto Vx = B.comps[c].to_base.preimage(XB->up_set(x));
            const SectionSpace& Sx = B.comps[c].carrier->sections(Vx);
            int bdim = Sx.dim();
            const SectionSpace& Stot = B.comps[c].carrier->sections(Vtgt[c]);
            // rows of the expansion for carrier points whose canonical owner is x
            for (size_t pi = 0; pi < Sx.points.size(); ++pi) {
                int z = Sx.points[pi];
                if (B.comps[c].to_base(z) != x) continue;  // canonical owner only
                int zoff_local = Sx.offsets[pi];
                int zdim = Sx.offsets[pi + 1] - Sx.offsets[pi];
                int zoff_tot = tflat_base[c] + Stot.block_offset(z);
                for (int r = 0; r < zdim; ++r)
                    for (int s = 0; s < sdim; ++s) {
                        Rat acc = 0;
                        for (int k = 0; k < bdim; ++k) {
                            const Rat& bx = Sx.basis.at(zoff_local + r, k);
                            if (bx != 0) acc += bx * vals.at(row0 + k, s);
                        }
                        tflat.at(zoff_tot + r, s) = acc;
                    }
            }
            row0 += bdim;
        }
    }

    // express target flat blocks in the component section bases
    Mat out(tdim, sdim);
    for (size_t c = 0; c < B.comps.size(); ++c) {
        int fd = tflat_base[c + 1] - tflat_base[c];
        Mat blk(fd, sdim);
        for (int i = 0; i < fd; ++i)
            for (int j = 0; j < sdim; ++j) blk.at(i, j) = tflat.at(tflat_base[c] + i, j);
        Mat coords = express_sections(*B.comps[c].carrier, Vtgt[c], blk);
        for (int i = 0; i < coords.rows(); ++i)
            for (int j = 0; j < sdim; ++j) out.at(toff[c] + i, j) = coords.at(i, j);
    }
    return out;
}

}  // namespace

ValidationReport AltLabelledComplex::validate() const {
    for (auto& [a, ts] : terms) {
        PosetPtr Xa = base->spaces.at(a);
        auto dit = diff.find(a);
        for (int n = 0; n + 1 < len; ++n)
            for (int q = 0; q < Xa->size(); ++q)
                if (!(dit->second[n + 1].at[q] * dit->second[n].at[q]).is_zero())
                    return {false, "d.d != 0 at " + simplex_to_string(a) + ", point " +
                                       std::to_string(q) + ", degree " + std::to_string(n)};
    }
    for (auto& [key, es] : edges) {
        const auto& [a, j] = key;
        Simplex fa = face(a, j);
        const SpaceMap& r = es[0].over;
        for (int n = 0; n <= len; ++n) {
            if (n < len) {
                for (int q = 0; q < r.src->size(); ++q) {
                    Mat lhs = diff.at(a)[n].at[q] * es[n].at[q];
                    Mat rhs = es[n + 1].at[q] * diff.at(fa)[n].at[r(q)];
                    if (!(lhs + rhs).is_zero())
                        return {false, "differential not an anti-morphism along (" +
                                           simplex_to_string(a) + ";" + std::to_string(j) + ")"};
                }
            }
        }
    }
    for (const Simplex& a : base->K.simplexes()) {
        int n = simplex_length(a);
        if (n < 2) continue;
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k <= n; ++k) {
                Simplex sk = face(a, k), sj = face(a, j);
                const SpaceMap& rk = base->rho(sk, a);
                const SpaceMap& rj = base->rho(sj, a);
                for (int q = 0; q <= len; ++q) {
                    const auto& ek = edges.at({a, k})[q];
                    const auto& ej = edges.at({a, j})[q];
                    const auto& ekj = edges.at({sk, j})[q];
                    const auto& ejk = edges.at({sj, k - 1})[q];
                    for (int x = 0; x < base->spaces.at(a)->size(); ++x) {
                        Mat A = ek.at[x] * ekj.at[rk(x)];
                        Mat B = ej.at[x] * ejk.at[rj(x)];
                        if (!(A + B).is_zero())
                            return {false, "labelled rectangle D(F;" + simplex_to_string(a) + ";" +
                                               std::to_string(j) + "," + std::to_string(k) +
                                               ") does not anti-commute"};
                    }
                }
            }
    }
    return {};
}

SheafComplex AltLabelledComplex::component_complex(const Simplex& a) const {
    SheafComplex C;
    C.base = base->spaces.at(a);
    C.lo = 0;
    for (int n = 0; n <= len; ++n) C.terms.push_back(terms.at(a)[n].realize());
    for (int n = 0; n < len; ++n) {
        SheafMorphism dm{C.terms[n], C.terms[n + 1], diff.at(a)[n].at};
        C.d.push_back(std::move(dm));
    }
    return C;
}

AltLabelledComplex from_alt_module(const AltSSModule& F) {
    AltLabelledComplex C;
    C.base = F.base;
    C.len = 0;
    for (auto& [a, s] : F.sheaves) {
        C.terms[a] = {single_component(a, s)};
        C.diff[a] = {};
    }
    for (auto& [key, e] : F.edges) {
        LabelledOver lo{e.over, e.at};
        C.edges[key] = {std::move(lo)};
    }
    return C;
}

AltLabelledComplex from_alt_complex(const AltSSComplex& A) {
    AltLabelledComplex C;
    C.base = A.base;
    C.len = A.len;
    for (auto& [a, cc] : A.comp) {
        std::vector<LabelledSheaf> ts;
        std::vector<LabelledMorphism> ds;
        for (int n = 0; n <= A.len; ++n) ts.push_back(single_component(a, cc.terms[n]));
        for (int n = 0; n < A.len; ++n) ds.push_back(LabelledMorphism{cc.d[n].at});
        C.terms[a] = std::move(ts);
        C.diff[a] = std::move(ds);
    }
    for (auto& [key, es] : A.edges) {
        std::vector<LabelledOver> los;
        for (auto& e : es) los.push_back(LabelledOver{e.over, e.at});
        C.edges[key] = std::move(los);
    }
    return C;
}

namespace {

struct FiberComp {
    int fiber_degree;
    Simplex alpha;
    int inner_degree;
    int comp_begin;  // first component index inside the concatenated list
    int comp_count;
};

// layout of the output term at (gamma, total degree n)
struct TermLayout {
    std::vector<FiberComp> parts;
    LabelledSheaf sheaf;
};

}  // namespace

AltLabelledComplex sharp(const SSMapOverF& F, const AltLabelledComplex& input) {
    auto rep = F.validate();
    if (!rep.ok) throw std::invalid_argument("direct image along invalid morphism: " + rep.message);
    const SSSpace& Y = *F.tgt;
    AltLabelledComplex out;
    out.base = F.tgt;
    int fiber_max = F.src->K.dim();
    out.len = fiber_max + input.len;

    // fibers per target simplex
    std::map<Simplex, std::vector<std::vector<Simplex>>> fibers;
    for (const Simplex& g : Y.K.simplexes()) {
        std::vector<std::vector<Simplex>> fs;
        for (int i = 0; i + simplex_length(g) <= fiber_max; ++i)
            fs.push_back(fiber_simplexes(F.f, g, i));
        fibers[g] = std::move(fs);
    }

    // drop trailing degrees that carry no components anywhere
    {
        int top = 0;
        for (const Simplex& g : Y.K.simplexes())
            for (int i = 0; i < int(fibers[g].size()); ++i)
                if (!fibers[g][i].empty()) {
                    for (int j = 0; j <= input.len; ++j)
                        for (const Simplex& a : fibers[g][i])
                            if (!input.terms.at(a)[j].comps.empty()) top = std::max(top, i + j);
                }
        out.len = std::min(out.len, top);
    }

    // term layouts
    std::map<Simplex, std::vector<TermLayout>> layouts;
    for (const Simplex& g : Y.K.simplexes()) {
        PosetPtr Yg = Y.spaces.at(g);
        std::vector<TermLayout> per_degree;
        for (int n = 0; n <= out.len; ++n) {
            TermLayout L;
            L.sheaf.base = Yg;
            for (int i = 0; i < int(fibers[g].size()); ++i) {
                int j = n - i;
                if (j < 0 || j > input.len) continue;
                for (const Simplex& a : fibers[g][i]) {
                    LabelledSheaf pushed = push_labelled(F.comp.at(a), input.terms.at(a)[j]);
                    FiberComp fc{i, a, j, int(L.sheaf.comps.size()), int(pushed.comps.size())};
                    for (auto& c : pushed.comps) L.sheaf.comps.push_back(c);
                    L.parts.push_back(fc);
                }
            }
            per_degree.push_back(std::move(L));
        }
        layouts[g] = std::move(per_degree);
        std::vector<LabelledSheaf> ts;
        for (auto& L : layouts[g]) ts.push_back(L.sheaf);
        out.terms[g] = std::move(ts);
    }

    auto part_block_offsets = [&](const TermLayout& L, int q) {
        std::vector<int> off{0};
        for (auto& c : L.sheaf.comps)
            off.push_back(off.back() +
                          c.carrier->sections(c.to_base.preimage(L.sheaf.base->up_set(q))).dim());
        std::vector<int> pout;
        for (auto& p : L.parts) pout.push_back(off[p.comp_begin]);
        pout.push_back(off.back());
        return pout;
    };

    // differentials
    for (const Simplex& g : Y.K.simplexes()) {
        PosetPtr Yg = Y.spaces.at(g);
        std::vector<LabelledMorphism> ds;
        for (int n = 0; n < out.len; ++n) {
            const TermLayout& S = layouts[g][n];
            const TermLayout& T = layouts[g][n + 1];
            LabelledMorphism dm;
            for (int q = 0; q < Yg->size(); ++q) {
                auto soff = part_block_offsets(S, q);
                auto toff = part_block_offsets(T, q);
                Mat m(toff.back(), soff.back());
                for (size_t sp = 0; sp < S.parts.size(); ++sp) {
                    const FiberComp& s = S.parts[sp];
                    const LabelledSheaf& As = input.terms.at(s.alpha)[s.inner_degree];
                    const SpaceMap& mA = F.comp.at(s.alpha);
                    for (size_t tp = 0; tp < T.parts.size(); ++tp) {
                        const FiberComp& t = T.parts[tp];
                        Mat blk;
                        if (t.fiber_degree == s.fiber_degree && t.alpha == s.alpha &&
                            t.inner_degree == s.inner_degree + 1) {
                            blk = induced_block(As, mA, Yg->up_set(q),
                                                input.terms.at(t.alpha)[t.inner_degree], mA,
                                                Yg->up_set(q), identity_map(mA.src),
                                                input.diff.at(s.alpha)[s.inner_degree].at);
                        } else if (t.fiber_degree == s.fiber_degree + 1 &&
                                   t.inner_degree == s.inner_degree && strict_subset(s.alpha, t.alpha)) {
                            // find the dropped vertex position
                            int m_pos = -1;
                            for (int jj = 0; jj <= simplex_length(t.alpha); ++jj)
                                if (face(t.alpha, jj) == s.alpha) { m_pos = jj; break; }
                            if (m_pos < 0) continue;
                            const auto& e = input.edges.at({t.alpha, m_pos})[s.inner_degree];
                            blk = induced_block(As, mA, Yg->up_set(q),
                                                input.terms.at(t.alpha)[t.inner_degree],
                                                F.comp.at(t.alpha), Yg->up_set(q), e.over, e.at);
                        } else {
                            continue;
                        }
                        for (int i = 0; i < blk.rows(); ++i)
                            for (int jj = 0; jj < blk.cols(); ++jj)
                                if (blk.at(i, jj) != 0) m.at(toff[tp] + i, soff[sp] + jj) = blk.at(i, jj);
                    }
                }
                dm.at.push_back(std::move(m));
            }
            ds.push_back(std::move(dm));
        }
        // pad so diff vector has len entries even when len==0
        out.diff[g] = std::move(ds);
    }

    // edge connectors of the output
    for (const Simplex& g : Y.K.simplexes()) {
        int ng = simplex_length(g);
        if (ng < 1) continue;
        PosetPtr Yg = Y.spaces.at(g);
        for (int j = 0; j <= ng; ++j) {
            Simplex fg = face(g, j);
            SpaceMap rp = Y.rho(fg, g);
            std::vector<LabelledOver> los;
            for (int n = 0; n <= out.len; ++n) {
                const TermLayout& S = layouts[fg][n];
                const TermLayout& T = layouts[g][n];
                LabelledOver lo{rp, {}};
                for (int q = 0; q < Yg->size(); ++q) {
                    auto soff = part_block_offsets(S, rp(q));
                    auto toff = part_block_offsets(T, q);
                    Mat m(toff.back(), soff.back());
                    for (size_t sp = 0; sp < S.parts.size(); ++sp) {
                        const FiberComp& s = S.parts[sp];
                        for (size_t tp = 0; tp < T.parts.size(); ++tp) {
                            const FiberComp& t = T.parts[tp];
                            if (t.fiber_degree != s.fiber_degree || t.inner_degree != s.inner_degree)
                                continue;
                            if (!strict_subset(s.alpha, t.alpha)) continue;
                            if (simplex_length(t.alpha) != simplex_length(s.alpha) + 1) continue;
                            int m_pos = -1;
                            for (int jj = 0; jj <= simplex_length(t.alpha); ++jj)
                                if (face(t.alpha, jj) == s.alpha) { m_pos = jj; break; }
                            if (m_pos < 0) continue;
                            const auto& e = input.edges.at({t.alpha, m_pos})[s.inner_degree];
                            Mat blk = induced_block(input.terms.at(s.alpha)[s.inner_degree],
                                                    F.comp.at(s.alpha), rp.tgt->up_set(rp(q)),
                                                    input.terms.at(t.alpha)[t.inner_degree],
                                                    F.comp.at(t.alpha), Yg->up_set(q), e.over, e.at);
                            for (int i = 0; i < blk.rows(); ++i)
                                for (int jj = 0; jj < blk.cols(); ++jj)
                                    if (blk.at(i, jj) != 0)
                                        m.at(toff[tp] + i, soff[sp] + jj) = blk.at(i, jj);
                        }
                    }
                    lo.at.push_back(std::move(m));
                }
                los.push_back(std::move(lo));
            }
            out.edges[{g, j}] = std::move(los);
        }
    }
    return out;
}

AltLabelledComplex sharp_module(const SSMapOverF& F, const AltSSModule& M) {
    return sharp(F, from_alt_module(M));
}

namespace {

struct FlattenedTerm {
    std::vector<int> order;  // permutation: sorted position -> stored comp index
    const LabelledSheaf* sheaf;
};

FlattenedTerm flatten(const LabelledSheaf& T) {
    FlattenedTerm f;
    f.sheaf = &T;
    f.order.resize(T.comps.size());
    for (size_t i = 0; i < T.comps.size(); ++i) f.order[i] = int(i);
    std::stable_sort(f.order.begin(), f.order.end(),
                     [&](int a, int b) { return T.comps[a].label < T.comps[b].label; });
    return f;
}

// permutation matrix mapping stored coordinates to sorted coordinates at q
Mat perm_matrix(const FlattenedTerm& f, int q) {
    const LabelledSheaf& T = *f.sheaf;
    std::vector<int> dims = T.comp_dims(q);
    std::vector<int> off(dims.size() + 1, 0);
    for (size_t i = 0; i < dims.size(); ++i) off[i + 1] = off[i] + dims[i];
    Mat P(off.back(), off.back());
    int row = 0;
    for (int idx : f.order) {
        for (int k = 0; k < dims[idx]; ++k) P.at(row++, off[idx] + k) = 1;
    }
    return P;
}

bool comps_match(const LabelledSheaf& A, const FlattenedTerm& fa, const LabelledSheaf& B,
                 const FlattenedTerm& fb, std::string* why) {
    if (A.comps.size() != B.comps.size()) {
        if (why) *why = "component counts differ";
        return false;
    }
    for (size_t i = 0; i < A.comps.size(); ++i) {
        const Component& ca = A.comps[fa.order[i]];
        const Component& cb = B.comps[fb.order[i]];
        if (ca.label != cb.label) {
            if (why) *why = "labels differ: " + simplex_to_string(ca.label) + " vs " +
                            simplex_to_string(cb.label);
            return false;
        }
        if (ca.carrier != cb.carrier) {
            if (why) *why = "carriers differ at " + simplex_to_string(ca.label);
            return false;
        }
        if (ca.to_base.f != cb.to_base.f || ca.to_base.src != cb.to_base.src) {
            if (why) *why = "pushed maps differ at " + simplex_to_string(ca.label);
            return false;
        }
    }
    return true;
}

}  // namespace

bool labelled_complex_equal_after_flatten(const AltLabelledComplex& A, const AltLabelledComplex& B,
                                          std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    if (A.base != B.base) return fail("different target systems");
    if (A.len != B.len) return fail("different lengths");
    for (auto& [g, ta] : A.terms) {
        auto itb = B.terms.find(g);
        if (itb == B.terms.end()) return fail("missing simplex " + simplex_to_string(g));
        PosetPtr Yg = A.base->spaces.at(g);
        for (int n = 0; n <= A.len; ++n) {
            FlattenedTerm fa = flatten(ta[n]);
            FlattenedTerm fb = flatten(itb->second[n]);
            std::string m;
            if (!comps_match(ta[n], fa, itb->second[n], fb, &m))
                return fail("terms at " + simplex_to_string(g) + " degree " + std::to_string(n) +
                            ": " + m);
            if (n < A.len) {
                for (int q = 0; q < Yg->size(); ++q) {
                    Mat Pa0 = perm_matrix(fa, q), Pb0 = perm_matrix(fb, q);
                    FlattenedTerm ga = flatten(ta[n + 1]), gb = flatten(itb->second[n + 1]);
                    Mat Pa1 = perm_matrix(ga, q), Pb1 = perm_matrix(gb, q);
                    Mat da = Pa1 * A.diff.at(g)[n].at[q] * Pa0.transpose();
                    Mat db = Pb1 * B.diff.at(g)[n].at[q] * Pb0.transpose();
                    if (da != db)
                        return fail("differential mismatch at " + simplex_to_string(g) + " degree " +
                                    std::to_string(n) + " point " + std::to_string(q));
                }
            }
        }
    }
    for (auto& [key, ea] : A.edges) {
        auto itb = B.edges.find(key);
        if (itb == B.edges.end())
            return fail("missing edge family at (" + simplex_to_string(key.first) + ";" +
                        std::to_string(key.second) + ")");
        const auto& [g, j] = key;
        Simplex fg = face(g, j);
        PosetPtr Yg = A.base->spaces.at(g);
        for (int n = 0; n <= A.len; ++n) {
            FlattenedTerm sa = flatten(A.terms.at(fg)[n]);
            FlattenedTerm sb = flatten(B.terms.at(fg)[n]);
            FlattenedTerm taf = flatten(A.terms.at(g)[n]);
            FlattenedTerm tbf = flatten(B.terms.at(g)[n]);
            const SpaceMap& rp = ea[n].over;
            for (int q = 0; q < Yg->size(); ++q) {
                Mat Pa = perm_matrix(taf, q) * ea[n].at[q] * perm_matrix(sa, rp(q)).transpose();
                Mat Pb = perm_matrix(tbf, q) * itb->second[n].at[q] * perm_matrix(sb, rp(q)).transpose();
                if (Pa != Pb)
                    return fail("edge mismatch at (" + simplex_to_string(g) + ";" +
                                std::to_string(j) + ") degree " + std::to_string(n));
            }
        }
    }
    return true;
}

StarPushforward star_pushforward(const SSMapOverF& F, const SSModule& M) {
    StarPushforward out;
    out.sharp_of_input = sharp_module(F, alt(M));
    const AltLabelledComplex& S = out.sharp_of_input;
    const SSSpace& Y = *F.tgt;
    out.module.base = F.tgt;
    std::map<Simplex, std::vector<Mat>> kernels;
    for (const Simplex& g : Y.K.simplexes()) {
        PosetPtr Yg = Y.spaces.at(g);
        std::vector<Mat> emb;
        std::vector<int> stalks(Yg->size());
        for (int q = 0; q < Yg->size(); ++q) {
            Mat d0 = S.len >= 1 ? S.diff.at(g)[0].at[q]
                                : Mat::zero(0, S.terms.at(g)[0].stalk_dim(q));
            Mat K = kernel_basis(d0);
            stalks[q] = K.cols();
            emb.push_back(std::move(K));
        }
        // restrictions of the kernel subsheaf
        SheafPtr deg0 = S.terms.at(g)[0].realize();
        std::map<std::pair<int, int>, Mat> res;
        for (int q = 0; q < Yg->size(); ++q)
            for (int r = 0; r < Yg->size(); ++r) {
                if (!Yg->lt(q, r)) continue;
                Mat moved = deg0->res(q, r) * emb[q];
                res[{q, r}] = express_in_basis(emb[r], moved);
            }
        out.module.sheaves[g] = SheafRep::from_all_pairs(Yg, std::move(stalks), std::move(res));
        kernels[g] = std::move(emb);
    }
    // connectors: restrict the unscaled edge families to the kernels, then
    // complete by composition.
    std::map<std::pair<Simplex, Simplex>, StalkwiseOver> plain;
    for (auto& [key, es] : S.edges) {
        const auto& [g, j] = key;
        Simplex fg = face(g, j);
        SpaceMap rp = es[0].over;
        StalkwiseOver c{rp, out.module.sheaves.at(fg), out.module.sheaves.at(g), {}};
        for (int q = 0; q < rp.src->size(); ++q) {
            Mat moved = es[0].at[q] * kernels[fg][rp(q)];
            Mat coords = express_in_basis(kernels[g][q], moved);
            if (j % 2 == 1) coords = -coords;  // undo the alternating sign
            c.at.push_back(std::move(coords));
        }
        plain.emplace(std::make_pair(fg, g), std::move(c));
    }
    for (const Simplex& b : Y.K.simplexes())
        for (const Simplex& a : Y.K.simplexes()) {
            if (!strict_subset(a, b)) continue;
            Simplex cur = b;
            StalkwiseOver acc = identity_over(out.module.sheaves.at(b));
            while (cur != a) {
                int pos = -1;
                for (int i = simplex_length(cur); i >= 0; --i)
                    if (!std::binary_search(a.begin(), a.end(), cur[i])) { pos = i; break; }
                Simplex nxt = face(cur, pos);
                acc = compose_over(acc, plain.at({nxt, cur}));
                cur = nxt;
            }
            out.module.conn.emplace(std::make_pair(a, b), std::move(acc));
        }
    for (const Simplex& g : Y.K.simplexes()) out.embedding[g] = kernels[g];
    return out;
}

namespace {

// expand a star-pushforward stalk vector to the flat carrier values of the
// realized degree-0 term, producing columns comparable across routes.
Mat expand_star_to_carrier_flat(const StarPushforward& SP, const Simplex& g, int q,
                                const std::map<std::pair<Simplex, int>, std::pair<int, int>>& slot,
                                int total_rows) {
    const LabelledSheaf& T = SP.sharp_of_input.terms.at(g)[0];
    PosetPtr Yg = SP.sharp_of_input.base->spaces.at(g);
    const Mat& K = SP.embedding.at(g)[q];
    Mat out(total_rows, K.cols());
    std::vector<int> off{0};
    std::vector<const SectionSpace*> Ss;
    for (auto& c : T.comps) {
        const SectionSpace& S = c.carrier->sections(c.to_base.preimage(Yg->up_set(q)));
        Ss.push_back(&S);
        off.push_back(off.back() + S.dim());
    }
    for (int col = 0; col < K.cols(); ++col) {
        for (size_t ci = 0; ci < T.comps.size(); ++ci) {
            const SectionSpace& S = *Ss[ci];
            // coords block of this component
            Mat cc(S.dim(), 1);
            for (int i = 0; i < S.dim(); ++i) cc.at(i, 0) = K.at(off[ci] + i, col);
            Mat flat = S.basis * cc;
            for (size_t pi = 0; pi < S.points.size(); ++pi) {
                int z = S.points[pi];
                auto it = slot.find({T.comps[ci].label, z});
                if (it == slot.end()) throw std::logic_error("carrier slot missing");
                for (int r = 0; r < it->second.second; ++r)
                    out.at(it->second.first + r, col) = flat.at(S.offsets[pi] + r, 0);
            }
        }
    }
    return out;
}

}  // namespace

CompositionCheck check_composition_law(const SSMapOverF& F, const SSMapOverF& G, const SSModule& M) {
    CompositionCheck out;
    SSMapOverF GF = compose(G, F);
    AltSSModule A = alt(M);
    AltLabelledComplex lhs = sharp(GF, from_alt_module(A));
    AltLabelledComplex mid = sharp(F, from_alt_module(A));
    AltLabelledComplex rhs = sharp(G, mid);
    std::string why;
    out.sharp_equal = labelled_complex_equal_after_flatten(lhs, rhs, &why);
    if (!out.sharp_equal) out.diff_report = why;

    // degree-0 cocycles along both routes, compared in the common carrier-flat
    // realization.
    StarPushforward SL = star_pushforward(GF, M);
    StarPushforward SF = star_pushforward(F, M);
    StarPushforward SR = star_pushforward(G, SF.module);
    out.star_equal = true;
    const SSSpace& Z = *G.tgt;
    for (const Simplex& g : Z.K.simplexes()) {
        PosetPtr Zg = Z.spaces.at(g);
        for (int q = 0; q < Zg->size() && out.star_equal; ++q) {
            // canonical carrier layout from the LHS term
            const LabelledSheaf& TL = SL.sharp_of_input.terms.at(g)[0];
            std::vector<int> order(TL.comps.size());
            for (size_t i = 0; i < order.size(); ++i) order[i] = int(i);
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                return TL.comps[a].label < TL.comps[b].label;
            });
            std::map<std::pair<Simplex, int>, std::pair<int, int>> slot;
            int rows = 0;
            for (int idx : order) {
                const Component& c = TL.comps[idx];
                for (int z : c.to_base.preimage(Zg->up_set(q))) {
                    slot[{c.label, z}] = {rows, c.carrier->stalk_dim(z)};
                    rows += c.carrier->stalk_dim(z);
                }
            }
            Mat L = expand_star_to_carrier_flat(SL, g, q, slot, rows);

            // RHS: expand kernel of G-star over the F-star module, then expand
            // each F-star value through its own embedding.
            const LabelledSheaf& TR = SR.sharp_of_input.terms.at(g)[0];
            const Mat& KR = SR.embedding.at(g)[q];
            Mat R(rows, KR.cols());
            std::vector<int> roff{0};
            std::vector<const SectionSpace*> Ss;
            for (auto& c : TR.comps) {
                const SectionSpace& S = c.carrier->sections(c.to_base.preimage(Zg->up_set(q)));
                Ss.push_back(&S);
                roff.push_back(roff.back() + S.dim());
            }
            for (int col = 0; col < KR.cols(); ++col) {
                for (size_t ci = 0; ci < TR.comps.size(); ++ci) {
                    const Simplex& beta = TR.comps[ci].label;  // simplex of the middle system
                    const SectionSpace& S = *Ss[ci];
                    Mat cc(S.dim(), 1);
                    for (int i = 0; i < S.dim(); ++i) cc.at(i, 0) = KR.at(roff[ci] + i, col);
                    Mat flat = S.basis * cc;  // values in F-star stalks over y
                    const LabelledSheaf& TB = SF.sharp_of_input.terms.at(beta)[0];
                    PosetPtr Yb = SF.sharp_of_input.base->spaces.at(beta);
                    for (size_t pi = 0; pi < S.points.size(); ++pi) {
                        int y = S.points[pi];
                        int d = S.offsets[pi + 1] - S.offsets[pi];
                        Mat v(d, 1);
                        for (int i = 0; i < d; ++i) v.at(i, 0) = flat.at(S.offsets[pi] + i, 0);
                        Mat realized = SF.embedding.at(beta)[y] * v;
                        // expand realized coords to carrier values at y
                        std::vector<int> boff{0};
                        for (auto& c2 : TB.comps) {
                            const SectionSpace& S2 =
                                c2.carrier->sections(c2.to_base.preimage(Yb->up_set(y)));
                            Mat c2c(S2.dim(), 1);
                            for (int i = 0; i < S2.dim(); ++i)
                                c2c.at(i, 0) = realized.at(boff.back() + i, 0);
                            boff.push_back(boff.back() + S2.dim());
                            Mat fl2 = S2.basis * c2c;
                            for (size_t p2 = 0; p2 < S2.points.size(); ++p2) {
                                int z = S2.points[p2];
                                auto it = slot.find({c2.label, z});
                                if (it == slot.end()) continue;
                                for (int r = 0; r < it->second.second; ++r)
                                    R.at(it->second.first + r, col) = fl2.at(S2.offsets[p2] + r, 0);
                            }
                        }
                    }
                }
            }
            if (!same_column_space(L, R)) {
                out.star_equal = false;
                out.diff_report += std::string(out.diff_report.empty() ? "" : "; ") +
                                   "star mismatch at " + simplex_to_string(g) + " point " +
                                   std::to_string(q);
            }
        }
    }
    return out;
}

SheafMorphism pushed_connector(const StalkwiseOver& c, const SpaceMap& m_down) {
    SpaceMap m_up = compose(m_down, c.over);
    SheafPtr src = pushforward(m_down, c.down);
    SheafPtr tgt = pushforward(m_up, c.up);
    SheafMorphism out{src, tgt, {}};
    PosetPtr Y = m_down.tgt;
    for (int q = 0; q < Y->size(); ++q) {
        std::vector<int> Wd = m_down.preimage(Y->up_set(q));
        std::vector<int> Wu = m_up.preimage(Y->up_set(q));
        const SectionSpace& Sd = c.down->sections(Wd);
        const SectionSpace& Su = c.up->sections(Wu);
        Mat flat(Su.flat_dim(), Sd.dim());
        for (int col = 0; col < Sd.dim(); ++col)
            for (size_t pi = 0; pi < Su.points.size(); ++pi) {
                int x = Su.points[pi];
                int ax = c.over(x);
                int aoff = Sd.block_offset(ax);
                const Mat& u = c.at[x];
                for (int r = 0; r < u.rows(); ++r) {
                    Rat acc = 0;
                    for (int k = 0; k < u.cols(); ++k)
                        if (u.at(r, k) != 0) acc += u.at(r, k) * Sd.basis.at(aoff + k, col);
                    flat.at(Su.offsets[pi] + r, col) = acc;
                }
            }
        out.at.push_back(express_sections(*c.up, Wu, flat));
    }
    return out;
}

namespace {

// G_g -> rho'_* G_d induced by an adjoint connector, as matrices per point.
SheafMorphism stalkwise_to_pushforward(const StalkwiseOver& c) {
    SpaceMap rp = c.over;
    SheafPtr tgt = pushforward(rp, c.up);
    SheafMorphism out{c.down, tgt, {}};
    PosetPtr Y = rp.tgt;
    for (int q = 0; q < Y->size(); ++q) {
        std::vector<int> W = rp.preimage(Y->up_set(q));
        const SectionSpace& S = c.up->sections(W);
        Mat flat(S.flat_dim(), c.down->stalk_dim(q));
        for (int col = 0; col < c.down->stalk_dim(q); ++col)
            for (size_t pi = 0; pi < S.points.size(); ++pi) {
                int y = S.points[pi];
                Mat r = c.down->res(q, rp(y));
                std::vector<Rat> v(r.rows());
                for (int i = 0; i < r.rows(); ++i) v[i] = r.at(i, col);
                std::vector<Rat> w = c.at[y].apply(v);
                for (size_t i = 0; i < w.size(); ++i) flat.at(S.offsets[pi] + int(i), col) = w[i];
            }
        out.at.push_back(express_sections(*c.up, W, flat));
    }
    return out;
}

}  // namespace

AssembleResult assemble_to_sharp(const SSMapOverF& F, const SSModule& M, const SSModule& G,
                                 const std::map<std::pair<Simplex, Simplex>, SheafMorphism>& u) {
    AssembleResult out;
    const SimplicialMorphism& f = F.f;
    // required index set: gamma in target, alpha in I(gamma, 0)
    for (const Simplex& g : F.tgt->K.simplexes())
        for (const Simplex& a : fiber_simplexes(f, g, 0))
            if (!u.count({g, a})) {
                out.message = "missing component u(" + simplex_to_string(g) + "," +
                              simplex_to_string(a) + ")";
                return out;
            }
    // condition 1
    for (const Simplex& g : F.tgt->K.simplexes()) {
        for (const Simplex& b : fiber_simplexes(f, g, 1)) {
            std::vector<Simplex> faces0;
            for (int j = 0; j <= simplex_length(b); ++j) {
                Simplex fa = face(b, j);
                if (f.apply(fa) == g && simplex_length(fa) == simplex_length(g))
                    faces0.push_back(fa);
            }
            if (faces0.size() != 2) continue;
            const Simplex &a1 = faces0[0], &a2 = faces0[1];
            SheafMorphism r1 = compose(pushed_connector(M.conn.at({a1, b}), F.comp.at(a1)),
                                       u.at({g, a1}));
            SheafMorphism r2 = compose(pushed_connector(M.conn.at({a2, b}), F.comp.at(a2)),
                                       u.at({g, a2}));
            for (size_t q = 0; q < r1.at.size(); ++q)
                if (!(r1.at[q] - r2.at[q]).is_zero()) {
                    out.message = "square condition fails at (" + simplex_to_string(g) + "," +
                                  simplex_to_string(b) + ") with faces " + simplex_to_string(a1) +
                                  ", " + simplex_to_string(a2);
                    return out;
                }
        }
    }
    // condition 2
    for (const Simplex& d : F.tgt->K.simplexes())
        for (const Simplex& g : F.tgt->K.simplexes()) {
            if (!strict_subset(g, d)) continue;
            for (const Simplex& b : fiber_simplexes(f, d, 0))
                for (const Simplex& a : fiber_simplexes(f, g, 0)) {
                    if (!strict_subset(a, b)) continue;
                    SheafMorphism lhs = compose(pushed_connector(M.conn.at({a, b}), F.comp.at(a)),
                                                u.at({g, a}));
                    SheafMorphism rhs = compose(pushforward_morphism(F.tgt->rho(g, d), u.at({d, b})),
                                                stalkwise_to_pushforward(G.conn.at({g, d})));
                    for (size_t q = 0; q < lhs.at.size(); ++q)
                        if (!(lhs.at[q] - rhs.at[q]).is_zero()) {
                            out.message = "pair condition fails at (" + simplex_to_string(g) + "," +
                                          simplex_to_string(d) + "," + simplex_to_string(a) + "," +
                                          simplex_to_string(b) + ")";
                            return out;
                        }
                }
        }
    out.ok = true;
    for (const Simplex& g : F.tgt->K.simplexes()) {
        PosetPtr Yg = F.tgt->spaces.at(g);
        std::vector<Mat> per_point;
        auto fibers0 = fiber_simplexes(f, g, 0);
        for (int q = 0; q < Yg->size(); ++q) {
            Mat stack(0, G.sheaves.at(g)->stalk_dim(q));
            for (const Simplex& a : fibers0) stack = stack.vstack(u.at({g, a}).at[q]);
            per_point.push_back(std::move(stack));
        }
        out.into_degree0[g] = std::move(per_point);
    }
    return out;
}

std::map<Simplex, SheafMorphism> transpose_to_pullback(
    const SSMapOverF& F, const SSModule& M, const SSModule& G,
    const std::map<std::pair<Simplex, Simplex>, SheafMorphism>& u) {
    std::map<Simplex, SheafMorphism> v;
    for (auto& [key, uc] : u) {
        const auto& [g, a] = key;
        SheafPtr src = inverse_image(F.comp.at(a), G.sheaves.at(g));
        SheafMorphism va{src, M.sheaves.at(a), {}};
        PosetPtr Xa = F.src->spaces.at(a);
        const SpaceMap& Fa = F.comp.at(a);
        for (int x = 0; x < Xa->size(); ++x) {
            int q = Fa(x);
            std::vector<int> W = Fa.preimage(Fa.tgt->up_set(q));
            const SectionSpace& S = M.sheaves.at(a)->sections(W);
            va.at.push_back(S.evaluation_at(x) * uc.at[q]);
        }
        v.emplace(a, std::move(va));
    }
    return v;
}

AssembleFromPullbackResult assemble_from_pullback(const SSMapOverF& F, const SSModule& M,
                                                  const SSModule& G,
                                                  const std::map<Simplex, SheafMorphism>& v) {
    AssembleFromPullbackResult out;
    const SimplicialMorphism& f = F.f;
    auto in_I0 = [&](const Simplex& a) {
        return simplex_length(f.apply(a)) == simplex_length(a);
    };
    for (const Simplex& a : F.src->K.simplexes())
        if (in_I0(a) && !v.count(a)) {
            out.message = "missing component v(" + simplex_to_string(a) + ")";
            return out;
        }
    // condition 1: two degree-zero faces over the same target simplex
    for (const Simplex& g : F.tgt->K.simplexes())
        for (const Simplex& b : fiber_simplexes(f, g, 1)) {
            std::vector<Simplex> faces0;
            for (int j = 0; j <= simplex_length(b); ++j) {
                Simplex fa = face(b, j);
                if (f.apply(fa) == g && simplex_length(fa) == simplex_length(g))
                    faces0.push_back(fa);
            }
            if (faces0.size() != 2) continue;
            const Simplex &a1 = faces0[0], &a2 = faces0[1];
            const SpaceMap& r1 = F.src->rho(a1, b);
            const SpaceMap& r2 = F.src->rho(a2, b);
            PosetPtr Xb = F.src->spaces.at(b);
            for (int x = 0; x < Xb->size(); ++x) {
                Mat lhs = M.conn.at({a1, b}).at[x] * v.at(a1).at[r1(x)];
                Mat rhs = M.conn.at({a2, b}).at[x] * v.at(a2).at[r2(x)];
                if (!(lhs - rhs).is_zero()) {
                    out.message = "square condition fails at (" + simplex_to_string(g) + "," +
                                  simplex_to_string(b) + ")";
                    return out;
                }
            }
        }
    // condition 2
    for (const Simplex& b : F.src->K.simplexes()) {
        if (!in_I0(b)) continue;
        for (const Simplex& a : F.src->K.simplexes()) {
            if (!in_I0(a) || !strict_subset(a, b)) continue;
            Simplex g = f.apply(a), d = f.apply(b);
            if (g == d) continue;
            const SpaceMap& r = F.src->rho(a, b);
            const SpaceMap& Fb = F.comp.at(b);
            PosetPtr Xb = F.src->spaces.at(b);
            for (int x = 0; x < Xb->size(); ++x) {
                Mat lhs = M.conn.at({a, b}).at[x] * v.at(a).at[r(x)];
                Mat rhs = v.at(b).at[x] * G.conn.at({g, d}).at[Fb(x)];
                if (!(lhs - rhs).is_zero()) {
                    out.message = "pair condition fails at (" + simplex_to_string(g) + "," +
                                  simplex_to_string(d) + "," + simplex_to_string(a) + "," +
                                  simplex_to_string(b) + ")";
                    return out;
                }
            }
        }
    }
    out.ok = true;
    // complete to all simplexes through a canonical degree-zero face
    for (const Simplex& a : F.src->K.simplexes()) {
        if (in_I0(a)) {
            out.components.emplace(a, v.at(a));
            continue;
        }
        // least preimage vertex per image vertex
        Simplex a0;
        std::set<int> used;
        for (int j : f.apply(a))
            for (int i : a)
                if (f.apply_vertex(i) == j) { a0.push_back(i); break; }
        std::sort(a0.begin(), a0.end());
        const SpaceMap& r = F.src->rho(a0, a);
        SheafPtr src = inverse_image(F.comp.at(a), G.sheaves.at(f.apply(a)));
        SheafMorphism va{src, M.sheaves.at(a), {}};
        for (int x = 0; x < F.src->spaces.at(a)->size(); ++x)
            va.at.push_back(M.conn.at({a0, a}).at[x] * v.at(a0).at[r(x)]);
        out.components.emplace(a, std::move(va));
    }
    return out;
}

}  // namespace dolbres
