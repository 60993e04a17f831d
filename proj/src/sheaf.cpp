#include "dolbres/sheaf.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace dolbres {

namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::string pair_str(int x, int y) {
    return "(" + std::to_string(x) + " <= " + std::to_string(y) + ")";
}

}  // namespace

int SectionSpace::block_offset(int point) const {
    for (size_t i = 0; i < points.size(); ++i)
        if (points[i] == point) return offsets[i];
    throw std::invalid_argument("point not in section domain");
}

int SectionSpace::block_dim(int point) const {
    for (size_t i = 0; i < points.size(); ++i)
        if (points[i] == point) return offsets[i + 1] - offsets[i];
    throw std::invalid_argument("point not in section domain");
}

Mat SectionSpace::evaluation_at(int point) const {
    int off = block_offset(point), d = block_dim(point);
    std::vector<int> rows(d);
    for (int i = 0; i < d; ++i) rows[i] = off + i;
    return basis.select_rows(rows);
}

SheafPtr SheafRep::from_all_pairs(PosetPtr base, std::vector<int> stalks,
                                  std::map<std::pair<int, int>, Mat> res) {
    auto F = std::make_shared<SheafRep>();
    F->base_ = base;
    F->stalks_ = std::move(stalks);
    if (int(F->stalks_.size()) != base->size())
        throw std::invalid_argument("one stalk dimension per point required");
    for (int x = 0; x < base->size(); ++x)
        for (int y = 0; y < base->size(); ++y) {
            if (!base->lt(x, y)) continue;
            auto it = res.find({x, y});
            if (it == res.end()) {
                F->res_[{x, y}] = Mat::zero(F->stalks_[y], F->stalks_[x]);
            } else {
                if (it->second.rows() != F->stalks_[y] || it->second.cols() != F->stalks_[x])
                    throw std::invalid_argument("restriction matrix shape mismatch at " + pair_str(x, y));
                F->res_[{x, y}] = it->second;
            }
        }
    return F;
}

SheafPtr SheafRep::from_covering_pairs(PosetPtr base, std::vector<int> stalks,
                                       const std::map<std::pair<int, int>, Mat>& res) {
    // Complete along covering chains; validate_sheaf detects inconsistencies.
    std::map<std::pair<int, int>, Mat> full;
    auto covers = base->covering_pairs_in(base->all_points());
    for (auto& [x, y] : covers) {
        auto it = res.find({x, y});
        if (it == res.end())
            full[{x, y}] = Mat::zero(stalks[y], stalks[x]);
        else
            full[{x, y}] = it->second;
    }
    // Breadth first completion by composing along covering steps.
    bool changed = true;
    while (changed) {
        changed = false;
        for (int x = 0; x < base->size(); ++x)
            for (int y = 0; y < base->size(); ++y) {
                if (!base->lt(x, y) || full.count({x, y})) continue;
                for (int z = 0; z < base->size(); ++z) {
                    if (base->lt(x, z) && base->lt(z, y) && full.count({x, z}) && full.count({z, y})) {
                        full[{x, y}] = full[{z, y}] * full[{x, z}];
                        changed = true;
                        break;
                    }
                }
            }
    }
    auto F = from_all_pairs(base, std::move(stalks), std::move(full));
    auto rep = validate_sheaf(*F);
    if (!rep.ok) throw std::invalid_argument("inconsistent restriction data: " + rep.message);
    return F;
}

Mat SheafRep::res(int x, int y) const {
    if (x == y) return Mat::identity(stalks_[x]);
    if (!base_->lt(x, y)) throw std::invalid_argument("res requested for incomparable pair");
    return res_.at({x, y});
}

bool SheafRep::data_equal(const SheafRep& o) const {
    return base_ == o.base_ && stalks_ == o.stalks_ && res_ == o.res_;
}

ValidationReport validate_sheaf(const SheafRep& F) {
    auto X = F.base();
    for (int x = 0; x < X->size(); ++x)
        for (int y = 0; y < X->size(); ++y) {
            if (!X->lt(x, y)) continue;
            for (int z = 0; z < X->size(); ++z) {
                if (!X->lt(y, z)) continue;
                if (!(F.res(y, z) * F.res(x, y) - F.res(x, z)).is_zero()) {
                    ValidationReport r;
                    r.ok = false;
                    r.message = "restriction composition mismatch on " + std::to_string(x) + " <= " +
                                std::to_string(y) + " <= " + std::to_string(z);
                    return r;
                }
            }
        }
    return {};
}

const SectionSpace& SheafRep::sections(const std::vector<int>& U_raw) const {
    std::vector<int> U = sorted_unique(U_raw);
    auto it = section_cache_.find(U);
    if (it != section_cache_.end()) return it->second;
    if (!base_->is_up_closed(U)) throw std::invalid_argument("sections requested over a non-open set");

    SectionSpace S;
    S.points = U;
    S.offsets.assign(U.size() + 1, 0);
    for (size_t i = 0; i < U.size(); ++i) S.offsets[i + 1] = S.offsets[i] + stalks_[U[i]];
    int flat = S.offsets.back();

    auto mn = base_->minimum_of(U);
    if (mn) {
        int m = *mn;
        S.basis = Mat(flat, stalks_[m]);
        for (size_t i = 0; i < U.size(); ++i) {
            Mat r = res(m, U[i]);
            for (int p = 0; p < r.rows(); ++p)
                for (int q = 0; q < r.cols(); ++q) S.basis.at(S.offsets[i] + p, q) = r.at(p, q);
        }
    } else {
        auto pairs = base_->covering_pairs_in(U);
        int crows = 0;
        for (auto& [x, y] : pairs) crows += stalks_[y];
        Mat C(crows, flat);
        int row = 0;
        auto off_of = [&](int pt) {
            for (size_t i = 0; i < U.size(); ++i)
                if (U[i] == pt) return S.offsets[i];
            throw std::logic_error("point lookup");
        };
        for (auto& [x, y] : pairs) {
            Mat r = res(x, y);
            int ox = off_of(x), oy = off_of(y);
            for (int p = 0; p < r.rows(); ++p) {
                for (int q = 0; q < r.cols(); ++q) C.at(row + p, ox + q) = r.at(p, q);
                C.at(row + p, oy + p) = -1;
            }
            row += r.rows();
        }
        S.basis = kernel_basis(C);
    }
    return section_cache_.emplace(U, std::move(S)).first->second;
}

Mat SheafRep::section_restriction(const std::vector<int>& U_raw, const std::vector<int>& V_raw) const {
    std::vector<int> U = sorted_unique(U_raw), V = sorted_unique(V_raw);
    const SectionSpace& SU = sections(U);
    const SectionSpace& SV = sections(V);
    // rows of SU.basis corresponding to the points of V
    std::vector<int> rows;
    for (int v : V) {
        int off = SU.block_offset(v), d = SU.block_dim(v);
        for (int i = 0; i < d; ++i) rows.push_back(off + i);
    }
    Mat restricted = SU.basis.select_rows(rows);
    auto mn = base_->minimum_of(V);
    if (mn) {
        std::vector<int> mrows;
        int off = SV.block_offset(*mn), d = SV.block_dim(*mn);
        for (int i = 0; i < d; ++i) mrows.push_back(off + i);
        // relative to V-flat coordinates
        std::vector<int> rel;
        for (int r : mrows) rel.push_back(r);
        return restricted.select_rows(rel);
    }
    return express_in_basis(SV.basis, restricted);
}

bool SheafRep::is_flasque() const {
    // Enough to check surjectivity of Gamma(U_x) -> Gamma(V) for opens V
    // inside minimal neighbourhoods; general pairs follow by pointwise
    // extension.  V runs over up-closures of subsets of U_x.
    for (int x = 0; x < base_->size(); ++x) {
        std::vector<int> Ux = base_->up_set(x);
        std::vector<std::vector<int>> opens;
        int n = int(Ux.size());
        if (n > 16) throw std::runtime_error("is_flasque: neighbourhood too large to enumerate");
        std::set<std::vector<int>> seen;
        for (int mask = 0; mask < (1 << n); ++mask) {
            std::vector<int> gen;
            for (int i = 0; i < n; ++i)
                if (mask & (1 << i)) gen.push_back(Ux[i]);
            auto V = base_->up_closure(gen);
            if (V.empty() || !seen.insert(V).second) continue;
            Mat r = section_restriction(Ux, V);
            if (rank(r) != sections(V).dim()) return false;
        }
    }
    return true;
}

SheafPtr constant_sheaf(PosetPtr X, int k) {
    std::map<std::pair<int, int>, Mat> res;
    for (int x = 0; x < X->size(); ++x)
        for (int y = 0; y < X->size(); ++y)
            if (X->lt(x, y)) res[{x, y}] = Mat::identity(k);
    return SheafRep::from_all_pairs(X, std::vector<int>(X->size(), k), std::move(res));
}

SheafPtr zero_sheaf(PosetPtr X) {
    return SheafRep::from_all_pairs(X, std::vector<int>(X->size(), 0), {});
}

SheafPtr open_indicator(PosetPtr X, const std::vector<int>& U_raw, int k) {
    auto U = sorted_unique(U_raw);
    if (!X->is_up_closed(U)) throw std::invalid_argument("indicator set must be open");
    std::set<int> in(U.begin(), U.end());
    std::vector<int> stalks(X->size(), 0);
    for (int x : U) stalks[x] = k;
    std::map<std::pair<int, int>, Mat> res;
    for (int x : U)
        for (int y : U)
            if (X->lt(x, y)) res[{x, y}] = Mat::identity(k);
    return SheafRep::from_all_pairs(X, std::move(stalks), std::move(res));
}

SheafPtr downset_skyscraper(PosetPtr X, int z) {
    std::vector<int> stalks(X->size(), 0);
    for (int x = 0; x < X->size(); ++x)
        if (X->leq(x, z)) stalks[x] = 1;
    std::map<std::pair<int, int>, Mat> res;
    for (int x = 0; x < X->size(); ++x)
        for (int y = 0; y < X->size(); ++y)
            if (X->lt(x, y) && X->leq(x, z) && X->leq(y, z)) res[{x, y}] = Mat::identity(1);
    return SheafRep::from_all_pairs(X, std::move(stalks), std::move(res));
}

SheafPtr direct_sum(SheafPtr F, SheafPtr G) {
    if (F->base() != G->base()) throw std::invalid_argument("direct sum base mismatch");
    auto X = F->base();
    std::vector<int> stalks(X->size());
    for (int x = 0; x < X->size(); ++x) stalks[x] = F->stalk_dim(x) + G->stalk_dim(x);
    std::map<std::pair<int, int>, Mat> res;
    for (int x = 0; x < X->size(); ++x)
        for (int y = 0; y < X->size(); ++y) {
            if (!X->lt(x, y)) continue;
            Mat f = F->res(x, y), g = G->res(x, y);
            res[{x, y}] = block_matrix({f.rows(), g.rows()}, {f.cols(), g.cols()},
                                       {{&f, nullptr}, {nullptr, &g}});
        }
    return SheafRep::from_all_pairs(X, std::move(stalks), std::move(res));
}

SheafPtr tensor_sheaf(SheafPtr F, SheafPtr G) {
    if (F->base() != G->base()) throw std::invalid_argument("tensor base mismatch");
    auto X = F->base();
    std::vector<int> stalks(X->size());
    for (int x = 0; x < X->size(); ++x) stalks[x] = F->stalk_dim(x) * G->stalk_dim(x);
    std::map<std::pair<int, int>, Mat> res;
    for (int x = 0; x < X->size(); ++x)
        for (int y = 0; y < X->size(); ++y)
            if (X->lt(x, y)) res[{x, y}] = F->res(x, y).kron(G->res(x, y));
    return SheafRep::from_all_pairs(X, std::move(stalks), std::move(res));
}

void SheafMorphism::validate() const {
    auto X = src->base();
    if (X != tgt->base()) throw std::invalid_argument("morphism base mismatch");
    if (int(at.size()) != X->size()) throw std::invalid_argument("morphism needs one matrix per point");
    for (int x = 0; x < X->size(); ++x)
        if (at[x].rows() != tgt->stalk_dim(x) || at[x].cols() != src->stalk_dim(x))
            throw std::invalid_argument("morphism matrix shape mismatch at point " + std::to_string(x));
    for (int x = 0; x < X->size(); ++x)
        for (int y = 0; y < X->size(); ++y)
            if (X->lt(x, y) && !(tgt->res(x, y) * at[x] - at[y] * src->res(x, y)).is_zero())
                throw std::invalid_argument("morphism does not commute with restriction " + pair_str(x, y));
}

bool SheafMorphism::data_equal(const SheafMorphism& o) const {
    return src->data_equal(*o.src) && tgt->data_equal(*o.tgt) && at == o.at;
}

SheafMorphism identity_morphism(SheafPtr F) {
    SheafMorphism u{F, F, {}};
    for (int x = 0; x < F->base()->size(); ++x) u.at.push_back(Mat::identity(F->stalk_dim(x)));
    return u;
}

SheafMorphism zero_morphism(SheafPtr F, SheafPtr G) {
    SheafMorphism u{F, G, {}};
    for (int x = 0; x < F->base()->size(); ++x)
        u.at.push_back(Mat::zero(G->stalk_dim(x), F->stalk_dim(x)));
    return u;
}

SheafMorphism compose(const SheafMorphism& v, const SheafMorphism& u) {
    if (u.tgt->base() != v.src->base()) throw std::invalid_argument("sheaf morphisms not composable");
    SheafMorphism w{u.src, v.tgt, {}};
    for (size_t x = 0; x < u.at.size(); ++x) w.at.push_back(v.at[x] * u.at[x]);
    return w;
}

SheafMorphism direct_sum_morphism(const SheafMorphism& u, const SheafMorphism& v) {
    SheafMorphism w{direct_sum(u.src, v.src), direct_sum(u.tgt, v.tgt), {}};
    for (size_t x = 0; x < u.at.size(); ++x) {
        const Mat &a = u.at[x], &b = v.at[x];
        w.at.push_back(block_matrix({a.rows(), b.rows()}, {a.cols(), b.cols()},
                                    {{&a, nullptr}, {nullptr, &b}}));
    }
    return w;
}

SheafMorphism tensor_morphism(const SheafMorphism& u, const SheafMorphism& v) {
    SheafMorphism w{tensor_sheaf(u.src, v.src), tensor_sheaf(u.tgt, v.tgt), {}};
    for (size_t x = 0; x < u.at.size(); ++x) w.at.push_back(u.at[x].kron(v.at[x]));
    return w;
}

std::vector<SheafMorphism> hom_basis(SheafPtr F, SheafPtr G) {
    auto X = F->base();
    if (X != G->base()) throw std::invalid_argument("hom base mismatch");
    // unknowns: entries of u_x, row-major, blocks per point
    std::vector<int> off(X->size() + 1, 0);
    for (int x = 0; x < X->size(); ++x)
        off[x + 1] = off[x] + G->stalk_dim(x) * F->stalk_dim(x);
    int nvars = off.back();
    std::vector<std::vector<Rat>> rows;
    auto pairs = X->covering_pairs_in(X->all_points());
    for (auto& [x, y] : pairs) {
        Mat gr = G->res(x, y), fr = F->res(x, y);
        int gr_r = gr.rows();  // dim G_y
        int fx = F->stalk_dim(x), gx = G->stalk_dim(x), fy = F->stalk_dim(y);
        // constraint: gr * u_x - u_y * fr = 0 ; one scalar row per (i<gy, j<fx)
        for (int i = 0; i < gr_r; ++i)
            for (int j = 0; j < fx; ++j) {
                std::vector<Rat> row(nvars);
                for (int k = 0; k < gx; ++k)
                    if (gr.at(i, k) != 0) row[off[x] + k * fx + j] += gr.at(i, k);
                for (int k = 0; k < fy; ++k)
                    if (fr.at(k, j) != 0) row[off[y] + i * fy + k] -= fr.at(k, j);
                rows.push_back(std::move(row));
            }
    }
    Mat C(int(rows.size()), nvars);
    for (size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < nvars; ++j) C.at(int(i), j) = rows[i][j];
    Mat K = kernel_basis(C);
    std::vector<SheafMorphism> out;
    for (int c = 0; c < K.cols(); ++c) {
        SheafMorphism u{F, G, {}};
        for (int x = 0; x < X->size(); ++x) {
            Mat m(G->stalk_dim(x), F->stalk_dim(x));
            for (int i = 0; i < m.rows(); ++i)
                for (int j = 0; j < m.cols(); ++j)
                    m.at(i, j) = K.at(off[x] + i * F->stalk_dim(x) + j, c);
            u.at.push_back(std::move(m));
        }
        out.push_back(std::move(u));
    }
    return out;
}

Mat sections_of_morphism(const SheafMorphism& u, const std::vector<int>& U_raw) {
    auto U = sorted_unique(U_raw);
    const SectionSpace& S = u.src->sections(U);
    const SectionSpace& T = u.tgt->sections(U);
    Mat mapped(T.flat_dim(), S.dim());
    for (int c = 0; c < S.dim(); ++c) {
        for (size_t i = 0; i < U.size(); ++i) {
            int x = U[i];
            const Mat& ux = u.at[x];
            int so = S.offsets[i], to = T.offsets[i];
            for (int r = 0; r < ux.rows(); ++r) {
                Rat acc = 0;
                for (int k = 0; k < ux.cols(); ++k)
                    if (ux.at(r, k) != 0) acc += ux.at(r, k) * S.basis.at(so + k, c);
                mapped.at(to + r, c) = acc;
            }
        }
    }
    auto mn = u.tgt->base()->minimum_of(U);
    if (mn) {
        int off = T.block_offset(*mn), d = T.block_dim(*mn);
        std::vector<int> rows(d);
        for (int i = 0; i < d; ++i) rows[i] = off + i;
        return mapped.select_rows(rows);
    }
    return express_in_basis(T.basis, mapped);
}

namespace {

// Flat section vector of F over sorted V mapped pointwise through matrices.
std::vector<Rat> flat_block(const SectionSpace& S, const Mat& basis_col_src, int col) {
    std::vector<Rat> v(S.flat_dim());
    for (int i = 0; i < S.flat_dim(); ++i) v[i] = basis_col_src.at(i, col);
    return v;
}

}  // namespace

SheafPtr pushforward(const SpaceMap& f, SheafPtr F) {
    f.validate();
    if (F->base() != f.src) throw std::invalid_argument("pushforward base mismatch");
    SpaceMap m = f;
    SheafPtr F0 = F;
    if (F->origin_map) {
        m = compose(f, *F->origin_map);
        F0 = F->origin_sheaf;
    }
    auto Y = f.tgt;
    std::vector<int> stalks(Y->size());
    std::vector<std::vector<int>> pre(Y->size());
    for (int q = 0; q < Y->size(); ++q) {
        pre[q] = m.preimage(Y->up_set(q));
        stalks[q] = F0->sections(pre[q]).dim();
    }
    std::map<std::pair<int, int>, Mat> res;
    for (int q = 0; q < Y->size(); ++q)
        for (int r = 0; r < Y->size(); ++r)
            if (Y->lt(q, r)) res[{q, r}] = F0->section_restriction(pre[q], pre[r]);
    auto R = std::const_pointer_cast<SheafRep>(SheafRep::from_all_pairs(Y, std::move(stalks), std::move(res)));
    R->origin_sheaf = F0;
    R->origin_map = m;
    return R;
}

SheafMorphism pushforward_morphism(const SpaceMap& f, const SheafMorphism& u) {
    SheafPtr PF = pushforward(f, u.src);
    SheafPtr PG = pushforward(f, u.tgt);
    const SpaceMap& ms = *PF->origin_map;
    const SpaceMap& mt = *PG->origin_map;
    SheafPtr F0 = PF->origin_sheaf, G0 = PG->origin_sheaf;
    auto Y = f.tgt;
    SheafMorphism out{PF, PG, {}};
    for (int q = 0; q < Y->size(); ++q) {
        std::vector<int> Uq = Y->up_set(q);
        std::vector<int> Ws = ms.preimage(Uq);
        std::vector<int> Wt = mt.preimage(Uq);
        std::vector<int> V = f.preimage(Uq);  // subset of base of u
        const SectionSpace& Ss = F0->sections(Ws);
        const SectionSpace& St = G0->sections(Wt);
        Mat mapped(St.flat_dim(), Ss.dim());
        for (int c = 0; c < Ss.dim(); ++c) {
            // lift the F0-flat section to u.src-coordinates over V, apply u, expand.
            for (int b : V) {
                // u.src stalk at b in its own coordinates
                std::vector<Rat> src_coord;
                if (u.src->origin_map) {
                    std::vector<int> Wb = u.src->origin_map->preimage(u.src->base()->up_set(b));
                    const SectionSpace& Sb = u.src->origin_sheaf->sections(Wb);
                    std::vector<Rat> v(Sb.flat_dim());
                    for (size_t i = 0; i < Sb.points.size(); ++i) {
                        int p = Sb.points[i];
                        int so = Ss.block_offset(p), d = Sb.offsets[i + 1] - Sb.offsets[i];
                        for (int k = 0; k < d; ++k) v[Sb.offsets[i] + k] = Ss.basis.at(so + k, c);
                    }
                    Mat col(Sb.flat_dim(), 1);
                    for (int i = 0; i < Sb.flat_dim(); ++i) col.at(i, 0) = v[i];
                    Mat coords = express_in_basis(Sb.basis, col);
                    src_coord.resize(coords.rows());
                    for (int i = 0; i < coords.rows(); ++i) src_coord[i] = coords.at(i, 0);
                } else {
                    int so = Ss.block_offset(b), d = Ss.block_dim(b);
                    src_coord.resize(d);
                    for (int k = 0; k < d; ++k) src_coord[k] = Ss.basis.at(so + k, c);
                }
                std::vector<Rat> tgt_coord = u.at[b].apply(src_coord);
                if (u.tgt->origin_map) {
                    std::vector<int> Wb = u.tgt->origin_map->preimage(u.tgt->base()->up_set(b));
                    const SectionSpace& Tb = u.tgt->origin_sheaf->sections(Wb);
                    Mat cc(int(tgt_coord.size()), 1);
                    for (size_t i = 0; i < tgt_coord.size(); ++i) cc.at(int(i), 0) = tgt_coord[i];
                    Mat flat = Tb.basis * cc;
                    for (size_t i = 0; i < Tb.points.size(); ++i) {
                        int p = Tb.points[i];
                        int to = St.block_offset(p), d = Tb.offsets[i + 1] - Tb.offsets[i];
                        for (int k = 0; k < d; ++k) mapped.at(to + k, c) = flat.at(Tb.offsets[i] + k, 0);
                    }
                } else {
                    int to = St.block_offset(b);
                    for (size_t k = 0; k < tgt_coord.size(); ++k) mapped.at(to + int(k), c) = tgt_coord[k];
                }
            }
        }
        auto mn = G0->base()->minimum_of(Wt);
        if (mn && !Wt.empty()) {
            int off = St.block_offset(*mn), d = St.block_dim(*mn);
            std::vector<int> rows(d);
            for (int i = 0; i < d; ++i) rows[i] = off + i;
            out.at.push_back(mapped.select_rows(rows));
        } else {
            out.at.push_back(express_in_basis(St.basis, mapped));
        }
    }
    return out;
}

SheafPtr inverse_image(const SpaceMap& f, SheafPtr G) {
    f.validate();
    if (G->base() != f.tgt) throw std::invalid_argument("inverse image base mismatch");
    auto X = f.src;
    std::vector<int> stalks(X->size());
    for (int x = 0; x < X->size(); ++x) stalks[x] = G->stalk_dim(f(x));
    std::map<std::pair<int, int>, Mat> res;
    for (int x = 0; x < X->size(); ++x)
        for (int y = 0; y < X->size(); ++y)
            if (X->lt(x, y)) res[{x, y}] = G->res(f(x), f(y));
    return SheafRep::from_all_pairs(X, std::move(stalks), std::move(res));
}

SheafMorphism inverse_image_morphism(const SpaceMap& f, const SheafMorphism& u) {
    SheafMorphism out{inverse_image(f, u.src), inverse_image(f, u.tgt), {}};
    for (int x = 0; x < f.src->size(); ++x) out.at.push_back(u.at[f(x)]);
    return out;
}

std::pair<SheafPtr, Subspace> restrict_open(SheafPtr F, const std::vector<int>& U) {
    Subspace sub = open_subspace(F->base(), U);
    return {inverse_image(sub.inclusion, F), sub};
}

SheafMorphism adjunction_unit(const SpaceMap& f, SheafPtr G) {
    SheafPtr IG = inverse_image(f, G);
    SheafPtr PIG = pushforward(f, IG);
    SheafMorphism u{G, PIG, {}};
    for (int q = 0; q < f.tgt->size(); ++q) {
        std::vector<int> V = f.preimage(f.tgt->up_set(q));
        const SectionSpace& S = IG->sections(V);
        Mat cols(S.flat_dim(), G->stalk_dim(q));
        for (int c = 0; c < G->stalk_dim(q); ++c)
            for (size_t i = 0; i < S.points.size(); ++i) {
                int x = S.points[i];
                Mat r = G->res(q, f(x));
                for (int p = 0; p < r.rows(); ++p) cols.at(S.offsets[i] + p, c) = r.at(p, c);
            }
        auto mn = f.src->minimum_of(V);
        if (mn) {
            int off = S.block_offset(*mn), d = S.block_dim(*mn);
            std::vector<int> rows(d);
            for (int i = 0; i < d; ++i) rows[i] = off + i;
            u.at.push_back(cols.select_rows(rows));
        } else {
            u.at.push_back(express_in_basis(S.basis, cols));
        }
    }
    return u;
}

SheafMorphism unit_morphism_into(const SpaceMap& f, SheafPtr G, SheafPtr F) {
    SheafPtr PF = pushforward(f, F);
    SheafMorphism u{G, PF, {}};
    for (int q = 0; q < f.tgt->size(); ++q) {
        std::vector<int> V = f.preimage(f.tgt->up_set(q));
        const SectionSpace& S = F->sections(V);
        Mat cols(S.flat_dim(), G->stalk_dim(q));
        for (int c = 0; c < G->stalk_dim(q); ++c)
            for (size_t i = 0; i < S.points.size(); ++i) {
                int x = S.points[i];
                Mat r = G->res(q, f(x));
                if (r.rows() != F->stalk_dim(x))
                    throw std::invalid_argument("unit morphism: stalk data mismatch");
                for (int p = 0; p < r.rows(); ++p) cols.at(S.offsets[i] + p, c) = r.at(p, c);
            }
        auto mn = f.src->minimum_of(V);
        if (mn) {
            int off = S.block_offset(*mn), d = S.block_dim(*mn);
            std::vector<int> rows(d);
            for (int i = 0; i < d; ++i) rows[i] = off + i;
            u.at.push_back(cols.select_rows(rows));
        } else {
            u.at.push_back(express_in_basis(S.basis, cols));
        }
    }
    return u;
}

SheafMorphism adjunction_counit(const SpaceMap& f, SheafPtr F) {
    SheafPtr PF = pushforward(f, F);
    SheafPtr IPF = inverse_image(f, PF);
    SheafMorphism u{IPF, F, {}};
    SheafPtr F0 = PF->origin_sheaf;
    const SpaceMap& m = *PF->origin_map;
    for (int x = 0; x < f.src->size(); ++x) {
        std::vector<int> W = m.preimage(f.tgt->up_set(f(x)));
        const SectionSpace& S = F0->sections(W);
        if (F->origin_map) {
            std::vector<int> Wx = F->origin_map->preimage(f.src->up_set(x));
            Mat r = F0->section_restriction(W, Wx);
            u.at.push_back(std::move(r));
        } else {
            u.at.push_back(S.evaluation_at(x));
        }
    }
    return u;
}

CochainComplex bar_complex(const SheafRep& F) {
    return [&] {
        auto X = F.base();
        int h = X->height();
        std::vector<int> dims;
        std::vector<std::vector<std::vector<int>>> chains;
        for (int n = 0; n <= h; ++n) {
            chains.push_back(X->strict_chains_in(X->all_points(), n));
            int d = 0;
            for (auto& c : chains.back()) d += F.stalk_dim(c.back());
            dims.push_back(d);
        }
        std::vector<Mat> ds;
        for (int n = 0; n < h; ++n) {
            std::vector<int> coff(chains[n].size() + 1, 0), roff(chains[n + 1].size() + 1, 0);
            for (size_t i = 0; i < chains[n].size(); ++i)
                coff[i + 1] = coff[i] + F.stalk_dim(chains[n][i].back());
            for (size_t i = 0; i < chains[n + 1].size(); ++i)
                roff[i + 1] = roff[i] + F.stalk_dim(chains[n + 1][i].back());
            Mat d(roff.back(), coff.back());
            std::map<std::vector<int>, int> index;
            for (size_t i = 0; i < chains[n].size(); ++i) index[chains[n][i]] = int(i);
            for (size_t t = 0; t < chains[n + 1].size(); ++t) {
                const auto& c = chains[n + 1][t];
                for (int j = 0; j <= n + 1; ++j) {
                    std::vector<int> fc = c;
                    fc.erase(fc.begin() + j);
                    auto it = index.find(fc);
                    if (it == index.end()) continue;
                    int s = it->second;
                    int sign = (j % 2 == 0) ? 1 : -1;
                    Mat blk = (j == n + 1) ? F.res(c[n], c[n + 1]) : Mat::identity(F.stalk_dim(c.back()));
                    for (int p = 0; p < blk.rows(); ++p)
                        for (int q = 0; q < blk.cols(); ++q)
                            if (blk.at(p, q) != 0) d.at(roff[t] + p, coff[s] + q) += sign * blk.at(p, q);
                }
            }
            ds.push_back(std::move(d));
        }
        return CochainComplex(0, dims, ds);
    }();
}

std::vector<int> bar_cohomology(const SheafRep& F) { return bar_complex(F).cohomology_dims(); }

std::vector<int> bar_cohomology_on(const SheafRep& F, const std::vector<int>& U_raw) {
    // Bar complex over strict chains inside the open U.
    auto X = F.base();
    auto U = sorted_unique(U_raw);
    if (!X->is_up_closed(U)) throw std::invalid_argument("bar cohomology requested over a non-open set");
    std::vector<std::vector<std::vector<int>>> chains;
    std::vector<int> dims;
    int n = 0;
    while (true) {
        auto c = X->strict_chains_in(U, n);
        if (c.empty() && n > 0) break;
        int d = 0;
        for (auto& ch : c) d += F.stalk_dim(ch.back());
        chains.push_back(std::move(c));
        dims.push_back(d);
        if (chains.back().empty()) break;
        ++n;
    }
    std::vector<Mat> ds;
    for (size_t k = 0; k + 1 < chains.size(); ++k) {
        std::vector<int> coff(chains[k].size() + 1, 0), roff(chains[k + 1].size() + 1, 0);
        for (size_t i = 0; i < chains[k].size(); ++i)
            coff[i + 1] = coff[i] + F.stalk_dim(chains[k][i].back());
        for (size_t i = 0; i < chains[k + 1].size(); ++i)
            roff[i + 1] = roff[i] + F.stalk_dim(chains[k + 1][i].back());
        Mat d(roff.back(), coff.back());
        std::map<std::vector<int>, int> index;
        for (size_t i = 0; i < chains[k].size(); ++i) index[chains[k][i]] = int(i);
        for (size_t t = 0; t < chains[k + 1].size(); ++t) {
            const auto& c = chains[k + 1][t];
            for (int j = 0; j <= int(k) + 1; ++j) {
                std::vector<int> fc = c;
                fc.erase(fc.begin() + j);
                auto it = index.find(fc);
                if (it == index.end()) continue;
                int sign = (j % 2 == 0) ? 1 : -1;
                Mat blk = (j == int(k) + 1) ? F.res(c[k], c[k + 1])
                                            : Mat::identity(F.stalk_dim(c.back()));
                for (int p = 0; p < blk.rows(); ++p)
                    for (int q = 0; q < blk.cols(); ++q)
                        if (blk.at(p, q) != 0) d.at(roff[t] + p, coff[it->second] + q) += sign * blk.at(p, q);
            }
        }
        ds.push_back(std::move(d));
    }
    return CochainComplex(0, dims, ds).cohomology_dims();
}

void SheafComplex::validate() const {
    if (terms.empty()) throw std::invalid_argument("empty sheaf complex");
    if (d.size() + 1 != terms.size())
        throw std::invalid_argument("sheaf complex needs one differential per adjacent pair");
    for (size_t k = 0; k < d.size(); ++k) {
        if (d[k].src != terms[k] || d[k].tgt != terms[k + 1])
            throw std::invalid_argument("sheaf complex differential endpoints mismatch");
        d[k].validate();
    }
    for (size_t k = 0; k + 1 < d.size(); ++k)
        for (int x = 0; x < base->size(); ++x)
            if (!(d[k + 1].at[x] * d[k].at[x]).is_zero())
                throw std::invalid_argument("sheaf complex d.d != 0 at point " + std::to_string(x));
}

CochainComplex SheafComplex::stalk_complex(int x) const {
    std::vector<int> dims;
    std::vector<Mat> ds;
    for (auto& t : terms) dims.push_back(t->stalk_dim(x));
    for (auto& m : d) ds.push_back(m.at[x]);
    return CochainComplex(lo, dims, ds);
}

CochainComplex SheafComplex::sections_complex(const std::vector<int>& U) const {
    std::vector<int> dims;
    std::vector<Mat> ds;
    for (auto& t : terms) dims.push_back(t->sections(U).dim());
    for (auto& m : d) ds.push_back(sections_of_morphism(m, U));
    return CochainComplex(lo, dims, ds);
}

bool SheafComplex::data_equal(const SheafComplex& o) const {
    if (base != o.base || lo != o.lo || terms.size() != o.terms.size()) return false;
    for (size_t k = 0; k < terms.size(); ++k)
        if (!terms[k]->data_equal(*o.terms[k])) return false;
    for (size_t k = 0; k < d.size(); ++k)
        if (d[k].at != o.d[k].at) return false;
    return true;
}

SheafComplex concentrated_complex(SheafPtr F, int degree) {
    SheafComplex c;
    c.base = F->base();
    c.lo = degree;
    c.terms = {F};
    return c;
}

SheafComplex pushforward_complex(const SpaceMap& f, const SheafComplex& C) {
    SheafComplex out;
    out.base = f.tgt;
    out.lo = C.lo;
    for (auto& t : C.terms) out.terms.push_back(pushforward(f, t));
    for (auto& m : C.d) out.d.push_back(pushforward_morphism(f, m));
    return out;
}

SheafComplex inverse_image_complex(const SpaceMap& f, const SheafComplex& C) {
    SheafComplex out;
    out.base = f.src;
    out.lo = C.lo;
    for (auto& t : C.terms) out.terms.push_back(inverse_image(f, t));
    for (auto& m : C.d) out.d.push_back(inverse_image_morphism(f, m));
    return out;
}

void SheafComplexMap::validate() const {
    for (auto& [n, u] : parts) u.validate();
    for (int x = 0; x < src.base->size(); ++x) stalk_chain_map(x).validate();
}

ChainMap SheafComplexMap::sections_chain_map(const std::vector<int>& U) const {
    ChainMap m{src.sections_complex(U), tgt.sections_complex(U), {}};
    for (auto& [n, u] : parts) m.parts[n] = sections_of_morphism(u, U);
    return m;
}

ChainMap SheafComplexMap::stalk_chain_map(int x) const {
    ChainMap m{src.stalk_complex(x), tgt.stalk_complex(x), {}};
    for (auto& [n, u] : parts) m.parts[n] = u.at[x];
    return m;
}

bool SheafComplexMap::is_stalkwise_quasi_iso() const {
    for (int x = 0; x < src.base->size(); ++x)
        if (!is_quasi_iso(stalk_chain_map(x))) return false;
    return true;
}

FlasqueResolution flasque_bar_resolution(SheafPtr F) {
    auto X = F->base();
    int h = X->height();
    FlasqueResolution R;
    R.input = F;
    R.complex.base = X;
    R.complex.lo = 0;
    R.chains.resize(h + 1);
    // chain lists per degree per point
    for (int n = 0; n <= h; ++n) {
        R.chains[n].resize(X->size());
        for (int x = 0; x < X->size(); ++x) R.chains[n][x] = X->strict_chains_in(X->up_set(x), n);
    }
    auto stalk_of = [&](int n, int x) {
        int d = 0;
        for (auto& c : R.chains[n][x]) d += F->stalk_dim(c.back());
        return d;
    };
    auto offsets_of = [&](int n, int x) {
        std::vector<int> off(R.chains[n][x].size() + 1, 0);
        for (size_t i = 0; i < R.chains[n][x].size(); ++i)
            off[i + 1] = off[i] + F->stalk_dim(R.chains[n][x][i].back());
        return off;
    };
    for (int n = 0; n <= h; ++n) {
        std::vector<int> stalks(X->size());
        for (int x = 0; x < X->size(); ++x) stalks[x] = stalk_of(n, x);
        std::map<std::pair<int, int>, Mat> res;
        for (int x = 0; x < X->size(); ++x)
            for (int y = 0; y < X->size(); ++y) {
                if (!X->lt(x, y)) continue;
                auto offx = offsets_of(n, x), offy = offsets_of(n, y);
                Mat m(stalks[y], stalks[x]);
                std::map<std::vector<int>, int> index;
                for (size_t i = 0; i < R.chains[n][x].size(); ++i) index[R.chains[n][x][i]] = int(i);
                for (size_t t = 0; t < R.chains[n][y].size(); ++t) {
                    int s = index.at(R.chains[n][y][t]);  // chains at y are chains at x
                    int d = F->stalk_dim(R.chains[n][y][t].back());
                    for (int p = 0; p < d; ++p) m.at(offy[t] + p, offx[s] + p) = 1;
                }
                res[{x, y}] = std::move(m);
            }
        R.complex.terms.push_back(SheafRep::from_all_pairs(X, std::move(stalks), std::move(res)));
    }
    for (int n = 0; n < h; ++n) {
        SheafMorphism dm{R.complex.terms[n], R.complex.terms[n + 1], {}};
        for (int x = 0; x < X->size(); ++x) {
            auto offs = offsets_of(n, x), offt = offsets_of(n + 1, x);
            Mat m(R.complex.terms[n + 1]->stalk_dim(x), R.complex.terms[n]->stalk_dim(x));
            std::map<std::vector<int>, int> index;
            for (size_t i = 0; i < R.chains[n][x].size(); ++i) index[R.chains[n][x][i]] = int(i);
            for (size_t t = 0; t < R.chains[n + 1][x].size(); ++t) {
                const auto& c = R.chains[n + 1][x][t];
                for (int j = 0; j <= n + 1; ++j) {
                    std::vector<int> fc = c;
                    fc.erase(fc.begin() + j);
                    auto it = index.find(fc);
                    if (it == index.end()) continue;
                    int sgn = (j % 2 == 0) ? 1 : -1;
                    Mat blk = (j == n + 1) ? F->res(c[n], c[n + 1])
                                           : Mat::identity(F->stalk_dim(c.back()));
                    for (int p = 0; p < blk.rows(); ++p)
                        for (int q = 0; q < blk.cols(); ++q)
                            if (blk.at(p, q) != 0)
                                m.at(offt[t] + p, offs[it->second] + q) += sgn * blk.at(p, q);
                }
            }
            dm.at.push_back(std::move(m));
        }
        R.complex.d.push_back(std::move(dm));
    }
    R.augmentation = SheafMorphism{F, R.complex.terms[0], {}};
    for (int x = 0; x < X->size(); ++x) {
        auto off = offsets_of(0, x);
        Mat m(R.complex.terms[0]->stalk_dim(x), F->stalk_dim(x));
        for (size_t t = 0; t < R.chains[0][x].size(); ++t) {
            Mat r = F->res(x, R.chains[0][x][t][0]);
            for (int p = 0; p < r.rows(); ++p)
                for (int q = 0; q < r.cols(); ++q) m.at(off[t] + p, q) = r.at(p, q);
        }
        R.augmentation.at.push_back(std::move(m));
    }
    return R;
}

void StalkwiseOver::validate() const {
    if (over.src != up->base() || over.tgt != down->base())
        throw std::invalid_argument("stalkwise family base mismatch");
    if (int(at.size()) != over.src->size())
        throw std::invalid_argument("stalkwise family needs one matrix per upstairs point");
    auto B = over.src;
    for (int x = 0; x < B->size(); ++x)
        if (at[x].rows() != up->stalk_dim(x) || at[x].cols() != down->stalk_dim(over(x)))
            throw std::invalid_argument("stalkwise family shape mismatch at point " + std::to_string(x));
    for (int x = 0; x < B->size(); ++x)
        for (int y = 0; y < B->size(); ++y)
            if (B->lt(x, y) &&
                !(up->res(x, y) * at[x] - at[y] * down->res(over(x), over(y))).is_zero())
                throw std::invalid_argument("stalkwise family not natural at " + pair_str(x, y));
}

StalkwiseOver compose_over(const StalkwiseOver& second, const StalkwiseOver& first) {
    // first : F -> g_* G over g : B -> A ; second : G -> h_* H over h : C -> B
    if (first.up != second.down) throw std::invalid_argument("stalkwise composition mismatch");
    StalkwiseOver out{compose(first.over, second.over), first.down, second.up, {}};
    for (int x = 0; x < second.over.src->size(); ++x)
        out.at.push_back(second.at[x] * first.at[second.over(x)]);
    return out;
}

StalkwiseOver identity_over(SheafPtr F) {
    StalkwiseOver s{identity_map(F->base()), F, F, {}};
    for (int x = 0; x < F->base()->size(); ++x) s.at.push_back(Mat::identity(F->stalk_dim(x)));
    return s;
}

StalkwiseOver scale_over(const StalkwiseOver& c, const Rat& s) {
    StalkwiseOver out = c;
    for (auto& m : out.at) m = m.scaled(s);
    return out;
}

StalkwiseOver bar_functorial_over(const FlasqueResolution& RA, const FlasqueResolution& RB,
                                  const StalkwiseOver& coeff, int degree) {
    const SpaceMap& g = coeff.over;  // B -> A
    auto B = g.src;
    StalkwiseOver out{g,
                      degree < int(RA.complex.terms.size())
                          ? RA.complex.terms[degree]
                          : zero_sheaf(g.tgt),
                      degree < int(RB.complex.terms.size()) ? RB.complex.terms[degree]
                                                            : zero_sheaf(B),
                      {}};
    for (int x = 0; x < B->size(); ++x) {
        int rows = out.up->stalk_dim(x), cols = out.down->stalk_dim(g(x));
        Mat m(rows, cols);
        if (rows > 0 && cols > 0) {
            const auto& bch = RB.chains[degree][x];
            const auto& ach = RA.chains[degree][g(x)];
            std::map<std::vector<int>, int> aidx;
            std::vector<int> aoff(ach.size() + 1, 0);
            for (size_t i = 0; i < ach.size(); ++i) {
                aidx[ach[i]] = int(i);
                aoff[i + 1] = aoff[i] + RA.input->stalk_dim(ach[i].back());
            }
            std::vector<int> boff(bch.size() + 1, 0);
            for (size_t i = 0; i < bch.size(); ++i)
                boff[i + 1] = boff[i] + RB.input->stalk_dim(bch[i].back());
            for (size_t t = 0; t < bch.size(); ++t) {
                std::vector<int> img;
                bool strict = true;
                for (int p : bch[t]) {
                    int gp = g(p);
                    if (!img.empty() && !g.tgt->lt(img.back(), gp)) { strict = false; break; }
                    img.push_back(gp);
                }
                if (!strict) continue;
                auto it = aidx.find(img);
                if (it == aidx.end()) continue;
                const Mat& blk = coeff.at[bch[t].back()];
                for (int p = 0; p < blk.rows(); ++p)
                    for (int q = 0; q < blk.cols(); ++q)
                        if (blk.at(p, q) != 0) m.at(boff[t] + p, aoff[it->second] + q) = blk.at(p, q);
            }
        }
        out.at.push_back(std::move(m));
    }
    return out;
}

SheafComplexMap bar_functorial_map(const FlasqueResolution& RF, const FlasqueResolution& RG,
                                   const SheafMorphism& u) {
    SheafComplexMap out{RF.complex, RG.complex, {}};
    auto X = u.src->base();
    int len = int(std::max(RF.complex.terms.size(), RG.complex.terms.size()));
    for (int n = 0; n < len; ++n) {
        SheafMorphism part{RF.complex.terms[n], RG.complex.terms[n], {}};
        for (int x = 0; x < X->size(); ++x) {
            const auto& ch = RF.chains[n][x];
            std::vector<int> soff(ch.size() + 1, 0), toff(ch.size() + 1, 0);
            for (size_t i = 0; i < ch.size(); ++i) {
                soff[i + 1] = soff[i] + RF.input->stalk_dim(ch[i].back());
                toff[i + 1] = toff[i] + RG.input->stalk_dim(ch[i].back());
            }
            Mat m(toff.back(), soff.back());
            for (size_t t = 0; t < ch.size(); ++t) {
                const Mat& blk = u.at[ch[t].back()];
                for (int p = 0; p < blk.rows(); ++p)
                    for (int q = 0; q < blk.cols(); ++q)
                        if (blk.at(p, q) != 0) m.at(toff[t] + p, soff[t] + q) = blk.at(p, q);
            }
            part.at.push_back(std::move(m));
        }
        out.parts[n] = std::move(part);
    }
    return out;
}

SheafComplex cech_sheaf_complex(PosetPtr X, const std::vector<std::vector<int>>& cover, SheafPtr F) {
    SimplicialComplex N = nerve(*X, cover);
    int dim = N.dim();
    auto inter = [&](const Simplex& a) {
        std::vector<int> r = sorted_unique(cover[a[0]]);
        for (size_t i = 1; i < a.size(); ++i) r = intersect_sorted(r, sorted_unique(cover[a[i]]));
        return r;
    };
    SheafComplex out;
    out.base = X;
    out.lo = 0;
    std::vector<std::vector<Simplex>> by_len;
    for (int p = 0; p <= dim; ++p) by_len.push_back(N.simplexes_of_length(p));
    // terms: stalk at x = (+)_alpha Gamma(U_x cap U_alpha, F)
    std::vector<std::vector<std::vector<int>>> dom(dim + 1);  // [p][alpha index] = U_alpha
    for (int p = 0; p <= dim; ++p)
        for (auto& a : by_len[p]) dom[p].push_back(inter(a));
    for (int p = 0; p <= dim; ++p) {
        std::vector<int> stalks(X->size(), 0);
        std::vector<std::vector<std::vector<int>>> doms(X->size());
        for (int x = 0; x < X->size(); ++x) {
            for (auto& Ua : dom[p]) {
                auto W = intersect_sorted(X->up_set(x), Ua);
                doms[x].push_back(W);
                stalks[x] += F->sections(W).dim();
            }
        }
        std::map<std::pair<int, int>, Mat> res;
        for (int x = 0; x < X->size(); ++x)
            for (int y = 0; y < X->size(); ++y) {
                if (!X->lt(x, y)) continue;
                std::vector<Mat> blocks;
                std::vector<int> rdims, cdims;
                std::vector<std::vector<const Mat*>> grid(dom[p].size(),
                                                          std::vector<const Mat*>(dom[p].size(), nullptr));
                for (size_t a = 0; a < dom[p].size(); ++a) {
                    rdims.push_back(F->sections(doms[y][a]).dim());
                    cdims.push_back(F->sections(doms[x][a]).dim());
                }
                blocks.reserve(dom[p].size());
                for (size_t a = 0; a < dom[p].size(); ++a) {
                    blocks.push_back(F->section_restriction(doms[x][a], doms[y][a]));
                    grid[a][a] = &blocks.back();
                }
                res[{x, y}] = block_matrix(rdims, cdims, grid);
            }
        out.terms.push_back(SheafRep::from_all_pairs(X, std::move(stalks), std::move(res)));
    }
    for (int p = 0; p < dim; ++p) {
        SheafMorphism dm{out.terms[p], out.terms[p + 1], {}};
        std::map<Simplex, int> idx;
        for (size_t i = 0; i < by_len[p].size(); ++i) idx[by_len[p][i]] = int(i);
        for (int x = 0; x < X->size(); ++x) {
            std::vector<int> rdims, cdims;
            for (auto& Ub : dom[p + 1]) rdims.push_back(F->sections(intersect_sorted(X->up_set(x), Ub)).dim());
            for (auto& Ua : dom[p]) cdims.push_back(F->sections(intersect_sorted(X->up_set(x), Ua)).dim());
            std::vector<Mat> store;
            std::vector<std::vector<const Mat*>> grid(by_len[p + 1].size(),
                                                      std::vector<const Mat*>(by_len[p].size(), nullptr));
            store.reserve(by_len[p + 1].size() * (p + 2));
            for (size_t b = 0; b < by_len[p + 1].size(); ++b) {
                const Simplex& beta = by_len[p + 1][b];
                for (int j = 0; j <= p + 1; ++j) {
                    Simplex alpha = face(beta, j);
                    auto it = idx.find(alpha);
                    if (it == idx.end()) continue;
                    auto Wsrc = intersect_sorted(X->up_set(x), dom[p][it->second]);
                    auto Wtgt = intersect_sorted(X->up_set(x), dom[p + 1][b]);
                    Mat blk = F->section_restriction(Wsrc, Wtgt);
                    if (j % 2 == 1) blk = -blk;
                    store.push_back(std::move(blk));
                    grid[b][it->second] = &store.back();
                }
            }
            dm.at.push_back(block_matrix(rdims, cdims, grid));
        }
        out.d.push_back(std::move(dm));
    }
    return out;
}

SheafComplexMap cech_augmentation(PosetPtr X, const std::vector<std::vector<int>>& cover, SheafPtr F) {
    SheafComplex C = cech_sheaf_complex(X, cover, F);
    SheafComplexMap out{concentrated_complex(F), C, {}};
    SimplicialComplex N = nerve(*X, cover);
    auto verts = N.simplexes_of_length(0);
    SheafMorphism aug{F, C.terms[0], {}};
    for (int x = 0; x < X->size(); ++x) {
        std::vector<Mat> blocks;
        std::vector<int> rdims;
        std::vector<std::vector<const Mat*>> grid(verts.size(), std::vector<const Mat*>(1, nullptr));
        for (size_t a = 0; a < verts.size(); ++a) {
            auto W = intersect_sorted(X->up_set(x), sorted_unique(cover[verts[a][0]]));
            const SectionSpace& S = F->sections(W);
            Mat cols(S.flat_dim(), F->stalk_dim(x));
            for (size_t i = 0; i < S.points.size(); ++i) {
                Mat r = F->res(x, S.points[i]);
                for (int p = 0; p < r.rows(); ++p)
                    for (int q = 0; q < r.cols(); ++q) cols.at(S.offsets[i] + p, q) = r.at(p, q);
            }
            Mat coord;
            auto mn = X->minimum_of(W);
            if (mn) {
                int off = S.block_offset(*mn), d = S.block_dim(*mn);
                std::vector<int> rows(d);
                for (int i = 0; i < d; ++i) rows[i] = off + i;
                coord = cols.select_rows(rows);
            } else {
                coord = express_in_basis(S.basis, cols);
            }
            rdims.push_back(coord.rows());
            blocks.push_back(std::move(coord));
        }
        for (size_t a = 0; a < verts.size(); ++a) grid[a][0] = &blocks[a];
        aug.at.push_back(block_matrix(rdims, {F->stalk_dim(x)}, grid));
    }
    out.parts[0] = std::move(aug);
    return out;
}

CochainComplex cech_cochain_complex(PosetPtr X, const std::vector<std::vector<int>>& cover,
                                    SheafPtr F) {
    SimplicialComplex N = nerve(*X, cover);
    int dim = N.dim();
    auto inter = [&](const Simplex& a) {
        std::vector<int> r = sorted_unique(cover[a[0]]);
        for (size_t i = 1; i < a.size(); ++i) r = intersect_sorted(r, sorted_unique(cover[a[i]]));
        return r;
    };
    std::vector<std::vector<Simplex>> by_len;
    for (int p = 0; p <= dim; ++p) by_len.push_back(N.simplexes_of_length(p));
    std::vector<int> dims;
    for (int p = 0; p <= dim; ++p) {
        int d = 0;
        for (auto& a : by_len[p]) d += F->sections(inter(a)).dim();
        dims.push_back(d);
    }
    std::vector<Mat> ds;
    for (int p = 0; p < dim; ++p) {
        std::map<Simplex, int> idx;
        std::vector<int> cdims, rdims;
        for (size_t i = 0; i < by_len[p].size(); ++i) {
            idx[by_len[p][i]] = int(i);
            cdims.push_back(F->sections(inter(by_len[p][i])).dim());
        }
        for (auto& b : by_len[p + 1]) rdims.push_back(F->sections(inter(b)).dim());
        std::vector<Mat> store;
        store.reserve(by_len[p + 1].size() * (p + 2));
        std::vector<std::vector<const Mat*>> grid(by_len[p + 1].size(),
                                                  std::vector<const Mat*>(by_len[p].size(), nullptr));
        for (size_t b = 0; b < by_len[p + 1].size(); ++b) {
            const Simplex& beta = by_len[p + 1][b];
            for (int j = 0; j <= p + 1; ++j) {
                Simplex alpha = face(beta, j);
                auto it = idx.find(alpha);
                if (it == idx.end()) continue;
                Mat blk = F->section_restriction(inter(alpha), inter(beta));
                if (j % 2 == 1) blk = -blk;
                store.push_back(std::move(blk));
                grid[b][it->second] = &store.back();
            }
        }
        ds.push_back(block_matrix(rdims, cdims, grid));
    }
    return CochainComplex(0, dims, ds);
}

}  // namespace dolbres
