#include "dolbres/ss_system.hpp"

#include <algorithm>
#include <sstream>

namespace dolbres {

namespace {

bool strict_subset(const Simplex& a, const Simplex& b) {
    return a != b && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::string edge_str(const Simplex& a, int j) {
    return "(" + simplex_to_string(a) + ";" + std::to_string(j) + ")";
}

}  // namespace

SpaceMap SSSpace::rho(const Simplex& a, const Simplex& b) const {
    if (a == b) return identity_map(spaces.at(a));
    return maps.at({a, b});
}

ValidationReport SSSpace::validate() const {
    for (auto& [key, m] : maps) {
        const auto& [a, b] = key;
        if (!strict_subset(a, b)) return {false, "connecting map stored for a non-face pair"};
        if (m.src != spaces.at(b) || m.tgt != spaces.at(a))
            return {false, "connecting map endpoints mismatch at " + simplex_to_string(a) + " in " +
                               simplex_to_string(b)};
        if (!m.is_monotone()) return {false, "connecting map not monotone"};
    }
    for (const Simplex& b : K.simplexes())
        for (const Simplex& a : K.simplexes())
            if (strict_subset(a, b) && !maps.count({a, b}))
                return {false, "missing connecting map for " + simplex_to_string(a) + " in " +
                                   simplex_to_string(b)};
    // rectangles D(a;j,k)
    for (const Simplex& a : K.simplexes()) {
        int n = simplex_length(a);
        if (n < 2) continue;
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k <= n; ++k) {
                Simplex sj = face(a, j), sk = face(a, k);
                SpaceMap routeA = compose(rho(face(sk, j), sk), rho(sk, a));
                SpaceMap routeB = compose(rho(face(sj, k - 1), sj), rho(sj, a));
                if (routeA.f != routeB.f) {
                    std::ostringstream os;
                    os << "rectangle D(" << simplex_to_string(a) << ";" << j << "," << k
                       << ") does not commute";
                    return {false, os.str()};
                }
            }
    }
    // full cocycle law
    for (const Simplex& c : K.simplexes())
        for (const Simplex& b : K.simplexes()) {
            if (!strict_subset(b, c)) continue;
            for (const Simplex& a : K.simplexes()) {
                if (!strict_subset(a, b)) continue;
                SpaceMap lhs = compose(rho(a, b), rho(b, c));
                if (lhs.f != rho(a, c).f)
                    return {false, "cocycle law fails for " + simplex_to_string(a) + " in " +
                                       simplex_to_string(b) + " in " + simplex_to_string(c)};
            }
        }
    return {};
}

SSSpace point_system(PosetPtr X) {
    SSSpace s;
    s.K = point_complex();
    s.spaces[{0}] = X;
    return s;
}

ProductSystem product_system(const SimplicialComplex& K, const std::vector<PosetPtr>& factors) {
    ProductSystem P;
    P.ss.K = K;
    for (const Simplex& a : K.simplexes()) {
        std::vector<PosetPtr> fs;
        for (int i : a) fs.push_back(factors.at(i));
        P.products.emplace(a, product_space(fs));
        P.ss.spaces[a] = P.products.at(a).space;
    }
    for (const Simplex& b : K.simplexes())
        for (const Simplex& a : K.simplexes()) {
            if (!strict_subset(a, b)) continue;
            const ProductSpace& PB = P.products.at(b);
            const ProductSpace& PA = P.products.at(a);
            SpaceMap m{PB.space, PA.space, {}};
            m.f.resize(PB.space->size());
            std::vector<int> pos;  // positions of a's factors inside b
            for (int v : a) pos.push_back(int(std::find(b.begin(), b.end(), v) - b.begin()));
            for (int x = 0; x < PB.space->size(); ++x) {
                std::vector<int> t;
                for (int p : pos) t.push_back(PB.tuples[x][p]);
                m.f[x] = PA.index_of(t);
            }
            P.ss.maps[{a, b}] = std::move(m);
        }
    return P;
}

CoverSystem cover_system(PosetPtr X, const std::vector<std::vector<int>>& cover) {
    CoverSystem C;
    C.total = X;
    C.cover = cover;
    C.ss.K = nerve(*X, cover);
    auto inter = [&](const Simplex& a) {
        std::vector<int> r = cover[a[0]];
        std::sort(r.begin(), r.end());
        for (size_t i = 1; i < a.size(); ++i) {
            auto u = cover[a[i]];
            std::sort(u.begin(), u.end());
            r = intersect_sorted(r, u);
        }
        return r;
    };
    for (const Simplex& a : C.ss.K.simplexes()) {
        Subspace sub = open_subspace(X, inter(a));
        C.ss.spaces[a] = sub.space;
        C.to_total[a] = sub.inclusion;
        C.pieces.emplace(a, std::move(sub));
    }
    for (const Simplex& b : C.ss.K.simplexes())
        for (const Simplex& a : C.ss.K.simplexes()) {
            if (!strict_subset(a, b)) continue;
            const Subspace& A = C.pieces.at(a);
            const Subspace& B = C.pieces.at(b);
            SpaceMap m{B.space, A.space, {}};
            m.f.resize(B.space->size());
            for (int x = 0; x < B.space->size(); ++x) {
                int pt = B.points[x];
                int idx = int(std::lower_bound(A.points.begin(), A.points.end(), pt) - A.points.begin());
                m.f[x] = idx;
            }
            C.ss.maps[{a, b}] = std::move(m);
        }
    return C;
}

StalkwiseOver SSModule::connector(const Simplex& a, const Simplex& b) const {
    if (a == b) return identity_over(sheaves.at(a));
    return conn.at({a, b});
}

ValidationReport SSModule::validate() const {
    for (auto& [key, c] : conn) {
        const auto& [a, b] = key;
        if (!same_map(c.over, base->rho(a, b)))
            return {false, "connector over wrong map at " + simplex_to_string(a) + " in " +
                               simplex_to_string(b)};
        try {
            c.validate();
        } catch (const std::exception& e) {
            return {false, std::string("connector invalid: ") + e.what()};
        }
    }
    for (const Simplex& b : base->K.simplexes())
        for (const Simplex& a : base->K.simplexes())
            if (strict_subset(a, b) && !conn.count({a, b}))
                return {false, "missing connector for " + simplex_to_string(a) + " in " +
                                   simplex_to_string(b)};
    for (const Simplex& c : base->K.simplexes())
        for (const Simplex& b : base->K.simplexes()) {
            if (!strict_subset(b, c)) continue;
            for (const Simplex& a : base->K.simplexes()) {
                if (!strict_subset(a, b)) continue;
                StalkwiseOver comp = compose_over(connector(b, c), connector(a, b));
                const StalkwiseOver& direct = conn.at({a, c});
                if (comp.at != direct.at)
                    return {false, "connector composition law fails for " + simplex_to_string(a) +
                                       " in " + simplex_to_string(b) + " in " + simplex_to_string(c)};
            }
        }
    return {};
}

ValidationReport AltSSModule::validate() const {
    for (auto& [key, c] : edges) {
        const auto& [a, j] = key;
        Simplex fa = face(a, j);
        if (!same_map(c.over, base->rho(fa, a)))
            return {false, "edge connector over wrong map at " + edge_str(a, j)};
        try {
            c.validate();
        } catch (const std::exception& e) {
            return {false, std::string("edge connector invalid at ") + edge_str(a, j) + ": " + e.what()};
        }
    }
    for (const Simplex& a : base->K.simplexes()) {
        int n = simplex_length(a);
        for (int j = 0; j <= n; ++j)
            if (n >= 1 && !edges.count({a, j}))
                return {false, "missing edge connector at " + edge_str(a, j)};
        if (n < 2) continue;
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k <= n; ++k) {
                Simplex sk = face(a, k), sj = face(a, j);
                StalkwiseOver A = compose_over(edge(a, k), edge(sk, j));
                StalkwiseOver B = compose_over(edge(a, j), edge(sj, k - 1));
                bool anti = true;
                for (size_t x = 0; x < A.at.size(); ++x)
                    if (!(A.at[x] + B.at[x]).is_zero()) { anti = false; break; }
                if (!anti) {
                    std::ostringstream os;
                    os << "rectangle D(F;" << simplex_to_string(a) << ";" << j << "," << k
                       << ") does not anti-commute";
                    return {false, os.str()};
                }
            }
    }
    return {};
}

AltSSModule alt(const SSModule& F) {
    AltSSModule A;
    A.base = F.base;
    A.sheaves = F.sheaves;
    for (const Simplex& a : F.base->K.simplexes()) {
        int n = simplex_length(a);
        if (n < 1) continue;
        for (int j = 0; j <= n; ++j) {
            StalkwiseOver e = F.conn.at({face(a, j), a});
            if (j % 2 == 1) e = scale_over(e, Rat(-1));
            A.edges.emplace(std::make_pair(a, j), std::move(e));
        }
    }
    return A;
}

SSModule alt_inv(const AltSSModule& F) {
    SSModule M;
    M.base = F.base;
    M.sheaves = F.sheaves;
    // unscale the edges, then complete by composition along the canonical
    // decreasing path (remove the extra vertex of largest position first).
    std::map<std::pair<Simplex, Simplex>, StalkwiseOver> plain;
    for (auto& [key, e] : F.edges) {
        const auto& [a, j] = key;
        StalkwiseOver c = (j % 2 == 1) ? scale_over(e, Rat(-1)) : e;
        plain.emplace(std::make_pair(face(a, j), a), std::move(c));
    }
    for (const Simplex& b : F.base->K.simplexes())
        for (const Simplex& a : F.base->K.simplexes()) {
            if (!strict_subset(a, b)) continue;
            // walk down from b to a
            Simplex cur = b;
            StalkwiseOver acc = identity_over(F.sheaves.at(b));
            while (cur != a) {
                int pos = -1;
                for (int i = simplex_length(cur); i >= 0; --i)
                    if (!std::binary_search(a.begin(), a.end(), cur[i])) { pos = i; break; }
                Simplex nxt = face(cur, pos);
                acc = compose_over(acc, plain.at({nxt, cur}));
                cur = nxt;
            }
            M.conn.emplace(std::make_pair(a, b), std::move(acc));
        }
    return M;
}

bool ss_module_data_equal(const SSModule& a, const SSModule& b) {
    if (a.base != b.base) return false;
    if (a.sheaves.size() != b.sheaves.size() || a.conn.size() != b.conn.size()) return false;
    for (auto& [s, F] : a.sheaves) {
        auto it = b.sheaves.find(s);
        if (it == b.sheaves.end() || !F->data_equal(*it->second)) return false;
    }
    for (auto& [k, c] : a.conn) {
        auto it = b.conn.find(k);
        if (it == b.conn.end() || c.at != it->second.at) return false;
    }
    return true;
}

ValidationReport SSModuleMorphism::validate() const {
    for (auto& [a, u] : at) {
        try {
            u.validate();
        } catch (const std::exception& e) {
            return {false, std::string("component at ") + simplex_to_string(a) + ": " + e.what()};
        }
    }
    for (auto& [key, cF] : src->conn) {
        const auto& [a, b] = key;
        const StalkwiseOver& cG = tgt->conn.at(key);
        const SheafMorphism& ua = at.at(a);
        const SheafMorphism& ub = at.at(b);
        const SpaceMap& r = cF.over;
        for (int x = 0; x < r.src->size(); ++x)
            if (!(ub.at[x] * cF.at[x] - cG.at[x] * ua.at[r(x)]).is_zero())
                return {false, "compatibility square fails at " + simplex_to_string(a) + " in " +
                                   simplex_to_string(b) + ", point " + std::to_string(x)};
    }
    return {};
}

ValidationReport SSComplex::validate() const {
    for (auto& [a, C] : comp) {
        try {
            C.validate();
        } catch (const std::exception& e) {
            return {false, std::string("component complex at ") + simplex_to_string(a) + ": " + e.what()};
        }
    }
    for (auto& [key, cs] : conn) {
        const auto& [a, b] = key;
        const SheafComplex& CA = comp.at(a);
        const SheafComplex& CB = comp.at(b);
        if (int(cs.size()) != len + 1) return {false, "connector family has wrong length"};
        for (int q = 0; q <= len; ++q) {
            try {
                cs[q].validate();
            } catch (const std::exception& e) {
                return {false, std::string("connector invalid at degree ") + std::to_string(q) + ": " +
                                   e.what()};
            }
            if (q < len) {
                const SpaceMap& r = cs[q].over;
                for (int x = 0; x < r.src->size(); ++x) {
                    Mat lhs = cs[q + 1].at[x] * CA.d[q].at[r(x)];
                    Mat rhs = CB.d[q].at[x] * cs[q].at[x];
                    if (!(lhs - rhs).is_zero())
                        return {false, "connector does not commute with differentials at " +
                                           simplex_to_string(a) + " in " + simplex_to_string(b)};
                }
            }
        }
    }
    return {};
}

ValidationReport AltSSComplex::validate() const {
    for (auto& [a, C] : comp) {
        try {
            C.validate();
        } catch (const std::exception& e) {
            return {false, std::string("component complex at ") + simplex_to_string(a) + ": " + e.what()};
        }
    }
    for (auto& [key, es] : edges) {
        const auto& [a, j] = key;
        Simplex fa = face(a, j);
        const SheafComplex& CF = comp.at(fa);
        const SheafComplex& CA = comp.at(a);
        for (int q = 0; q <= len; ++q) {
            try {
                es[q].validate();
            } catch (const std::exception& e) {
                return {false, std::string("edge invalid at ") + edge_str(a, j) + " degree " +
                                   std::to_string(q) + ": " + e.what()};
            }
            if (q < len) {
                const SpaceMap& r = es[q].over;
                for (int x = 0; x < r.src->size(); ++x) {
                    Mat lhs = CA.d[q].at[x] * es[q].at[x];
                    Mat rhs = es[q + 1].at[x] * CF.d[q].at[r(x)];
                    if (!(lhs + rhs).is_zero())
                        return {false, "differential is not an anti-morphism along " + edge_str(a, j)};
                }
            }
        }
    }
    // edge rectangles anti-commute degreewise
    for (const Simplex& a : base->K.simplexes()) {
        int n = simplex_length(a);
        if (n < 2) continue;
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k <= n; ++k) {
                Simplex sk = face(a, k), sj = face(a, j);
                for (int q = 0; q <= len; ++q) {
                    StalkwiseOver A = compose_over(edges.at({a, k})[q], edges.at({sk, j})[q]);
                    StalkwiseOver B = compose_over(edges.at({a, j})[q], edges.at({sj, k - 1})[q]);
                    for (size_t x = 0; x < A.at.size(); ++x)
                        if (!(A.at[x] + B.at[x]).is_zero()) {
                            std::ostringstream os;
                            os << "degree " << q << " rectangle D(F;" << simplex_to_string(a) << ";"
                               << j << "," << k << ") does not anti-commute";
                            return {false, os.str()};
                        }
                }
            }
    }
    return {};
}

AltSSComplex alt(const SSComplex& C) {
    AltSSComplex A;
    A.base = C.base;
    A.len = C.len;
    for (auto& [a, cc] : C.comp) {
        SheafComplex scaled = cc;
        if (simplex_length(a) % 2 == 1)
            for (auto& dm : scaled.d)
                for (auto& m : dm.at) m = -m;
        A.comp.emplace(a, std::move(scaled));
    }
    for (const Simplex& a : C.base->K.simplexes()) {
        int n = simplex_length(a);
        if (n < 1) continue;
        for (int j = 0; j <= n; ++j) {
            auto cs = C.conn.at({face(a, j), a});
            if (j % 2 == 1)
                for (auto& c : cs) c = scale_over(c, Rat(-1));
            A.edges.emplace(std::make_pair(a, j), std::move(cs));
        }
    }
    return A;
}

SSComplex alt_inv(const AltSSComplex& A) {
    SSComplex C;
    C.base = A.base;
    C.len = A.len;
    for (auto& [a, cc] : A.comp) {
        SheafComplex scaled = cc;
        if (simplex_length(a) % 2 == 1)
            for (auto& dm : scaled.d)
                for (auto& m : dm.at) m = -m;
        C.comp.emplace(a, std::move(scaled));
    }
    std::map<std::pair<Simplex, Simplex>, std::vector<StalkwiseOver>> plain;
    for (auto& [key, es] : A.edges) {
        const auto& [a, j] = key;
        auto cs = es;
        if (j % 2 == 1)
            for (auto& c : cs) c = scale_over(c, Rat(-1));
        plain.emplace(std::make_pair(face(a, j), a), std::move(cs));
    }
    for (const Simplex& b : A.base->K.simplexes())
        for (const Simplex& a : A.base->K.simplexes()) {
            if (!strict_subset(a, b)) continue;
            std::vector<StalkwiseOver> acc;
            for (int q = 0; q <= A.len; ++q) {
                Simplex cur = b;
                StalkwiseOver step = identity_over(A.comp.at(b).terms[q]);
                while (cur != a) {
                    int pos = -1;
                    for (int i = simplex_length(cur); i >= 0; --i)
                        if (!std::binary_search(a.begin(), a.end(), cur[i])) { pos = i; break; }
                    Simplex nxt = face(cur, pos);
                    step = compose_over(step, plain.at({nxt, cur})[q]);
                    cur = nxt;
                }
                acc.push_back(std::move(step));
            }
            C.conn.emplace(std::make_pair(a, b), std::move(acc));
        }
    return C;
}

SSModule restrict_to_cover(const CoverSystem& U, SheafPtr F) {
    SSModule M;
    M.base = &U.ss;
    for (const Simplex& a : U.ss.K.simplexes())
        M.sheaves[a] = inverse_image(U.to_total.at(a), F);
    for (const Simplex& b : U.ss.K.simplexes())
        for (const Simplex& a : U.ss.K.simplexes()) {
            if (!strict_subset(a, b)) continue;
            SpaceMap r = U.ss.rho(a, b);
            StalkwiseOver c{r, M.sheaves.at(a), M.sheaves.at(b), {}};
            for (int x = 0; x < r.src->size(); ++x)
                c.at.push_back(Mat::identity(M.sheaves.at(b)->stalk_dim(x)));
            M.conn.emplace(std::make_pair(a, b), std::move(c));
        }
    return M;
}

SSModule tensor_ss(const SSModule& F, const SSModule& G) {
    if (F.base != G.base) throw std::invalid_argument("tensor of modules over different systems");
    SSModule T;
    T.base = F.base;
    for (auto& [a, s] : F.sheaves) T.sheaves[a] = tensor_sheaf(s, G.sheaves.at(a));
    for (auto& [key, cF] : F.conn) {
        const StalkwiseOver& cG = G.conn.at(key);
        StalkwiseOver c{cF.over, T.sheaves.at(key.first), T.sheaves.at(key.second), {}};
        for (size_t x = 0; x < cF.at.size(); ++x) c.at.push_back(cF.at[x].kron(cG.at[x]));
        T.conn.emplace(key, std::move(c));
    }
    return T;
}

SSModule constant_system_module(const SSSpace& X, int k) {
    SSModule M;
    M.base = &X;
    for (const Simplex& a : X.K.simplexes()) M.sheaves[a] = constant_sheaf(X.spaces.at(a), k);
    for (const Simplex& b : X.K.simplexes())
        for (const Simplex& a : X.K.simplexes()) {
            if (!strict_subset(a, b)) continue;
            SpaceMap r = X.rho(a, b);
            StalkwiseOver c{r, M.sheaves.at(a), M.sheaves.at(b), {}};
            for (int x = 0; x < r.src->size(); ++x) c.at.push_back(Mat::identity(k));
            M.conn.emplace(std::make_pair(a, b), std::move(c));
        }
    return M;
}

}  // namespace dolbres
