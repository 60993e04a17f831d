#include "dolbres/poset.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace dolbres {

std::shared_ptr<const PosetSpace> PosetSpace::from_relations(
    int n, const std::vector<std::pair<int, int>>& less_than) {
    auto p = std::make_shared<PosetSpace>();
    p->n_ = n;
    p->leq_.assign(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) p->leq_[i][i] = true;
    for (auto& [a, b] : less_than) {
        if (a < 0 || a >= n || b < 0 || b >= n) throw std::invalid_argument("relation point out of range");
        p->leq_[a][b] = true;
    }
    for (int k = 0; k < n; ++k)  // transitive closure
        for (int i = 0; i < n; ++i) {
            if (!p->leq_[i][k]) continue;
            for (int j = 0; j < n; ++j)
                if (p->leq_[k][j]) p->leq_[i][j] = true;
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (p->leq_[i][j] && p->leq_[j][i])
                throw std::invalid_argument("antisymmetry violated between " + std::to_string(i) +
                                            " and " + std::to_string(j));
    return p;
}

std::vector<int> PosetSpace::up_set(int x) const {
    std::vector<int> r;
    for (int y = 0; y < n_; ++y)
        if (leq_[x][y]) r.push_back(y);
    return r;
}

std::vector<int> PosetSpace::up_closure(const std::vector<int>& pts) const {
    std::vector<bool> in(n_, false);
    for (int x : pts)
        for (int y = 0; y < n_; ++y)
            if (leq_[x][y]) in[y] = true;
    std::vector<int> r;
    for (int y = 0; y < n_; ++y)
        if (in[y]) r.push_back(y);
    return r;
}

std::vector<int> PosetSpace::down_closure(const std::vector<int>& pts) const {
    std::vector<bool> in(n_, false);
    for (int x : pts)
        for (int y = 0; y < n_; ++y)
            if (leq_[y][x]) in[y] = true;
    std::vector<int> r;
    for (int y = 0; y < n_; ++y)
        if (in[y]) r.push_back(y);
    return r;
}

bool PosetSpace::is_up_closed(const std::vector<int>& pts) const {
    return up_closure(pts) == [&] {
        auto s = pts;
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        return s;
    }();
}

bool PosetSpace::is_down_closed(const std::vector<int>& pts) const {
    auto s = pts;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return down_closure(pts) == s;
}

std::vector<int> PosetSpace::all_points() const {
    std::vector<int> r(n_);
    for (int i = 0; i < n_; ++i) r[i] = i;
    return r;
}

std::optional<int> PosetSpace::minimum_of(const std::vector<int>& pts) const {
    for (int m : pts) {
        bool ok = true;
        for (int y : pts)
            if (!leq_[m][y]) { ok = false; break; }
        if (ok) return m;
    }
    return std::nullopt;
}

std::vector<std::pair<int, int>> PosetSpace::covering_pairs_in(const std::vector<int>& pts) const {
    std::vector<std::pair<int, int>> r;
    for (int x : pts)
        for (int y : pts) {
            if (!lt(x, y)) continue;
            bool covering = true;
            for (int z : pts)
                if (lt(x, z) && lt(z, y)) { covering = false; break; }
            if (covering) r.emplace_back(x, y);
        }
    return r;
}

std::vector<std::pair<int, int>> PosetSpace::strict_pairs_in(const std::vector<int>& pts) const {
    std::vector<std::pair<int, int>> r;
    for (int x : pts)
        for (int y : pts)
            if (lt(x, y)) r.emplace_back(x, y);
    return r;
}

std::vector<std::vector<int>> PosetSpace::strict_chains_in(const std::vector<int>& pts, int n) const {
    std::vector<std::vector<int>> chains;
    std::vector<int> sorted = pts;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::vector<int>> cur;
    for (int x : sorted) cur.push_back({x});
    for (int step = 0; step < n; ++step) {
        std::vector<std::vector<int>> next;
        for (auto& c : cur)
            for (int y : sorted)
                if (lt(c.back(), y)) {
                    auto d = c;
                    d.push_back(y);
                    next.push_back(std::move(d));
                }
        cur = std::move(next);
    }
    return cur;
}

int PosetSpace::height() const {
    int h = 0;
    std::vector<int> depth(n_, -1);
    // longest strict chain ending at x
    std::vector<int> order(n_);
    for (int i = 0; i < n_; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        int ca = 0, cb = 0;
        for (int z = 0; z < n_; ++z) {
            if (lt(z, a)) ++ca;
            if (lt(z, b)) ++cb;
        }
        return ca < cb;
    });
    for (int x : order) {
        depth[x] = 0;
        for (int z = 0; z < n_; ++z)
            if (lt(z, x) && depth[z] >= 0) depth[x] = std::max(depth[x], depth[z] + 1);
        h = std::max(h, depth[x]);
    }
    return h;
}

PosetPtr point_space() {
    static PosetPtr pt = PosetSpace::from_relations(1, {});
    return pt;
}

PosetPtr chain_space(int n) {
    std::vector<std::pair<int, int>> r;
    for (int i = 0; i + 1 < n; ++i) r.emplace_back(i, i + 1);
    return PosetSpace::from_relations(n, r);
}

bool SpaceMap::is_monotone() const {
    for (int x = 0; x < src->size(); ++x)
        for (int y = 0; y < src->size(); ++y)
            if (src->leq(x, y) && !tgt->leq(f[x], f[y])) return false;
    return true;
}

void SpaceMap::validate() const {
    if (int(f.size()) != src->size()) throw std::invalid_argument("point map has wrong length");
    for (int v : f)
        if (v < 0 || v >= tgt->size()) throw std::invalid_argument("point map value out of range");
    if (!is_monotone()) throw std::invalid_argument("point map is not monotone");
}

std::vector<int> SpaceMap::preimage(const std::vector<int>& pts) const {
    std::set<int> s(pts.begin(), pts.end());
    std::vector<int> r;
    for (int x = 0; x < src->size(); ++x)
        if (s.count(f[x])) r.push_back(x);
    return r;
}

bool SpaceMap::is_injective() const {
    std::set<int> seen;
    for (int v : f)
        if (!seen.insert(v).second) return false;
    return true;
}

bool SpaceMap::is_order_embedding() const {
    for (int x = 0; x < src->size(); ++x)
        for (int y = 0; y < src->size(); ++y)
            if (src->leq(x, y) != tgt->leq(f[x], f[y])) return false;
    return true;
}

bool SpaceMap::image_is_down_closed() const { return tgt->is_down_closed(image()); }

std::vector<int> SpaceMap::image() const {
    std::set<int> s(f.begin(), f.end());
    return std::vector<int>(s.begin(), s.end());
}

bool same_map(const SpaceMap& a, const SpaceMap& b) {
    return a.src == b.src && a.tgt == b.tgt && a.f == b.f;
}

SpaceMap identity_map(PosetPtr X) {
    SpaceMap m{X, X, {}};
    m.f.resize(X->size());
    for (int i = 0; i < X->size(); ++i) m.f[i] = i;
    return m;
}

SpaceMap compose(const SpaceMap& g, const SpaceMap& f) {
    if (f.tgt != g.src) throw std::invalid_argument("space maps not composable");
    SpaceMap m{f.src, g.tgt, {}};
    m.f.resize(f.src->size());
    for (int i = 0; i < f.src->size(); ++i) m.f[i] = g.f[f.f[i]];
    return m;
}

SpaceMap collapse_map(PosetPtr X) {
    SpaceMap m{X, point_space(), std::vector<int>(X->size(), 0)};
    return m;
}

Subspace open_subspace(PosetPtr X, std::vector<int> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (!X->is_up_closed(pts)) throw std::invalid_argument("subspace points are not up-closed");
    std::vector<std::pair<int, int>> rel;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = 0; j < pts.size(); ++j)
            if (i != j && X->leq(pts[i], pts[j])) rel.emplace_back(int(i), int(j));
    Subspace s;
    s.space = PosetSpace::from_relations(int(pts.size()), rel);
    s.points = pts;
    s.inclusion = SpaceMap{s.space, X, pts};
    return s;
}

ProductSpace product_space(const std::vector<PosetPtr>& factors) {
    if (factors.empty()) throw std::invalid_argument("product of empty family");
    ProductSpace P;
    P.factors = factors;
    std::vector<std::vector<int>> tuples{{}};
    for (auto& f : factors) {
        std::vector<std::vector<int>> next;
        for (auto& t : tuples)
            for (int x = 0; x < f->size(); ++x) {
                auto u = t;
                u.push_back(x);
                next.push_back(std::move(u));
            }
        tuples = std::move(next);
    }
    P.tuples = tuples;
    int n = int(tuples.size());
    std::vector<std::pair<int, int>> rel;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            bool le = true;
            for (size_t k = 0; k < factors.size(); ++k)
                if (!factors[k]->leq(tuples[i][k], tuples[j][k])) { le = false; break; }
            if (le) rel.emplace_back(i, j);
        }
    P.space = PosetSpace::from_relations(n, rel);
    for (size_t k = 0; k < factors.size(); ++k) {
        SpaceMap proj{P.space, factors[k], {}};
        proj.f.resize(n);
        for (int i = 0; i < n; ++i) proj.f[i] = tuples[i][k];
        P.projections.push_back(std::move(proj));
    }
    return P;
}

int ProductSpace::index_of(const std::vector<int>& tuple) const {
    int idx = 0;
    for (size_t k = 0; k < factors.size(); ++k) idx = idx * factors[k]->size() + tuple[k];
    return idx;
}

SimplicialComplex nerve(const PosetSpace& X, const std::vector<std::vector<int>>& cover) {
    std::vector<bool> covered(X.size(), false);
    for (auto& U : cover) {
        if (!X.is_up_closed(U)) throw std::invalid_argument("cover member is not open");
        for (int x : U) covered[x] = true;
    }
    for (int x = 0; x < X.size(); ++x)
        if (!covered[x]) throw std::invalid_argument("family does not cover the space");

    int n = int(cover.size());
    std::vector<int> vertices;
    for (int i = 0; i < n; ++i) vertices.push_back(i);
    std::vector<Simplex> simplexes;
    for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<int> inter;
        bool first = true;
        for (int i = 0; i < n; ++i) {
            if (!(mask & (1 << i))) continue;
            std::vector<int> u = cover[i];
            std::sort(u.begin(), u.end());
            if (first) {
                inter = u;
                first = false;
            } else {
                inter = intersect_sorted(inter, u);
            }
        }
        if (!inter.empty()) {
            Simplex s;
            for (int i = 0; i < n; ++i)
                if (mask & (1 << i)) s.push_back(i);
            simplexes.push_back(s);
        }
    }
    return SimplicialComplex::build(vertices, simplexes);
}

std::vector<int> intersect_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

}  // namespace dolbres
