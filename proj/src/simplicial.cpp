#include "dolbres/simplicial.hpp"

#include <algorithm>
#include <sstream>

namespace dolbres {

std::string simplex_to_string(const Simplex& s) {
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << "}";
    return os.str();
}

Simplex face(const Simplex& a, int j) {
    if (simplex_length(a) < 1) throw std::invalid_argument("face of a vertex would be empty");
    if (j < 0 || j > simplex_length(a)) throw std::out_of_range("face index out of range");
    Simplex r = a;
    r.erase(r.begin() + j);
    return r;
}

namespace {
bool simplex_order(const Simplex& a, const Simplex& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}
}  // namespace

SimplicialComplex SimplicialComplex::build(const std::vector<int>& vertices,
                                           const std::vector<Simplex>& simplexes) {
    SimplicialComplex k;
    k.vertices_ = vertices;
    std::sort(k.vertices_.begin(), k.vertices_.end());
    k.vertices_.erase(std::unique(k.vertices_.begin(), k.vertices_.end()), k.vertices_.end());
    std::set<int> vset(k.vertices_.begin(), k.vertices_.end());

    for (int v : k.vertices_) k.set_.insert({v});
    for (const Simplex& raw : simplexes) {
        if (raw.empty()) throw std::invalid_argument("empty simplex supplied");
        Simplex s = raw;
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        for (int v : s)
            if (!vset.count(v))
                throw std::invalid_argument("simplex vertex " + std::to_string(v) +
                                            " outside the vertex set");
        // subset closure over nonempty subsets
        int n = int(s.size());
        for (int mask = 1; mask < (1 << n); ++mask) {
            Simplex sub;
            for (int b = 0; b < n; ++b)
                if (mask & (1 << b)) sub.push_back(s[b]);
            k.set_.insert(sub);
        }
    }
    k.simplexes_.assign(k.set_.begin(), k.set_.end());
    std::sort(k.simplexes_.begin(), k.simplexes_.end(), simplex_order);
    return k;
}

int SimplicialComplex::dim() const {
    int d = -1;
    for (const auto& s : simplexes_) d = std::max(d, simplex_length(s));
    return d;
}

std::vector<Simplex> SimplicialComplex::simplexes_of_length(int len) const {
    std::vector<Simplex> out;
    for (const auto& s : simplexes_)
        if (simplex_length(s) == len) out.push_back(s);
    return out;
}

SimplicialComplex point_complex() { return SimplicialComplex::build({0}, {{0}}); }

Simplex SimplicialMorphism::apply(const Simplex& a) const {
    std::set<int> img;
    for (int v : a) img.insert(apply_vertex(v));
    return Simplex(img.begin(), img.end());
}

int SimplicialMorphism::apply_vertex(int v) const {
    auto it = vertex_map.find(v);
    if (it == vertex_map.end())
        throw std::invalid_argument("vertex " + std::to_string(v) + " has no image");
    return it->second;
}

bool SimplicialMorphism::is_non_decreasing() const {
    const auto& vs = source.vertices();
    for (size_t i = 0; i + 1 < vs.size(); ++i)
        if (apply_vertex(vs[i]) > apply_vertex(vs[i + 1])) return false;
    return true;
}

void SimplicialMorphism::validate() const {
    for (int v : source.vertices()) apply_vertex(v);
    for (const Simplex& s : source.simplexes())
        if (!target.contains(apply(s)))
            throw std::invalid_argument("image of simplex " + simplex_to_string(s) +
                                        " is not a simplex of the target");
}

SimplicialMorphism identity_morphism(const SimplicialComplex& k) {
    SimplicialMorphism f{k, k, {}};
    for (int v : k.vertices()) f.vertex_map[v] = v;
    return f;
}

SimplicialMorphism collapse_to_point(const SimplicialComplex& k) {
    SimplicialMorphism f{k, point_complex(), {}};
    for (int v : k.vertices()) f.vertex_map[v] = 0;
    return f;
}

SimplicialMorphism compose(const SimplicialMorphism& g, const SimplicialMorphism& f) {
    if (!(f.target == g.source)) throw std::invalid_argument("morphisms are not composable");
    SimplicialMorphism h{f.source, g.target, {}};
    for (int v : f.source.vertices()) h.vertex_map[v] = g.apply_vertex(f.apply_vertex(v));
    return h;
}

std::pair<SimplicialComplex, std::map<int, int>> reindex_for_monotonicity(
    const SimplicialComplex& k, const std::map<int, int>& vertex_map) {
    std::vector<int> vs = k.vertices();
    std::stable_sort(vs.begin(), vs.end(), [&](int a, int b) {
        int ia = vertex_map.at(a), ib = vertex_map.at(b);
        if (ia != ib) return ia < ib;
        return a < b;
    });
    std::map<int, int> relabel;
    for (size_t i = 0; i < vs.size(); ++i) relabel[vs[i]] = int(i);
    std::vector<Simplex> new_simplexes;
    for (const Simplex& s : k.simplexes()) {
        Simplex t;
        for (int v : s) t.push_back(relabel[v]);
        std::sort(t.begin(), t.end());
        new_simplexes.push_back(t);
    }
    std::vector<int> new_vertices;
    for (size_t i = 0; i < vs.size(); ++i) new_vertices.push_back(int(i));
    return {SimplicialComplex::build(new_vertices, new_simplexes), relabel};
}

std::vector<Simplex> fiber_simplexes(const SimplicialMorphism& f, const Simplex& gamma, int i) {
    if (!f.target.contains(gamma))
        throw std::invalid_argument("simplex " + simplex_to_string(gamma) +
                                    " is not in the target complex");
    std::vector<Simplex> out;
    for (const Simplex& a : f.source.simplexes())
        if (simplex_length(a) == simplex_length(gamma) + i && f.apply(a) == gamma)
            out.push_back(a);
    return out;
}

}  // namespace dolbres
