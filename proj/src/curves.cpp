#include "curr/curves.hpp"

#include <algorithm>
#include <map>

#include "curr/errors.hpp"

namespace curr {

namespace {

struct Multigraph {
    // arcs grouped by tail vertex, each arc a (head, remaining count)
    std::map<Index, std::map<Index, Mult>> out;
    std::map<Index, Mult> balance; // boundary coefficient: +1 sinks, -1 sources

    void add_arc(Index a, Index b, Mult count) {
        out[a][b] += count;
        balance[b] += count;
        balance[a] -= count;
    }

    bool take_smallest_arc(Index from, Index& to) {
        auto it = out.find(from);
        if (it == out.end()) return false;
        for (auto& [head, cnt] : it->second) {
            if (cnt > 0) {
                to = head;
                --cnt;
                return true;
            }
        }
        return false;
    }
};

double path_length(const EmbeddedComplex& c, const std::vector<Index>& path, bool closed) {
    double len = 0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        len += (c.vertex_vec(path[i + 1]) - Vec(c.vertex_vec(path[i]))).norm();
    if (closed && path.size() > 1)
        len += (c.vertex_vec(path.front()) - Vec(c.vertex_vec(path.back()))).norm();
    return len;
}

/// Walk from `start`, erasing loops as they close, until no unused out-arc
/// remains. Returns the injective leftover path; extracted loops are appended
/// to `loops`.
std::vector<Index> loop_erased_walk(Multigraph& g, Index start,
                                    std::vector<std::vector<Index>>& loops) {
    std::vector<Index> path{start};
    std::map<Index, std::size_t> pos{{start, 0}};
    Index cur = start;
    Index next;
    while (g.take_smallest_arc(cur, next)) {
        auto it = pos.find(next);
        if (it != pos.end()) {
            // close the cycle path[it->second..end]
            std::vector<Index> loop(path.begin() + static_cast<std::ptrdiff_t>(it->second), path.end());
            for (std::size_t i = it->second + 1; i < path.size(); ++i) pos.erase(path[i]);
            path.resize(it->second + 1);
            loops.push_back(std::move(loop));
        } else {
            path.push_back(next);
            pos[next] = path.size() - 1;
        }
        cur = next;
    }
    return path;
}

} // namespace

CurveDecomposition decompose_1current(const SimplicialCurrent& T) {
    if (T.dim() != 1) throw InputError("decompose_1current expects a 1-dimensional current");
    const auto& c = T.complex();

    Multigraph g;
    for (auto [e, m] : T.entries()) {
        auto verts = c.simplex_vertices(1, e);
        if (m > 0)
            g.add_arc(verts[0], verts[1], m);
        else
            g.add_arc(verts[1], verts[0], -m);
    }

    CurveDecomposition out;

    // sources first: vertices with negative balance (boundary -1 per unit)
    while (true) {
        Index start = -1;
        for (auto& [v, b] : g.balance)
            if (b < 0) {
                start = v;
                break;
            }
        if (start < 0) break;
        std::vector<Index> path = loop_erased_walk(g, start, out.loops);
        if (path.size() < 2)
            throw GeometryError("1-current decomposition: dangling boundary demand"); // unreachable for valid chains
        g.balance[path.front()] += 1;
        g.balance[path.back()] -= 1;
        if (g.balance[path.front()] == 0) g.balance.erase(path.front());
        auto itb = g.balance.find(path.back());
        if (itb != g.balance.end() && itb->second == 0) g.balance.erase(itb);
        out.curves.push_back(std::move(path));
    }

    // leftover arcs form cycles
    while (true) {
        Index start = -1;
        for (auto& [v, heads] : g.out) {
            for (auto& [h, cnt] : heads)
                if (cnt > 0) {
                    start = v;
                    break;
                }
            if (start >= 0) break;
        }
        if (start < 0) break;
        std::vector<Index> path = loop_erased_walk(g, start, out.loops);
        if (path.size() > 1)
            throw GeometryError("1-current decomposition: open walk in the cycle phase");
    }

    auto by_length = [&](const std::vector<Index>& a, const std::vector<Index>& b, bool closed) {
        const double la = path_length(c, a, closed);
        const double lb = path_length(c, b, closed);
        if (la != lb) return la > lb;
        return a.front() < b.front();
    };
    std::sort(out.curves.begin(), out.curves.end(),
              [&](const auto& a, const auto& b) { return by_length(a, b, false); });
    std::sort(out.loops.begin(), out.loops.end(),
              [&](const auto& a, const auto& b) { return by_length(a, b, true); });

    for (const auto& p : out.curves) out.curve_mass += path_length(c, p, false);
    for (const auto& p : out.loops) out.loop_mass += path_length(c, p, true);
    return out;
}

SimplicialCurrent recompose(const std::shared_ptr<const EmbeddedComplex>& complex,
                            const CurveDecomposition& d) {
    const EmbeddedComplex& c = *complex;
    SimplicialCurrent out(complex, 1);
    auto add_arc = [&](Index a, Index b) {
        Index e = c.find_simplex(1, std::array<Index, 2>{a, b});
        if (e < 0) throw InputError("recompose: path uses a segment that is not an edge");
        out.add(e, a < b ? 1 : -1);
    };
    for (const auto& p : d.curves)
        for (std::size_t i = 0; i + 1 < p.size(); ++i) add_arc(p[i], p[i + 1]);
    for (const auto& p : d.loops) {
        for (std::size_t i = 0; i + 1 < p.size(); ++i) add_arc(p[i], p[i + 1]);
        if (p.size() > 1) add_arc(p.back(), p.front());
    }
    return out;
}

GeodesicLemmaReport geodesic_lemma_check(const SimplicialCurrent& T, const Vec& a, const Vec& b,
                                         MetricMode metric, double tol) {
    if (T.dim() != 1) throw InputError("geodesic_lemma_check expects a 1-dimensional current");
    const auto& c = T.complex();

    SimplicialCurrent bd = boundary(T);
    Index va = -1, vb = -1;
    for (auto [v, m] : bd.entries()) {
        if (m == -1 && va < 0)
            va = v;
        else if (m == 1 && vb < 0)
            vb = v;
        else
            throw HypothesisError("geodesic_lemma_check: boundary is not delta_b - delta_a");
    }
    if (va < 0 || vb < 0) throw HypothesisError("geodesic_lemma_check: boundary is not delta_b - delta_a");
    const double snap = 1e-9 * std::max(1.0, c.bbox_diameter());
    if ((c.vertex_vec(va) - a).norm() > snap || (c.vertex_vec(vb) - b).norm() > snap)
        throw HypothesisError("geodesic_lemma_check: boundary points do not match the given endpoints");

    GeodesicLemmaReport r;
    r.mass = mass(T).total;
    GeodesicResult d = geodesic_distance(c, metric, a, b);
    r.distance = d.distance;
    r.distance_reachable = d.reachable;

    CurveDecomposition dec = decompose_1current(T);
    const bool single_curve = dec.curves.size() == 1 && dec.loops.empty();
    r.is_geodesic_segment =
        d.reachable && single_curve && std::abs(r.mass - r.distance) < tol;
    return r;
}

} // namespace curr
