#include "curr/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "curr/errors.hpp"

namespace curr {

namespace {

std::uint64_t tuple_hash(std::span<const Index> verts) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (Index v : verts) {
        h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

EmbeddedComplex::EmbeddedComplex(int ambient_dim, std::vector<double> coords,
                                 const std::vector<std::vector<std::vector<Index>>>& simplices_by_dim,
                                 ComplexOptions opt)
    : ambient_dim_(ambient_dim), coords_(std::move(coords)), opt_(opt) {
    if (ambient_dim <= 0) throw InputError("ambient dimension must be positive");
    if (coords_.size() % static_cast<std::size_t>(ambient_dim) != 0)
        throw InputError("vertex coordinate array size is not a multiple of the ambient dimension");
    n_vertices_ = static_cast<Index>(coords_.size() / static_cast<std::size_t>(ambient_dim));

    int top = 0;
    for (std::size_t k = 0; k < simplices_by_dim.size(); ++k)
        if (!simplices_by_dim[k].empty()) top = static_cast<int>(k);
    if (top > kMaxSimplexDim) throw UnsupportedError("simplex dimension above supported maximum");
    dims_.resize(static_cast<std::size_t>(top) + 1);

    // dimension 0: every vertex
    dims_[0].count = n_vertices_;
    dims_[0].verts.resize(static_cast<std::size_t>(n_vertices_));
    for (Index v = 0; v < n_vertices_; ++v) dims_[0].verts[static_cast<std::size_t>(v)] = v;
    dims_[0].volumes.assign(static_cast<std::size_t>(n_vertices_), 1.0);

    // insert from the top down so faces are appended below their cofaces
    for (int k = top; k >= 1; --k) {
        if (static_cast<std::size_t>(k) >= simplices_by_dim.size()) continue;
        for (const auto& tuple : simplices_by_dim[static_cast<std::size_t>(k)]) {
            if (static_cast<int>(tuple.size()) != k + 1)
                throw InputError("simplex tuple size does not match its dimension");
            std::vector<Index> sorted(tuple.begin(), tuple.end());
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw InputError("simplex has a repeated vertex");
            for (Index v : sorted)
                if (v < 0 || v >= n_vertices_) throw InputError("simplex vertex index out of range");
            insert_simplex(k, sorted);
        }
    }

    // close under faces
    for (int k = top; k >= 2; --k) {
        auto& dd = dims_[static_cast<std::size_t>(k)];
        dd.face_ids.resize(dd.verts.size());
        for (Index s = 0; s < dd.count; ++s) {
            std::vector<Index> face(static_cast<std::size_t>(k));
            auto verts = simplex_vertices(k, s);
            for (int omit = 0; omit <= k; ++omit) {
                std::size_t w = 0;
                for (int i = 0; i <= k; ++i)
                    if (i != omit) face[w++] = verts[static_cast<std::size_t>(i)];
                Index f = insert_simplex(k - 1, face);
                dd.face_ids[static_cast<std::size_t>(s) * (static_cast<std::size_t>(k) + 1) +
                            static_cast<std::size_t>(omit)] = f;
            }
        }
    }
    if (top >= 1) {
        auto& d1 = dims_[1];
        d1.face_ids.resize(d1.verts.size());
        for (Index s = 0; s < d1.count; ++s) {
            auto verts = simplex_vertices(1, s);
            d1.face_ids[static_cast<std::size_t>(s) * 2 + 0] = verts[1]; // omit v0
            d1.face_ids[static_cast<std::size_t>(s) * 2 + 1] = verts[0]; // omit v1
        }
    }

    // cofaces
    for (int k = 0; k < top; ++k) {
        auto& lower = dims_[static_cast<std::size_t>(k)];
        const auto& upper = dims_[static_cast<std::size_t>(k) + 1];
        std::vector<Index> counts(static_cast<std::size_t>(lower.count), 0);
        for (std::size_t i = 0; i < upper.face_ids.size(); ++i)
            counts[static_cast<std::size_t>(upper.face_ids[i])]++;
        lower.coface_offsets.assign(static_cast<std::size_t>(lower.count) + 1, 0);
        for (Index s = 0; s < lower.count; ++s)
            lower.coface_offsets[static_cast<std::size_t>(s) + 1] =
                lower.coface_offsets[static_cast<std::size_t>(s)] + counts[static_cast<std::size_t>(s)];
        lower.coface_ids.resize(static_cast<std::size_t>(lower.coface_offsets.back()));
        std::vector<Index> cursor(lower.coface_offsets.begin(), lower.coface_offsets.end() - 1);
        const std::size_t per = static_cast<std::size_t>(k) + 2;
        for (Index s = 0; s < upper.count; ++s)
            for (std::size_t j = 0; j < per; ++j) {
                Index f = upper.face_ids[static_cast<std::size_t>(s) * per + j];
                lower.coface_ids[static_cast<std::size_t>(cursor[static_cast<std::size_t>(f)]++)] = s;
            }
    }

    // volumes + nondegeneracy
    for (int k = 1; k <= top; ++k) {
        auto& dd = dims_[static_cast<std::size_t>(k)];
        dd.volumes.resize(static_cast<std::size_t>(dd.count));
        for (Index s = 0; s < dd.count; ++s) {
            const double vol = gram_volume(edge_matrix(k, s));
            if (vol <= opt_.degeneracy_eps) throw GeometryError("degenerate simplex in complex (dim " +
                                                                std::to_string(k) + ", id " +
                                                                std::to_string(s) + ")");
            dd.volumes[static_cast<std::size_t>(s)] = vol;
        }
    }

    bbox_lo_ = Vec::Constant(ambient_dim_, std::numeric_limits<double>::infinity());
    bbox_hi_ = Vec::Constant(ambient_dim_, -std::numeric_limits<double>::infinity());
    for (Index v = 0; v < n_vertices_; ++v) {
        auto p = vertex(v);
        for (int i = 0; i < ambient_dim_; ++i) {
            bbox_lo_[i] = std::min(bbox_lo_[i], p[i]);
            bbox_hi_[i] = std::max(bbox_hi_[i], p[i]);
        }
    }
    bbox_diameter_ = n_vertices_ ? (bbox_hi_ - bbox_lo_).norm() : 0.0;
}

Index EmbeddedComplex::insert_simplex(int dim, std::span<const Index> sorted_verts) {
    auto& dd = dims_[static_cast<std::size_t>(dim)];
    if (dim == 0) return sorted_verts[0];
    const std::uint64_t h = tuple_hash(sorted_verts);
    auto it = dd.lookup.find(h);
    const std::size_t per = static_cast<std::size_t>(dim) + 1;
    if (it != dd.lookup.end()) {
        for (Index cand : it->second) {
            bool same = true;
            for (std::size_t i = 0; i < per; ++i)
                if (dd.verts[static_cast<std::size_t>(cand) * per + i] != sorted_verts[i]) {
                    same = false;
                    break;
                }
            if (same) return cand;
        }
    }
    const Index id = dd.count++;
    dd.verts.insert(dd.verts.end(), sorted_verts.begin(), sorted_verts.end());
    dd.lookup[h].push_back(id);
    return id;
}

Index EmbeddedComplex::simplex_count(int dim) const {
    if (dim < 0 || dim > top_dim()) return 0;
    return dims_[static_cast<std::size_t>(dim)].count;
}

std::span<const Index> EmbeddedComplex::simplex_vertices(int dim, Index s) const {
    if (dim < 0 || dim > top_dim() || s < 0 || s >= simplex_count(dim))
        throw InputError("unknown simplex id (dim " + std::to_string(dim) + ", id " + std::to_string(s) + ")");
    const auto& dd = dims_[static_cast<std::size_t>(dim)];
    const std::size_t per = static_cast<std::size_t>(dim) + 1;
    return {dd.verts.data() + static_cast<std::size_t>(s) * per, per};
}

std::span<const Index> EmbeddedComplex::faces(int dim, Index s) const {
    if (dim < 1 || dim > top_dim() || s < 0 || s >= simplex_count(dim))
        throw InputError("faces: unknown simplex id");
    const auto& dd = dims_[static_cast<std::size_t>(dim)];
    const std::size_t per = static_cast<std::size_t>(dim) + 1;
    return {dd.face_ids.data() + static_cast<std::size_t>(s) * per, per};
}

std::span<const Index> EmbeddedComplex::cofaces(int dim, Index s) const {
    if (dim < 0 || dim > top_dim() || s < 0 || s >= simplex_count(dim))
        throw InputError("cofaces: unknown simplex id");
    if (dim == top_dim()) return {};
    const auto& dd = dims_[static_cast<std::size_t>(dim)];
    const auto lo = static_cast<std::size_t>(dd.coface_offsets[static_cast<std::size_t>(s)]);
    const auto hi = static_cast<std::size_t>(dd.coface_offsets[static_cast<std::size_t>(s) + 1]);
    return {dd.coface_ids.data() + lo, hi - lo};
}

Index EmbeddedComplex::find_simplex(int dim, std::span<const Index> verts) const {
    if (dim < 0 || dim > top_dim()) return -1;
    if (dim == 0) return (verts[0] >= 0 && verts[0] < n_vertices_) ? verts[0] : -1;
    std::vector<Index> sorted(verts.begin(), verts.end());
    std::sort(sorted.begin(), sorted.end());
    const auto& dd = dims_[static_cast<std::size_t>(dim)];
    auto it = dd.lookup.find(tuple_hash(sorted));
    if (it == dd.lookup.end()) return -1;
    const std::size_t per = static_cast<std::size_t>(dim) + 1;
    for (Index cand : it->second) {
        bool same = true;
        for (std::size_t i = 0; i < per; ++i)
            if (dd.verts[static_cast<std::size_t>(cand) * per + i] != sorted[i]) {
                same = false;
                break;
            }
        if (same) return cand;
    }
    return -1;
}

double EmbeddedComplex::volume(int dim, Index s) const {
    if (dim < 0 || dim > top_dim() || s < 0 || s >= simplex_count(dim))
        throw InputError("volume: unknown simplex id (dim " + std::to_string(dim) + ", id " +
                         std::to_string(s) + ")");
    return dims_[static_cast<std::size_t>(dim)].volumes[static_cast<std::size_t>(s)];
}

Mat EmbeddedComplex::vertex_matrix(int dim, Index s) const {
    auto verts = simplex_vertices(dim, s);
    Mat m(ambient_dim_, static_cast<Eigen::Index>(verts.size()));
    for (std::size_t i = 0; i < verts.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vertex(verts[i]);
    return m;
}

Mat EmbeddedComplex::edge_matrix(int dim, Index s) const {
    auto verts = simplex_vertices(dim, s);
    Mat m(ambient_dim_, dim);
    auto v0 = vertex(verts[0]);
    for (int i = 1; i <= dim; ++i)
        m.col(i - 1) = Vec(vertex(verts[static_cast<std::size_t>(i)])) - Vec(v0);
    return m;
}

Vec EmbeddedComplex::barycenter(int dim, Index s) const {
    auto verts = simplex_vertices(dim, s);
    Vec b = Vec::Zero(ambient_dim_);
    for (Index v : verts) b += Vec(vertex(v));
    return b / static_cast<double>(verts.size());
}

std::optional<EmbeddedComplex::Location> EmbeddedComplex::locate(const Vec& p, double snap_eps) const {
    std::optional<Location> best;
    for (int dim = top_dim(); dim >= 0; --dim) {
        if (simplex_count(dim) == 0) continue;
        for (Index s = 0; s < simplex_count(dim); ++s) {
            if (!is_maximal(dim, s)) continue;
            const double d = point_simplex_distance(p, vertex_matrix(dim, s));
            if (d <= snap_eps && (!best || d < best->dist)) best = Location{dim, s, d};
        }
    }
    return best;
}

std::shared_ptr<EmbeddedComplex> make_complex(int ambient_dim, std::vector<double> coords,
                                              std::vector<std::vector<std::vector<Index>>> simplices,
                                              ComplexOptions opt) {
    return std::make_shared<EmbeddedComplex>(ambient_dim, std::move(coords), simplices, opt);
}

// ---------------------------------------------------------------------------
// SimplexGrid

SimplexGrid::SimplexGrid(const EmbeddedComplex& c, int dim) : complex_(c), dim_(dim) {
    grid_dim_ = std::min(c.ambient_dim(), 3);
    const Index n = c.simplex_count(dim);
    auto [lo, hi] = c.bbox();
    lo_ = lo;
    hi_ = hi;
    const double target = std::pow(static_cast<double>(std::max<Index>(n, 1)), 1.0 / grid_dim_);
    int res = std::clamp(static_cast<int>(target), 1, 512);
    std::size_t total = 1;
    for (int i = 0; i < grid_dim_; ++i) {
        res_[static_cast<std::size_t>(i)] = res;
        total *= static_cast<std::size_t>(res);
    }
    cells_.resize(total);
    stamp_.assign(static_cast<std::size_t>(n), 0);
    cell_ = Vec::Ones(grid_dim_);
    for (int i = 0; i < grid_dim_; ++i) {
        double w = hi_[i] - lo_[i];
        cell_[i] = (w > 0) ? w / res : 1.0;
    }
    for (Index s = 0; s < n; ++s) {
        Mat vm = c.vertex_matrix(dim, s);
        Vec blo = vm.rowwise().minCoeff();
        Vec bhi = vm.rowwise().maxCoeff();
        std::array<int, 3> clo{0, 0, 0}, chi{0, 0, 0};
        clamp_cell(blo, clo);
        clamp_cell(bhi, chi);
        std::array<int, 3> it = clo;
        while (true) {
            cells_[cell_index(it)].push_back(s);
            int axis = 0;
            while (axis < grid_dim_) {
                if (it[static_cast<std::size_t>(axis)] < chi[static_cast<std::size_t>(axis)]) {
                    ++it[static_cast<std::size_t>(axis)];
                    for (int a = 0; a < axis; ++a) it[static_cast<std::size_t>(a)] = clo[static_cast<std::size_t>(a)];
                    break;
                }
                ++axis;
            }
            if (axis == grid_dim_) break;
        }
    }
}

std::size_t SimplexGrid::cell_index(const std::array<int, 3>& c) const {
    std::size_t idx = 0;
    for (int i = grid_dim_ - 1; i >= 0; --i)
        idx = idx * static_cast<std::size_t>(res_[static_cast<std::size_t>(i)]) +
              static_cast<std::size_t>(c[static_cast<std::size_t>(i)]);
    return idx;
}

void SimplexGrid::clamp_cell(const Vec& p, std::array<int, 3>& c) const {
    for (int i = 0; i < grid_dim_; ++i) {
        int k = static_cast<int>(std::floor((p[i] - lo_[i]) / cell_[i]));
        c[static_cast<std::size_t>(i)] = std::clamp(k, 0, res_[static_cast<std::size_t>(i)] - 1);
    }
}

void SimplexGrid::candidates_point(const Vec& p, std::vector<Index>& out) const {
    candidates_box(p, p, out);
}

void SimplexGrid::candidates_box(const Vec& lo, const Vec& hi, std::vector<Index>& out) const {
    out.clear();
    if (cells_.empty()) return;
    ++epoch_;
    if (epoch_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        epoch_ = 1;
    }
    std::array<int, 3> clo{0, 0, 0}, chi{0, 0, 0};
    clamp_cell(lo, clo);
    clamp_cell(hi, chi);
    std::array<int, 3> it = clo;
    while (true) {
        for (Index s : cells_[cell_index(it)]) {
            if (stamp_[static_cast<std::size_t>(s)] != epoch_) {
                stamp_[static_cast<std::size_t>(s)] = epoch_;
                out.push_back(s);
            }
        }
        int axis = 0;
        while (axis < grid_dim_) {
            if (it[static_cast<std::size_t>(axis)] < chi[static_cast<std::size_t>(axis)]) {
                ++it[static_cast<std::size_t>(axis)];
                for (int a = 0; a < axis; ++a) it[static_cast<std::size_t>(a)] = clo[static_cast<std::size_t>(a)];
                break;
            }
            ++axis;
        }
        if (axis == grid_dim_) break;
    }
}

// ---------------------------------------------------------------------------
// MetricMode / GeodesicGraph

MetricMode MetricMode::length(int refinement) {
    if (refinement < 1) throw InputError("length_graph refinement must be >= 1");
    return {Kind::length_graph, refinement};
}

GeodesicGraph::GeodesicGraph(const EmbeddedComplex& c, int refinement)
    : complex_(c), refinement_(refinement) {
    if (refinement < 1) throw InputError("geodesic refinement must be >= 1");
    const Index V = c.vertex_count();
    const Index E = c.simplex_count(1);
    n_nodes_ = static_cast<std::size_t>(V) + static_cast<std::size_t>(E) * static_cast<std::size_t>(refinement_);

    // enumerate maximal simplices of dim >= 1
    std::vector<std::pair<int, Index>> maximal;
    for (int k = 1; k <= c.top_dim(); ++k)
        for (Index s = 0; s < c.simplex_count(k); ++s)
            if (c.is_maximal(k, s)) maximal.emplace_back(k, s);

    hosts_of_vertex_.assign(static_cast<std::size_t>(V), {});
    hosts_of_edge_.assign(static_cast<std::size_t>(E), {});
    max_nodes_.resize(maximal.size());

    // edges of a simplex, found by walking the face lattice
    auto collect_edges = [&](int k, Index s, std::vector<Index>& edges_out) {
        if (k == 1) {
            edges_out.push_back(s);
            return;
        }
        std::vector<std::pair<int, Index>> stack{{k, s}};
        std::vector<Index> seen;
        while (!stack.empty()) {
            auto [dk, ds] = stack.back();
            stack.pop_back();
            if (dk == 1) {
                if (std::find(edges_out.begin(), edges_out.end(), ds) == edges_out.end())
                    edges_out.push_back(ds);
                continue;
            }
            for (Index f : c.faces(dk, ds)) stack.emplace_back(dk - 1, f);
        }
    };

    std::vector<Index> edge_scratch;
    for (std::size_t m = 0; m < maximal.size(); ++m) {
        auto [k, s] = maximal[m];
        max_lookup_[(static_cast<std::uint64_t>(k) << 32) | static_cast<std::uint32_t>(s)] =
            static_cast<Index>(m);
        auto verts = c.simplex_vertices(k, s);
        auto& nodes = max_nodes_[m];
        for (Index v : verts) {
            nodes.push_back(static_cast<std::uint32_t>(v));
            hosts_of_vertex_[static_cast<std::size_t>(v)].push_back(static_cast<Index>(m));
        }
        edge_scratch.clear();
        collect_edges(k, s, edge_scratch);
        for (Index e : edge_scratch) {
            hosts_of_edge_[static_cast<std::size_t>(e)].push_back(static_cast<Index>(m));
            const std::size_t base = static_cast<std::size_t>(V) +
                                     static_cast<std::size_t>(e) * static_cast<std::size_t>(refinement_);
            for (int j = 0; j < refinement_; ++j) nodes.push_back(static_cast<std::uint32_t>(base + static_cast<std::size_t>(j)));
        }
    }
}

Vec GeodesicGraph::node_position(std::size_t node) const {
    const auto V = static_cast<std::size_t>(complex_.vertex_count());
    if (node < V) return complex_.vertex_vec(static_cast<Index>(node));
    const std::size_t rest = node - V;
    const Index e = static_cast<Index>(rest / static_cast<std::size_t>(refinement_));
    const int j = static_cast<int>(rest % static_cast<std::size_t>(refinement_));
    auto verts = complex_.simplex_vertices(1, e);
    const double t = static_cast<double>(j + 1) / static_cast<double>(refinement_ + 1);
    return (1.0 - t) * complex_.vertex_vec(verts[0]) + t * complex_.vertex_vec(verts[1]);
}

std::span<const Index> GeodesicGraph::node_hosts(std::size_t node) const {
    const auto V = static_cast<std::size_t>(complex_.vertex_count());
    if (node < V) {
        const auto& h = hosts_of_vertex_[node];
        return {h.data(), h.size()};
    }
    const std::size_t e = (node - V) / static_cast<std::size_t>(refinement_);
    const auto& h = hosts_of_edge_[e];
    return {h.data(), h.size()};
}

void GeodesicGraph::run_dijkstra(std::vector<double>& dist,
                                 const std::vector<std::pair<std::size_t, double>>& sources) const {
    dist.assign(n_nodes_, infinity());
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (auto [node, d0] : sources) {
        if (d0 < dist[node]) {
            dist[node] = d0;
            heap.emplace(d0, node);
        }
    }
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        const Vec pu = node_position(u);
        for (Index m : node_hosts(u)) {
            for (std::uint32_t w : max_nodes_[static_cast<std::size_t>(m)]) {
                if (w == u) continue;
                const double nd = d + (node_position(w) - pu).norm();
                if (nd < dist[w]) {
                    dist[w] = nd;
                    heap.emplace(nd, w);
                }
            }
        }
    }
}

std::vector<double> GeodesicGraph::distances_from(std::size_t source) const {
    std::vector<double> dist;
    run_dijkstra(dist, {{source, 0.0}});
    return dist;
}

std::vector<Index> GeodesicGraph::hosts_for_location(const EmbeddedComplex::Location& loc) const {
    // maximal simplices containing the located simplex
    if (loc.dim == 0) return hosts_of_vertex_[static_cast<std::size_t>(loc.simplex)];
    if (loc.dim == 1) return hosts_of_edge_[static_cast<std::size_t>(loc.simplex)];
    auto it = max_lookup_.find((static_cast<std::uint64_t>(loc.dim) << 32) |
                               static_cast<std::uint32_t>(loc.simplex));
    if (it != max_lookup_.end()) return {it->second};
    return {};
}

GeodesicResult GeodesicGraph::point_distance(const Vec& a, const Vec& b, double snap_eps) const {
    auto la = complex_.locate(a, snap_eps);
    auto lb = complex_.locate(b, snap_eps);
    if (!la || !lb) throw InputError("geodesic_distance: point lies off the carrier");

    std::vector<std::pair<std::size_t, double>> sources;
    for (Index m : hosts_for_location(*la))
        for (std::uint32_t w : max_nodes_[static_cast<std::size_t>(m)])
            sources.emplace_back(w, (node_position(w) - a).norm());
    if (sources.empty()) {
        // isolated vertex
        const Index v = complex_.simplex_vertices(la->dim, la->simplex)[0];
        sources.emplace_back(static_cast<std::size_t>(v), (complex_.vertex_vec(v) - a).norm());
    }

    std::vector<double> dist;
    run_dijkstra(dist, sources);

    double best = infinity();
    auto hb = hosts_for_location(*lb);
    for (Index m : hb)
        for (std::uint32_t w : max_nodes_[static_cast<std::size_t>(m)])
            if (dist[w] < infinity()) best = std::min(best, dist[w] + (node_position(w) - b).norm());
    if (hb.empty()) {
        const Index v = complex_.simplex_vertices(lb->dim, lb->simplex)[0];
        if (dist[static_cast<std::size_t>(v)] < infinity())
            best = std::min(best, dist[static_cast<std::size_t>(v)] + (complex_.vertex_vec(v) - b).norm());
    }
    // direct segment if both points share a maximal simplex
    for (Index ma : hosts_for_location(*la))
        for (Index mb : hosts_for_location(*lb))
            if (ma == mb) best = std::min(best, (a - b).norm());
    if (la->dim == lb->dim && la->simplex == lb->simplex) best = std::min(best, (a - b).norm());
    return {best, best < infinity()};
}

GeodesicResult geodesic_distance(const EmbeddedComplex& c, MetricMode mode, const Vec& a, const Vec& b,
                                 double snap_eps) {
    if (mode.kind == MetricMode::Kind::ambient_euclidean) {
        if (!c.locate(a, snap_eps) || !c.locate(b, snap_eps))
            throw InputError("geodesic_distance: point lies off the carrier");
        return {(a - b).norm(), true};
    }
    GeodesicGraph g(c, mode.refinement);
    return g.point_distance(a, b, snap_eps);
}

} // namespace curr
