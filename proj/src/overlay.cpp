#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "curr/errors.hpp"
#include "curr/flatnorm.hpp"

namespace curr {

namespace {

struct Tri2 {
    Eigen::Vector2d p[3];
    double area_signed = 0;
};

Tri2 triangle_of(const EmbeddedComplex& c, Index t) {
    Tri2 out;
    auto verts = c.simplex_vertices(2, t);
    for (int i = 0; i < 3; ++i) {
        auto p = c.vertex(verts[static_cast<std::size_t>(i)]);
        out.p[i] = Eigen::Vector2d(p[0], p[1]);
    }
    out.area_signed = 0.5 * cross2(out.p[0], out.p[1], out.p[2]);
    return out;
}

/// Clip segment to a ccw triangle; returns false when the intersection is
/// empty or a single point.
bool clip_segment_to_triangle(const Seg2& seg, const Tri2& tri, Seg2& out) {
    double tlo = 0.0, thi = 1.0;
    const Eigen::Vector2d d = seg.b - seg.a;
    for (int i = 0; i < 3; ++i) {
        const Eigen::Vector2d& a = tri.p[i];
        const Eigen::Vector2d& b = tri.p[(i + 1) % 3];
        const Eigen::Vector2d n(-(b.y() - a.y()), b.x() - a.x()); // inward for ccw
        const double fa = n.dot(seg.a - a);
        const double fd = n.dot(d);
        if (std::abs(fd) < 1e-300) {
            if (fa < 0) return false;
            continue;
        }
        const double t = -fa / fd;
        if (fd > 0)
            tlo = std::max(tlo, t);
        else
            thi = std::min(thi, t);
        if (tlo >= thi) return false;
    }
    out.a = seg.a + tlo * d;
    out.b = seg.a + thi * d;
    return (out.b - out.a).norm() > 0;
}

struct Cell {
    Eigen::Vector2d v[3];
    Index from1 = -1, from2 = -1;
};

struct PointLocator {
    const EmbeddedComplex* c = nullptr;
    std::unique_ptr<SimplexGrid> grid;
    mutable std::vector<Index> scratch;

    explicit PointLocator(const EmbeddedComplex& cc) : c(&cc) {
        if (cc.top_dim() >= 2 && cc.simplex_count(2) > 0)
            grid = std::make_unique<SimplexGrid>(cc, 2);
    }

    Index find(const Eigen::Vector2d& q) const {
        if (!grid) return -1;
        Vec p = make_vec({q.x(), q.y()});
        grid->candidates_point(p, scratch);
        for (Index t : scratch) {
            auto verts = c->simplex_vertices(2, t);
            Eigen::Vector2d a(c->vertex(verts[0])[0], c->vertex(verts[0])[1]);
            Eigen::Vector2d b(c->vertex(verts[1])[0], c->vertex(verts[1])[1]);
            Eigen::Vector2d d(c->vertex(verts[2])[0], c->vertex(verts[2])[1]);
            const double s = cross2(a, b, d);
            if (s == 0) continue;
            const double w0 = cross2(b, d, q) / s;
            const double w1 = cross2(d, a, q) / s;
            const double w2 = cross2(a, b, q) / s;
            if (w0 >= -1e-12 && w1 >= -1e-12 && w2 >= -1e-12) return t;
        }
        return -1;
    }
};

/// Slab decomposition of one triangle constrained by the clipped segments of
/// the other complex. Appends cells covering the triangle exactly.
void decompose_triangle(const Tri2& tri, const std::vector<Seg2>& other_segs,
                        std::vector<Cell>& cells, std::vector<double>& cell_areas,
                        double& covered_area) {
    struct ActiveSeg {
        Eigen::Vector2d a, b; // a.x <= b.x
        double y_at(double x) const {
            const double t = (x - a.x()) / (b.x() - a.x());
            return a.y() + t * (b.y() - a.y());
        }
    };

    std::vector<ActiveSeg> segs;
    std::vector<double> xs;
    auto push_seg = [&](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
        ActiveSeg s;
        if (a.x() <= b.x()) {
            s.a = a;
            s.b = b;
        } else {
            s.a = b;
            s.b = a;
        }
        xs.push_back(s.a.x());
        xs.push_back(s.b.x());
        segs.push_back(s);
    };
    for (int i = 0; i < 3; ++i) push_seg(tri.p[i], tri.p[(i + 1) % 3]);
    for (const auto& s : other_segs) push_seg(s.a, s.b);

    // breakpoints at pairwise crossings
    std::vector<double> params;
    for (std::size_t i = 0; i < segs.size(); ++i)
        for (std::size_t j = i + 1; j < segs.size(); ++j) {
            params.clear();
            segment_intersection_params({segs[i].a, segs[i].b}, {segs[j].a, segs[j].b}, params);
            for (double u : params)
                xs.push_back(segs[i].a.x() + u * (segs[i].b.x() - segs[i].a.x()));
        }

    std::sort(xs.begin(), xs.end());
    const double span = xs.empty() ? 0.0 : (xs.back() - xs.front());
    const double xtol = std::max(span, 1e-12) * 1e-13;
    xs.erase(std::unique(xs.begin(), xs.end(), [&](double a, double b) { return b - a <= xtol; }),
             xs.end());

    const double tri_area = std::abs(tri.area_signed);
    const double area_floor = 1e-14 * std::max(tri_area, 1e-30);

    struct Band {
        double yl, yr;
    };
    std::vector<std::pair<double, const ActiveSeg*>> active;
    covered_area = 0;
    for (std::size_t si = 0; si + 1 < xs.size(); ++si) {
        const double xl = xs[si], xr = xs[si + 1];
        if (xr - xl <= xtol) continue;
        const double xm = 0.5 * (xl + xr);
        active.clear();
        for (const auto& s : segs)
            if (s.a.x() <= xl + xtol && s.b.x() >= xr - xtol && s.b.x() > s.a.x())
                active.emplace_back(s.y_at(xm), &s);
        std::sort(active.begin(), active.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 0; i + 1 < active.size(); ++i) {
            const ActiveSeg* lo = active[i].second;
            const ActiveSeg* hi = active[i + 1].second;
            const double ymid = 0.5 * (active[i].first + active[i + 1].first);
            // midpoint of the band must lie inside the triangle
            const Eigen::Vector2d probe(xm, ymid);
            const double s = 2.0 * tri.area_signed;
            const double w0 = cross2(tri.p[1], tri.p[2], probe) / s;
            const double w1 = cross2(tri.p[2], tri.p[0], probe) / s;
            const double w2 = cross2(tri.p[0], tri.p[1], probe) / s;
            if (w0 < -1e-12 || w1 < -1e-12 || w2 < -1e-12) continue;
            const Eigen::Vector2d A(xl, lo->y_at(xl));
            const Eigen::Vector2d B(xr, lo->y_at(xr));
            const Eigen::Vector2d C(xr, hi->y_at(xr));
            const Eigen::Vector2d D(xl, hi->y_at(xl));
            const Eigen::Vector2d tris[2][3] = {{A, B, C}, {A, C, D}};
            for (auto& tv : tris) {
                const double area = 0.5 * std::abs(cross2(tv[0], tv[1], tv[2]));
                if (area <= area_floor) continue;
                Cell cell;
                cell.v[0] = tv[0];
                cell.v[1] = tv[1];
                cell.v[2] = tv[2];
                cells.push_back(cell);
                cell_areas.push_back(area);
                covered_area += area;
            }
        }
    }
}

} // namespace

OverlayComplex overlay_2d(const std::shared_ptr<const EmbeddedComplex>& c1,
                          const std::shared_ptr<const EmbeddedComplex>& c2) {
    if (c1->ambient_dim() != 2 || c2->ambient_dim() != 2)
        throw UnsupportedError("overlay_2d expects complexes embedded in the plane");
    if (c1->top_dim() < 2 || c2->top_dim() < 2)
        throw InputError("overlay_2d expects 2-dimensional complexes");

    PointLocator loc1(*c1), loc2(*c2);
    SimplexGrid edges1(*c1, 1), edges2(*c2, 1);

    auto edge_seg = [](const EmbeddedComplex& c, Index e) {
        auto verts = c.simplex_vertices(1, e);
        return Seg2{{c.vertex(verts[0])[0], c.vertex(verts[0])[1]},
                    {c.vertex(verts[1])[0], c.vertex(verts[1])[1]}};
    };

    std::vector<Cell> cells;
    std::vector<double> cell_areas;
    std::vector<Index> cand;
    OverlayComplex out;
    out.lift1.resize(static_cast<std::size_t>(c1->simplex_count(2)));
    out.lift2.resize(static_cast<std::size_t>(c2->simplex_count(2)));

    auto run_side = [&](const EmbeddedComplex& self, const EmbeddedComplex& other,
                        SimplexGrid& other_edges, bool first_side) {
        std::vector<Seg2> clipped;
        for (Index t = 0; t < self.simplex_count(2); ++t) {
            Tri2 tri = triangle_of(self, t);
            if (tri.area_signed < 0) std::swap(tri.p[1], tri.p[2]), tri.area_signed = -tri.area_signed;
            clipped.clear();
            Vec lo = make_vec({std::min({tri.p[0].x(), tri.p[1].x(), tri.p[2].x()}),
                               std::min({tri.p[0].y(), tri.p[1].y(), tri.p[2].y()})});
            Vec hi = make_vec({std::max({tri.p[0].x(), tri.p[1].x(), tri.p[2].x()}),
                               std::max({tri.p[0].y(), tri.p[1].y(), tri.p[2].y()})});
            other_edges.candidates_box(lo, hi, cand);
            for (Index e : cand) {
                Seg2 s = edge_seg(other, e);
                Seg2 cl;
                if (clip_segment_to_triangle(s, tri, cl)) clipped.push_back(cl);
            }
            const std::size_t first_cell = cells.size();
            double covered = 0;
            decompose_triangle(tri, clipped, cells, cell_areas, covered);
            const double defect = std::abs(covered - tri.area_signed) / std::max(tri.area_signed, 1e-30);
            out.max_partition_defect = std::max(out.max_partition_defect, defect);
            for (std::size_t i = first_cell; i < cells.size(); ++i) {
                Eigen::Vector2d centroid = (cells[i].v[0] + cells[i].v[1] + cells[i].v[2]) / 3.0;
                if (first_side) {
                    cells[i].from1 = t;
                    cells[i].from2 = loc2.find(centroid);
                } else {
                    cells[i].from2 = t;
                    cells[i].from1 = loc1.find(centroid);
                }
            }
            // second side keeps only cells outside the first complex
            if (!first_side) {
                std::size_t w = first_cell;
                for (std::size_t i = first_cell; i < cells.size(); ++i) {
                    if (cells[i].from1 >= 0) continue;
                    cells[w] = cells[i];
                    cell_areas[w] = cell_areas[i];
                    ++w;
                }
                cells.resize(w);
                cell_areas.resize(w);
            }
        }
    };

    run_side(*c1, *c2, edges2, true);
    run_side(*c2, *c1, edges1, false);

    if (out.max_partition_defect > 1e-9)
        throw GeometryError("overlay_2d: unresolvable degeneracy (partition defect " +
                            std::to_string(out.max_partition_defect) + ")");

    // weld vertices on exact coordinates
    struct KeyHash {
        std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const {
            return std::hash<std::uint64_t>()(k.first * 0x9e3779b97f4a7c15ULL ^ k.second);
        }
    };
    std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, Index, KeyHash> vmap;
    std::vector<double> coords;
    std::vector<std::vector<std::vector<Index>>> simplices(3);
    auto vid = [&](const Eigen::Vector2d& p) {
        std::uint64_t bx, by;
        static_assert(sizeof(double) == 8);
        std::memcpy(&bx, &p.x(), 8);
        std::memcpy(&by, &p.y(), 8);
        auto key = std::make_pair(bx, by);
        auto it = vmap.find(key);
        if (it != vmap.end()) return it->second;
        const Index id = static_cast<Index>(coords.size() / 2);
        coords.push_back(p.x());
        coords.push_back(p.y());
        vmap.emplace(key, id);
        return id;
    };

    std::vector<Index> keep_from1, keep_from2;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const Index a = vid(cells[i].v[0]);
        const Index b = vid(cells[i].v[1]);
        const Index c = vid(cells[i].v[2]);
        if (a == b || b == c || a == c) continue;
        simplices[2].push_back({a, b, c});
        keep_from1.push_back(cells[i].from1);
        keep_from2.push_back(cells[i].from2);
    }

    EmbeddedComplex::Options opt;
    opt.degeneracy_eps = 1e-30;
    out.merged = std::make_shared<EmbeddedComplex>(2, std::move(coords), simplices, opt);
    out.from1 = std::move(keep_from1);
    out.from2 = std::move(keep_from2);
    for (Index m = 0; m < out.merged->simplex_count(2); ++m) {
        if (out.from1[static_cast<std::size_t>(m)] >= 0)
            out.lift1[static_cast<std::size_t>(out.from1[static_cast<std::size_t>(m)])].push_back(m);
        if (out.from2[static_cast<std::size_t>(m)] >= 0)
            out.lift2[static_cast<std::size_t>(out.from2[static_cast<std::size_t>(m)])].push_back(m);
    }
    return out;
}

SimplicialCurrent transport_chain(const OverlayComplex& ov, const SimplicialCurrent& chain, int side) {
    if (chain.dim() != 2) throw UnsupportedError("transport_chain moves 2-chains only");
    const auto& lifts = (side == 1) ? ov.lift1 : ov.lift2;
    const auto& src = chain.complex();
    SimplicialCurrent out(ov.merged, 2);
    auto ccw_sign = [](const EmbeddedComplex& c, Index t) {
        Mat e = c.edge_matrix(2, t);
        const double det = e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0);
        return det >= 0 ? 1 : -1;
    };
    for (auto [t, m] : chain.entries()) {
        if (static_cast<std::size_t>(t) >= lifts.size())
            throw InputError("transport_chain: chain does not match the overlay input");
        const int s_src = ccw_sign(src, t);
        for (Index g : lifts[static_cast<std::size_t>(t)]) {
            const int s_m = ccw_sign(*ov.merged, g);
            out.add(g, m * s_src * s_m);
        }
    }
    return out;
}

} // namespace curr
