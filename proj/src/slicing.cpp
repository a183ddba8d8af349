#include "curr/slicing.hpp"

#include <algorithm>
#include <cmath>

#include "curr/errors.hpp"

namespace curr {

namespace {

constexpr double kLevelEps = 1e-9;
constexpr double kJitterStep = 3e-9;

struct ProjectionData {
    Vec v;                  // unit direction
    Vec w;                  // frame of v^perp
    std::vector<double> pv; // pi value per source vertex
};

ProjectionData project(const SimplicialCurrent& T, const PiecewiseAffineMap& psi, const Vec& v_in) {
    if (psi.target_dim() != 2)
        throw UnsupportedError("slicing is implemented for maps into the plane (n = 2)");
    if (T.dim() != 2) throw InputError("slicing expects a 2-dimensional current");
    if (&T.complex() != &psi.source())
        throw InputError("slicing: current does not live on the map's source complex");
    if (v_in.size() != 2) throw InputError("slice direction must live in the target plane");
    const double n = v_in.norm();
    if (std::abs(n - 1.0) > 1e-12) throw InputError("slice direction must be a unit vector");
    ProjectionData out;
    out.v = v_in / n;
    out.w = make_vec({-out.v[1], out.v[0]});
    const Index nv = T.complex().vertex_count();
    out.pv.resize(static_cast<std::size_t>(nv));
    for (Index i = 0; i < nv; ++i)
        out.pv[static_cast<std::size_t>(i)] = psi.vertex_image_vec(i).dot(out.w);
    return out;
}

/// Vertices whose projections must be avoided by generic levels.
std::vector<double> relevant_projections(const SimplicialCurrent& T, const ProjectionData& pd) {
    std::vector<bool> used(pd.pv.size(), false);
    for (auto [s, m] : T.entries())
        for (Index v : T.complex().simplex_vertices(T.dim(), s)) used[static_cast<std::size_t>(v)] = true;
    std::vector<double> out;
    for (std::size_t i = 0; i < used.size(); ++i)
        if (used[i]) out.push_back(pd.pv[i]);
    std::sort(out.begin(), out.end());
    return out;
}

bool hits_projection(const std::vector<double>& sorted_pv, double z) {
    auto it = std::lower_bound(sorted_pv.begin(), sorted_pv.end(), z - kLevelEps);
    return it != sorted_pv.end() && *it <= z + kLevelEps;
}

struct CutPoint {
    double param;
    Vec pos;
    Vec img;
};

CutPoint cut_edge_at(const EmbeddedComplex& c, const PiecewiseAffineMap& psi, const ProjectionData& pd,
                     Index edge, double z) {
    auto verts = c.simplex_vertices(1, edge);
    const double a = pd.pv[static_cast<std::size_t>(verts[0])];
    const double b = pd.pv[static_cast<std::size_t>(verts[1])];
    CutPoint cp;
    cp.param = (z - a) / (b - a);
    cp.pos = (1.0 - cp.param) * c.vertex_vec(verts[0]) + cp.param * c.vertex_vec(verts[1]);
    cp.img = (1.0 - cp.param) * psi.vertex_image_vec(verts[0]) + cp.param * psi.vertex_image_vec(verts[1]);
    return cp;
}

/// 0-dimensional slice of a 1-chain: fiber crossings with signs. The sign is
/// paired with the +v orientation of the 1-dimensional slices so that the
/// anticommutation identity holds with factor (-1)^(n-1); this resolves the
/// sign freedom the slices carry.
std::map<std::pair<Index, double>, Mult> slice_zero(const SimplicialCurrent& chain1,
                                                    const ProjectionData& pd, double z) {
    std::map<std::pair<Index, double>, Mult> out;
    const auto& c = chain1.complex();
    for (auto [e, m] : chain1.entries()) {
        auto verts = c.simplex_vertices(1, e);
        const double a = pd.pv[static_cast<std::size_t>(verts[0])];
        const double b = pd.pv[static_cast<std::size_t>(verts[1])];
        if ((a - z) * (b - z) >= 0) continue;
        const double t = (z - a) / (b - a);
        const Mult sign = (b > a) ? -1 : 1;
        auto key = std::make_pair(e, t);
        out[key] += sign * m;
        if (out[key] == 0) out.erase(key);
    }
    return out;
}

} // namespace

std::pair<std::vector<double>, std::vector<double>> uniform_levels(const SimplicialCurrent& T,
                                                                   const PiecewiseAffineMap& psi,
                                                                   const Vec& v, int count) {
    if (count <= 0) throw InputError("level count must be positive");
    ProjectionData pd = project(T, psi, v);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (auto [s, m] : T.entries())
        for (Index vtx : T.complex().simplex_vertices(T.dim(), s)) {
            lo = std::min(lo, pd.pv[static_cast<std::size_t>(vtx)]);
            hi = std::max(hi, pd.pv[static_cast<std::size_t>(vtx)]);
        }
    if (!(lo < hi)) throw InputError("current carrier projects to a single point");
    const double h = (hi - lo) / count;
    std::vector<double> levels(static_cast<std::size_t>(count));
    std::vector<double> weights(static_cast<std::size_t>(count), h);
    for (int i = 0; i < count; ++i) levels[static_cast<std::size_t>(i)] = lo + (i + 0.5) * h;
    return {std::move(levels), std::move(weights)};
}

SliceFamily slice(const SimplicialCurrent& T, const PiecewiseAffineMap& psi, const Vec& v,
                  std::span<const double> levels, std::span<const double> weights) {
    ProjectionData pd = project(T, psi, v);
    const auto& c = T.complex();
    std::vector<double> sorted_pv = relevant_projections(T, pd);

    SliceFamily fam;
    fam.direction = pd.v;
    fam.perp = pd.w;

    for (std::size_t li = 0; li < levels.size(); ++li) {
        SliceLevel lvl;
        lvl.requested = levels[li];
        lvl.used = levels[li];
        int tries = 0;
        while (hits_projection(sorted_pv, lvl.used)) {
            lvl.used += kJitterStep;
            lvl.jittered = true;
            if (++tries > 256)
                throw GeometryError("slice: level " + std::to_string(lvl.requested) +
                                    " cannot be moved off the vertex projections");
        }
        const double z = lvl.used;

        // cut points shared across triangles, keyed per edge
        std::map<Index, CutPoint> cuts;
        std::map<std::pair<Index, double>, Index> vertex_ids;
        std::vector<double> coords;
        Slice sl;

        auto cut_id = [&](Index edge) -> Index {
            auto it = cuts.find(edge);
            if (it == cuts.end()) it = cuts.emplace(edge, cut_edge_at(c, psi, pd, edge, z)).first;
            auto key = std::make_pair(edge, it->second.param);
            auto vit = vertex_ids.find(key);
            if (vit != vertex_ids.end()) return vit->second;
            const Index id = static_cast<Index>(sl.cut_edge.size());
            vertex_ids.emplace(key, id);
            sl.cut_edge.push_back(edge);
            sl.cut_param.push_back(it->second.param);
            sl.psi_image.push_back(it->second.img);
            for (Eigen::Index i = 0; i < it->second.pos.size(); ++i) coords.push_back(it->second.pos[i]);
            return id;
        };

        std::vector<std::array<Index, 2>> segs;   // line-complex vertex pairs
        std::vector<Mult> seg_mult;

        for (auto [s, theta] : T.entries()) {
            auto verts = c.simplex_vertices(2, s);
            std::array<double, 3> a{pd.pv[static_cast<std::size_t>(verts[0])],
                                    pd.pv[static_cast<std::size_t>(verts[1])],
                                    pd.pv[static_cast<std::size_t>(verts[2])]};
            std::array<Index, 2> cut_edges;
            int found = 0;
            for (int i = 0; i < 3 && found < 2; ++i)
                for (int j = i + 1; j < 3 && found < 2; ++j) {
                    if ((a[static_cast<std::size_t>(i)] - z) * (a[static_cast<std::size_t>(j)] - z) < 0) {
                        Index e = c.find_simplex(1, std::array<Index, 2>{verts[static_cast<std::size_t>(i)],
                                                                         verts[static_cast<std::size_t>(j)]});
                        cut_edges[static_cast<std::size_t>(found++)] = e;
                    }
                }
            if (found < 2) continue;

            Mat md = psi.tangent_differential(2, s);
            const double det = md.determinant();
            if (std::abs(det) < 1e-14) continue; // degenerate image contributes nothing
            const Mult s_sigma = det > 0 ? 1 : -1;

            Index i0 = cut_id(cut_edges[0]);
            Index i1 = cut_id(cut_edges[1]);
            // orient so that the image segment runs in the +v direction
            const double dv = (sl.psi_image[static_cast<std::size_t>(i1)] -
                               sl.psi_image[static_cast<std::size_t>(i0)])
                                  .dot(pd.v);
            if (dv < 0) std::swap(i0, i1);
            segs.push_back({i0, i1});
            seg_mult.push_back(theta * s_sigma);
        }

        std::vector<std::vector<std::vector<Index>>> simplices(2);
        for (auto& sgm : segs) simplices[1].push_back({sgm[0], sgm[1]});
        EmbeddedComplex::Options opt;
        opt.degeneracy_eps = 1e-30;
        sl.line = std::make_shared<EmbeddedComplex>(c.ambient_dim(), std::move(coords), simplices, opt);
        if (sl.line->top_dim() >= 1) {
            SimplicialCurrent chain(sl.line, 1);
            for (std::size_t i = 0; i < segs.size(); ++i) {
                Index e = sl.line->find_simplex(1, std::array<Index, 2>{segs[i][0], segs[i][1]});
                if (e < 0) throw GeometryError("slice: internal segment lookup failed");
                const Mult sign = (segs[i][0] < segs[i][1]) ? 1 : -1;
                chain.add(e, sign * seg_mult[i]);
            }
            sl.chain = std::move(chain);
        }
        fam.levels.push_back(lvl);
        fam.weights.push_back(li < weights.size() ? weights[li] : 0.0);
        fam.slices.push_back(std::move(sl));
    }
    return fam;
}

double Slice::mass_total() const { return chain ? mass(*chain).total : 0.0; }

SliceBoundaryCheck slice_boundary_check(const SliceFamily& fam, const SimplicialCurrent& T,
                                        const PiecewiseAffineMap& psi) {
    ProjectionData pd = project(T, psi, fam.direction);
    SimplicialCurrent bd = boundary(T);
    SliceBoundaryCheck out;
    for (std::size_t li = 0; li < fam.slices.size(); ++li) {
        const Slice& sl = fam.slices[li];
        // boundary of the slice chain, expressed over (edge, param) keys
        std::map<std::pair<Index, double>, Mult> lhs;
        if (sl.chain) {
            SimplicialCurrent b = boundary(*sl.chain);
            for (auto [vtx, m] : b.entries()) {
                auto key = std::make_pair(sl.cut_edge[static_cast<std::size_t>(vtx)],
                                          sl.cut_param[static_cast<std::size_t>(vtx)]);
                lhs[key] += m;
                if (lhs[key] == 0) lhs.erase(key);
            }
        }
        // (-1)^(n-1) <dT, pi, z> with n = 2
        auto rhs = slice_zero(bd, pd, fam.levels[li].used);
        double defect = 0;
        for (auto& [key, m] : rhs) {
            auto it = lhs.find(key);
            const Mult have = (it == lhs.end()) ? 0 : it->second;
            defect += std::abs(static_cast<double>(have - (-m)));
            if (it != lhs.end()) lhs.erase(it);
        }
        for (auto& [key, m] : lhs) defect += std::abs(static_cast<double>(m));
        out.per_level.push_back(defect);
        out.max_defect = std::max(out.max_defect, defect);
    }
    return out;
}

SliceMassIntegral slice_mass_integral(const SliceFamily& fam, const SimplicialCurrent& T,
                                      const PiecewiseAffineMap& psi) {
    SliceMassIntegral out;
    double max_mass = 0;
    double max_weight = 0;
    for (std::size_t i = 0; i < fam.slices.size(); ++i) {
        const double m = fam.slices[i].mass_total();
        out.per_level_mass.push_back(m);
        out.integral += fam.weights[i] * m;
        max_mass = std::max(max_mass, m);
        max_weight = std::max(max_weight, fam.weights[i]);
    }
    // Lip(pi) via the composed projection as a piecewise-affine map to R
    ProjectionData pd = project(T, psi, fam.direction);
    std::vector<double> pi_vals(pd.pv.begin(), pd.pv.end());
    PiecewiseAffineMap pi_map(T.complex_ptr(), 1, std::move(pi_vals));
    const double lip = lipschitz_constant(pi_map);
    out.mass_bound = lip * mass(T).total; // Lip(pi)^(n-1), n = 2
    const double quad_tol = 4.0 * max_weight * std::max(max_mass, 1.0) + 1e-9;
    out.holds = out.integral <= out.mass_bound + quad_tol;
    return out;
}

SliceCommutationCheck slice_commutation_check(const SliceFamily& fam, const SimplicialCurrent& T,
                                              const PiecewiseAffineMap& psi,
                                              std::shared_ptr<const EmbeddedComplex> target) {
    SliceCommutationCheck out;
    SimplicialCurrent pushed = pushforward(psi, T, target);
    ProjectionData pd = project(T, psi, fam.direction);

    for (std::size_t li = 0; li < fam.slices.size(); ++li) {
        const double z = fam.levels[li].used;
        // signed intervals on the fiber line, parametrized by the v-coordinate
        struct Ival {
            double lo, hi;
            double mult; // signed, +1 meaning "+v direction"
        };
        std::vector<Ival> ivals;
        std::vector<double> breaks;

        const Slice& sl = fam.slices[li];
        if (sl.chain) {
            for (auto [e, m] : sl.chain->entries()) {
                auto verts = sl.line->simplex_vertices(1, e);
                const double c0 = sl.psi_image[static_cast<std::size_t>(verts[0])].dot(pd.v);
                const double c1 = sl.psi_image[static_cast<std::size_t>(verts[1])].dot(pd.v);
                const double sgn = (c1 >= c0) ? 1.0 : -1.0;
                ivals.push_back({std::min(c0, c1), std::max(c0, c1), sgn * static_cast<double>(m)});
            }
        }
        // slice of the pushforward on the target complex
        for (auto [s, theta] : pushed.entries()) {
            auto verts = target->simplex_vertices(2, s);
            std::array<double, 3> a{};
            std::array<double, 3> vc{};
            for (int i = 0; i < 3; ++i) {
                Vec p = target->vertex_vec(verts[static_cast<std::size_t>(i)]);
                a[static_cast<std::size_t>(i)] = p.dot(pd.w);
                vc[static_cast<std::size_t>(i)] = p.dot(pd.v);
            }
            std::vector<double> cuts_v;
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j) {
                    const double ai = a[static_cast<std::size_t>(i)], aj = a[static_cast<std::size_t>(j)];
                    if ((ai - z) * (aj - z) < 0) {
                        const double t = (z - ai) / (aj - ai);
                        cuts_v.push_back((1 - t) * vc[static_cast<std::size_t>(i)] +
                                         t * vc[static_cast<std::size_t>(j)]);
                    }
                }
            if (cuts_v.size() < 2) continue;
            // orientation: target triangles are flat 2-simplices in the plane;
            // slice of the standard-oriented current runs in +v
            const double lo = std::min(cuts_v[0], cuts_v[1]);
            const double hi = std::max(cuts_v[0], cuts_v[1]);
            Mat edges(2, 2);
            Vec p0 = target->vertex_vec(verts[0]);
            edges.col(0) = target->vertex_vec(verts[1]) - p0;
            edges.col(1) = target->vertex_vec(verts[2]) - p0;
            const double det = edges.determinant();
            if (det == 0) continue;
            const double sgn = det > 0 ? 1.0 : -1.0;
            ivals.push_back({lo, hi, -sgn * static_cast<double>(theta)}); // subtract the rhs
        }

        for (auto& iv : ivals) {
            breaks.push_back(iv.lo);
            breaks.push_back(iv.hi);
        }
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
        double defect = 0;
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
            const double mid = 0.5 * (breaks[i] + breaks[i + 1]);
            double sum = 0;
            for (auto& iv : ivals)
                if (iv.lo <= mid && mid < iv.hi) sum += iv.mult;
            defect += std::abs(sum) * (breaks[i + 1] - breaks[i]);
        }
        out.per_level.push_back(defect);
        out.max_defect = std::max(out.max_defect, defect);
    }
    return out;
}

CoareaCheck coarea_inequality_check(const SimplicialCurrent& T, const PiecewiseAffineMap& psi,
                                    std::shared_ptr<const EmbeddedComplex> target) {
    const int k = T.dim();
    if (k != psi.target_dim())
        throw InputError("coarea check expects a top-dimensional current into R^k");
    CoareaCheck out;
    for (auto [s, theta] : T.entries()) {
        Mat md = psi.tangent_differential(k, s);
        const double det = std::abs(md.determinant());
        const double vol = T.complex().volume(k, s);
        out.lhs += std::abs(static_cast<double>(theta)) * det * vol;
        out.rhs += std::abs(static_cast<double>(theta)) * vol;
        if (!target) {
            // multiplicity-counting side from the image volumes (area formula)
            out.unsigned_image_mass +=
                std::abs(static_cast<double>(theta)) * gram_volume(psi.image_edge_matrix(k, s));
        }
    }
    if (target) {
        // unsigned sum: push each simplex separately so no cancellation occurs
        for (auto [s, theta] : T.entries()) {
            SimplicialCurrent single(T.complex_ptr(), k);
            single.add(s, std::abs(theta));
            SimplicialCurrent img = pushforward(psi, single, target);
            for (auto [tau, m] : img.entries())
                out.unsigned_image_mass += std::abs(static_cast<double>(m)) * target->volume(k, tau);
        }
    }
    out.cross_defect = std::abs(out.lhs - out.unsigned_image_mass);
    out.holds = out.lhs <= out.rhs + 1e-9;
    return out;
}

} // namespace curr
