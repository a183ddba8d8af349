#include "curr/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "curr/errors.hpp"

namespace curr {

InstanceSpec InstanceSpec::disk(int n_segments) {
    InstanceSpec s;
    s.kind = Kind::disk;
    s.n_segments = n_segments;
    return s;
}

InstanceSpec InstanceSpec::annulus(double eps, int n_segments) {
    InstanceSpec s;
    s.kind = Kind::annulus;
    s.eps = eps;
    s.n_segments = n_segments;
    return s;
}

InstanceSpec InstanceSpec::split_disks(int n_segments) {
    InstanceSpec s;
    s.kind = Kind::split_disks;
    s.n_segments = n_segments;
    return s;
}

InstanceSpec InstanceSpec::schwarzschild(double m, double r, int grid, double r0) {
    InstanceSpec s;
    s.kind = Kind::schwarzschild_graph;
    s.mass_param = m;
    s.radius = r;
    s.r0 = r0;
    s.grid = grid;
    return s;
}

std::string InstanceSpec::name() const {
    switch (kind) {
        case Kind::disk: return "disk";
        case Kind::annulus: return "annulus";
        case Kind::split_disks: return "split_disks";
        case Kind::schwarzschild_graph: return "schwarzschild_graph";
    }
    return "?";
}

double InstanceSpec::parameter() const {
    switch (kind) {
        case Kind::disk: return n_segments;
        case Kind::annulus: return eps;
        case Kind::split_disks: return n_segments;
        case Kind::schwarzschild_graph: return mass_param;
    }
    return 0;
}

int default_rings(int n_segments) { return std::max(2, n_segments / 128); }

double schwarzschild_profile(double m, double rho) {
    const double arg = 8.0 * m * (rho - 2.0 * m);
    return arg > 0 ? std::sqrt(arg) : 0.0;
}

namespace {

constexpr int kMinSectors = 16;

struct MeshBuffer {
    std::vector<double> coords;
    std::vector<std::vector<Index>> tris;
    int ambient = 2;

    Index add_vertex(double x, double y) {
        coords.push_back(x);
        coords.push_back(y);
        return static_cast<Index>(coords.size() / 2 - 1);
    }

    std::shared_ptr<const EmbeddedComplex> finish() const {
        std::vector<std::vector<std::vector<Index>>> simplices(3);
        simplices[2] = tris;
        return make_complex(ambient, coords, std::move(simplices));
    }
};

/// Sector counts per ring, graded so cells stay roughly isotropic while the
/// counts form a halving chain aligned for nesting.
std::vector<int> graded_sectors(const std::vector<double>& radii, int outer_sectors) {
    std::vector<int> m(radii.size(), outer_sectors);
    for (std::size_t i = radii.size() - 1; i-- > 0;) {
        const int outer = m[i + 1];
        const double dr = radii[i + 1] - radii[i];
        const double arc = 2.0 * M_PI * radii[i] / outer;
        if (outer % 2 == 0 && outer / 2 >= kMinSectors && arc < 0.6 * dr)
            m[i] = outer / 2;
        else
            m[i] = outer;
    }
    return m;
}

/// Builds the annular band between two full rings (equal or doubled sectors).
void connect_rings(MeshBuffer& mb, const std::vector<Index>& inner, const std::vector<Index>& outer) {
    const std::size_t mi = inner.size();
    const std::size_t mo = outer.size();
    if (mi == mo) {
        for (std::size_t j = 0; j < mi; ++j) {
            const std::size_t j1 = (j + 1) % mi;
            mb.tris.push_back({inner[j], outer[j], outer[j1]});
            mb.tris.push_back({inner[j], outer[j1], inner[j1]});
        }
    } else if (mo == 2 * mi) {
        for (std::size_t j = 0; j < mi; ++j) {
            const std::size_t j1 = (j + 1) % mi;
            mb.tris.push_back({inner[j], outer[2 * j], outer[2 * j + 1]});
            mb.tris.push_back({inner[j], outer[2 * j + 1], inner[j1]});
            mb.tris.push_back({inner[j1], outer[2 * j + 1], outer[(2 * j + 2) % mo]});
        }
    } else {
        throw Error("polar mesh: incompatible ring sector counts");
    }
}

std::vector<Index> make_ring(MeshBuffer& mb, double radius, int sectors) {
    std::vector<Index> ring(static_cast<std::size_t>(sectors));
    for (int j = 0; j < sectors; ++j) {
        const double a = 2.0 * M_PI * j / sectors;
        ring[static_cast<std::size_t>(j)] = mb.add_vertex(radius * std::cos(a), radius * std::sin(a));
    }
    return ring;
}

std::shared_ptr<const EmbeddedComplex> polar_disk_mesh_radius(double radius, int n_segments, int rings) {
    if (n_segments < kMinSectors) throw InputError("disk mesh needs at least 16 boundary segments");
    if (rings < 1) throw InputError("disk mesh needs at least one ring");
    MeshBuffer mb;
    std::vector<double> radii(static_cast<std::size_t>(rings));
    for (int i = 0; i < rings; ++i) radii[static_cast<std::size_t>(i)] = radius * (i + 1) / rings;
    std::vector<int> sectors = graded_sectors(radii, n_segments);

    const Index center = mb.add_vertex(0.0, 0.0);
    std::vector<Index> prev;
    for (int i = 0; i < rings; ++i) {
        std::vector<Index> ring = make_ring(mb, radii[static_cast<std::size_t>(i)],
                                            sectors[static_cast<std::size_t>(i)]);
        if (i == 0) {
            const std::size_t m = ring.size();
            for (std::size_t j = 0; j < m; ++j) mb.tris.push_back({center, ring[j], ring[(j + 1) % m]});
        } else {
            connect_rings(mb, prev, ring);
        }
        prev = std::move(ring);
    }
    return mb.finish();
}

struct HalfDiskMesh {
    MeshBuffer mb;
    // exact coordinates used so both halves weld bit-exactly on the diameter
};

/// Half disk of the unit circle: side = -1 keeps x <= 0, side = +1 keeps x >= 0.
/// Diameter vertices are materialized at exact (0, +-r) coordinates.
std::shared_ptr<const EmbeddedComplex> half_disk_mesh(int n_segments, int rings, int side) {
    if (n_segments % 4 != 0) throw InputError("split disks need a sector count divisible by 4");
    MeshBuffer mb;
    const int half = n_segments / 2; // sectors across the half circle
    const Index center = mb.add_vertex(0.0, 0.0);
    std::vector<Index> prev;
    for (int i = 1; i <= rings; ++i) {
        const double r = static_cast<double>(i) / rings;
        std::vector<Index> ring(static_cast<std::size_t>(half) + 1);
        for (int j = 0; j <= half; ++j) {
            double x, y;
            if (j == 0) {
                x = 0.0;
                y = (side < 0) ? r : -r;
            } else if (j == half) {
                x = 0.0;
                y = (side < 0) ? -r : r;
            } else {
                const double a = (side < 0 ? M_PI / 2 : -M_PI / 2) + M_PI * j / half;
                x = r * std::cos(a);
                y = r * std::sin(a);
            }
            ring[static_cast<std::size_t>(j)] = mb.add_vertex(x, y);
        }
        if (i == 1) {
            for (int j = 0; j < half; ++j)
                mb.tris.push_back({center, ring[static_cast<std::size_t>(j)],
                                   ring[static_cast<std::size_t>(j) + 1]});
        } else {
            for (int j = 0; j < half; ++j) {
                mb.tris.push_back({prev[static_cast<std::size_t>(j)], ring[static_cast<std::size_t>(j)],
                                   ring[static_cast<std::size_t>(j) + 1]});
                mb.tris.push_back({prev[static_cast<std::size_t>(j)],
                                   ring[static_cast<std::size_t>(j) + 1],
                                   prev[static_cast<std::size_t>(j) + 1]});
            }
        }
        prev = std::move(ring);
    }
    return mb.finish();
}

double ccw_sign2(const EmbeddedComplex& c, Index t) {
    Mat e = c.edge_matrix(2, t);
    return (e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0)) >= 0 ? 1.0 : -1.0;
}

std::vector<double> identity_images(const EmbeddedComplex& c) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(c.vertex_count()) * 2);
    for (Index v = 0; v < c.vertex_count(); ++v) {
        out.push_back(c.vertex(v)[0]);
        out.push_back(c.vertex(v)[1]);
    }
    return out;
}

} // namespace

std::shared_ptr<const EmbeddedComplex> polar_disk_mesh(int n_segments, int rings) {
    return polar_disk_mesh_radius(1.0, n_segments, rings);
}

std::shared_ptr<const EmbeddedComplex> polar_annulus_mesh(double eps, int n_segments, int rings) {
    if (!(eps > 0 && eps < 1)) throw InputError("annulus inner radius must lie in (0, 1)");
    if (rings < 1) throw InputError("annulus mesh needs at least one ring band");
    MeshBuffer mb;
    std::vector<double> radii(static_cast<std::size_t>(rings) + 1);
    for (int i = 0; i <= rings; ++i)
        radii[static_cast<std::size_t>(i)] = eps + (1.0 - eps) * i / rings;
    std::vector<int> sectors = graded_sectors(radii, n_segments);
    std::vector<Index> prev;
    for (int i = 0; i <= rings; ++i) {
        std::vector<Index> ring = make_ring(mb, radii[static_cast<std::size_t>(i)],
                                            sectors[static_cast<std::size_t>(i)]);
        if (i > 0) connect_rings(mb, prev, ring);
        prev = std::move(ring);
    }
    return mb.finish();
}

SimplicialCurrent full_chain(const std::shared_ptr<const EmbeddedComplex>& c) {
    SimplicialCurrent T(c, 2);
    for (Index t = 0; t < c->simplex_count(2); ++t)
        T.add(t, ccw_sign2(*c, t) >= 0 ? 1 : -1);
    return T;
}

Instance generate(const InstanceSpec& spec) {
    switch (spec.kind) {
        case InstanceSpec::Kind::disk: {
            if (spec.n_segments < kMinSectors) throw InputError("disk: n_segments too small");
            const int rings = default_rings(spec.n_segments);
            auto mesh = polar_disk_mesh(spec.n_segments, rings);
            SimplicialCurrent T = full_chain(mesh);
            PiecewiseAffineMap psi(mesh, 2, identity_images(*mesh));
            // characteristic length: the radial ring spacing (halves exactly
            // when n_segments doubles)
            return Instance{spec.name(), spec.parameter(), T, std::move(psi), mesh, T,
                            1.0 / rings, 1.0};
        }
        case InstanceSpec::Kind::annulus: {
            if (!(spec.eps > 0 && spec.eps < 1)) throw InputError("annulus: eps must lie in (0, 1)");
            const int rings = std::max(2, static_cast<int>(std::lround(
                                              default_rings(spec.n_segments) * (1.0 - spec.eps))));
            auto mesh = polar_annulus_mesh(spec.eps, spec.n_segments, rings);
            SimplicialCurrent T = full_chain(mesh);
            PiecewiseAffineMap psi(mesh, 2, identity_images(*mesh));
            auto ball_mesh = polar_disk_mesh(spec.n_segments, default_rings(spec.n_segments));
            SimplicialCurrent ball = full_chain(ball_mesh);
            return Instance{spec.name(), spec.parameter(), T, std::move(psi), mesh, std::move(ball),
                            (1.0 - spec.eps) / rings, 1.0};
        }
        case InstanceSpec::Kind::split_disks: {
            const int rings = std::max(2, default_rings(spec.n_segments));
            auto left = half_disk_mesh(spec.n_segments, rings, -1);
            auto right = half_disk_mesh(spec.n_segments, rings, +1);

            // target: both halves welded on the exact diameter coordinates
            struct PairHash {
                std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const {
                    std::uint64_t h = k.first * 0x9e3779b97f4a7c15ULL;
                    h ^= h >> 29;
                    h += k.second * 0xbf58476d1ce4e5b9ULL;
                    return static_cast<std::size_t>(h ^ (h >> 32));
                }
            };
            std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, Index, PairHash> weld;
            std::vector<double> tcoords;
            auto target_id = [&](double x, double y) {
                std::pair<std::uint64_t, std::uint64_t> key;
                std::memcpy(&key.first, &x, 8);
                std::memcpy(&key.second, &y, 8);
                auto it = weld.find(key);
                if (it != weld.end()) return it->second;
                const Index id = static_cast<Index>(tcoords.size() / 2);
                tcoords.push_back(x);
                tcoords.push_back(y);
                weld.emplace(key, id);
                return id;
            };
            std::vector<std::vector<Index>> ttris;
            std::vector<Index> map_left(static_cast<std::size_t>(left->vertex_count()));
            std::vector<Index> map_right(static_cast<std::size_t>(right->vertex_count()));
            for (Index v = 0; v < left->vertex_count(); ++v)
                map_left[static_cast<std::size_t>(v)] = target_id(left->vertex(v)[0], left->vertex(v)[1]);
            for (Index v = 0; v < right->vertex_count(); ++v)
                map_right[static_cast<std::size_t>(v)] = target_id(right->vertex(v)[0], right->vertex(v)[1]);
            for (Index t = 0; t < left->simplex_count(2); ++t) {
                auto vs = left->simplex_vertices(2, t);
                ttris.push_back({map_left[static_cast<std::size_t>(vs[0])],
                                 map_left[static_cast<std::size_t>(vs[1])],
                                 map_left[static_cast<std::size_t>(vs[2])]});
            }
            for (Index t = 0; t < right->simplex_count(2); ++t) {
                auto vs = right->simplex_vertices(2, t);
                ttris.push_back({map_right[static_cast<std::size_t>(vs[0])],
                                 map_right[static_cast<std::size_t>(vs[1])],
                                 map_right[static_cast<std::size_t>(vs[2])]});
            }
            std::vector<std::vector<std::vector<Index>>> tsimp(3);
            tsimp[2] = std::move(ttris);
            auto target = make_complex(2, tcoords, std::move(tsimp));

            // source: translated copies, one disjoint complex; psi maps back
            // onto the exact target coordinates
            std::vector<double> scoords;
            std::vector<double> images;
            std::vector<std::vector<Index>> stris;
            auto add_half = [&](const EmbeddedComplex& h, double dx) {
                const Index off = static_cast<Index>(scoords.size() / 2);
                for (Index v = 0; v < h.vertex_count(); ++v) {
                    scoords.push_back(h.vertex(v)[0] + dx);
                    scoords.push_back(h.vertex(v)[1]);
                    images.push_back(h.vertex(v)[0]);
                    images.push_back(h.vertex(v)[1]);
                }
                for (Index t = 0; t < h.simplex_count(2); ++t) {
                    auto vs = h.simplex_vertices(2, t);
                    stris.push_back({vs[0] + off, vs[1] + off, vs[2] + off});
                }
            };
            add_half(*left, -1.0);
            add_half(*right, 1.0);
            std::vector<std::vector<std::vector<Index>>> ssimp(3);
            ssimp[2] = std::move(stris);
            auto source = make_complex(2, std::move(scoords), std::move(ssimp));

            SimplicialCurrent T = full_chain(source);
            SimplicialCurrent ball = full_chain(target);
            PiecewiseAffineMap psi(source, 2, std::move(images));
            return Instance{spec.name(), spec.parameter(), T, std::move(psi), target, std::move(ball),
                            1.0 / rings, 1.0};
        }
        case InstanceSpec::Kind::schwarzschild_graph: {
            const double m = spec.mass_param;
            const double r = spec.radius;
            if (m <= 0) throw InputError("schwarzschild: mass must be positive");
            const double r0 = spec.r0 < 0 ? 2.0 * m : spec.r0;
            if (r0 < 2.0 * m) throw InputError("schwarzschild: inner radius must be at least 2m");
            if (r <= r0) throw InputError("schwarzschild: outer radius must exceed the inner radius");
            const int rings = std::max(4, spec.grid);
            const int sectors = std::max(kMinSectors, 2 * spec.grid);

            // rings uniform in u = sqrt(rho - r0): the embedded profile is a
            // smooth curve of u, so the chordal mesh converges cleanly
            std::vector<double> rho(static_cast<std::size_t>(rings) + 1);
            const double umax = std::sqrt(r - r0);
            for (int i = 0; i <= rings; ++i) {
                const double u = umax * i / rings;
                rho[static_cast<std::size_t>(i)] = (i == rings) ? r : r0 + u * u;
            }

            std::vector<double> flat_coords;
            std::vector<double> graph_coords;
            std::vector<std::vector<Index>> tris;
            for (int i = 0; i <= rings; ++i) {
                const double z = schwarzschild_profile(m, rho[static_cast<std::size_t>(i)]);
                for (int j = 0; j < sectors; ++j) {
                    const double a = 2.0 * M_PI * j / sectors;
                    const double x = rho[static_cast<std::size_t>(i)] * std::cos(a);
                    const double y = rho[static_cast<std::size_t>(i)] * std::sin(a);
                    flat_coords.push_back(x);
                    flat_coords.push_back(y);
                    graph_coords.push_back(x);
                    graph_coords.push_back(y);
                    graph_coords.push_back(z);
                }
            }
            auto vid = [&](int i, int j) { return static_cast<Index>(i * sectors + ((j % sectors + sectors) % sectors)); };
            for (int i = 0; i < rings; ++i)
                for (int j = 0; j < sectors; ++j) {
                    tris.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
                    tris.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
                }
            std::vector<std::vector<std::vector<Index>>> gsimp(3);
            gsimp[2] = tris;
            auto source = make_complex(3, std::move(graph_coords), std::move(gsimp));
            std::vector<std::vector<std::vector<Index>>> fsimp(3);
            fsimp[2] = std::move(tris);
            auto target = make_complex(2, flat_coords, std::move(fsimp));

            // orient by the projected (plane) orientation
            SimplicialCurrent T(source, 2);
            for (Index t = 0; t < source->simplex_count(2); ++t)
                T.add(t, ccw_sign2(*target, t) >= 0 ? 1 : -1);

            PiecewiseAffineMap psi(source, 2, std::move(flat_coords));
            auto ball_mesh = polar_disk_mesh_radius(r, sectors, std::max(2, sectors / 128));
            SimplicialCurrent ball = full_chain(ball_mesh);
            // widest ring band of the u-graded radii
            double dr_max = 0;
            for (int i = 0; i < rings; ++i)
                dr_max = std::max(dr_max, rho[static_cast<std::size_t>(i) + 1] -
                                              rho[static_cast<std::size_t>(i)]);
            return Instance{spec.name(), spec.parameter(), T, std::move(psi), target, std::move(ball),
                            dr_max, r};
        }
    }
    throw InputError("unknown instance kind");
}

ConvergenceTable stability_run(const std::vector<InstanceSpec>& specs, const StabilityOptions& opts) {
    ConvergenceTable table;
    for (const auto& spec : specs) {
        Instance inst = generate(spec);
        StabilityRow row;
        row.parameter = inst.parameter;
        row.mass = mass(inst.T).total;
        const double ball_mass = mass(inst.ball).total;
        row.chain = {ball_mass, ball_mass, ball_mass, row.mass, ball_mass};
        const double tol = opts.chain_tol_rel * ball_mass;
        row.chain_monotone = true;
        for (int i = 0; i + 1 < 5; ++i)
            if (row.chain[static_cast<std::size_t>(i)] >
                row.chain[static_cast<std::size_t>(i + 1)] + tol)
                row.chain_monotone = false;
        const double cmax = *std::max_element(row.chain.begin(), row.chain.end());
        const double cmin = *std::min_element(row.chain.begin(), row.chain.end());
        row.chain_gap_rel = (cmax - cmin) / ball_mass;

        if (inst.T.complex().ambient_dim() == 2) {
            row.flat_distance_to_ball = flat_distance(inst.T, inst.ball).value;
        } else {
            SimplicialCurrent projected = pushforward(inst.psi, inst.T, inst.target);
            row.flat_distance_to_ball = flat_distance(projected, inst.ball).value;
        }

        DistortionReport d = distortion(inst.T, inst.psi, opts.metric, opts.distortion_samples,
                                        opts.seed);
        row.max_distortion = d.max_distortion;
        table.rows.push_back(row);
    }

    table.flat_distance_decreasing = table.rows.size() >= 2;
    for (std::size_t i = 0; i + 1 < table.rows.size(); ++i)
        if (table.rows[i + 1].flat_distance_to_ball >= table.rows[i].flat_distance_to_ball)
            table.flat_distance_decreasing = false;
    bool nondec = true, noninc = true;
    for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
        if (table.rows[i + 1].mass < table.rows[i].mass) nondec = false;
        if (table.rows[i + 1].mass > table.rows[i].mass) noninc = false;
    }
    table.mass_trend_monotone = table.rows.size() < 2 || nondec || noninc;
    return table;
}

} // namespace curr
