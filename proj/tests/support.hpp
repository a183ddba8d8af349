#pragma once

#include <memory>
#include <vector>

#include "curr/currents.hpp"
#include "curr/experiments.hpp"
#include "curr/pa_maps.hpp"
#include "curr/rng.hpp"

namespace test_support {

using namespace curr;

/// Rectangular grid triangulation of [x0, x1] x [y0, y1] with nx x ny cells,
/// each split along the lower-left to upper-right diagonal. Triangles are ccw.
inline std::shared_ptr<const EmbeddedComplex> grid_mesh(double x0, double y0, double x1, double y1,
                                                        int nx, int ny) {
    std::vector<double> coords;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            coords.push_back(x0 + (x1 - x0) * i / nx);
            coords.push_back(y0 + (y1 - y0) * j / ny);
        }
    auto vid = [&](int i, int j) { return static_cast<Index>(j * (nx + 1) + i); };
    std::vector<std::vector<std::vector<Index>>> simplices(3);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            simplices[2].push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            simplices[2].push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    return make_complex(2, std::move(coords), std::move(simplices));
}

/// The two-triangle unit square [0,1]^2.
inline std::shared_ptr<const EmbeddedComplex> unit_square() { return grid_mesh(0, 0, 1, 1, 1, 1); }

inline SimplicialCurrent ccw_chain(const std::shared_ptr<const EmbeddedComplex>& c) {
    return full_chain(c);
}

inline PiecewiseAffineMap identity_map(const std::shared_ptr<const EmbeddedComplex>& c) {
    std::vector<double> images;
    for (Index v = 0; v < c->vertex_count(); ++v)
        for (int i = 0; i < c->ambient_dim(); ++i) images.push_back(c->vertex(v)[i]);
    return PiecewiseAffineMap(c, c->ambient_dim(), std::move(images));
}

/// Affine map x -> A x + b applied to the vertices, as a PA map onto its
/// exact image mesh (same combinatorics, transformed coordinates).
struct AffinePair {
    PiecewiseAffineMap psi;
    std::shared_ptr<const EmbeddedComplex> target;
};

inline AffinePair affine_map(const std::shared_ptr<const EmbeddedComplex>& c, const Mat& A,
                             const Vec& b) {
    std::vector<double> images;
    std::vector<double> tcoords;
    for (Index v = 0; v < c->vertex_count(); ++v) {
        Vec y = A * Vec(c->vertex(v)) + b;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            images.push_back(y[i]);
            tcoords.push_back(y[i]);
        }
    }
    std::vector<std::vector<std::vector<Index>>> simplices(static_cast<std::size_t>(c->top_dim()) + 1);
    for (int k = 1; k <= c->top_dim(); ++k)
        for (Index s = 0; s < c->simplex_count(k); ++s) {
            auto verts = c->simplex_vertices(k, s);
            simplices[static_cast<std::size_t>(k)].push_back(
                std::vector<Index>(verts.begin(), verts.end()));
        }
    auto target = make_complex(static_cast<int>(A.rows()), std::move(tcoords), std::move(simplices));
    return {PiecewiseAffineMap(c, static_cast<int>(A.rows()), std::move(images)), target};
}

/// Random 2D mesh for property tests: a jittered grid (still a valid
/// triangulation: jitter is small relative to the cell size).
inline std::shared_ptr<const EmbeddedComplex> random_mesh(Rng& rng, int max_cells = 10) {
    const int nx = static_cast<int>(1 + rng.next_below(static_cast<std::uint64_t>(max_cells)));
    const int ny = static_cast<int>(1 + rng.next_below(static_cast<std::uint64_t>(max_cells)));
    std::vector<double> coords;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            double x = static_cast<double>(i);
            double y = static_cast<double>(j);
            if (i > 0 && i < nx) x += rng.uniform(-0.3, 0.3);
            if (j > 0 && j < ny) y += rng.uniform(-0.3, 0.3);
            coords.push_back(x);
            coords.push_back(y);
        }
    auto vid = [&](int i, int j) { return static_cast<Index>(j * (nx + 1) + i); };
    std::vector<std::vector<std::vector<Index>>> simplices(3);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            if (rng.next_below(8) == 0) continue; // occasional holes
            simplices[2].push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            simplices[2].push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    if (simplices[2].empty()) simplices[2].push_back({vid(0, 0), vid(1, 0), vid(1, 1)});
    return make_complex(2, std::move(coords), std::move(simplices));
}

inline SimplicialCurrent random_chain(Rng& rng, const std::shared_ptr<const EmbeddedComplex>& c,
                                      int dim, int max_mult = 3) {
    SimplicialCurrent T(c, dim);
    for (Index s = 0; s < c->simplex_count(dim); ++s) {
        const long long m = rng.uniform_int(-max_mult, max_mult);
        if (m != 0 && rng.next_below(2) == 0) T.add(s, m);
    }
    return T;
}

} // namespace test_support
