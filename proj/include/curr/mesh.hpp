#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "curr/geometry.hpp"

namespace curr {

using Index = std::int32_t;

constexpr int kMaxSimplexDim = 4;

struct ComplexOptions {
    double degeneracy_eps = 1e-12; // minimal allowed k-volume
};

/// Simplicial complex embedded in R^d. Simplices are stored as sorted vertex
/// tuples; orientation signs live at the chain level. Immutable after
/// construction; all queries are const and safe to share across threads.
class EmbeddedComplex {
public:
    using Options = ComplexOptions;

    /// simplices_by_dim[k] lists the k-simplices as vertex-index tuples
    /// (any order; they are sorted internally). Faces of listed simplices
    /// are added automatically. Every vertex is a 0-simplex with id equal
    /// to its vertex index.
    EmbeddedComplex(int ambient_dim, std::vector<double> coords,
                    const std::vector<std::vector<std::vector<Index>>>& simplices_by_dim,
                    ComplexOptions opt = {});

    int ambient_dim() const { return ambient_dim_; }
    int top_dim() const { return static_cast<int>(dims_.size()) - 1; }
    Index vertex_count() const { return n_vertices_; }

    PointRef vertex(Index v) const {
        return PointRef(coords_.data() + static_cast<std::size_t>(v) * ambient_dim_, ambient_dim_);
    }
    Vec vertex_vec(Index v) const { return Vec(vertex(v)); }

    Index simplex_count(int dim) const;
    std::span<const Index> simplex_vertices(int dim, Index s) const;

    /// Face ids in dimension dim-1, ordered by the position of the omitted
    /// vertex (the i-th face omits the i-th vertex of the sorted tuple).
    std::span<const Index> faces(int dim, Index s) const;
    std::span<const Index> cofaces(int dim, Index s) const;
    bool is_maximal(int dim, Index s) const { return cofaces(dim, s).empty(); }

    Index find_simplex(int dim, std::span<const Index> verts) const;

    double volume(int dim, Index s) const;

    /// d x (k+1) matrix of vertex coordinates.
    Mat vertex_matrix(int dim, Index s) const;
    /// d x k matrix of edges (v_i - v_0) in sorted-vertex order.
    Mat edge_matrix(int dim, Index s) const;
    /// Orthonormal frame of the simplex plane, oriented with the sorted tuple.
    Mat frame(int dim, Index s) const { return orthonormal_frame(edge_matrix(dim, s)); }

    Vec barycenter(int dim, Index s) const;

    double bbox_diameter() const { return bbox_diameter_; }
    std::pair<Vec, Vec> bbox() const { return {bbox_lo_, bbox_hi_}; }

    struct Location {
        int dim;
        Index simplex;
        double dist;
    };
    /// Nearest simplex (maximal ones first) within snap_eps of p, if any.
    std::optional<Location> locate(const Vec& p, double snap_eps) const;

    double degeneracy_eps() const { return opt_.degeneracy_eps; }

private:
    struct DimData {
        Index count = 0;
        std::vector<Index> verts;        // flat, (dim+1) per simplex
        std::vector<Index> face_ids;     // flat, (dim+1) per simplex; empty for dim 0
        std::vector<Index> coface_offsets;
        std::vector<Index> coface_ids;
        std::vector<double> volumes;
        std::unordered_map<std::uint64_t, std::vector<Index>> lookup; // hash -> candidate ids
    };

    int ambient_dim_ = 0;
    Index n_vertices_ = 0;
    std::vector<double> coords_;
    std::vector<DimData> dims_;
    ComplexOptions opt_;
    Vec bbox_lo_, bbox_hi_;
    double bbox_diameter_ = 0;

    Index insert_simplex(int dim, std::span<const Index> sorted_verts);
    friend class SimplexGrid;
};

/// Uniform spatial grid over the bounding boxes of the simplices of one
/// dimension; accelerates point location and pair candidate queries.
class SimplexGrid {
public:
    SimplexGrid(const EmbeddedComplex& c, int dim);

    void candidates_point(const Vec& p, std::vector<Index>& out) const;
    void candidates_box(const Vec& lo, const Vec& hi, std::vector<Index>& out) const;

private:
    const EmbeddedComplex& complex_;
    int dim_;
    int grid_dim_;
    Vec lo_, hi_;
    std::array<int, 3> res_{1, 1, 1};
    Vec cell_;
    std::vector<std::vector<Index>> cells_;
    mutable std::vector<std::uint32_t> stamp_;
    mutable std::uint32_t epoch_ = 0;

    std::size_t cell_index(const std::array<int, 3>& c) const;
    void clamp_cell(const Vec& p, std::array<int, 3>& c) const;
};

struct MetricMode {
    enum class Kind { ambient_euclidean, length_graph };
    Kind kind = Kind::ambient_euclidean;
    int refinement = 1;

    static MetricMode ambient() { return {Kind::ambient_euclidean, 1}; }
    static MetricMode length(int refinement);
};

struct GeodesicResult {
    double distance = 0;
    bool reachable = true;
};

/// Shortest-path graph on a complex: nodes are vertices plus `refinement`
/// equally spaced subdivision points per edge; any two nodes on the boundary
/// of a common simplex are joined by the straight segment between them.
class GeodesicGraph {
public:
    GeodesicGraph(const EmbeddedComplex& c, int refinement);

    std::size_t node_count() const { return n_nodes_; }
    std::size_t vertex_node(Index v) const { return static_cast<std::size_t>(v); }
    Vec node_position(std::size_t node) const;

    std::vector<double> distances_from(std::size_t source) const;
    GeodesicResult point_distance(const Vec& a, const Vec& b, double snap_eps) const;

    static double infinity() { return std::numeric_limits<double>::infinity(); }

private:
    const EmbeddedComplex& complex_;
    int refinement_;
    std::size_t n_nodes_;
    // maximal simplices, flattened: node lists per maximal simplex
    std::vector<std::vector<std::uint32_t>> max_nodes_;
    std::vector<std::vector<Index>> hosts_of_vertex_; // maximal-simplex ids
    std::vector<std::vector<Index>> hosts_of_edge_;
    std::unordered_map<std::uint64_t, Index> max_lookup_; // (dim, simplex) -> maximal id

    std::span<const Index> node_hosts(std::size_t node) const;
    void run_dijkstra(std::vector<double>& dist,
                      const std::vector<std::pair<std::size_t, double>>& sources) const;
    std::vector<Index> hosts_for_location(const EmbeddedComplex::Location& loc) const;
};

/// Distance between two points on the carrier of c. In ambient mode this is
/// the Euclidean distance; in length_graph mode the graph shortest path,
/// which upper-bounds the intrinsic length distance and converges to it
/// under refinement. Points farther than snap_eps from the carrier raise
/// InputError. Disconnected pairs return reachable = false.
GeodesicResult geodesic_distance(const EmbeddedComplex& c, MetricMode mode, const Vec& a,
                                 const Vec& b, double snap_eps = 1e-9);

/// Builders used across tests and experiments.
std::shared_ptr<EmbeddedComplex> make_complex(int ambient_dim, std::vector<double> coords,
                                              std::vector<std::vector<std::vector<Index>>> simplices,
                                              ComplexOptions opt = {});

} // namespace curr
