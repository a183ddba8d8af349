#pragma once

#include <map>
#include <memory>

#include "curr/currents.hpp"
#include "curr/mesh.hpp"

namespace curr {

/// Map defined by images of the source vertices and extended affinely over
/// each simplex. The target is R^m; target complexes enter only through
/// pushforward.
class PiecewiseAffineMap {
public:
    PiecewiseAffineMap(std::shared_ptr<const EmbeddedComplex> source, int target_dim,
                       std::vector<double> vertex_images);

    const EmbeddedComplex& source() const { return *source_; }
    const std::shared_ptr<const EmbeddedComplex>& source_ptr() const { return source_; }
    int target_dim() const { return target_dim_; }

    PointRef vertex_image(Index v) const {
        return PointRef(images_.data() + static_cast<std::size_t>(v) * target_dim_, target_dim_);
    }
    Vec vertex_image_vec(Index v) const { return Vec(vertex_image(v)); }

    /// Affine extension over simplex (dim, s) evaluated at p (p need not lie
    /// inside; the affine formula is used as-is).
    Vec apply_on(int dim, Index s, const Vec& p) const;

    /// Evaluate at a point of the carrier (locates a containing simplex).
    Vec apply(const Vec& p, double snap_eps = 1e-9) const;

    /// m x k matrix of image edges psi(v_i) - psi(v_0), sorted order.
    Mat image_edge_matrix(int dim, Index s) const;

    /// Differential in the simplex's orthonormal frame: an m x k matrix whose
    /// singular values are those of the restriction of dpsi to the simplex.
    Mat tangent_differential(int dim, Index s) const;

private:
    std::shared_ptr<const EmbeddedComplex> source_;
    int target_dim_;
    std::vector<double> images_;
};

/// Max over maximal simplices of the largest singular value of the
/// differential. Equals the metric Lipschitz constant on convex carriers and
/// upper-bounds it in general.
double lipschitz_constant(const PiecewiseAffineMap& psi);

/// Pushforward of T onto a target complex whose k-simplices refine the
/// arrangement of the simplex images. Multiplicities on each covered target
/// simplex are the signed sums over covering source simplices; degenerate
/// images contribute nothing. Throws GeometryError naming an offending
/// (source, target) pair when the refinement precondition fails.
SimplicialCurrent pushforward(const PiecewiseAffineMap& psi, const SimplicialCurrent& T,
                              std::shared_ptr<const EmbeddedComplex> target);

struct GradientRecord {
    Vec singular_values;
    int det_sign = 0;
    bool is_special_orthogonal = false;
};

enum class GradientGlobal { constant_rotation, orthogonal_mixed, contractive_somewhere };

struct GradientClassification {
    std::map<Index, GradientRecord> per_simplex;
    GradientGlobal global = GradientGlobal::constant_rotation;
};

const char* to_string(GradientGlobal g);

/// Per-simplex singular values / determinant signs of dpsi over the carrier
/// of T, with the global verdict: constant_rotation iff one affine isometry
/// with rotation part covers every carried simplex within tol.
GradientClassification classify_gradients(const PiecewiseAffineMap& psi, const SimplicialCurrent& T,
                                          double tol = 1e-6);

struct MassNonIncrease {
    double lhs = 0;
    double rhs = 0;
    bool holds = false;
};

/// Checks M(psi_# T) <= Lip(psi)^k M(T).
MassNonIncrease mass_nonincrease_check(const PiecewiseAffineMap& psi, const SimplicialCurrent& T,
                                       std::shared_ptr<const EmbeddedComplex> target);

} // namespace curr
