#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

namespace curr {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

using PointRef = Eigen::Map<const Eigen::VectorXd>;

inline Vec make_vec(std::initializer_list<double> xs) {
    Vec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

/// Signed double area of triangle (a, b, c) in the plane.
inline double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

/// k-volume of the simplex spanned by the columns of the edge matrix:
/// sqrt(det(E^T E)) / k!.
double gram_volume(const Mat& edges);

/// Orthonormal d x k frame spanning the simplex plane, oriented consistently
/// with the given edge order (Gram-Schmidt; diag of F^T E stays positive).
Mat orthonormal_frame(const Mat& edges);

/// Barycentric coordinates of p with respect to a k-simplex with vertex
/// columns V (d x (k+1)); least squares in the simplex plane. Also returns
/// the distance from p to that plane.
struct Barycentric {
    Eigen::VectorXd coords; // size k+1, sums to 1
    double plane_dist = 0.0;
};
Barycentric barycentric_coords(const Vec& p, const Mat& vertices);

/// True if every barycentric coordinate is >= -tol and p lies within
/// plane_tol of the simplex plane.
bool point_in_simplex(const Vec& p, const Mat& vertices, double tol, double plane_tol);

/// Euclidean distance from p to a k-simplex (k <= 2) given by vertex columns.
double point_simplex_distance(const Vec& p, const Mat& vertices);

/// ----- planar helpers (used by pushforward coverage and the 2D overlay) -----

struct Seg2 {
    Eigen::Vector2d a, b;
};

/// Clip a convex polygon (ccw) against the half-plane left of a->b.
std::vector<Eigen::Vector2d> clip_halfplane(const std::vector<Eigen::Vector2d>& poly,
                                            const Eigen::Vector2d& a,
                                            const Eigen::Vector2d& b);

/// Area of the intersection of two triangles in the plane (orientation-insensitive).
double triangle_overlap_area(const Eigen::Vector2d& a0, const Eigen::Vector2d& a1,
                             const Eigen::Vector2d& a2, const Eigen::Vector2d& b0,
                             const Eigen::Vector2d& b1, const Eigen::Vector2d& b2);

/// Area of a simple polygon (signed, ccw positive).
double polygon_signed_area(const std::vector<Eigen::Vector2d>& poly);

/// Proper or touching intersection of two segments; returns the parameter on
/// the first segment for each intersection point found (0 or 1 points; collinear
/// overlaps contribute the projections of the second segment's endpoints).
void segment_intersection_params(const Seg2& s, const Seg2& t, std::vector<double>& out);

} // namespace curr
