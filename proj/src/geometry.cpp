#include "curr/geometry.hpp"

#include <cmath>

namespace curr {

double gram_volume(const Mat& edges) {
    const Eigen::Index k = edges.cols();
    const Eigen::Index d = edges.rows();
    if (k == 0) return 1.0;
    if (k == 1) return edges.col(0).norm();
    // direct formulas where available; the Gram determinant cancels badly on
    // slivers
    if (k == 2 && d == 2)
        return 0.5 * std::abs(edges(0, 0) * edges(1, 1) - edges(0, 1) * edges(1, 0));
    if (k == 2 && d == 3) {
        Eigen::Vector3d a = edges.col(0), b = edges.col(1);
        return 0.5 * a.cross(b).norm();
    }
    if (k == 3 && d == 3) return std::abs(edges.determinant()) / 6.0;
    Mat g = edges.transpose() * edges;
    double det = g.determinant();
    if (det < 0) det = 0; // numerical noise for degenerate simplices
    double vol = std::sqrt(det);
    for (Eigen::Index i = 2; i <= k; ++i) vol /= static_cast<double>(i);
    return vol;
}

Mat orthonormal_frame(const Mat& edges) {
    const Eigen::Index d = edges.rows();
    const Eigen::Index k = edges.cols();
    Mat f(d, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        Vec v = edges.col(j);
        for (Eigen::Index i = 0; i < j; ++i) v -= f.col(i).dot(edges.col(j)) * f.col(i);
        const double n = v.norm();
        if (n > 0) {
            f.col(j) = v / n;
        } else {
            f.col(j).setZero(); // degenerate simplex; caller filters by volume
        }
    }
    return f;
}

Barycentric barycentric_coords(const Vec& p, const Mat& vertices) {
    const Eigen::Index k = vertices.cols() - 1;
    Barycentric out;
    out.coords.resize(k + 1);
    if (k == 0) {
        out.coords[0] = 1.0;
        out.plane_dist = (p - vertices.col(0)).norm();
        return out;
    }
    Mat edges(vertices.rows(), k);
    for (Eigen::Index j = 0; j < k; ++j) edges.col(j) = vertices.col(j + 1) - vertices.col(0);
    Vec rhs = p - vertices.col(0);
    Eigen::VectorXd lam = edges.colPivHouseholderQr().solve(rhs);
    out.plane_dist = (edges * lam - rhs).norm();
    out.coords[0] = 1.0;
    for (Eigen::Index j = 0; j < k; ++j) {
        out.coords[j + 1] = lam[j];
        out.coords[0] -= lam[j];
    }
    return out;
}

bool point_in_simplex(const Vec& p, const Mat& vertices, double tol, double plane_tol) {
    Barycentric b = barycentric_coords(p, vertices);
    if (b.plane_dist > plane_tol) return false;
    for (Eigen::Index i = 0; i < b.coords.size(); ++i)
        if (b.coords[i] < -tol) return false;
    return true;
}

namespace {

double point_segment_distance(const Vec& p, const Vec& a, const Vec& b) {
    Vec ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0) return (p - a).norm();
    double t = (p - a).dot(ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

} // namespace

double point_simplex_distance(const Vec& p, const Mat& vertices) {
    const Eigen::Index k = vertices.cols() - 1;
    if (k == 0) return (p - vertices.col(0)).norm();
    if (k == 1) return point_segment_distance(p, vertices.col(0), vertices.col(1));
    // triangle: project onto plane, clamp via barycentric sign pattern
    Barycentric b = barycentric_coords(p, vertices);
    bool inside = true;
    for (Eigen::Index i = 0; i < b.coords.size(); ++i)
        if (b.coords[i] < 0) inside = false;
    if (inside) return b.plane_dist;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i)
        best = std::min(best, point_segment_distance(p, vertices.col(i), vertices.col((i + 1) % 3)));
    return best;
}

std::vector<Eigen::Vector2d> clip_halfplane(const std::vector<Eigen::Vector2d>& poly,
                                            const Eigen::Vector2d& a,
                                            const Eigen::Vector2d& b) {
    std::vector<Eigen::Vector2d> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector2d& p = poly[i];
        const Eigen::Vector2d& q = poly[(i + 1) % n];
        const double sp = cross2(a, b, p);
        const double sq = cross2(a, b, q);
        if (sp >= 0) out.push_back(p);
        if ((sp > 0 && sq < 0) || (sp < 0 && sq > 0)) {
            const double t = sp / (sp - sq);
            out.emplace_back(p + t * (q - p));
        }
    }
    return out;
}

double polygon_signed_area(const std::vector<Eigen::Vector2d>& poly) {
    double s = 0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % n];
        s += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * s;
}

double triangle_overlap_area(const Eigen::Vector2d& a0, const Eigen::Vector2d& a1,
                             const Eigen::Vector2d& a2, const Eigen::Vector2d& b0,
                             const Eigen::Vector2d& b1, const Eigen::Vector2d& b2) {
    std::vector<Eigen::Vector2d> poly = {a0, a1, a2};
    if (cross2(a0, a1, a2) < 0) std::swap(poly[1], poly[2]);
    Eigen::Vector2d t0 = b0, t1 = b1, t2 = b2;
    if (cross2(t0, t1, t2) < 0) std::swap(t1, t2);
    poly = clip_halfplane(poly, t0, t1);
    if (poly.empty()) return 0;
    poly = clip_halfplane(poly, t1, t2);
    if (poly.empty()) return 0;
    poly = clip_halfplane(poly, t2, t0);
    if (poly.size() < 3) return 0;
    return std::abs(polygon_signed_area(poly));
}

void segment_intersection_params(const Seg2& s, const Seg2& t, std::vector<double>& out) {
    const Eigen::Vector2d r = s.b - s.a;
    const Eigen::Vector2d q = t.b - t.a;
    const double denom = r.x() * q.y() - r.y() * q.x();
    const Eigen::Vector2d d = t.a - s.a;
    const double scale = r.norm() * q.norm();
    if (std::abs(denom) > 1e-14 * std::max(scale, 1e-300)) {
        const double u = (d.x() * q.y() - d.y() * q.x()) / denom;
        const double v = (d.x() * r.y() - d.y() * r.x()) / (-denom);
        if (u > -1e-12 && u < 1 + 1e-12 && v > -1e-12 && v < 1 + 1e-12) out.push_back(u);
        return;
    }
    // parallel: collinear overlap contributes the other segment's endpoints
    const double cross_d = d.x() * r.y() - d.y() * r.x();
    if (std::abs(cross_d) > 1e-12 * std::max(r.norm(), 1e-300) * std::max(d.norm(), 1.0)) return;
    const double rr = r.squaredNorm();
    if (rr == 0) return;
    for (const Eigen::Vector2d& e : {t.a, t.b}) {
        const double u = (e - s.a).dot(r) / rr;
        if (u > -1e-12 && u < 1 + 1e-12) out.push_back(u);
    }
}

} // namespace curr
