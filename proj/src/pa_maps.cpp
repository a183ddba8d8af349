#include "curr/pa_maps.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "curr/errors.hpp"

namespace curr {

PiecewiseAffineMap::PiecewiseAffineMap(std::shared_ptr<const EmbeddedComplex> source, int target_dim,
                                       std::vector<double> vertex_images)
    : source_(std::move(source)), target_dim_(target_dim), images_(std::move(vertex_images)) {
    if (target_dim_ <= 0) throw InputError("map target dimension must be positive");
    if (images_.size() != static_cast<std::size_t>(source_->vertex_count()) * static_cast<std::size_t>(target_dim_))
        throw InputError("vertex_images size does not match source vertex count");
}

Vec PiecewiseAffineMap::apply_on(int dim, Index s, const Vec& p) const {
    auto b = barycentric_coords(p, source_->vertex_matrix(dim, s));
    auto verts = source_->simplex_vertices(dim, s);
    Vec out = Vec::Zero(target_dim_);
    for (std::size_t i = 0; i < verts.size(); ++i)
        out += b.coords[static_cast<Eigen::Index>(i)] * vertex_image_vec(verts[i]);
    return out;
}

Vec PiecewiseAffineMap::apply(const Vec& p, double snap_eps) const {
    auto loc = source_->locate(p, snap_eps);
    if (!loc) throw GeometryError("map evaluation: point lies off the source carrier");
    return apply_on(loc->dim, loc->simplex, p);
}

Mat PiecewiseAffineMap::image_edge_matrix(int dim, Index s) const {
    auto verts = source_->simplex_vertices(dim, s);
    Mat m(target_dim_, dim);
    Vec img0 = vertex_image_vec(verts[0]);
    for (int i = 1; i <= dim; ++i)
        m.col(i - 1) = vertex_image_vec(verts[static_cast<std::size_t>(i)]) - img0;
    return m;
}

Mat PiecewiseAffineMap::tangent_differential(int dim, Index s) const {
    Mat edges = source_->edge_matrix(dim, s);
    Mat frame = orthonormal_frame(edges);
    Mat ft_e = frame.transpose() * edges; // k x k, upper triangular, positive diagonal
    return image_edge_matrix(dim, s) * ft_e.inverse();
}

double lipschitz_constant(const PiecewiseAffineMap& psi) {
    const auto& c = psi.source();
    double lip = 0;
    for (int k = 1; k <= c.top_dim(); ++k)
        for (Index s = 0; s < c.simplex_count(k); ++s) {
            if (!c.is_maximal(k, s)) continue;
            Eigen::JacobiSVD<Mat> svd(psi.tangent_differential(k, s));
            lip = std::max(lip, svd.singularValues()[0]);
        }
    return lip;
}

namespace {

// Coverage classification of one target simplex against one image simplex.
enum class Cover { outside, covered, partial };

struct ImageData {
    Mat img_vertices; // m x (k+1)
    Mat img_edges;    // m x k
    Mat img_frame;    // m x k
    double img_vol = 0;
};

Cover classify_segment(const ImageData& img, const Mat& tau, double& overlap_len, int& sign) {
    const Vec p0 = img.img_vertices.col(0);
    const Vec dir = img.img_edges.col(0);
    const double len2 = dir.squaredNorm();
    const double len = std::sqrt(len2);
    const double plane_tol = 1e-7 * std::max(len, 1.0);
    double t[2];
    for (int i = 0; i < 2; ++i) {
        const Vec w = tau.col(i) - p0;
        t[i] = w.dot(dir) / len2;
        const double off = (w - t[i] * dir).norm();
        if (off > plane_tol) return Cover::outside;
    }
    sign = (t[1] >= t[0]) ? 1 : -1;
    const double lo = std::min(t[0], t[1]);
    const double hi = std::max(t[0], t[1]);
    const double inter = std::min(hi, 1.0) - std::max(lo, 0.0);
    overlap_len = std::max(inter, 0.0) * len;
    const double tau_len = (hi - lo) * len;
    if (overlap_len <= 1e-9 * std::max(tau_len, 1e-30)) return Cover::outside;
    if (overlap_len >= (1.0 - 1e-7) * tau_len) return Cover::covered;
    return Cover::partial;
}

Cover classify_triangle(const ImageData& img, const Mat& tau, double& overlap_area, int& sign) {
    const Vec p0 = img.img_vertices.col(0);
    const double scale = std::sqrt(img.img_vol);
    const double plane_tol = 1e-7 * std::max(scale, 1e-6);
    // project into the image plane frame
    Eigen::Vector2d a[3], b[3];
    for (int i = 0; i < 3; ++i) {
        const Vec w = tau.col(i) - p0;
        const Eigen::Vector2d uv = img.img_frame.transpose() * w;
        const double off = (w - img.img_frame * uv).norm();
        if (off > plane_tol) return Cover::outside;
        b[i] = uv;
        a[i] = (img.img_frame.transpose() * (img.img_vertices.col(i) - p0));
    }
    const double tau_area = 0.5 * std::abs(cross2(b[0], b[1], b[2]));
    overlap_area = triangle_overlap_area(a[0], a[1], a[2], b[0], b[1], b[2]);
    // orientation of tau relative to the image frame; image simplex itself is
    // ccw in its own frame by construction
    sign = (cross2(b[0], b[1], b[2]) >= 0) ? 1 : -1;
    if (overlap_area <= 1e-9 * std::max(tau_area, 1e-30)) return Cover::outside;
    if (overlap_area >= (1.0 - 1e-7) * tau_area) return Cover::covered;
    return Cover::partial;
}

} // namespace

SimplicialCurrent pushforward(const PiecewiseAffineMap& psi, const SimplicialCurrent& T,
                              std::shared_ptr<const EmbeddedComplex> target) {
    const int k = T.dim();
    const int m = psi.target_dim();
    if (&T.complex() != &psi.source())
        throw InputError("pushforward: current does not live on the map's source complex");
    if (target->ambient_dim() != m)
        throw InputError("pushforward: target complex ambient dimension does not match the map");
    if (k > m) throw UnsupportedError("pushforward: current dimension exceeds target dimension");
    if (k > 2) throw UnsupportedError("pushforward implemented for currents of dimension <= 2");
    if (k > target->top_dim())
        throw InputError("pushforward: target complex has no simplices of the current's dimension");

    SimplicialCurrent out(target, k);
    if (T.is_zero()) return out;

    SimplexGrid grid(*target, k);
    std::vector<Index> candidates;

    for (auto [s, theta] : T.entries()) {
        ImageData img;
        auto verts = T.complex().simplex_vertices(k, s);
        img.img_vertices.resize(m, k + 1);
        for (int i = 0; i <= k; ++i)
            img.img_vertices.col(i) = psi.vertex_image_vec(verts[static_cast<std::size_t>(i)]);
        img.img_edges.resize(m, k);
        for (int i = 0; i < k; ++i) img.img_edges.col(i) = img.img_vertices.col(i + 1) - img.img_vertices.col(0);
        img.img_vol = gram_volume(img.img_edges);
        double max_edge = 0;
        for (int i = 0; i < k; ++i) max_edge = std::max(max_edge, img.img_edges.col(i).norm());
        if (max_edge == 0 || img.img_vol <= 1e-12 * std::pow(max_edge, k)) continue; // degenerate image
        img.img_frame = orthonormal_frame(img.img_edges);

        Vec blo = img.img_vertices.rowwise().minCoeff();
        Vec bhi = img.img_vertices.rowwise().maxCoeff();
        const double pad = 1e-9 * (bhi - blo).norm();
        grid.candidates_box(blo.array() - pad, bhi.array() + pad, candidates);

        double covered = 0;
        for (Index tau : candidates) {
            Mat tv = target->vertex_matrix(k, tau);
            double overlap = 0;
            int sign = 0;
            Cover c = (k == 1) ? classify_segment(img, tv, overlap, sign)
                               : classify_triangle(img, tv, overlap, sign);
            if (c == Cover::outside) continue;
            if (c == Cover::partial)
                throw GeometryError("pushforward: target simplex " + std::to_string(tau) +
                                    " only partially overlaps the image of source simplex " +
                                    std::to_string(s) + " (target does not refine the image arrangement)");
            covered += target->volume(k, tau);
            out.add(tau, theta * sign);
        }
        if (std::abs(covered - img.img_vol) > 1e-7 * std::max(img.img_vol, 1e-12))
            throw GeometryError("pushforward: image of source simplex " + std::to_string(s) +
                                " is not fully covered by target simplices (covered " +
                                std::to_string(covered) + " of " + std::to_string(img.img_vol) + ")");
    }
    return out;
}

const char* to_string(GradientGlobal g) {
    switch (g) {
        case GradientGlobal::constant_rotation: return "constant_rotation";
        case GradientGlobal::orthogonal_mixed: return "orthogonal_mixed";
        case GradientGlobal::contractive_somewhere: return "contractive_somewhere";
    }
    return "?";
}

GradientClassification classify_gradients(const PiecewiseAffineMap& psi, const SimplicialCurrent& T,
                                          double tol) {
    const int k = T.dim();
    const int d = psi.source().ambient_dim();
    const int m = psi.target_dim();
    if (k != d || k != m)
        throw InputError("classify_gradients expects a top-dimensional current with matching source and target dimensions");
    if (&T.complex() != &psi.source())
        throw InputError("classify_gradients: current does not live on the map's source complex");

    GradientClassification out;
    bool all_orthogonal = true;
    bool all_special = true;
    bool have_ref = false;
    Mat ref_a;
    Vec ref_b;
    double max_affine_dev = 0;

    for (auto [s, theta] : T.entries()) {
        (void)theta;
        // ambient differential: k = d, so the edge matrix is invertible and
        // the determinant sign is orientation-honest
        Mat edges = psi.source().edge_matrix(k, s);
        Mat a = psi.image_edge_matrix(k, s) * edges.inverse();
        Eigen::JacobiSVD<Mat> svd(a);
        GradientRecord rec;
        rec.singular_values = svd.singularValues();
        const double det = a.determinant();
        rec.det_sign = (det > 1e-12) ? 1 : (det < -1e-12 ? -1 : 0);
        bool orth = true;
        for (Eigen::Index i = 0; i < rec.singular_values.size(); ++i)
            if (std::abs(rec.singular_values[i] - 1.0) > tol) orth = false;
        rec.is_special_orthogonal = orth && rec.det_sign == 1;
        all_orthogonal = all_orthogonal && orth;
        all_special = all_special && rec.is_special_orthogonal;

        auto verts = psi.source().simplex_vertices(k, s);
        Vec b = psi.vertex_image_vec(verts[0]) - a * psi.source().vertex_vec(verts[0]);
        if (!have_ref) {
            ref_a = a;
            ref_b = b;
            have_ref = true;
        } else {
            max_affine_dev = std::max(max_affine_dev, (a - ref_a).cwiseAbs().maxCoeff());
            max_affine_dev = std::max(max_affine_dev, (b - ref_b).cwiseAbs().maxCoeff());
        }
        out.per_simplex.emplace(s, std::move(rec));
    }

    const double scale = std::max(1.0, psi.source().bbox_diameter());
    if (!all_orthogonal)
        out.global = GradientGlobal::contractive_somewhere;
    else if (all_special && max_affine_dev <= tol * scale)
        out.global = GradientGlobal::constant_rotation;
    else
        out.global = GradientGlobal::orthogonal_mixed;
    return out;
}

MassNonIncrease mass_nonincrease_check(const PiecewiseAffineMap& psi, const SimplicialCurrent& T,
                                       std::shared_ptr<const EmbeddedComplex> target) {
    MassNonIncrease r;
    r.lhs = mass(pushforward(psi, T, std::move(target))).total;
    const double lip = lipschitz_constant(psi);
    r.rhs = std::pow(lip, T.dim()) * mass(T).total;
    r.holds = r.lhs <= r.rhs + 1e-9;
    return r;
}

} // namespace curr
