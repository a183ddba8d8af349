#include "curr/rigidity.hpp"

#include <algorithm>
#include <cmath>

#include "curr/errors.hpp"
#include "curr/rng.hpp"

namespace curr {

std::vector<int> HypothesesReport::violated() const {
    std::vector<int> out;
    if (!pushforward_is_ball) out.push_back(1);
    if (!mass_preserved) out.push_back(2);
    if (!boundary_injective) out.push_back(3);
    return out;
}

namespace {

std::vector<Index> carrier_vertices(const SimplicialCurrent& T) {
    std::vector<bool> used(static_cast<std::size_t>(T.complex().vertex_count()), false);
    for (auto [s, m] : T.entries())
        for (Index v : T.complex().simplex_vertices(T.dim(), s)) used[static_cast<std::size_t>(v)] = true;
    std::vector<Index> out;
    for (std::size_t i = 0; i < used.size(); ++i)
        if (used[i]) out.push_back(static_cast<Index>(i));
    return out;
}

} // namespace

HypothesesReport check_hypotheses(const SimplicialCurrent& T, const PiecewiseAffineMap& psi,
                                  const SimplicialCurrent& ball, const RigidityOptions& opts,
                                  std::shared_ptr<const EmbeddedComplex> target) {
    HypothesesReport rep;
    rep.mass_T = mass(T).total;
    const double ball_mass = mass(ball).total;
    const double scale = std::max(1.0, ball_mass);

    // (1) pushforward equals the ball current
    bool pushed_ok = false;
    try {
        SimplicialCurrent onto_ball = pushforward(psi, T, ball.complex_ptr());
        rep.mass_pushforward = mass(onto_ball).total;
        rep.pushforward_defect = mass(current_sub(onto_ball, ball)).total;
        pushed_ok = true;
    } catch (const GeometryError&) {
        if (!target || target == ball.complex_ptr()) throw;
    }
    if (!pushed_ok) {
        // image mesh differs from the ball mesh: reconcile on the 2D overlay
        SimplicialCurrent onto_target = pushforward(psi, T, target);
        rep.mass_pushforward = mass(onto_target).total;
        OverlayComplex ov = overlay_2d(target, ball.complex_ptr());
        SimplicialCurrent a = transport_chain(ov, onto_target, 1);
        SimplicialCurrent b = transport_chain(ov, ball, 2);
        rep.pushforward_defect = mass(current_sub(a, b)).total;
    }
    rep.pushforward_is_ball = rep.pushforward_defect <= opts.tol * scale;

    // (2) mass preservation
    rep.mass_difference = std::abs(rep.mass_T - rep.mass_pushforward);
    rep.mass_preserved = rep.mass_difference <= opts.tol * scale;

    // (3) injectivity on the boundary carrier, image on the sphere
    SimplicialCurrent bd = boundary(T);
    std::vector<Index> bverts = carrier_vertices(bd);
    double ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < bverts.size(); ++i) {
        const Vec pi = psi.vertex_image_vec(bverts[i]);
        rep.sphere_defect = std::max(rep.sphere_defect, std::abs(pi.norm() - opts.sphere_radius));
        const Vec xi = T.complex().vertex_vec(bverts[i]);
        for (std::size_t j = i + 1; j < bverts.size(); ++j) {
            const double src = (T.complex().vertex_vec(bverts[j]) - xi).norm();
            if (src <= 0) continue;
            const double img = (psi.vertex_image_vec(bverts[j]) - pi).norm();
            const double r = img / src;
            if (r < ratio) {
                ratio = r;
                rep.worst_collision = {bverts[i], bverts[j]};
            }
        }
    }
    rep.bilipschitz_ratio = std::isfinite(ratio) ? ratio : 0.0;
    rep.boundary_injective =
        rep.bilipschitz_ratio >= opts.injectivity_ratio_min && rep.sphere_defect <= opts.sphere_tol;
    return rep;
}

DistortionReport distortion(const SimplicialCurrent& T, const PiecewiseAffineMap& psi,
                            MetricMode metric, int samples, std::uint64_t seed) {
    DistortionReport rep;
    std::vector<Index> verts = carrier_vertices(T);
    if (verts.size() < 2) return rep;
    const auto& c = T.complex();

    // sources: coordinate extremes plus seeded vertices
    std::vector<Index> sources;
    auto add_source = [&](Index v) {
        if (std::find(sources.begin(), sources.end(), v) == sources.end()) sources.push_back(v);
    };
    for (int axis = 0; axis < c.ambient_dim(); ++axis) {
        Index lo = verts[0], hi = verts[0];
        for (Index v : verts) {
            if (c.vertex(v)[axis] < c.vertex(lo)[axis]) lo = v;
            if (c.vertex(v)[axis] > c.vertex(hi)[axis]) hi = v;
        }
        add_source(lo);
        add_source(hi);
    }
    Rng rng(seed);
    while (static_cast<int>(sources.size()) < samples && sources.size() < verts.size())
        add_source(verts[static_cast<std::size_t>(rng.next_below(verts.size()))]);

    std::optional<GeodesicGraph> graph;
    if (metric.kind == MetricMode::Kind::length_graph) graph.emplace(c, metric.refinement);

    for (Index s : sources) {
        const Vec img_s = psi.vertex_image_vec(s);
        std::vector<double> dist;
        if (graph) dist = graph->distances_from(graph->vertex_node(s));
        const Vec pos_s = c.vertex_vec(s);
        for (Index v : verts) {
            if (v == s) continue;
            double d;
            if (graph) {
                d = dist[static_cast<std::size_t>(v)];
            } else {
                d = (c.vertex_vec(v) - pos_s).norm();
            }
            const double img = (psi.vertex_image_vec(v) - img_s).norm();
            const double dd = std::isfinite(d) ? std::abs(d - img) : std::numeric_limits<double>::infinity();
            if (dd > rep.max_distortion) {
                rep.max_distortion = dd;
                rep.argmax_pair = {s, v};
                rep.geodesic_at_argmax = d;
                rep.image_at_argmax = img;
            }
        }
    }
    return rep;
}

SliceIsometryReport slice_isometry_check(const SimplicialCurrent& T, const PiecewiseAffineMap& psi,
                                         const Vec& v, std::span<const double> levels,
                                         MetricMode metric, double tol, double ball_radius) {
    SliceIsometryReport rep;
    SliceFamily fam = slice(T, psi, v, levels);
    std::optional<GeodesicGraph> graph;
    if (metric.kind == MetricMode::Kind::length_graph) graph.emplace(T.complex(), metric.refinement);

    int pass = 0;
    for (std::size_t li = 0; li < fam.slices.size(); ++li) {
        SliceIsometryLevel out;
        out.level = fam.levels[li].used;
        const Slice& sl = fam.slices[li];
        if (!sl.chain) {
            rep.per_level.push_back(out);
            continue;
        }
        SimplicialCurrent bd = boundary(*sl.chain);
        int plus = 0, minus = 0;
        Index va = -1, vb = -1;
        for (auto [vtx, m] : bd.entries()) {
            if (m == 1) {
                ++plus;
                vb = vtx;
            } else if (m == -1) {
                ++minus;
                va = vtx;
            } else {
                plus += 3; // multiplicities beyond 1: not a two-point boundary
            }
        }
        out.two_point_boundary = (plus == 1 && minus == 1);

        const double slice_mass = mass(*sl.chain).total;
        const double z = out.level;
        const double chord2 = ball_radius * ball_radius - z * z;
        const double chord = chord2 > 0 ? 2.0 * std::sqrt(chord2) : 0.0;
        out.mass_defect = std::abs(slice_mass - chord);
        out.mass_equals_segment = out.mass_defect < tol;

        if (out.two_point_boundary) {
            const Vec a = sl.line->vertex_vec(va);
            const Vec b = sl.line->vertex_vec(vb);
            double d;
            if (graph) {
                d = graph->point_distance(a, b, 1e-6 * std::max(1.0, T.complex().bbox_diameter())).distance;
            } else {
                d = (a - b).norm();
            }
            const double img = (sl.psi_image[static_cast<std::size_t>(vb)] -
                                sl.psi_image[static_cast<std::size_t>(va)])
                                   .norm();
            out.endpoint_distance_defect = std::isfinite(d) ? std::abs(d - img)
                                                            : std::numeric_limits<double>::infinity();
        }
        out.passes = out.two_point_boundary && out.mass_equals_segment &&
                     out.endpoint_distance_defect < tol;
        if (out.passes) ++pass;
        rep.per_level.push_back(out);
    }
    rep.fraction_passing = fam.slices.empty() ? 0.0 : static_cast<double>(pass) / fam.slices.size();
    return rep;
}

EssentialInjectivityReport essential_injectivity_estimate(const SimplicialCurrent& T,
                                                          const PiecewiseAffineMap& psi,
                                                          const SimplicialCurrent& ball, int samples,
                                                          std::uint64_t seed) {
    EssentialInjectivityReport rep;
    rep.samples = samples;
    const auto& tc = ball.complex();
    const int k = T.dim();
    if (k != psi.target_dim())
        throw InputError("essential injectivity expects a top-dimensional current");

    // area-weighted sampling of the ball carrier
    std::vector<Index> tris;
    std::vector<double> cumulative;
    double total = 0;
    for (auto [s, m] : ball.entries()) {
        total += tc.volume(2, s);
        tris.push_back(s);
        cumulative.push_back(total);
    }
    if (tris.empty() || samples <= 0) return rep;

    // image triangles of the source carrier
    struct Img {
        Mat verts; // 2 x 3
        Mult theta;
    };
    std::vector<Img> images;
    for (auto [s, theta] : T.entries()) {
        Img img;
        img.verts.resize(2, 3);
        auto vs = T.complex().simplex_vertices(2, s);
        for (int i = 0; i < 3; ++i) img.verts.col(i) = psi.vertex_image_vec(vs[static_cast<std::size_t>(i)]);
        if (std::abs(cross2(img.verts.col(0), img.verts.col(1), img.verts.col(2))) < 1e-14) continue;
        img.theta = theta;
        images.push_back(std::move(img));
    }

    Rng rng(seed);
    int inj = 0, unit = 0;
    for (int n = 0; n < samples; ++n) {
        const double pick = rng.next_double() * total;
        std::size_t idx = static_cast<std::size_t>(
            std::lower_bound(cumulative.begin(), cumulative.end(), pick) - cumulative.begin());
        idx = std::min(idx, tris.size() - 1);
        auto vs = tc.simplex_vertices(2, tris[idx]);
        double u = rng.next_double(), w = rng.next_double();
        if (u + w > 1) {
            u = 1 - u;
            w = 1 - w;
        }
        Eigen::Vector2d y = (1 - u - w) * Eigen::Vector2d(tc.vertex(vs[0])[0], tc.vertex(vs[0])[1]) +
                            u * Eigen::Vector2d(tc.vertex(vs[1])[0], tc.vertex(vs[1])[1]) +
                            w * Eigen::Vector2d(tc.vertex(vs[2])[0], tc.vertex(vs[2])[1]);
        int count = 0;
        Mult abs_sum = 0;
        for (const auto& img : images) {
            Eigen::Vector2d a = img.verts.col(0), b = img.verts.col(1), c = img.verts.col(2);
            const double s = cross2(a, b, c);
            const double w0 = cross2(b, c, y) / s;
            const double w1 = cross2(c, a, y) / s;
            const double w2 = cross2(a, b, y) / s;
            if (w0 >= -1e-12 && w1 >= -1e-12 && w2 >= -1e-12) {
                ++count;
                abs_sum += std::abs(img.theta);
            }
        }
        if (count == 1) ++inj;
        if (abs_sum == 1) ++unit;
    }
    rep.fraction_injective = static_cast<double>(inj) / samples;
    rep.fraction_unit_multiplicity = static_cast<double>(unit) / samples;
    return rep;
}

OverlapDirectionReport overlap_direction(const std::vector<Vec>& a1, const std::vector<Vec>& a2,
                                         double bandwidth) {
    if (a1.empty() || a2.empty()) throw InputError("overlap_direction: empty point set");
    if (a1[0].size() != 2) throw UnsupportedError("overlap_direction implemented in the plane");
    OverlapDirectionReport rep;
    Vec c1 = Vec::Zero(2), c2 = Vec::Zero(2);
    for (const Vec& p : a1) c1 += p;
    for (const Vec& p : a2) c2 += p;
    c1 /= static_cast<double>(a1.size());
    c2 /= static_cast<double>(a2.size());
    Vec v = c2 - c1;
    if (v.norm() < 1e-12) {
        rep.centroid_fallback = true;
        // densest points of each set
        auto densest = [&](const std::vector<Vec>& pts) {
            std::size_t best = 0;
            int best_count = -1;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                int count = 0;
                for (const Vec& q : pts)
                    if ((q - pts[i]).norm() <= bandwidth) ++count;
                if (count > best_count) {
                    best_count = count;
                    best = i;
                }
            }
            return pts[best];
        };
        v = densest(a2) - densest(a1);
        if (v.norm() < 1e-12) v = make_vec({1.0, 0.0});
    }
    v.normalize();
    rep.direction = v;

    const Vec w = make_vec({-v[1], v[0]});
    auto intervals = [&](const std::vector<Vec>& pts) {
        std::vector<std::pair<double, double>> iv;
        for (const Vec& p : pts) {
            const double t = p.dot(w);
            iv.emplace_back(t - bandwidth, t + bandwidth);
        }
        std::sort(iv.begin(), iv.end());
        std::vector<std::pair<double, double>> merged;
        for (auto& i : iv) {
            if (!merged.empty() && i.first <= merged.back().second)
                merged.back().second = std::max(merged.back().second, i.second);
            else
                merged.push_back(i);
        }
        return merged;
    };
    auto m1 = intervals(a1);
    auto m2 = intervals(a2);
    std::size_t i = 0, j = 0;
    double overlap = 0;
    while (i < m1.size() && j < m2.size()) {
        const double lo = std::max(m1[i].first, m2[j].first);
        const double hi = std::min(m1[i].second, m2[j].second);
        if (hi > lo) overlap += hi - lo;
        if (m1[i].second < m2[j].second)
            ++i;
        else
            ++j;
    }
    rep.overlap_measure = overlap;
    return rep;
}

RigidityChainReport euclidean_rigidity_chain(const SimplicialCurrent& T, const PiecewiseAffineMap& psi,
                                             std::shared_ptr<const EmbeddedComplex> target,
                                             double tol) {
    const int k = T.dim();
    if (k != psi.target_dim())
        throw InputError("euclidean_rigidity_chain expects a top-dimensional instance");
    RigidityChainReport rep;

    SimplicialCurrent pushed = pushforward(psi, T, target);
    rep.terms[0] = mass(pushed).total;

    // signed integral of the image multiplicity function: chain coefficients
    // are relative to sorted tuples, so the standard-orientation sign of each
    // target simplex enters
    double signed_integral = 0;
    for (auto [tau, m] : pushed.entries()) {
        Mat e = target->edge_matrix(k, tau);
        const double orient = e.determinant() >= 0 ? 1.0 : -1.0;
        signed_integral += orient * static_cast<double>(m) * target->volume(k, tau);
    }
    rep.terms[1] = signed_integral;

    // unsigned multiplicity integral: push simplices separately
    double unsigned_integral = 0;
    for (auto [s, theta] : T.entries()) {
        SimplicialCurrent single(T.complex_ptr(), k);
        single.add(s, std::abs(theta));
        SimplicialCurrent img = pushforward(psi, single, target);
        for (auto [tau, m] : img.entries())
            unsigned_integral += std::abs(static_cast<double>(m)) * target->volume(k, tau);
    }
    rep.terms[2] = unsigned_integral;

    double det_integral = 0;
    for (auto [s, theta] : T.entries()) {
        Mat md = psi.tangent_differential(k, s);
        det_integral += std::abs(static_cast<double>(theta)) * std::abs(md.determinant()) *
                        T.complex().volume(k, s);
    }
    rep.terms[3] = det_integral;
    rep.terms[4] = mass(T).total;

    for (int i = 0; i + 1 < 5; ++i)
        rep.max_gap = std::max(rep.max_gap, std::abs(rep.terms[static_cast<std::size_t>(i + 1)] -
                                                     rep.terms[static_cast<std::size_t>(i)]));
    rep.all_equal = rep.max_gap <= tol;

    if (T.complex().ambient_dim() == k) {
        GradientClassification gc = classify_gradients(psi, T, std::max(tol, 1e-9));
        rep.gradient_global = gc.global;
        rep.per_simplex_orthogonal = true;
        for (auto& [s, rec] : gc.per_simplex) {
            bool orth = true;
            for (Eigen::Index i = 0; i < rec.singular_values.size(); ++i)
                if (std::abs(rec.singular_values[i] - 1.0) > std::max(tol, 1e-9)) orth = false;
            if (!orth) rep.per_simplex_orthogonal = false;
        }
    }
    return rep;
}

const char* to_string(RigidityVerdict v) {
    switch (v) {
        case RigidityVerdict::consistent_with_isometry: return "consistent_with_isometry";
        case RigidityVerdict::hypotheses_violated: return "hypotheses_violated";
        case RigidityVerdict::rigidity_failed: return "rigidity_failed";
    }
    return "?";
}

RigidityReport rigidity_check(const SimplicialCurrent& T, const PiecewiseAffineMap& psi,
                              const SimplicialCurrent& ball, const RigidityOptions& opts,
                              std::shared_ptr<const EmbeddedComplex> target) {
    RigidityReport rep;
    rep.hypotheses = check_hypotheses(T, psi, ball, opts, std::move(target));
    rep.violated_hypotheses = rep.hypotheses.violated();
    rep.injectivity =
        essential_injectivity_estimate(T, psi, ball, opts.injectivity_samples, opts.seed);
    rep.distortion = distortion(T, psi, opts.metric, opts.distortion_samples, opts.seed);
    rep.distortion_tol =
        opts.distortion_tol >= 0 ? opts.distortion_tol : 0.05 * T.complex().bbox_diameter();
    if (!rep.hypotheses.all_pass())
        rep.verdict = RigidityVerdict::hypotheses_violated;
    else if (rep.distortion.max_distortion > rep.distortion_tol)
        rep.verdict = RigidityVerdict::rigidity_failed;
    else
        rep.verdict = RigidityVerdict::consistent_with_isometry;
    return rep;
}

} // namespace curr
