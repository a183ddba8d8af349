#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curr/errors.hpp"
#include "support.hpp"

using namespace curr;
using namespace test_support;

namespace {

Mat rot(double a) {
    Mat r(2, 2);
    r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    return r;
}

/// Mesh of [-1,1] x [0,1] split so that the fold x -> (|x|, y) maps left
/// triangles exactly onto the right ones.
std::shared_ptr<const EmbeddedComplex> fold_source() {
    // vertices: (-1,0) (0,0) (1,0) (-1,1) (0,1) (1,1)
    return make_complex(2, {-1, 0, 0, 0, 1, 0, -1, 1, 0, 1, 1, 1},
                        {{}, {}, {{0, 1, 4}, {0, 4, 3}, {2, 1, 4}, {2, 4, 5}}});
}

std::shared_ptr<const EmbeddedComplex> fold_target() {
    // right half [0,1] x [0,1]: vertices (0,0) (1,0) (0,1) (1,1)
    return make_complex(2, {0, 0, 1, 0, 0, 1, 1, 1}, {{}, {}, {{1, 0, 2}, {1, 2, 3}}});
}

PiecewiseAffineMap fold_map(const std::shared_ptr<const EmbeddedComplex>& src) {
    std::vector<double> images;
    for (Index v = 0; v < src->vertex_count(); ++v) {
        images.push_back(std::abs(src->vertex(v)[0]));
        images.push_back(src->vertex(v)[1]);
    }
    return PiecewiseAffineMap(src, 2, std::move(images));
}

} // namespace

TEST_CASE("affine extension agrees with vertex interpolation") {
    Instance split = generate(InstanceSpec::split_disks(64));
    const auto& c = split.T.complex();
    for (Index s = 0; s < std::min<Index>(c.simplex_count(2), 32); ++s) {
        auto vs = c.simplex_vertices(2, s);
        Vec bary = c.barycenter(2, s);
        Vec expected = Vec::Zero(2);
        for (Index v : vs) expected += split.psi.vertex_image_vec(v);
        expected /= 3.0;
        CHECK((split.psi.apply_on(2, s, bary) - expected).norm() < 1e-12);
        // vertices map to their stored images
        for (Index v : vs)
            CHECK((split.psi.apply_on(2, s, c.vertex_vec(v)) - split.psi.vertex_image_vec(v)).norm() <
                  1e-12);
    }
}

TEST_CASE("lipschitz constants") {
    auto sq = unit_square();
    CHECK(lipschitz_constant(identity_map(sq)) == doctest::Approx(1.0).epsilon(1e-12));
    auto half = affine_map(sq, 0.5 * Mat::Identity(2, 2), Vec::Zero(2));
    CHECK(lipschitz_constant(half.psi) == doctest::Approx(0.5).epsilon(1e-12));
    Instance split = generate(InstanceSpec::split_disks(64));
    CHECK(lipschitz_constant(split.psi) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("pushforward by the identity is the identity") {
    auto sq = unit_square();
    SimplicialCurrent T = ccw_chain(sq);
    SimplicialCurrent img = pushforward(identity_map(sq), T, sq);
    CHECK(img == T);
}

TEST_CASE("fold map cancels to the zero current") {
    auto src = fold_source();
    auto tgt = fold_target();
    SimplicialCurrent T = ccw_chain(src);
    SimplicialCurrent img = pushforward(fold_map(src), T, tgt);
    CHECK(img.is_zero());
}

TEST_CASE("split disks push onto the ball with multiplicity one") {
    Instance inst = generate(InstanceSpec::split_disks(64));
    SimplicialCurrent img = pushforward(inst.psi, inst.T, inst.target);
    CHECK(img == inst.ball);
    for (auto [s, m] : img.entries()) CHECK(std::abs(m) == 1);
}

TEST_CASE("pushforward refinement violations are reported") {
    auto sq = unit_square();
    SimplicialCurrent T = ccw_chain(sq);
    // target shifted by half a cell: partial overlaps everywhere
    auto shifted = affine_map(sq, Mat::Identity(2, 2), make_vec({0.5, 0.0}));
    CHECK_THROWS_AS(pushforward(identity_map(sq), T, shifted.target), GeometryError);
}

TEST_CASE("naturality: boundary commutes with pushforward") {
    Rng rng(2218);
    for (int trial = 0; trial < 25; ++trial) {
        auto c = random_mesh(rng, 6);
        SimplicialCurrent T = random_chain(rng, c, 2);
        Mat a = rot(rng.uniform(0, 2 * M_PI)) * rng.uniform(0.3, 1.5);
        if (rng.next_below(2)) a.col(0) *= -1; // include reflections
        Vec b = make_vec({rng.uniform(-1, 1), rng.uniform(-1, 1)});
        auto ap = affine_map(c, a, b);
        SimplicialCurrent lhs = boundary(pushforward(ap.psi, T, ap.target));
        SimplicialCurrent rhs = pushforward(ap.psi, boundary(T), ap.target);
        CHECK(mass(current_sub(lhs, rhs)).total <= 1e-9);
    }
}

TEST_CASE("pushforward against the signed point-count oracle") {
    auto src = fold_source();
    auto tgt = fold_target();
    PiecewiseAffineMap psi = fold_map(src);
    SimplicialCurrent T = ccw_chain(src);
    SimplicialCurrent img = pushforward(psi, T, tgt);

    Rng rng(515);
    SimplexGrid grid(*tgt, 2);
    std::vector<Index> cand;
    for (int n = 0; n < 1000; ++n) {
        Vec y = make_vec({rng.uniform(0.02, 0.98), rng.uniform(0.02, 0.98)});
        // signed count over preimages
        long long signed_sum = 0;
        for (auto [s, theta] : T.entries()) {
            Mat verts(2, 3);
            auto vs = src->simplex_vertices(2, s);
            for (int i = 0; i < 3; ++i) verts.col(i) = psi.vertex_image_vec(vs[static_cast<std::size_t>(i)]);
            if (point_in_simplex(y, verts, -1e-9, 1e-9)) { // strict interior
                Mat md = psi.tangent_differential(2, s);
                signed_sum += (md.determinant() > 0 ? 1 : -1) * theta;
            }
        }
        grid.candidates_point(y, cand);
        long long chain_mult = 0;
        for (Index t : cand) {
            if (point_in_simplex(y, tgt->vertex_matrix(2, t), -1e-9, 1e-9))
                chain_mult += img.multiplicity(t) *
                              (tgt->edge_matrix(2, t).determinant() > 0 ? 1 : 1);
        }
        CHECK(signed_sum == chain_mult);
    }
}

TEST_CASE("gradient classification") {
    auto sq = unit_square();
    SimplicialCurrent T = ccw_chain(sq);

    GradientClassification idc = classify_gradients(identity_map(sq), T);
    CHECK(idc.global == GradientGlobal::constant_rotation);
    for (auto& [s, rec] : idc.per_simplex) {
        CHECK(rec.is_special_orthogonal);
        CHECK(rec.det_sign == 1);
        CHECK(rec.singular_values[0] == doctest::Approx(1.0).epsilon(1e-9));
    }

    Mat squeeze(2, 2);
    squeeze << 0.9, 0, 0, 1;
    auto sq2 = affine_map(sq, squeeze, Vec::Zero(2));
    CHECK(classify_gradients(sq2.psi, T).global == GradientGlobal::contractive_somewhere);

    Instance split = generate(InstanceSpec::split_disks(64));
    GradientClassification sc = classify_gradients(split.psi, split.T);
    for (auto& [s, rec] : sc.per_simplex) CHECK(rec.is_special_orthogonal);
    CHECK(sc.global == GradientGlobal::orthogonal_mixed); // two distinct translations

    // one connected component with a single translation stays constant_rotation
    std::set<Index> left_ids;
    for (Index t = 0; t < split.T.complex().simplex_count(2); ++t)
        if (split.T.complex().barycenter(2, t)[0] < 0) left_ids.insert(t);
    GradientClassification lc = classify_gradients(split.psi, restrict_to(split.T, left_ids));
    CHECK(lc.global == GradientGlobal::constant_rotation);
}

TEST_CASE("mass non-increase reports") {
    auto sq = unit_square();
    SimplicialCurrent T = ccw_chain(sq);
    MassNonIncrease id = mass_nonincrease_check(identity_map(sq), T, sq);
    CHECK(id.lhs == doctest::Approx(1.0));
    CHECK(id.rhs == doctest::Approx(1.0));
    CHECK(id.holds);

    auto src = fold_source();
    MassNonIncrease fold = mass_nonincrease_check(fold_map(src), ccw_chain(src), fold_target());
    CHECK(fold.lhs == doctest::Approx(0.0));
    CHECK(fold.rhs == doctest::Approx(2.0));
    CHECK(fold.holds);

    auto half = affine_map(sq, 0.5 * Mat::Identity(2, 2), Vec::Zero(2));
    MassNonIncrease sc = mass_nonincrease_check(half.psi, T, half.target);
    CHECK(sc.lhs == doctest::Approx(0.25));
    CHECK(sc.rhs == doctest::Approx(0.25));
    CHECK(sc.holds);
}

TEST_CASE("property: 1-Lipschitz maps never increase mass") {
    Rng rng(881);
    for (int trial = 0; trial < 30; ++trial) {
        auto c = random_mesh(rng, 5);
        SimplicialCurrent T = random_chain(rng, c, 2);
        Mat a = rot(rng.uniform(0, 2 * M_PI)) * rng.uniform(0.2, 1.0);
        auto ap = affine_map(c, a, Vec::Zero(2));
        const double lip = lipschitz_constant(ap.psi);
        CHECK(lip <= 1.0 + 1e-12);
        MassNonIncrease r = mass_nonincrease_check(ap.psi, T, ap.target);
        CHECK(r.holds);
    }
}

TEST_CASE("per-simplex orthogonality follows from lip <= 1 and |det| = 1") {
    Rng rng(31007);
    auto sq = unit_square();
    SimplicialCurrent T = ccw_chain(sq);
    for (int trial = 0; trial < 10; ++trial) {
        Mat a = rot(rng.uniform(0, 2 * M_PI));
        if (rng.next_below(2)) a.col(0) *= -1;
        auto ap = affine_map(sq, a, Vec::Zero(2));
        REQUIRE(lipschitz_constant(ap.psi) <= 1 + 1e-9);
        GradientClassification gc = classify_gradients(ap.psi, T);
        for (auto& [s, rec] : gc.per_simplex) {
            CHECK(std::abs(rec.singular_values[0] - 1.0) < 1e-9);
            CHECK(std::abs(rec.singular_values[1] - 1.0) < 1e-9);
        }
    }
}
