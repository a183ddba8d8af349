#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curr/errors.hpp"
#include "curr/slicing.hpp"
#include "support.hpp"

using namespace curr;
using namespace test_support;

namespace {

// v = (0,-1) makes w = (1,0): levels are plain x values and fibers are
// vertical lines x = z
const Vec kVertical = make_vec({0.0, -1.0});

} // namespace

TEST_CASE("slice of the unit square at x = 0.5") {
    auto sq = unit_square();
    SimplicialCurrent T = ccw_chain(sq);
    PiecewiseAffineMap psi = identity_map(sq);
    double level = 0.5;
    SliceFamily fam = slice(T, psi, kVertical, std::span<const double>(&level, 1));
    REQUIRE(fam.slices.size() == 1);
    REQUIRE(fam.slices[0].chain.has_value());
    CHECK(mass(*fam.slices[0].chain).total == doctest::Approx(1.0).epsilon(1e-9));

    SimplicialCurrent T2 = current_scale(T, 2);
    SliceFamily fam2 = slice(T2, psi, kVertical, std::span<const double>(&level, 1));
    CHECK(mass(*fam2.slices[0].chain).total == doctest::Approx(2.0).epsilon(1e-9));

    SliceBoundaryCheck bc = slice_boundary_check(fam, T, psi);
    CHECK(bc.max_defect == doctest::Approx(0.0));
}

TEST_CASE("level hitting a vertex projection is jittered deterministically") {
    auto sq = unit_square();
    SimplicialCurrent T = ccw_chain(sq);
    PiecewiseAffineMap psi = identity_map(sq);
    double level = 0.0; // corner projection
    SliceFamily fam = slice(T, psi, kVertical, std::span<const double>(&level, 1));
    CHECK(fam.levels[0].jittered);
    CHECK(fam.levels[0].used > 0.0);
}

TEST_CASE("split-disks slice along the gluing direction has two components") {
    Instance inst = generate(InstanceSpec::split_disks(64));
    // v along the gluing axis: fibers are horizontal lines crossing both halves
    double level = 0.0;
    SliceFamily fam =
        slice(inst.T, inst.psi, make_vec({1.0, 0.0}), std::span<const double>(&level, 1));
    REQUIRE(fam.slices[0].chain.has_value());
    CurveDecomposition dec = decompose_1current(*fam.slices[0].chain);
    CHECK(dec.curves.size() == 2);
    CHECK(dec.loops.empty());
}

TEST_CASE("slice mass integral on the square and the disk") {
    auto sq = unit_square();
    SimplicialCurrent T = ccw_chain(sq);
    PiecewiseAffineMap psi = identity_map(sq);
    auto [levels, weights] = uniform_levels(T, psi, kVertical, 64);
    SliceFamily fam = slice(T, psi, kVertical, levels, weights);
    SliceMassIntegral mi = slice_mass_integral(fam, T, psi);
    CHECK(mi.integral == doctest::Approx(1.0).epsilon(0.02));
    CHECK(mi.mass_bound == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(mi.holds);

    Instance disk = generate(InstanceSpec::disk(256));
    auto [dl, dw] = uniform_levels(disk.T, disk.psi, kVertical, 256);
    SliceFamily dfam = slice(disk.T, disk.psi, kVertical, dl, dw);
    SliceMassIntegral dmi = slice_mass_integral(dfam, disk.T, disk.psi);
    CHECK(dmi.integral == doctest::Approx(M_PI).epsilon(0.01));
    CHECK(dmi.holds);

    auto half = affine_map(disk.T.complex_ptr(), 0.5 * Mat::Identity(2, 2), Vec::Zero(2));
    auto [sl, sw] = uniform_levels(disk.T, half.psi, kVertical, 256);
    SliceFamily sfam = slice(disk.T, half.psi, kVertical, sl, sw);
    SliceMassIntegral smi = slice_mass_integral(sfam, disk.T, half.psi);
    CHECK(smi.integral == doctest::Approx(0.5 * M_PI).epsilon(0.02));
    CHECK(smi.holds);
}

TEST_CASE("quadrature converges under level doubling") {
    Instance disk = generate(InstanceSpec::disk(256));
    PiecewiseAffineMap psi = identity_map(disk.T.complex_ptr());
    double err_prev = -1;
    for (int count : {64, 128, 256}) {
        auto [lv, wt] = uniform_levels(disk.T, psi, kVertical, count);
        SliceFamily fam = slice(disk.T, psi, kVertical, lv, wt);
        SliceMassIntegral mi = slice_mass_integral(fam, disk.T, psi);
        const double err = std::abs(mi.integral - mass(disk.T).total);
        if (err_prev >= 0) CHECK(err <= err_prev + 1e-9);
        err_prev = err;
    }
}

TEST_CASE("annulus slice: two segments, four boundary points, zero defect") {
    Instance ann = generate(InstanceSpec::annulus(0.3, 128));
    double level = 0.01;
    SliceFamily fam = slice(ann.T, ann.psi, kVertical, std::span<const double>(&level, 1));
    REQUIRE(fam.slices[0].chain.has_value());
    CurveDecomposition dec = decompose_1current(*fam.slices[0].chain);
    CHECK(dec.curves.size() == 2);
    SimplicialCurrent bd = boundary(*fam.slices[0].chain);
    CHECK(bd.entries().size() == 4);
    SliceBoundaryCheck bc = slice_boundary_check(fam, ann.T, ann.psi);
    CHECK(bc.max_defect == doctest::Approx(0.0));
}

TEST_CASE("boundary anticommutation on the zero current") {
    auto sq = unit_square();
    SimplicialCurrent zero(sq, 2);
    PiecewiseAffineMap psi = identity_map(sq);
    double level = 0.5;
    SliceFamily fam = slice(zero, psi, kVertical, std::span<const double>(&level, 1));
    SliceBoundaryCheck bc = slice_boundary_check(fam, zero, psi);
    CHECK(bc.max_defect == doctest::Approx(0.0));
}

TEST_CASE("pushforward commutes with slicing") {
    Instance disk = generate(InstanceSpec::disk(128));
    auto [lv, wt] = uniform_levels(disk.T, disk.psi, kVertical, 32);
    SliceFamily fam = slice(disk.T, disk.psi, kVertical, lv, wt);
    SliceCommutationCheck cc = slice_commutation_check(fam, disk.T, disk.psi, disk.target);
    CHECK(cc.max_defect <= 1e-9);

    Instance split = generate(InstanceSpec::split_disks(64));
    auto [lv2, wt2] = uniform_levels(split.T, split.psi, kVertical, 32);
    SliceFamily fam2 = slice(split.T, split.psi, kVertical, lv2, wt2);
    SliceCommutationCheck cc2 = slice_commutation_check(fam2, split.T, split.psi, split.target);
    CHECK(cc2.max_defect <= 1e-9);
}

TEST_CASE("slice supports lie in their fibers") {
    Instance disk = generate(InstanceSpec::disk(128));
    auto [lv, wt] = uniform_levels(disk.T, disk.psi, kVertical, 16);
    SliceFamily fam = slice(disk.T, disk.psi, kVertical, lv, wt);
    for (std::size_t li = 0; li < fam.slices.size(); ++li) {
        const Slice& sl = fam.slices[li];
        for (const Vec& img : sl.psi_image)
            CHECK(std::abs(img.dot(fam.perp) - fam.levels[li].used) < 1e-9);
    }
}

TEST_CASE("slicing a surface embedded in R^3") {
    Instance g = generate(InstanceSpec::schwarzschild(0.05, 2.0, 24));
    auto [lv, wt] = uniform_levels(g.T, g.psi, kVertical, 24);
    SliceFamily fam = slice(g.T, g.psi, kVertical, lv, wt);
    SliceBoundaryCheck bc = slice_boundary_check(fam, g.T, g.psi);
    CHECK(bc.max_defect == doctest::Approx(0.0));
    SliceCommutationCheck cc = slice_commutation_check(fam, g.T, g.psi, g.target);
    CHECK(cc.max_defect <= 1e-9);
    // slice masses exceed the flat chords: the graph bends out of the plane
    SliceMassIntegral mi = slice_mass_integral(fam, g.T, g.psi);
    CHECK(mi.integral > 0);
    CHECK(mi.holds);
}

TEST_CASE("coarea inequality") {
    auto sq = unit_square();
    SimplicialCurrent T = ccw_chain(sq);
    CoareaCheck id = coarea_inequality_check(T, identity_map(sq), sq);
    CHECK(id.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(id.rhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(id.holds);
    CHECK(id.cross_defect <= 1e-9);

    auto half = affine_map(sq, 0.5 * Mat::Identity(2, 2), Vec::Zero(2));
    CoareaCheck hc = coarea_inequality_check(T, half.psi, half.target);
    CHECK(hc.lhs == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(hc.rhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hc.holds);

    // fold: both sheets count on the unsigned side
    auto src = make_complex(2, {-1, 0, 0, 0, 1, 0, -1, 1, 0, 1, 1, 1},
                            {{}, {}, {{0, 1, 4}, {0, 4, 3}, {2, 1, 4}, {2, 4, 5}}});
    std::vector<double> images;
    for (Index v = 0; v < src->vertex_count(); ++v) {
        images.push_back(std::abs(src->vertex(v)[0]));
        images.push_back(src->vertex(v)[1]);
    }
    PiecewiseAffineMap fold(src, 2, std::move(images));
    auto tgt = make_complex(2, {0, 0, 1, 0, 0, 1, 1, 1}, {{}, {}, {{1, 0, 2}, {1, 2, 3}}});
    CoareaCheck fc = coarea_inequality_check(full_chain(src), fold, tgt);
    CHECK(fc.lhs == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fc.unsigned_image_mass == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(fc.cross_defect <= 1e-9);
    CHECK(fc.holds);
}
