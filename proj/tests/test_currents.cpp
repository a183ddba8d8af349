#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curr/errors.hpp"
#include "support.hpp"

using namespace curr;
using namespace test_support;

TEST_CASE("mass of the unit square") {
    auto c = unit_square();
    SimplicialCurrent T = ccw_chain(c);
    CHECK(mass(T).total == doctest::Approx(1.0).epsilon(1e-12));

    // multiplicity 3 on one triangle: 0.5 + 1.5
    SimplicialCurrent U = T;
    U.add(0, 2 * T.multiplicity(0));
    CHECK(mass(U).total == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("disk mass approximates pi") {
    Instance inst = generate(InstanceSpec::disk(2048));
    CHECK(mass(inst.T).total == doctest::Approx(M_PI).epsilon(0.005));
}

TEST_CASE("boundary of a triangle and the square") {
    auto c = make_complex(2, {0, 0, 1, 0, 0, 1}, {{}, {}, {{0, 1, 2}}});
    SimplicialCurrent T(c, 2, {{0, 1}});
    SimplicialCurrent b = boundary(T);
    CHECK(b.entries().size() == 3);
    for (auto [e, m] : b.entries()) CHECK(std::abs(m) == 1);
    CHECK(boundary(b).is_zero());

    auto sq = unit_square();
    SimplicialCurrent S = ccw_chain(sq);
    SimplicialCurrent bs = boundary(S);
    CHECK(bs.entries().size() == 4); // diagonal cancels
    Index diag = sq->find_simplex(1, std::array<Index, 2>{0, 3});
    CHECK(bs.multiplicity(diag) == 0);
    CHECK(mass(bs).total == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("boundary of a 0-current is an error") {
    auto c = unit_square();
    SimplicialCurrent p(c, 0, {{0, 1}});
    CHECK_THROWS_AS(boundary(p), UnsupportedError);
}

TEST_CASE("restrict partitions mass") {
    auto sq = unit_square();
    SimplicialCurrent T = ccw_chain(sq);
    CHECK(restrict_to(T, {0, 1}) == T);
    CHECK(restrict_to(T, {}).is_zero());
    const double left = mass(restrict_to(T, {0})).total;
    const double right = mass(restrict_to(T, {1})).total;
    CHECK(left == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(left + right == doctest::Approx(mass(T).total).epsilon(1e-12));
    CHECK_THROWS_AS(restrict_to(T, {7}), InputError);
}

TEST_CASE("canonical set") {
    auto sq = unit_square();
    SimplicialCurrent T = ccw_chain(sq);
    CHECK(canonical_set(T) == std::set<Index>{0, 1});
    CHECK(canonical_set(SimplicialCurrent(sq, 2)).empty());
    SimplicialCurrent U(sq, 2, {{1, 2}});
    CHECK(canonical_set(U) == std::set<Index>{1});
}

TEST_CASE("chain arithmetic") {
    auto sq = unit_square();
    SimplicialCurrent T = ccw_chain(sq);
    CHECK(current_sub(T, T).is_zero());
    SimplicialCurrent left(sq, 2, {{0, 1}});
    SimplicialCurrent right(sq, 2, {{1, 1}});
    SimplicialCurrent u = current_sub(left, right);
    CHECK(u.multiplicity(0) == 1);
    CHECK(u.multiplicity(1) == -1);

    auto other = unit_square();
    SimplicialCurrent S = ccw_chain(other);
    CHECK_THROWS_AS(current_sub(T, S), InputError);
}

TEST_CASE("annulus minus ball equals minus the hole on a shared complex") {
    auto disk = polar_disk_mesh(64, 8);
    SimplicialCurrent ball = full_chain(disk);
    std::set<Index> outer;
    for (Index t = 0; t < disk->simplex_count(2); ++t) {
        Vec b = disk->barycenter(2, t);
        if (b.norm() > 0.25) outer.insert(t);
    }
    SimplicialCurrent annulus = restrict_to(ball, outer);
    SimplicialCurrent diff = current_sub(annulus, ball);
    for (auto [s, m] : diff.entries()) {
        CHECK(m == -ball.multiplicity(s)); // minus the positively oriented hole
        CHECK(outer.count(s) == 0);
    }
    CHECK(mass(current_add(diff, ball)).total == doctest::Approx(mass(annulus).total).epsilon(1e-12));
}

TEST_CASE("property: boundary of boundary vanishes on random chains") {
    Rng rng(7031);
    for (int trial = 0; trial < 40; ++trial) {
        auto c = random_mesh(rng);
        SimplicialCurrent T = random_chain(rng, c, 2);
        CHECK(boundary(boundary(T)).is_zero());
    }
}

TEST_CASE("property: mass homogeneity and subadditivity") {
    Rng rng(519);
    for (int trial = 0; trial < 20; ++trial) {
        auto c = random_mesh(rng);
        SimplicialCurrent A = random_chain(rng, c, 2);
        SimplicialCurrent B = random_chain(rng, c, 2);
        const long long k = rng.uniform_int(1, 4);
        CHECK(mass(current_scale(A, k)).total ==
              doctest::Approx(k * mass(A).total).epsilon(1e-12));
        CHECK(mass(current_add(A, B)).total <= mass(A).total + mass(B).total + 1e-12);
    }
}

TEST_CASE("property: restrict partitions mass over random partitions") {
    Rng rng(99);
    auto c = random_mesh(rng);
    SimplicialCurrent T = random_chain(rng, c, 2, 5);
    std::set<Index> part1, part2;
    for (Index s = 0; s < c->simplex_count(2); ++s)
        (rng.next_below(2) ? part1 : part2).insert(s);
    CHECK(mass(restrict_to(T, part1)).total + mass(restrict_to(T, part2)).total ==
          doctest::Approx(mass(T).total).epsilon(1e-12));
}
