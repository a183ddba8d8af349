#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curr/curves.hpp"
#include "curr/errors.hpp"
#include "support.hpp"

using namespace curr;
using namespace test_support;

namespace {

/// 1-chain along a vertex path (unit multiplicity, signs per sorted order).
SimplicialCurrent path_chain(const std::shared_ptr<const EmbeddedComplex>& c,
                             const std::vector<Index>& path, Mult mult = 1) {
    SimplicialCurrent T(c, 1);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        Index e = c->find_simplex(1, std::array<Index, 2>{path[i], path[i + 1]});
        REQUIRE(e >= 0);
        T.add(e, (path[i] < path[i + 1] ? 1 : -1) * mult);
    }
    return T;
}

} // namespace

TEST_CASE("single segment decomposes into one curve") {
    auto c = make_complex(2, {0, 0, 1, 0}, {{}, {{0, 1}}});
    SimplicialCurrent T(c, 1, {{0, 1}});
    CurveDecomposition d = decompose_1current(T);
    CHECK(d.curves.size() == 1);
    CHECK(d.loops.empty());
    CHECK(d.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.curves[0] == std::vector<Index>{0, 1});
}

TEST_CASE("triangle boundary decomposes into one loop") {
    auto c = make_complex(2, {0, 0, 1, 0, 0, 1}, {{}, {}, {{0, 1, 2}}});
    SimplicialCurrent T(c, 2, {{0, 1}});
    CurveDecomposition d = decompose_1current(boundary(T));
    CHECK(d.curves.empty());
    CHECK(d.loops.size() == 1);
    CHECK(d.loops[0].size() == 3);
    CHECK(d.total_mass() == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("multiplicity two gives two coincident curves") {
    auto c = make_complex(2, {0, 0, 1, 0}, {{}, {{0, 1}}});
    SimplicialCurrent T(c, 1, {{0, 2}});
    CurveDecomposition d = decompose_1current(T);
    CHECK(d.curves.size() == 2);
    CHECK(d.total_mass() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mass(T).total == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("decomposition additivity on random 1-chains") {
    Rng rng(6060);
    for (int trial = 0; trial < 60; ++trial) {
        auto c = random_mesh(rng, 6);
        SimplicialCurrent T = random_chain(rng, c, 1, 2);
        CurveDecomposition d = decompose_1current(T);
        // mass additivity
        CHECK(d.total_mass() == doctest::Approx(mass(T).total).epsilon(1e-9));
        // boundary additivity, exactly as chains
        SimplicialCurrent re = recompose(T.complex_ptr(), d);
        CHECK(re == T);
        SimplicialCurrent bd = boundary(T);
        std::map<Index, Mult> endpoints;
        for (const auto& p : d.curves) {
            endpoints[p.front()] -= 1;
            endpoints[p.back()] += 1;
        }
        for (auto it = endpoints.begin(); it != endpoints.end();) {
            if (it->second == 0)
                it = endpoints.erase(it);
            else
                ++it;
        }
        CHECK(endpoints == bd.entries());
    }
}

TEST_CASE("paths and loops are injective") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        auto c = random_mesh(rng, 5);
        SimplicialCurrent T = random_chain(rng, c, 1, 2);
        CurveDecomposition d = decompose_1current(T);
        for (const auto& p : d.curves) {
            std::set<Index> seen(p.begin(), p.end());
            CHECK(seen.size() == p.size());
        }
        for (const auto& p : d.loops) {
            std::set<Index> seen(p.begin(), p.end());
            CHECK(seen.size() == p.size());
        }
    }
}

TEST_CASE("geodesic lemma on a straight segment") {
    auto c = make_complex(2, {0, 0, 1, 0}, {{}, {{0, 1}}});
    SimplicialCurrent T(c, 1, {{0, 1}});
    GeodesicLemmaReport r =
        geodesic_lemma_check(T, make_vec({0, 0}), make_vec({1, 0}), MetricMode::ambient());
    CHECK(r.mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.distance == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.is_geodesic_segment);
}

TEST_CASE("geodesic lemma on an L-shaped path") {
    auto c = make_complex(2, {0, 0, 1, 0, 1, 1}, {{}, {{0, 1}, {1, 2}}});
    SimplicialCurrent T = path_chain(c, {0, 1, 2});
    GeodesicLemmaReport r =
        geodesic_lemma_check(T, make_vec({0, 0}), make_vec({1, 1}), MetricMode::ambient());
    CHECK(r.mass == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.distance == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK_FALSE(r.is_geodesic_segment);
    CHECK(r.mass >= r.distance - 1e-9);
}

TEST_CASE("a disjoint loop spoils the geodesic property") {
    auto c = make_complex(2, {0, 0, 1, 0, 3, 0, 3, 1, 4, 0}, {{}, {{0, 1}, {2, 3}, {2, 4}, {3, 4}}});
    SimplicialCurrent T = path_chain(c, {0, 1});
    // add the loop 2 -> 4 -> 3 -> 2
    SimplicialCurrent loop = path_chain(c, {2, 4, 3, 2});
    T = current_add(T, loop);
    GeodesicLemmaReport r =
        geodesic_lemma_check(T, make_vec({0, 0}), make_vec({1, 0}), MetricMode::ambient());
    CHECK(r.mass > r.distance + 0.5);
    CHECK_FALSE(r.is_geodesic_segment);
}

TEST_CASE("boundary hypothesis is checked") {
    auto c = make_complex(2, {0, 0, 1, 0}, {{}, {{0, 1}}});
    SimplicialCurrent T(c, 1, {{0, 2}}); // boundary 2(delta_b - delta_a)
    CHECK_THROWS_AS(
        geodesic_lemma_check(T, make_vec({0, 0}), make_vec({1, 0}), MetricMode::ambient()),
        HypothesisError);
}

TEST_CASE("lemma inequality on random two-point chains") {
    Rng rng(8123);
    for (int trial = 0; trial < 40; ++trial) {
        auto c = random_mesh(rng, 5);
        // random walk path through grid vertices
        std::vector<Index> path;
        Index cur = static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(c->vertex_count())));
        path.push_back(cur);
        std::set<Index> visited{cur};
        for (int steps = 0; steps < 12; ++steps) {
            std::vector<Index> nbrs;
            for (Index e = 0; e < c->simplex_count(1); ++e) {
                auto vs = c->simplex_vertices(1, e);
                if (vs[0] == cur && !visited.count(vs[1])) nbrs.push_back(vs[1]);
                if (vs[1] == cur && !visited.count(vs[0])) nbrs.push_back(vs[0]);
            }
            if (nbrs.empty()) break;
            cur = nbrs[rng.next_below(nbrs.size())];
            path.push_back(cur);
            visited.insert(cur);
        }
        if (path.size() < 2) continue;
        SimplicialCurrent T = path_chain(c, path);
        Vec a = c->vertex_vec(path.front());
        Vec b = c->vertex_vec(path.back());
        for (MetricMode mode : {MetricMode::ambient(), MetricMode::length(2)}) {
            GeodesicLemmaReport r = geodesic_lemma_check(T, a, b, mode);
            CHECK(r.mass + 1e-9 >= r.distance);
        }
    }
}
