#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curr/errors.hpp"
#include "support.hpp"

using namespace curr;
using namespace test_support;

TEST_CASE("disk instance masses") {
    Instance d = generate(InstanceSpec::disk(2048));
    CHECK(mass(d.T).total == doctest::Approx(M_PI).epsilon(0.005));
    CHECK(lipschitz_constant(d.psi) <= 1 + 1e-9);
    CHECK(d.mesh_size > 0);
}

TEST_CASE("mesh size halves when segments double") {
    Instance a = generate(InstanceSpec::disk(1024));
    Instance b = generate(InstanceSpec::disk(2048));
    CHECK(b.mesh_size == doctest::Approx(a.mesh_size / 2).epsilon(1e-12));
}

TEST_CASE("annulus instance") {
    Instance a = generate(InstanceSpec::annulus(0.4, 512));
    CHECK(mass(a.T).total == doctest::Approx(M_PI * (1 - 0.16)).epsilon(0.01));
    CHECK(lipschitz_constant(a.psi) <= 1 + 1e-9);
    // outer boundary only: the boundary has two circles
    SimplicialCurrent bd = boundary(a.T);
    CurveDecomposition dec = decompose_1current(bd);
    CHECK(dec.curves.empty());
    CHECK(dec.loops.size() == 2);
}

TEST_CASE("split disks instance fails hypothesis 3") {
    Instance s = generate(InstanceSpec::split_disks(512));
    CHECK(lipschitz_constant(s.psi) <= 1 + 1e-9);
    HypothesesReport h = check_hypotheses(s.T, s.psi, s.ball, {}, s.target);
    CHECK(h.pushforward_is_ball);
    CHECK(h.mass_preserved);
    CHECK_FALSE(h.boundary_injective);
}

TEST_CASE("schwarzschild graph flattens as m -> 0") {
    double prev_gap = std::numeric_limits<double>::infinity();
    for (double m : {0.1, 0.05, 0.01}) {
        Instance g = generate(InstanceSpec::schwarzschild(m, 2.0, 48));
        CHECK(lipschitz_constant(g.psi) <= 1 + 1e-9);
        const double gap = mass(g.T).total - mass(g.ball).total;
        CHECK(gap > 0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
}

TEST_CASE("schwarzschild profile satisfies the embedding identity") {
    // 1 + f'(rho)^2 = (1 - 2m/rho)^(-1), checked by finite differences
    const double m = 0.07;
    for (double rho : {0.2, 0.5, 1.0, 1.9}) {
        const double h = 1e-6;
        const double fp =
            (schwarzschild_profile(m, rho + h) - schwarzschild_profile(m, rho - h)) / (2 * h);
        CHECK(1 + fp * fp == doctest::Approx(1.0 / (1.0 - 2 * m / rho)).epsilon(1e-4));
    }
}

TEST_CASE("schwarzschild mass matches the profile quadrature") {
    const double m = 0.05, r = 2.0;
    Instance g = generate(InstanceSpec::schwarzschild(m, r, 64));
    // oracle: 2 pi int_{2m}^{r} sqrt(rho/(rho - 2m)) rho drho via the
    // substitution rho = 2m + u^2 (removes the endpoint singularity)
    const double umax = std::sqrt(r - 2 * m);
    const int N = 20000;
    double integral = 0;
    for (int i = 0; i < N; ++i) {
        const double u = umax * (i + 0.5) / N;
        const double rho = 2 * m + u * u;
        integral += std::sqrt(rho / (rho - 2 * m)) * rho * 2 * u * (umax / N);
    }
    const double oracle = 2 * M_PI * integral;
    CHECK(mass(g.T).total == doctest::Approx(oracle).epsilon(0.01));
}

TEST_CASE("stability run over the annulus family") {
    std::vector<InstanceSpec> specs = {InstanceSpec::annulus(0.4, 256),
                                       InstanceSpec::annulus(0.2, 256),
                                       InstanceSpec::annulus(0.1, 256)};
    StabilityOptions opts;
    opts.metric = MetricMode::length(2);
    opts.distortion_samples = 4;
    ConvergenceTable t = stability_run(specs, opts);
    REQUIRE(t.rows.size() == 3);
    CHECK(t.flat_distance_decreasing);
    CHECK(t.mass_trend_monotone);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const double eps = specs[i].eps;
        CHECK(t.rows[i].flat_distance_to_ball == doctest::Approx(M_PI * eps * eps).epsilon(0.1));
        CHECK(std::isfinite(t.rows[i].max_distortion));
    }
    // ratio of consecutive flat distances is about 4 for eps halving
    CHECK(t.rows[0].flat_distance_to_ball / t.rows[1].flat_distance_to_ball ==
          doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("stability chain is monotone within tolerance at small eps") {
    ConvergenceTable t = stability_run({InstanceSpec::annulus(0.05, 256)});
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].chain_monotone);
    CHECK(t.rows[0].chain_gap_rel < 0.02);
}

TEST_CASE("disk-only run: all chain terms agree") {
    ConvergenceTable t = stability_run({InstanceSpec::disk(256)});
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].chain_gap_rel < 1e-9);
    CHECK(t.rows[0].flat_distance_to_ball == doctest::Approx(0.0));
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(generate(InstanceSpec::annulus(1.5, 128)), InputError);
    CHECK_THROWS_AS(generate(InstanceSpec::annulus(0.0, 128)), InputError);
    CHECK_THROWS_AS(generate(InstanceSpec::schwarzschild(-1, 2, 32)), InputError);
    CHECK_THROWS_AS(generate(InstanceSpec::schwarzschild(0.1, 0.1, 32)), InputError);
    InstanceSpec bad = InstanceSpec::schwarzschild(0.1, 2, 32, 0.05); // r0 < 2m
    CHECK_THROWS_AS(generate(bad), InputError);
}
