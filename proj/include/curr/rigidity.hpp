#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "curr/curves.hpp"
#include "curr/flatnorm.hpp"
#include "curr/slicing.hpp"

namespace curr {

struct RigidityOptions {
    double tol = 1e-6;                  // hypothesis (1)/(2) tolerance, relative to the ball mass
    double injectivity_ratio_min = 0.1; // hypothesis (3): lower bound on the bi-Lipschitz ratio
    double sphere_tol = 1e-6;           // hypothesis (3): image-in-sphere tolerance
    double sphere_radius = 1.0;
    MetricMode metric = MetricMode::ambient();
    int distortion_samples = 8;      // geodesic sources; pairs run against every carrier vertex
    int injectivity_samples = 512;
    std::uint64_t seed = 17;
    double distortion_tol = -1;      // < 0: defaults to 0.05 * carrier diameter
};

struct HypothesesReport {
    bool pushforward_is_ball = false;
    double pushforward_defect = 0;
    bool mass_preserved = false;
    double mass_difference = 0;
    double mass_T = 0;
    double mass_pushforward = 0;
    bool boundary_injective = false;
    double bilipschitz_ratio = 0;              // min image gap / source gap over boundary vertices
    std::array<Index, 2> worst_collision{-1, -1};
    double sphere_defect = 0;

    bool all_pass() const { return pushforward_is_ball && mass_preserved && boundary_injective; }
    std::vector<int> violated() const;
};

/// Rigidity hypotheses (1)-(3) on a discrete instance. The pushforward is
/// compared against `ball`; when psi's image does not line up with the ball
/// complex, a 2D overlay reconciles the two, optionally via the exact image
/// complex `target`.
HypothesesReport check_hypotheses(const SimplicialCurrent& T, const PiecewiseAffineMap& psi,
                                  const SimplicialCurrent& ball, const RigidityOptions& opts = {},
                                  std::shared_ptr<const EmbeddedComplex> target = nullptr);

struct DistortionReport {
    double max_distortion = 0; // +inf when a sampled pair is disconnected
    std::array<Index, 2> argmax_pair{-1, -1};
    double geodesic_at_argmax = 0;
    double image_at_argmax = 0;
};

/// Seeded sample of carrier vertex pairs; distortion is
/// |d(x1, x2) - |psi(x1) - psi(x2)||. Extreme vertices along the coordinate
/// axes are always included as sources so diameter pairs are represented.
DistortionReport distortion(const SimplicialCurrent& T, const PiecewiseAffineMap& psi,
                            MetricMode metric, int samples, std::uint64_t seed);

struct SliceIsometryLevel {
    double level = 0;
    bool two_point_boundary = false;
    bool mass_equals_segment = false;
    double mass_defect = 0;
    double endpoint_distance_defect = 0;
    bool passes = false;
};

struct SliceIsometryReport {
    std::vector<SliceIsometryLevel> per_level;
    double fraction_passing = 0;
};

/// Lemma-style slice check: every generic slice should be a single geodesic
/// segment matching the ball chord, with endpoint distances preserved by psi.
SliceIsometryReport slice_isometry_check(const SimplicialCurrent& T, const PiecewiseAffineMap& psi,
                                         const Vec& v, std::span<const double> levels,
                                         MetricMode metric, double tol = 1e-3,
                                         double ball_radius = 1.0);

struct EssentialInjectivityReport {
    double fraction_injective = 0;        // sampled target points with one covering preimage
    double fraction_unit_multiplicity = 0; // ... with unsigned multiplicity sum 1
    int samples = 0;
};

EssentialInjectivityReport essential_injectivity_estimate(const SimplicialCurrent& T,
                                                          const PiecewiseAffineMap& psi,
                                                          const SimplicialCurrent& ball, int samples,
                                                          std::uint64_t seed);

struct OverlapDirectionReport {
    Vec direction;
    double overlap_measure = 0;
    bool centroid_fallback = false;
};

/// Projection direction from the centroid construction, with the overlap of
/// the projected h-neighbourhoods measured on the line v^perp (plane case).
OverlapDirectionReport overlap_direction(const std::vector<Vec>& a1, const std::vector<Vec>& a2,
                                         double bandwidth = 0.05);

struct RigidityChainReport {
    std::array<double, 5> terms{}; // M(psi#T), signed integral, unsigned integral,
                                   // |theta||det| integral, M(T)
    bool all_equal = false;
    double max_gap = 0;
    GradientGlobal gradient_global = GradientGlobal::constant_rotation;
    bool per_simplex_orthogonal = false;
};

/// The top-dimensional equality chain evaluated term by term; when all terms
/// agree the per-simplex gradients must be special orthogonal.
RigidityChainReport euclidean_rigidity_chain(const SimplicialCurrent& T, const PiecewiseAffineMap& psi,
                                             std::shared_ptr<const EmbeddedComplex> target,
                                             double tol = 1e-6);

enum class RigidityVerdict { consistent_with_isometry, hypotheses_violated, rigidity_failed };
const char* to_string(RigidityVerdict v);

struct RigidityReport {
    HypothesesReport hypotheses;
    EssentialInjectivityReport injectivity;
    DistortionReport distortion;
    double distortion_tol = 0;
    RigidityVerdict verdict = RigidityVerdict::hypotheses_violated;
    std::vector<int> violated_hypotheses;
};

/// Full instance check: hypotheses, essential injectivity, distortion, and
/// the verdict. rigidity_failed can only appear when every hypothesis holds
/// while the distortion tolerance is exceeded.
RigidityReport rigidity_check(const SimplicialCurrent& T, const PiecewiseAffineMap& psi,
                              const SimplicialCurrent& ball, const RigidityOptions& opts = {},
                              std::shared_ptr<const EmbeddedComplex> target = nullptr);

} // namespace curr
