#pragma once

#include <vector>

#include "curr/currents.hpp"

namespace curr {

/// Decomposition of an integral 1-current into injective open curves between
/// boundary points and injective loops, with exact mass and boundary
/// additivity.
struct CurveDecomposition {
    std::vector<std::vector<Index>> curves; // open: vertex id sequences
    std::vector<std::vector<Index>> loops;  // closed: first vertex not repeated
    double curve_mass = 0;
    double loop_mass = 0;

    double total_mass() const { return curve_mass + loop_mass; }
};

/// Expands multiplicities into parallel unit arcs, then peels injective
/// boundary-to-boundary trails followed by injective cycles. Deterministic:
/// walks prefer the smallest next vertex id; output is sorted longest-first,
/// ties by starting vertex id.
CurveDecomposition decompose_1current(const SimplicialCurrent& T);

/// Re-sum a decomposition into a chain on the same complex (used by the
/// exactness property checks).
SimplicialCurrent recompose(const std::shared_ptr<const EmbeddedComplex>& complex,
                            const CurveDecomposition& d);

struct GeodesicLemmaReport {
    double mass = 0;
    double distance = 0;
    bool distance_reachable = true;
    bool is_geodesic_segment = false;
};

/// For T with boundary delta_b - delta_a: reports M(T) against d(a, b) and
/// whether T is a single curve realizing the distance. Throws HypothesisError
/// unless the boundary has exactly that form.
GeodesicLemmaReport geodesic_lemma_check(const SimplicialCurrent& T, const Vec& a, const Vec& b,
                                         MetricMode metric, double tol = 1e-6);

} // namespace curr
