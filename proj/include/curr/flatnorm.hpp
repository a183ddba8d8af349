#pragma once

#include <iosfwd>
#include <map>
#include <memory>

#include "curr/currents.hpp"
#include "curr/lp.hpp"

namespace curr {

/// Real-valued chain arising from the LP relaxation.
struct RealChain {
    int dim = 0;
    std::map<Index, double> entries;

    double mass_on(const EmbeddedComplex& c) const {
        double t = 0;
        for (auto& [s, v] : entries) t += std::abs(v) * c.volume(dim, s);
        return t;
    }
};

enum class SolverStatus { optimal, infeasible, unbounded };

struct FlatNormResult {
    double value = 0;
    RealChain filling;   // (k+1)-chain S
    RealChain residual;  // k-chain T - dS
    SolverStatus solver_status = SolverStatus::optimal;
};

const char* to_string(SolverStatus s);

/// Simplicial flat norm of T on its complex:
/// min over real S of M(T - dS) + M(S), solved as a linear program over
/// nonnegative split variables. For top-dimensional T the filling space is
/// empty and the value is M(T). Optionally dumps the LP in CPLEX text format.
FlatNormResult flat_norm(const SimplicialCurrent& T, std::ostream* dump_lp = nullptr);

/// Flat distance between two chains of equal dimension. Chains on different
/// complexes are first moved onto their 2D overlay.
FlatNormResult flat_distance(const SimplicialCurrent& A, const SimplicialCurrent& B,
                             std::ostream* dump_lp = nullptr);

/// Exact-arrangement overlay of two triangulated complexes in the plane.
/// The merged triangles partition each input triangle's area; lift maps take
/// chains from either input onto the merged complex.
struct OverlayComplex {
    std::shared_ptr<const EmbeddedComplex> merged;
    std::vector<std::vector<Index>> lift1; // per c1 triangle: merged triangle ids
    std::vector<std::vector<Index>> lift2;
    std::vector<Index> from1; // per merged triangle: covering c1 triangle or -1
    std::vector<Index> from2;
    double max_partition_defect = 0; // relative, per input triangle
};

OverlayComplex overlay_2d(const std::shared_ptr<const EmbeddedComplex>& c1,
                          const std::shared_ptr<const EmbeddedComplex>& c2);

/// Move a 2-chain from input side 1 or 2 onto the merged complex.
SimplicialCurrent transport_chain(const OverlayComplex& ov, const SimplicialCurrent& chain, int side);

} // namespace curr
