#pragma once

#include <map>
#include <memory>
#include <span>

#include "curr/currents.hpp"
#include "curr/pa_maps.hpp"

namespace curr {

struct SliceLevel {
    double requested = 0;
    double used = 0;
    bool jittered = false;
};

/// One slice: a polygonal 1-current in the source ambient space, cut out of
/// the carried triangles by the fiber of p o psi over one level. Cut points
/// are keyed by (source edge, parameter) so that neighbouring triangles share
/// them bit-exactly.
struct Slice {
    std::shared_ptr<const EmbeddedComplex> line;
    std::optional<SimplicialCurrent> chain;   // 1-chain on `line`; empty slices carry none
    std::vector<Index> cut_edge;              // per line vertex: source edge id
    std::vector<double> cut_param;            // parameter along the sorted edge
    std::vector<Vec> psi_image;               // image of the cut point under psi

    double mass_total() const;
    bool empty() const { return !chain.has_value(); }
};

/// Slices of a 2-current by the fibers of the composed projection
/// pi = <psi(.), w>, where w spans the orthogonal complement of the unit
/// direction v in the target plane. Oriented so that psi pushes each slice
/// onto the target fiber segment running in the +v direction.
class SliceFamily {
public:
    Vec direction;             // v, |v| = 1
    Vec perp;                  // w, frame of v^perp
    std::vector<SliceLevel> levels;
    std::vector<double> weights;
    std::vector<Slice> slices;
};

/// Midpoint-rule levels covering the projected carrier of T.
std::pair<std::vector<double>, std::vector<double>> uniform_levels(const SimplicialCurrent& T,
                                                                   const PiecewiseAffineMap& psi,
                                                                   const Vec& v, int count);

SliceFamily slice(const SimplicialCurrent& T, const PiecewiseAffineMap& psi, const Vec& v,
                  std::span<const double> levels, std::span<const double> weights = {});

struct SliceBoundaryCheck {
    double max_defect = 0;
    std::vector<double> per_level;
};

/// Compares boundary(slice) with (-1)^(n-1) <boundary T, pi, z> at each level.
SliceBoundaryCheck slice_boundary_check(const SliceFamily& fam, const SimplicialCurrent& T,
                                        const PiecewiseAffineMap& psi);

struct SliceMassIntegral {
    double integral = 0;
    double mass_bound = 0;
    bool holds = false;
    std::vector<double> per_level_mass;
};

/// Quadrature of level masses against Lip(pi)^(n-1) M(T).
SliceMassIntegral slice_mass_integral(const SliceFamily& fam, const SimplicialCurrent& T,
                                      const PiecewiseAffineMap& psi);

struct SliceCommutationCheck {
    double max_defect = 0;
    std::vector<double> per_level;
};

/// Defect of psi_#<T, p o psi, z> = <psi_# T, p, z> per level, measured as the
/// mass of the difference of the image 1-currents on the fiber line.
SliceCommutationCheck slice_commutation_check(const SliceFamily& fam, const SimplicialCurrent& T,
                                              const PiecewiseAffineMap& psi,
                                              std::shared_ptr<const EmbeddedComplex> target);

struct CoareaCheck {
    double lhs = 0;            // integral of |theta| C_n(dpsi)
    double rhs = 0;            // integral of |theta| (area factor 1) = M(T)
    bool holds = false;
    double unsigned_image_mass = 0; // multiplicity-counting side
    double cross_defect = 0;
};

/// lhs = sum |theta| |det dpsi| vol(simplex) <= rhs = M(T); the unsigned side
/// is evaluated on the target when one is supplied, otherwise from the image
/// volumes directly.
CoareaCheck coarea_inequality_check(const SimplicialCurrent& T, const PiecewiseAffineMap& psi,
                                    std::shared_ptr<const EmbeddedComplex> target = nullptr);

} // namespace curr
