#pragma once

#include <array>
#include <string>

#include "curr/pa_maps.hpp"
#include "curr/rigidity.hpp"

namespace curr {

struct InstanceSpec {
    enum class Kind { disk, annulus, split_disks, schwarzschild_graph };
    Kind kind = Kind::disk;
    int n_segments = 512;  // outer boundary segments (disk, annulus, split_disks)
    double eps = 0.1;      // annulus inner radius
    double mass_param = 0.1; // schwarzschild m
    double radius = 2.0;     // schwarzschild r
    double r0 = -1;          // schwarzschild inner radius; < 0 means the horizon 2m
    int grid = 96;           // schwarzschild rings; sectors = 2 * grid

    static InstanceSpec disk(int n_segments);
    static InstanceSpec annulus(double eps, int n_segments);
    static InstanceSpec split_disks(int n_segments);
    static InstanceSpec schwarzschild(double m, double r, int grid, double r0 = -1);

    std::string name() const;
    double parameter() const;
};

/// A generated instance: current, map, the complex refining the map's image,
/// and the comparison ball current (possibly on its own complex).
struct Instance {
    std::string kind;
    double parameter = 0;
    SimplicialCurrent T;
    PiecewiseAffineMap psi;
    std::shared_ptr<const EmbeddedComplex> target;
    SimplicialCurrent ball;
    double mesh_size = 0;   // longest edge of the source complex
    double ball_radius = 1.0;
};

Instance generate(const InstanceSpec& spec);

/// Plain polar meshes, exposed for tests.
std::shared_ptr<const EmbeddedComplex> polar_disk_mesh(int n_segments, int rings);
std::shared_ptr<const EmbeddedComplex> polar_annulus_mesh(double eps, int n_segments, int rings);
SimplicialCurrent full_chain(const std::shared_ptr<const EmbeddedComplex>& c);
int default_rings(int n_segments);

/// Schwarzschild embedding profile: graph height over radius rho >= 2m.
double schwarzschild_profile(double m, double rho);

struct StabilityOptions {
    MetricMode metric = MetricMode::length(2);
    int distortion_samples = 6;
    std::uint64_t seed = 17;
    double chain_tol_rel = 0.02; // monotonicity tolerance relative to vol(B)
};

struct StabilityRow {
    double parameter = 0;
    double mass = 0;
    double flat_distance_to_ball = 0;
    double max_distortion = 0;
    std::array<double, 5> chain{}; // vol(B) <= M(psi_lim# T) <= M(T) <= M(T_j) <= vol(B)
    bool chain_monotone = false;
    double chain_gap_rel = 0; // (max - min) / vol(B)
};

struct ConvergenceTable {
    std::vector<StabilityRow> rows;
    bool flat_distance_decreasing = false;
    bool mass_trend_monotone = false;
};

/// Runs the family, evaluating the inequality chain, the flat distance to the
/// ball on a common 2D overlay, and the metric distortion per instance.
ConvergenceTable stability_run(const std::vector<InstanceSpec>& specs,
                               const StabilityOptions& opts = {});

} // namespace curr
