// Exploration of biquadratic approximants of spherical rectangles.
//
// The long edges (v = -1, v = 1) fix alpha1 by equioscillation of the error
// along v = -1. What remains is a region of (alpha2, beta) bounded by three
// curves:
//   c1: dF/dv(u0, -1) = 0            (boundary minimum stays a minimum)
//   c2: F(0, -1) = F(0, 0)           (patch center below the edge maximum)
//   c3: F(0, -1) = F(-1, 0)          (short edge midpoint below it)
// When the region has interior, every point of it is a candidate optimum.
// Everything here is numerical evidence; results carry their residuals.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "spherequad/patch.hpp"

namespace spherequad {

struct RectBoundarySolve {
    double alpha1 = 0.0;
    double u0 = 0.0;             ///< interior minimum on v = -1, in (-1, 0)
    double boundary_error = 0.0; ///< F(0, -1) = -F(u0, -1)
    double residual = 0.0;       ///< max of the equioscillation and slope defects
};

/// Throws ParameterError for inadmissible (a, b), SolverError on failure.
RectBoundarySolve solve_alpha1(double a, double b, ErrorKind kind);

/// Signed margins of the three inequalities; all are >= 0 inside the region.
struct RectConstraints {
    double normal_slope = 0.0;   ///< dF/dv(u0, -1)
    double center_gap = 0.0;     ///< F(0, -1) - F(0, 0)
    double short_edge_gap = 0.0; ///< F(0, -1) - F(-1, 0)
};
RectConstraints rect_constraints(const RectParams& p, double u0, ErrorKind kind);

/// Points on the equality curves for fixed (a, b, alpha1, u0).
/// c3 is a vertical line alpha2 = short_edge_alpha2(); c1 and c2 are graphs
/// beta(alpha2).
struct RegionCurves {
    double a = 0.0, b = 0.0;
    RectBoundarySolve boundary;
    ErrorKind kind = ErrorKind::Radial;

    double short_edge_alpha2() const;
    double slope_beta(double alpha2) const;  ///< on c1
    double center_beta(double alpha2) const; ///< on c2
};
RegionCurves region_curves(double a, double b, ErrorKind kind);

struct ThresholdSolve {
    double b = 0.0;
    double alpha2 = 0.0;
    double beta = 0.0;
    RectBoundarySolve boundary;
    std::array<double, 3> residuals{}; ///< c1, c2, c3 at the solution
};

/// Smallest b in (0, min(a, sqrt(1 - a^2))) at which the region collapses to
/// a point, or nullopt when it never does. Throws ParameterError unless
/// 0 < a < 1.
std::optional<ThresholdSolve> solve_threshold(double a, ErrorKind kind);

struct RegionVertex {
    double alpha2 = 0.0;
    double beta = 0.0;
};

struct RectRegion {
    double a = 0.0, b = 0.0;
    ErrorKind kind = ErrorKind::Radial;
    RectBoundarySolve boundary;
    std::optional<double> b_threshold;
    /// v1 = c2 and c3, v2 = c1 and c3, v3 = c1 and c2
    std::array<RegionVertex, 3> vertices{};
    /// worst violation of the three inequalities over the vertices (<= 0 is good)
    double vertex_violation = 0.0;
    bool degenerate = true;
    std::string reason;

    RegionVertex centroid() const;
    RectParams params(const RegionVertex& v) const { return {a, b, boundary.alpha1, v.alpha2, v.beta}; }
};

/// Triangle of candidate optima at (a, b). Returns a degenerate region
/// (with `reason` set) instead of throwing when the triangle does not exist.
RectRegion region_vertices(double a, double b, ErrorKind kind);

/// Extremes of the error over [-1,1]^2: grid_n x grid_n sample followed by
/// coordinate-wise Brent refinement of the grid's local extremes.
struct RectExtrema {
    double min = 0.0, max = 0.0;
    double min_u = 0.0, min_v = 0.0;
    double max_u = 0.0, max_v = 0.0;

    double max_abs() const { return -min > max ? -min : max; }
};
RectExtrema rect_extrema(const RectParams& p, ErrorKind kind, int grid_n = 201);

struct ThresholdSample {
    double a = 0.0;
    std::optional<double> b_threshold;
    double b_limit = 0.0; ///< min(a, sqrt(1 - a^2))
};
std::vector<ThresholdSample> scan_multioptimum_domain(const std::vector<double>& a_grid, ErrorKind kind);

} // namespace spherequad
