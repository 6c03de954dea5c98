// Whole-sphere splines built from rotated copies of one square patch.
#pragma once

#include <string_view>
#include <vector>

#include "spherequad/patch.hpp"

namespace spherequad {

enum class Continuity { G0, G1 };

std::string_view to_string(Continuity c);

struct PlacedPatch {
    Mat3 rotation = Mat3::identity();
    ControlNet net; ///< net in the base orientation (the +z face)

    ControlNet world_net() const { return net.transformed(rotation); }
};

struct SphereSpline {
    std::vector<PlacedPatch> patches;
    Continuity continuity = Continuity::G0;
    double max_radial_error = 0.0;
    SquareParams params; ///< parameters of the base patch
};

/// Hemisphere pair (n_patches = 2, a = sqrt(2)/2) or cube-face sextet
/// (n_patches = 6, a = sqrt(3)/3) built from the optimal patch for `kind`.
/// Throws ParameterError for any other count.
SphereSpline assemble_g0(int n_patches, ErrorKind kind);

/// Six-patch spline whose patches meet with a common tangent plane.
SphereSpline assemble_g1();

/// Edge scale for which the corner tangent plane of the cube-face patch
/// coincides with the sphere's, found by root finding.
double g1_alpha();
/// Center height for which the tangent plane along the edge u = 1 contains
/// the normal of the neighbouring face, evaluated at edge parameter v.
double g1_beta(double alpha, double v = 0.0);

/// Maximum |g| of one patch: extremes on the angle set joined with a
/// grid_n x grid_n sample of the full square.
double patch_max_radial_error(const SquareParams& p, int grid_n = 201);

/// Rotations in the fixed face order +z, -z, +x, -x, +y, -y (six faces) or
/// +z, -z (two hemispheres).
std::vector<Mat3> face_rotations(int n_patches);

struct EdgeReport {
    int patch_a = 0, edge_a = 0;
    int patch_b = 0, edge_b = 0;
    bool reversed = false;   ///< edge b runs opposite to edge a
    double position_gap = 0.0;
    double normal_gap = 0.0; ///< radians, orientation ignored
};

struct ContinuityReport {
    std::vector<EdgeReport> edges;
    double max_position_gap = 0.0;
    double max_normal_gap = 0.0;
};

/// Edges are numbered 0: v=-1, 1: u=1, 2: v=1, 3: u=-1, each running in the
/// direction of increasing parameter. Shared edges are found by matching
/// their world-space end points within 1e-9 and then sampled at `samples`
/// parameters. Throws ParameterError for samples < 11 and TopologyError if
/// a patch of a multi-patch spline shares no edge.
ContinuityReport check_continuity(const SphereSpline& spline, int samples = 101);

} // namespace spherequad
