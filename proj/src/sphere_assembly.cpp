#include "spherequad/sphere_assembly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "numeric.hpp"
#include "spherequad/errors.hpp"
#include "spherequad/square_optimizer.hpp"

namespace spherequad {

namespace {

const double kCubeHalfSide = 1.0 / std::sqrt(3.0);
constexpr double kCornerMatchTol = 1e-9;

// corner index pairs (i, j) at the start and end of each edge
constexpr std::array<std::array<std::array<int, 2>, 2>, 4> kEdgeCorners{{
    {{{0, 0}, {2, 0}}},
    {{{2, 0}, {2, 2}}},
    {{{0, 2}, {2, 2}}},
    {{{0, 0}, {0, 2}}},
}};

std::array<double, 2> edge_param(int edge, double t) {
    switch (edge) {
    case 0: return {t, -1.0};
    case 1: return {1.0, t};
    case 2: return {t, 1.0};
    default: return {-1.0, t};
    }
}

Vec3 unit_normal(const ControlNet& net, double u, double v) {
    const Partials d = eval_partials(net, u, v);
    return normalized(cross(d.du, d.dv));
}

} // namespace

std::string_view to_string(Continuity c) {
    return c == Continuity::G0 ? "G0" : "G1";
}

std::vector<Mat3> face_rotations(int n_patches) {
    const Mat3 pz = Mat3::identity();
    const Mat3 mz{{{{1, 0, 0}, {0, -1, 0}, {0, 0, -1}}}}; // pi about x
    if (n_patches == 2)
        return {pz, mz};
    if (n_patches != 6)
        throw ParameterError("a sphere spline has 2 or 6 patches, got " + std::to_string(n_patches));
    const Mat3 px{{{{0, 0, 1}, {0, 1, 0}, {-1, 0, 0}}}};  // +pi/2 about y
    const Mat3 mx{{{{0, 0, -1}, {0, 1, 0}, {1, 0, 0}}}};  // -pi/2 about y
    const Mat3 py{{{{1, 0, 0}, {0, 0, 1}, {0, -1, 0}}}};  // -pi/2 about x
    const Mat3 my{{{{1, 0, 0}, {0, 0, -1}, {0, 1, 0}}}};  // +pi/2 about x
    return {pz, mz, px, mx, py, my};
}

double patch_max_radial_error(const SquareParams& p, int grid_n) {
    const double on_angle = angle_extrema(p, ErrorKind::Radial).max_abs();
    const GridExtrema g = grid_extrema(square_net(p), ErrorKind::Radial, grid_n);
    return std::max({on_angle, g.max, -g.min});
}

SphereSpline assemble_g0(int n_patches, ErrorKind kind) {
    const std::vector<Mat3> rotations = face_rotations(n_patches);
    const double a = n_patches == 2 ? kMaxSquareHalfSide : kCubeHalfSide;
    const OptimizationResult opt = optimize_square(a, kind);

    SphereSpline s;
    s.continuity = Continuity::G0;
    s.params = opt.params;
    const ControlNet net = square_net(opt.params);
    for (const Mat3& r : rotations)
        s.patches.push_back({r, net});
    s.max_radial_error = patch_max_radial_error(opt.params);
    return s;
}

double g1_alpha() {
    // The corner normal is radial iff the corner tangent p_u(-1,-1) is
    // orthogonal to the corner itself (p_v follows by symmetry).
    const SquareNetParts parts = square_net_parts(kCubeHalfSide);
    return detail::find_root(
        [&](double alpha) {
            const ControlNet net = parts.base + parts.alpha_part.scaled(alpha) + parts.beta_part;
            return dot(eval_partials(net, -1.0, -1.0).du, eval_patch(net, -1.0, -1.0));
        },
        0.5, 1.5);
}

double g1_beta(double alpha, double v) {
    const SquareNetParts parts = square_net_parts(kCubeHalfSide);
    const ControlNet probe = parts.base + parts.alpha_part.scaled(alpha);
    // plane of the shared edge u = 1, which is the neighbour's mirror plane
    const Vec3 m = normalized(cross(eval_patch(probe, 1.0, -1.0), eval_patch(probe, 1.0, 1.0)));
    auto h = [&](double beta) {
        const ControlNet net = probe + parts.beta_part.scaled(beta);
        return dot(unit_normal(net, 1.0, v), m);
    };
    double beta = 0.0;
    if (!detail::first_root(h, 0.5, 4.0, 64, beta))
        throw SolverError("no tangent-plane match for beta in [0.5, 4]");
    return beta;
}

SphereSpline assemble_g1() {
    const double alpha = g1_alpha();
    const SquareParams p{kCubeHalfSide, alpha, g1_beta(alpha)};
    SphereSpline s;
    s.continuity = Continuity::G1;
    s.params = p;
    const ControlNet net = square_net(p);
    for (const Mat3& r : face_rotations(6))
        s.patches.push_back({r, net});
    s.max_radial_error = patch_max_radial_error(p);
    return s;
}

ContinuityReport check_continuity(const SphereSpline& spline, int samples) {
    if (samples < 11)
        throw ParameterError("continuity check needs at least 11 samples per edge");
    const std::size_t n = spline.patches.size();
    std::vector<ControlNet> nets;
    nets.reserve(n);
    for (const PlacedPatch& pp : spline.patches)
        nets.push_back(pp.world_net());

    ContinuityReport rep;
    std::vector<bool> connected(n, false);
    auto close = [](const Vec3& x, const Vec3& y) { return norm(x - y) <= kCornerMatchTol; };

    for (std::size_t pa = 0; pa < n; ++pa)
        for (std::size_t pb = pa + 1; pb < n; ++pb)
            for (int ea = 0; ea < 4; ++ea)
                for (int eb = 0; eb < 4; ++eb) {
                    const auto& ca = kEdgeCorners[ea];
                    const auto& cb = kEdgeCorners[eb];
                    const Vec3 a0 = nets[pa](ca[0][0], ca[0][1]);
                    const Vec3 a1 = nets[pa](ca[1][0], ca[1][1]);
                    const Vec3 b0 = nets[pb](cb[0][0], cb[0][1]);
                    const Vec3 b1 = nets[pb](cb[1][0], cb[1][1]);
                    bool reversed = false;
                    if (close(a0, b0) && close(a1, b1))
                        reversed = false;
                    else if (close(a0, b1) && close(a1, b0))
                        reversed = true;
                    else
                        continue;

                    EdgeReport e{static_cast<int>(pa), ea, static_cast<int>(pb), eb, reversed, 0.0, 0.0};
                    for (int k = 0; k < samples; ++k) {
                        const double t = k == samples - 1 ? 1.0 : -1.0 + 2.0 * k / (samples - 1);
                        const auto [ua, va] = edge_param(ea, t);
                        const auto [ub, vb] = edge_param(eb, reversed ? -t : t);
                        e.position_gap = std::max(
                            e.position_gap, norm(eval_patch(nets[pa], ua, va) - eval_patch(nets[pb], ub, vb)));
                        e.normal_gap = std::max(
                            e.normal_gap, unsigned_angle(unit_normal(nets[pa], ua, va), unit_normal(nets[pb], ub, vb)));
                    }
                    rep.max_position_gap = std::max(rep.max_position_gap, e.position_gap);
                    rep.max_normal_gap = std::max(rep.max_normal_gap, e.normal_gap);
                    rep.edges.push_back(e);
                    connected[pa] = connected[pb] = true;
                }

    if (n > 1)
        for (std::size_t k = 0; k < n; ++k)
            if (!connected[k])
                throw TopologyError("patch " + std::to_string(k) + " shares no edge with any other patch");
    return rep;
}

} // namespace spherequad
