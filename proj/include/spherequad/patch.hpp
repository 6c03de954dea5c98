// Biquadratic tensor-product Bezier patches over [-1,1]^2 and the radial
// error functionals measured against the unit sphere.
//
// Index convention: net.points[i][j] is weighted by B_i(u) B_j(v), so i runs
// along u and j along v. The edge v = -1 is built from points[.][0].

#pragma once

#include <array>
#include <string_view>

#include "spherequad/vec3.hpp"

namespace spherequad {

/// Which distance to the unit sphere is measured.
///   Simplified:  f = |p|^2 - 1
///   Radial:      g = sqrt(f + 1) - 1 = |p| - 1
enum class ErrorKind { Simplified, Radial };

std::string_view to_string(ErrorKind kind);
/// Accepts "simplified" or "radial"; throws ParameterError otherwise.
ErrorKind parse_error_kind(std::string_view name);

using Basis = std::array<double, 3>;

/// Quadratic Bernstein basis reparameterized to [-1,1].
/// Throws ParameterError when u is outside [-1,1].
Basis bernstein2(double u);
/// d/du of bernstein2.
Basis bernstein2_derivative(double u);
/// d^2/du^2 of bernstein2 (constant).
constexpr Basis bernstein2_second_derivative() { return {0.5, -1.0, 0.5}; }

struct ControlNet {
    std::array<std::array<Vec3, 3>, 3> points{};

    Vec3& operator()(int i, int j) { return points[i][j]; }
    const Vec3& operator()(int i, int j) const { return points[i][j]; }

    ControlNet transformed(const Mat3& rotation) const;
    ControlNet operator+(const ControlNet& o) const;
    ControlNet scaled(double s) const;
};

/// Spherical square whose corners project onto a square of half-side a.
struct SquareParams {
    double a = 0.0;     ///< half-side, 0 < a <= sqrt(2)/2
    double alpha = 0.0; ///< edge midpoint scale
    double beta = 0.0;  ///< center height
};

/// Spherical rectangle with projected half-edges a (long) and b (short).
struct RectParams {
    double a = 0.0;
    double b = 0.0;
    double alpha1 = 0.0; ///< scale of the long edges (v = -1 and v = 1)
    double alpha2 = 0.0; ///< scale of the short edges (u = -1 and u = 1)
    double beta = 0.0;
};

inline constexpr double kMaxSquareHalfSide = 0.70710678118654752440;

/// Throws ParameterError unless 0 < a <= sqrt(2)/2.
void validate_square_half_side(double a);
/// Throws ParameterError unless 0 < b < a and a^2 + b^2 < 1.
void validate_rect_sides(double a, double b);
void validate(const SquareParams& p);
void validate(const RectParams& p);

/// sqrt(1 - 2 a^2) with the radicand clamped at zero, so a = sqrt(2)/2 in
/// floating point yields exactly 0.
double square_corner_height(double a);

ControlNet square_net(const SquareParams& p);
ControlNet rect_net(const RectParams& p);

/// square_net is affine in (alpha, beta):
///   square_net({a, alpha, beta}) == base + alpha * alpha_part + beta * beta_part
struct SquareNetParts {
    ControlNet base;
    ControlNet alpha_part;
    ControlNet beta_part;
};
SquareNetParts square_net_parts(double a);

/// rect_net is affine in (alpha1, alpha2, beta).
struct RectNetParts {
    ControlNet base;
    ControlNet alpha1_part;
    ControlNet alpha2_part;
    ControlNet beta_part;
};
RectNetParts rect_net_parts(double a, double b);

Vec3 eval_patch(const ControlNet& net, double u, double v);

struct Partials {
    Vec3 du;
    Vec3 dv;
};
Partials eval_partials(const ControlNet& net, double u, double v);

/// Error of a single point. Radial clamps f + 1 at zero before the root.
double error_of_point(const Vec3& p, ErrorKind kind);
double error_value(const ControlNet& net, double u, double v, ErrorKind kind);

/// Gradient (d/du, d/dv) of error_value, from exact patch derivatives.
struct ErrorGradient {
    double du = 0.0;
    double dv = 0.0;
};
ErrorGradient error_gradient(const ControlNet& net, double u, double v, ErrorKind kind);

/// Error along the side v = -1. Does not depend on p.beta.
double f_side(double u, const SquareParams& p, ErrorKind kind);
/// Error along the diagonal v = u.
double f_diag(double u, const SquareParams& p, ErrorKind kind);
double f_rect(double u, double v, const RectParams& p, ErrorKind kind);

} // namespace spherequad
