#include "spherequad/patch.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "spherequad/errors.hpp"

namespace spherequad {

std::string_view to_string(ErrorKind kind) {
    return kind == ErrorKind::Radial ? "radial" : "simplified";
}

ErrorKind parse_error_kind(std::string_view name) {
    if (name == "radial")
        return ErrorKind::Radial;
    if (name == "simplified")
        return ErrorKind::Simplified;
    throw ParameterError("unknown error kind '" + std::string(name) + "' (expected radial|simplified)");
}

namespace {

void check_parameter(double u, const char* name) {
    if (!(u >= -1.0 && u <= 1.0))
        throw ParameterError(std::string(name) + " = " + std::to_string(u) + " outside [-1,1]");
}

} // namespace

Basis bernstein2(double u) {
    check_parameter(u, "u");
    const double s = 0.5 * (1.0 - u);
    const double t = 0.5 * (1.0 + u);
    return {s * s, 2.0 * s * t, t * t};
}

Basis bernstein2_derivative(double u) {
    check_parameter(u, "u");
    return {-0.5 * (1.0 - u), -u, 0.5 * (1.0 + u)};
}

ControlNet ControlNet::transformed(const Mat3& rotation) const {
    ControlNet r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r.points[i][j] = rotation * points[i][j];
    return r;
}

ControlNet ControlNet::operator+(const ControlNet& o) const {
    ControlNet r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r.points[i][j] = points[i][j] + o.points[i][j];
    return r;
}

ControlNet ControlNet::scaled(double s) const {
    ControlNet r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r.points[i][j] = s * points[i][j];
    return r;
}

void validate_square_half_side(double a) {
    // allow the rounding of sqrt(2)/2 itself
    if (!(a > 0.0 && a <= kMaxSquareHalfSide * (1.0 + 1e-15)))
        throw ParameterError("square half-side a = " + std::to_string(a) + " outside (0, sqrt(2)/2]");
}

void validate_rect_sides(double a, double b) {
    if (!(b > 0.0 && b < a))
        throw ParameterError("rectangle sides need 0 < b < a (a = " + std::to_string(a) +
                             ", b = " + std::to_string(b) + ")");
    if (!(a * a + b * b < 1.0))
        throw ParameterError("rectangle corner above the sphere: a^2 + b^2 >= 1");
}

void validate(const SquareParams& p) {
    validate_square_half_side(p.a);
    if (!(p.alpha > 0.0) || !(p.beta > 0.0))
        throw ParameterError("square shape parameters must be positive");
}

void validate(const RectParams& p) {
    validate_rect_sides(p.a, p.b);
    if (!(p.alpha1 > 0.0) || !(p.alpha2 > 0.0) || !(p.beta > 0.0))
        throw ParameterError("rectangle shape parameters must be positive");
}

double square_corner_height(double a) { return std::sqrt(std::max(0.0, 1.0 - 2.0 * a * a)); }

SquareNetParts square_net_parts(double a) {
    validate_square_half_side(a);
    const double z = square_corner_height(a);
    SquareNetParts parts;
    ControlNet& c = parts.base;
    c(0, 0) = {-a, -a, z};
    c(2, 0) = {a, -a, z};
    c(0, 2) = {-a, a, z};
    c(2, 2) = {a, a, z};

    ControlNet& e = parts.alpha_part;
    e(1, 0) = c(0, 0) + c(2, 0);
    e(0, 1) = c(0, 0) + c(0, 2);
    e(2, 1) = c(2, 0) + c(2, 2);
    e(1, 2) = c(0, 2) + c(2, 2);

    parts.beta_part(1, 1) = {0.0, 0.0, 1.0};
    return parts;
}

RectNetParts rect_net_parts(double a, double b) {
    validate_rect_sides(a, b);
    const double z = std::sqrt(1.0 - a * a - b * b);
    RectNetParts parts;
    ControlNet& c = parts.base;
    c(0, 0) = {-a, -b, z};
    c(2, 0) = {a, -b, z};
    c(0, 2) = {-a, b, z};
    c(2, 2) = {a, b, z};

    parts.alpha1_part(1, 0) = c(0, 0) + c(2, 0);
    parts.alpha1_part(1, 2) = c(0, 2) + c(2, 2);
    parts.alpha2_part(0, 1) = c(0, 0) + c(0, 2);
    parts.alpha2_part(2, 1) = c(2, 0) + c(2, 2);
    parts.beta_part(1, 1) = {0.0, 0.0, 1.0};
    return parts;
}

ControlNet square_net(const SquareParams& p) {
    validate(p);
    const SquareNetParts parts = square_net_parts(p.a);
    return parts.base + parts.alpha_part.scaled(p.alpha) + parts.beta_part.scaled(p.beta);
}

ControlNet rect_net(const RectParams& p) {
    validate(p);
    const RectNetParts parts = rect_net_parts(p.a, p.b);
    return parts.base + parts.alpha1_part.scaled(p.alpha1) + parts.alpha2_part.scaled(p.alpha2) +
           parts.beta_part.scaled(p.beta);
}

namespace {

Vec3 blend(const ControlNet& net, const Basis& bu, const Basis& bv) {
    Vec3 r;
    for (int i = 0; i < 3; ++i) {
        Vec3 row;
        for (int j = 0; j < 3; ++j)
            row += bv[j] * net.points[i][j];
        r += bu[i] * row;
    }
    return r;
}

} // namespace

Vec3 eval_patch(const ControlNet& net, double u, double v) {
    return blend(net, bernstein2(u), bernstein2(v));
}

Partials eval_partials(const ControlNet& net, double u, double v) {
    const Basis bu = bernstein2(u);
    const Basis bv = bernstein2(v);
    return {blend(net, bernstein2_derivative(u), bv), blend(net, bu, bernstein2_derivative(v))};
}

double error_of_point(const Vec3& p, ErrorKind kind) {
    const double f = dot(p, p) - 1.0;
    if (kind == ErrorKind::Simplified)
        return f;
    // sqrt(f + 1) - 1 rewritten without cancellation for small f
    return f / (1.0 + std::sqrt(std::max(0.0, 1.0 + f)));
}

double error_value(const ControlNet& net, double u, double v, ErrorKind kind) {
    return error_of_point(eval_patch(net, u, v), kind);
}

ErrorGradient error_gradient(const ControlNet& net, double u, double v, ErrorKind kind) {
    const Vec3 p = eval_patch(net, u, v);
    const Partials d = eval_partials(net, u, v);
    // f = |p|^2 - 1 gives 2 p.p_u; g = |p| - 1 gives p.p_u / |p|
    const double scale = kind == ErrorKind::Simplified ? 2.0 : 1.0 / norm(p);
    return {scale * dot(p, d.du), scale * dot(p, d.dv)};
}

double f_side(double u, const SquareParams& p, ErrorKind kind) {
    return error_value(square_net(p), u, -1.0, kind);
}

double f_diag(double u, const SquareParams& p, ErrorKind kind) {
    return error_value(square_net(p), u, u, kind);
}

double f_rect(double u, double v, const RectParams& p, ErrorKind kind) {
    return error_value(rect_net(p), u, v, kind);
}

} // namespace spherequad
