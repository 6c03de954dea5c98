// Best approximation of a spherical square by a biquadratic patch.
//
// The minimax problem over (alpha, beta) is reduced in two steps:
//   1. beta = beta0(alpha) balances the patch center against the side midpoint,
//      f_diag(0) == f_side(0);
//   2. (u, alpha) solves
//        d/du f_diag(u) = 0,   f_diag(0) + f_diag(u) = 0,
//      i.e. the diagonal error equioscillates between +E at the center and
//      -E at (u_m, u_m).
// The extrema of the error over the whole square then lie on the union of one
// side and the diagonal (the "angle" set), so E is the global minimax value.

#pragma once

#include <string>
#include <vector>

#include "spherequad/patch.hpp"

namespace spherequad {

inline constexpr double kDefaultTolerance = 1e-12;

/// Interval every optimal alpha is searched in.
inline constexpr double kAlphaSearchLo = 0.5;
inline constexpr double kAlphaSearchHi = 1.5;

struct OptimizationResult {
    SquareParams params;
    double u_m = 0.0;       ///< location of the interior diagonal minimum, 0 < u_m < 1
    double max_error = 0.0; ///< E, the equioscillation amplitude in units of `kind`
    ErrorKind kind = ErrorKind::Radial;
    int iterations = 0;
    double residual = 0.0;            ///< infinity norm of the final Newton residual
    double condition_estimate = 0.0;  ///< infinity-norm condition number of the Jacobian
    std::vector<std::string> warnings;
};

/// Positive root of beta -> f_diag(0, alpha, beta) - f_side(0, alpha).
double beta0(double alpha, double a);
/// d beta0 / d alpha; beta0 is affine in alpha.
double beta0_slope(double a);

OptimizationResult optimize_square(double a, ErrorKind kind, double tol = kDefaultTolerance);

struct AlphaBrackets {
    double alpha0 = 0.0;      ///< zero of f_side(0, .)
    double interval_lo = 0.0; ///< 1/2
    double interval_hi = 0.0; ///< 1 / (2 (1 - a^2))
    double alpha_l = 0.0;
    double alpha_r = 0.0;
};
AlphaBrackets alpha_brackets(double a);

/// Stationary point of the error written in the symmetric coordinates
/// x = u^2 + v^2, y = u^2 v^2, with beta = beta0(alpha).
/// Throws SingularParameterError for alpha == 1/2.
struct CriticalPoint {
    double x = 0.0;
    double y = 0.0;
};
CriticalPoint critical_point(double alpha, double a);

/// Extremes of the error along the side v = -1 and the diagonal v = u.
struct AngleExtrema {
    double side_min = 0.0, side_max = 0.0;
    double diag_min = 0.0, diag_max = 0.0;
    double side_argmin = 0.0, diag_argmin = 0.0;

    double min() const { return side_min < diag_min ? side_min : diag_min; }
    double max() const { return side_max > diag_max ? side_max : diag_max; }
    double max_abs() const { return -min() > max() ? -min() : max(); }
};
AngleExtrema angle_extrema(const SquareParams& p, ErrorKind kind, int samples = 401);

/// Approximant in which the side error equioscillates, with beta chosen to
/// balance the diagonal error. This is the construction the optimizer is
/// compared against; it is never better.
struct SideEquioscillation {
    double alpha_e = 0.0;
    double beta = 0.0;
    double side_max_abs = 0.0;  ///< max |f_side(., alpha_e)|
    double diag_max_abs = 0.0;  ///< max |f_diag(., alpha_e, beta)|
    double angle_minimax = 0.0; ///< max of the two
};
SideEquioscillation equioscillating_side_alpha(double a, ErrorKind kind);

struct ExtremaReport {
    int grid_n = 0;
    double slack = 0.0;
    double grid_max = 0.0;
    double grid_min = 0.0;
    double angle_max = 0.0;
    double angle_min = 0.0;
    bool pass = false;
};

/// Samples the error on a grid_n x grid_n grid of [-1,1]^2 and compares its
/// extremes with those on the angle set. grid_n must be odd and >= 101.
ExtremaReport verify_extrema_on_angle(const SquareParams& p, ErrorKind kind, int grid_n,
                                      double slack = 1e-9);
ExtremaReport verify_extrema_on_angle(const OptimizationResult& result, int grid_n,
                                      double slack = 1e-9);

/// Extremes of the error over a uniform n x n grid of [-1,1]^2.
struct GridExtrema {
    double min = 0.0;
    double max = 0.0;
};
GridExtrema grid_extrema(const ControlNet& net, ErrorKind kind, int n);

} // namespace spherequad
