// Brute-force minimax over parameter grids. Slow but independent of the
// Newton and root-finding machinery, so it is used to cross-check it.
#pragma once

#include <vector>

#include "spherequad/patch.hpp"

namespace spherequad {

struct Range {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
};

struct OracleOptions {
    int n_param = 41;      ///< grid points per parameter axis, >= 41
    int n_uv = 201;        ///< samples per (u, v) axis, odd, >= 201
    int levels = 5;        ///< number of 10x zooms after the coarse grid
    double tie_tol = 1e-6; ///< cells this close to the best are reported as ties
};

/// Parameter boxes actually searched, coarse level first.
struct GridSpec {
    std::vector<std::vector<Range>> level_ranges;
    int n_param = 0;
    int n_uv = 0;
    bool widened = false; ///< coarse box was enlarged after a boundary hit
};

template <class Params>
struct OracleResult {
    Params best_params{};
    double best_minimax = 0.0;
    GridSpec grid_spec;
    /// Spread of the minimax over the final grid neighbours of the best cell
    /// plus the gap between sampled and refined inner maxima.
    double slack = 0.0;
    /// Minimax on the full n_uv x n_uv grid at best_params.
    double full_square_minimax = 0.0;
    std::vector<Params> near_ties; ///< final-level cells within tie_tol
};

/// Minimax of |error| over alpha x beta; the inner maximum runs over the
/// side v = -1 and the diagonal v = u only, with a full-grid confirmation
/// at the incumbent. Throws ParameterError on bad options and SolverError
/// when the optimum stays on the box boundary after one widening.
OracleResult<SquareParams> grid_minimax_square(double a, ErrorKind kind, Range alpha = {0.45, 1.2},
                                               Range beta = {0.8, 5.0}, const OracleOptions& opts = {});

/// As above over alpha1 x alpha2 x beta with the inner maximum over the full
/// parameter square.
OracleResult<RectParams> grid_minimax_rect(double a, double b, ErrorKind kind, Range alpha1 = {0.45, 1.2},
                                           Range alpha2 = {0.45, 1.2}, Range beta = {0.8, 5.0},
                                           const OracleOptions& opts = {});

} // namespace spherequad
