// 1D root finding and extremum search shared by the solvers.
#pragma once

#include <functional>

namespace spherequad::detail {

struct Extremum {
    double at = 0.0;
    double value = 0.0;
};

struct CurveExtrema {
    Extremum min;
    Extremum max;
};

/// Minimum and maximum of a smooth function on [lo, hi]. The function is
/// sampled at `samples` equispaced points and the best sample of each kind
/// is polished with Brent's method on its neighbouring interval.
CurveExtrema curve_extrema(const std::function<double(double)>& fn, double lo, double hi,
                           int samples = 257);

/// Root of fn in [lo, hi] to full double precision (TOMS 748).
/// Throws SolverError when fn(lo) and fn(hi) have the same sign.
double find_root(const std::function<double(double)>& fn, double lo, double hi);

/// Scans [lo, hi] in `steps` intervals for the first sign change and refines
/// it. Returns false when no sign change is seen.
bool first_root(const std::function<double(double)>& fn, double lo, double hi, int steps,
                double& root);

} // namespace spherequad::detail
