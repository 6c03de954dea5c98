#include "numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "spherequad/errors.hpp"

namespace spherequad::detail {

namespace {

constexpr int kBrentBits = std::numeric_limits<double>::digits / 2;

Extremum polish(const std::function<double(double)>& fn, double lo, double hi, double sign,
                const Extremum& seed) {
    std::uintmax_t iters = 200;
    auto [x, fx] = boost::math::tools::brent_find_minima(
        [&](double t) { return sign * fn(t); }, lo, hi, kBrentBits, iters);
    const double value = sign * fx;
    // Brent can stop on a worse point than the sample when the bracket is flat
    if (sign * value > sign * seed.value)
        return seed;
    return {x, value};
}

} // namespace

CurveExtrema curve_extrema(const std::function<double(double)>& fn, double lo, double hi,
                           int samples) {
    samples = std::max(samples, 3);
    const double h = (hi - lo) / (samples - 1);
    std::vector<double> xs(samples), ys(samples);
    for (int k = 0; k < samples; ++k) {
        xs[k] = k == samples - 1 ? hi : lo + k * h;
        ys[k] = fn(xs[k]);
    }
    const auto imin = static_cast<int>(std::min_element(ys.begin(), ys.end()) - ys.begin());
    const auto imax = static_cast<int>(std::max_element(ys.begin(), ys.end()) - ys.begin());

    auto bracket = [&](int k) {
        return std::pair{xs[std::max(k - 1, 0)], xs[std::min(k + 1, samples - 1)]};
    };
    CurveExtrema r;
    {
        auto [a, b] = bracket(imin);
        r.min = polish(fn, a, b, 1.0, {xs[imin], ys[imin]});
    }
    {
        auto [a, b] = bracket(imax);
        r.max = polish(fn, a, b, -1.0, {xs[imax], ys[imax]});
    }
    return r;
}

double find_root(const std::function<double(double)>& fn, double lo, double hi) {
    const double flo = fn(lo);
    const double fhi = fn(hi);
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    if (std::signbit(flo) == std::signbit(fhi))
        throw SolverError("root not bracketed on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                          "]: f = " + std::to_string(flo) + ", " + std::to_string(fhi));
    std::uintmax_t iters = 200;
    auto [x0, x1] = boost::math::tools::toms748_solve(
        fn, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(), iters);
    const double f0 = std::abs(fn(x0));
    const double f1 = std::abs(fn(x1));
    return f0 <= f1 ? x0 : x1;
}

bool first_root(const std::function<double(double)>& fn, double lo, double hi, int steps,
                double& root) {
    double prev_x = lo;
    double prev_f = fn(lo);
    for (int k = 1; k <= steps; ++k) {
        const double x = k == steps ? hi : lo + (hi - lo) * k / steps;
        const double fx = fn(x);
        if (std::isfinite(prev_f) && std::isfinite(fx) &&
            (prev_f == 0.0 || std::signbit(prev_f) != std::signbit(fx))) {
            root = find_root(fn, prev_x, x);
            return true;
        }
        prev_x = x;
        prev_f = fx;
    }
    return false;
}

} // namespace spherequad::detail
