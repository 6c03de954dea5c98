#include "spherequad/rectangle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "numeric.hpp"
#include "spherequad/errors.hpp"

namespace spherequad {

namespace {

constexpr int kBoundarySamples = 129;
constexpr int kThresholdSteps = 100;

ControlNet make_net(const RectNetParts& parts, double alpha1, double alpha2, double beta) {
    return parts.base + parts.alpha1_part.scaled(alpha1) + parts.alpha2_part.scaled(alpha2) +
           parts.beta_part.scaled(beta);
}

// The edge v = -1 only involves the first control row, so alpha2 and beta
// are irrelevant here; fixed values keep the net well defined.
ControlNet edge_net(const RectNetParts& parts, double alpha1) { return make_net(parts, alpha1, 0.5, 1.0); }

double edge_slope(const ControlNet& net, double u, ErrorKind kind) {
    return error_gradient(net, u, -1.0, kind).du;
}

double polish_u0(const ControlNet& net, ErrorKind kind, double u_guess) {
    const double h = 1.0 / (kBoundarySamples - 1);
    const double lo = std::max(-1.0, u_guess - h);
    const double hi = std::min(0.0, u_guess + h);
    auto slope = [&](double u) { return edge_slope(net, u, kind); };
    const double slo = slope(lo);
    const double shi = slope(hi);
    if (std::signbit(slo) == std::signbit(shi) && slo != 0.0 && shi != 0.0)
        return u_guess;
    return detail::find_root(slope, lo, hi);
}

} // namespace

RectBoundarySolve solve_alpha1(double a, double b, ErrorKind kind) {
    const RectNetParts parts = rect_net_parts(a, b);
    auto edge_min = [&](double alpha1) {
        const ControlNet net = edge_net(parts, alpha1);
        return detail::curve_extrema([&](double u) { return error_value(net, u, -1.0, kind); }, -1.0, 0.0,
                                     kBoundarySamples)
            .min;
    };
    auto defect = [&](double alpha1) {
        return error_value(edge_net(parts, alpha1), 0.0, -1.0, kind) + edge_min(alpha1).value;
    };
    // the edge error is <= 0 at alpha1 = 1/2 and >= 0 at 1/(2(1 - a^2))
    const double hi = 1.0 / (2.0 * (1.0 - a * a));
    RectBoundarySolve r;
    try {
        r.alpha1 = detail::find_root(defect, 0.5, hi);
    } catch (const SolverError& e) {
        throw SolverError("long-edge equioscillation failed", {e.what()});
    }
    const ControlNet net = edge_net(parts, r.alpha1);
    r.u0 = polish_u0(net, kind, edge_min(r.alpha1).at);
    if (!(r.u0 > -1.0 && r.u0 < 0.0))
        throw SolverError("long-edge minimum not interior: u0 = " + std::to_string(r.u0));
    r.boundary_error = error_value(net, 0.0, -1.0, kind);
    r.residual = std::max(std::abs(r.boundary_error + error_value(net, r.u0, -1.0, kind)),
                          std::abs(edge_slope(net, r.u0, kind)));
    return r;
}

RectConstraints rect_constraints(const RectParams& p, double u0, ErrorKind kind) {
    const ControlNet net = rect_net(p);
    const double top = error_value(net, 0.0, -1.0, kind);
    return {error_gradient(net, u0, -1.0, kind).dv, top - error_value(net, 0.0, 0.0, kind),
            top - error_value(net, -1.0, 0.0, kind)};
}

RegionCurves region_curves(double a, double b, ErrorKind kind) {
    return {a, b, solve_alpha1(a, b, kind), kind};
}

double RegionCurves::short_edge_alpha2() const {
    const RectNetParts parts = rect_net_parts(a, b);
    const double top = boundary.boundary_error;
    auto gap = [&](double alpha2) {
        return error_value(make_net(parts, boundary.alpha1, alpha2, 1.0), -1.0, 0.0, kind) - top;
    };
    double alpha2 = 0.0;
    if (!detail::first_root(gap, 0.25, 2.0, 64, alpha2))
        throw SolverError("short-edge midpoint never reaches the long-edge maximum");
    return alpha2;
}

double RegionCurves::slope_beta(double alpha2) const {
    // dF/dv(u0, -1) is affine in beta: the point p(u0, -1) does not move
    const RectNetParts parts = rect_net_parts(a, b);
    auto slope = [&](double beta) {
        return error_gradient(make_net(parts, boundary.alpha1, alpha2, beta), boundary.u0, -1.0, kind).dv;
    };
    const double s0 = slope(0.0);
    const double s1 = slope(1.0);
    if (s1 == s0)
        throw SolverError("boundary slope does not depend on beta");
    return -s0 / (s1 - s0);
}

double RegionCurves::center_beta(double alpha2) const {
    const RectNetParts parts = rect_net_parts(a, b);
    const double top = boundary.boundary_error;
    auto gap = [&](double beta) {
        return error_value(make_net(parts, boundary.alpha1, alpha2, beta), 0.0, 0.0, kind) - top;
    };
    double beta = 0.0;
    if (!detail::first_root(gap, 0.0, 10.0, 80, beta))
        throw SolverError("center never reaches the long-edge maximum for beta in [0, 10]");
    return beta;
}

std::optional<ThresholdSolve> solve_threshold(double a, ErrorKind kind) {
    if (!(a > 0.0 && a < 1.0))
        throw ParameterError("threshold search needs 0 < a < 1");
    const double limit = std::min(a, std::sqrt(1.0 - a * a));
    // positive while the triangle has interior
    auto height = [&](double b) {
        const RegionCurves c = region_curves(a, b, kind);
        const double alpha2 = c.short_edge_alpha2();
        return c.center_beta(alpha2) - c.slope_beta(alpha2);
    };
    double b = 0.0;
    if (!detail::first_root(height, 1e-3 * limit, limit * (1.0 - 1e-9), kThresholdSteps, b))
        return std::nullopt;

    ThresholdSolve t;
    t.b = b;
    const RegionCurves c = region_curves(a, b, kind);
    t.boundary = c.boundary;
    t.alpha2 = c.short_edge_alpha2();
    t.beta = c.slope_beta(t.alpha2);
    const RectConstraints r = rect_constraints({a, b, c.boundary.alpha1, t.alpha2, t.beta}, c.boundary.u0, kind);
    t.residuals = {r.normal_slope, r.center_gap, r.short_edge_gap};
    return t;
}

RegionVertex RectRegion::centroid() const {
    return {(vertices[0].alpha2 + vertices[1].alpha2 + vertices[2].alpha2) / 3.0,
            (vertices[0].beta + vertices[1].beta + vertices[2].beta) / 3.0};
}

RectRegion region_vertices(double a, double b, ErrorKind kind) {
    validate_rect_sides(a, b);
    const RegionCurves c = region_curves(a, b, kind);
    RectRegion r;
    r.a = a;
    r.b = b;
    r.kind = kind;
    r.boundary = c.boundary;
    if (const auto t = solve_threshold(a, kind))
        r.b_threshold = t->b;

    const double alpha2s = c.short_edge_alpha2();
    const double top = c.center_beta(alpha2s);
    const double bottom = c.slope_beta(alpha2s);
    r.vertices[0] = {alpha2s, top};
    r.vertices[1] = {alpha2s, bottom};
    if (!(top > bottom)) {
        r.reason = "center curve does not lie above the slope curve on the short-edge line";
        return r;
    }

    auto height = [&](double t) { return c.center_beta(alpha2s - t) - c.slope_beta(alpha2s - t); };
    double t = 0.0;
    if (!detail::first_root(height, 0.0, alpha2s - 0.05, 200, t)) {
        r.reason = "slope and center curves do not meet left of the short-edge line";
        return r;
    }
    r.vertices[2] = {alpha2s - t, c.slope_beta(alpha2s - t)};

    for (const RegionVertex& v : r.vertices) {
        const RectConstraints k = rect_constraints(r.params(v), c.boundary.u0, kind);
        r.vertex_violation = std::max({r.vertex_violation, -k.normal_slope, -k.center_gap, -k.short_edge_gap});
    }
    r.degenerate = false;
    return r;
}

RectExtrema rect_extrema(const RectParams& p, ErrorKind kind, int grid_n) {
    if (grid_n < 3)
        throw ParameterError("rectangle extrema need grid_n >= 3");
    const ControlNet net = rect_net(p);
    const double h = 2.0 / (grid_n - 1);
    auto coord = [&](int k) { return k == grid_n - 1 ? 1.0 : -1.0 + k * h; };
    std::vector<double> vals(static_cast<std::size_t>(grid_n) * grid_n);
    auto at = [&](int i, int j) -> double& { return vals[static_cast<std::size_t>(i) * grid_n + j]; };
    for (int i = 0; i < grid_n; ++i)
        for (int j = 0; j < grid_n; ++j)
            at(i, j) = error_value(net, coord(i), coord(j), kind);

    constexpr int kBits = std::numeric_limits<double>::digits / 2;
    constexpr int kSeeds = 6;
    constexpr int kSweeps = 40;

    // best of s * F, s = +1 for the maximum and -1 for the minimum
    auto search = [&](double s, double& best, double& bu, double& bv) {
        struct Seed {
            double value;
            int i, j;
        };
        std::vector<Seed> seeds;
        for (int i = 0; i < grid_n; ++i)
            for (int j = 0; j < grid_n; ++j) {
                const double x = s * at(i, j);
                bool peak = true;
                for (int di = -1; di <= 1 && peak; ++di)
                    for (int dj = -1; dj <= 1; ++dj) {
                        const int ii = i + di, jj = j + dj;
                        if ((di || dj) && ii >= 0 && ii < grid_n && jj >= 0 && jj < grid_n && s * at(ii, jj) > x) {
                            peak = false;
                            break;
                        }
                    }
                if (peak)
                    seeds.push_back({x, i, j});
            }
        std::stable_sort(seeds.begin(), seeds.end(), [](const Seed& l, const Seed& r) { return l.value > r.value; });
        if (seeds.size() > kSeeds)
            seeds.resize(kSeeds);

        best = -std::numeric_limits<double>::infinity();
        for (const Seed& sd : seeds) {
            double u = coord(sd.i), v = coord(sd.j), val = sd.value;
            const double ulo = std::max(-1.0, u - h), uhi = std::min(1.0, u + h);
            const double vlo = std::max(-1.0, v - h), vhi = std::min(1.0, v + h);
            for (int sweep = 0; sweep < kSweeps; ++sweep) {
                const double before = val;
                std::uintmax_t it = 100;
                auto ru = boost::math::tools::brent_find_minima(
                    [&](double x) { return -s * error_value(net, x, v, kind); }, ulo, uhi, kBits, it);
                if (-ru.second > val) {
                    u = ru.first;
                    val = -ru.second;
                }
                it = 100;
                auto rv = boost::math::tools::brent_find_minima(
                    [&](double y) { return -s * error_value(net, u, y, kind); }, vlo, vhi, kBits, it);
                if (-rv.second > val) {
                    v = rv.first;
                    val = -rv.second;
                }
                if (val - before <= 1e-17)
                    break;
            }
            if (val > best) {
                best = val;
                bu = u;
                bv = v;
            }
        }
    };

    RectExtrema r;
    double mx = 0.0, mn = 0.0;
    search(1.0, mx, r.max_u, r.max_v);
    search(-1.0, mn, r.min_u, r.min_v);
    r.max = mx;
    r.min = -mn;
    return r;
}

std::vector<ThresholdSample> scan_multioptimum_domain(const std::vector<double>& a_grid, ErrorKind kind) {
    std::vector<ThresholdSample> out;
    out.reserve(a_grid.size());
    for (double a : a_grid) {
        ThresholdSample s;
        s.a = a;
        s.b_limit = std::min(a, std::sqrt(1.0 - a * a));
        if (const auto t = solve_threshold(a, kind))
            s.b_threshold = t->b;
        out.push_back(s);
    }
    return out;
}

} // namespace spherequad
