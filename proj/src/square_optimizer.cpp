#include "spherequad/square_optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "numeric.hpp"
#include "spherequad/errors.hpp"

namespace spherequad {

double beta0(double alpha, double a) {
    validate_square_half_side(a);
    if (!(alpha > 0.0))
        throw ParameterError("beta0 needs alpha > 0");
    return 2.0 * (1.0 + 2.0 * alpha) * std::sqrt(1.0 - a * a) -
           (1.0 + 4.0 * alpha) * square_corner_height(a);
}

double beta0_slope(double a) {
    validate_square_half_side(a);
    return 4.0 * std::sqrt(1.0 - a * a) - 4.0 * square_corner_height(a);
}

AlphaBrackets alpha_brackets(double a) {
    validate_square_half_side(a);
    const double c = 1.0 - a * a;
    const double a4 = a * a * a * a;
    AlphaBrackets b;
    b.alpha0 = 1.0 / std::sqrt(c) - 0.5;
    b.interval_lo = 0.5;
    b.interval_hi = 1.0 / (2.0 * c);
    b.alpha_l = (1.0 - a4 / 5.0) / (2.0 * c);
    b.alpha_r = (1.0 + a4 / 5.0) / (2.0 * c);
    return b;
}

CriticalPoint critical_point(double alpha, double a) {
    validate_square_half_side(a);
    if (alpha == 0.5)
        throw SingularParameterError("critical point formulas are singular at alpha = 1/2");
    const double a2 = a * a;
    const double r1 = std::sqrt(1.0 - a2);
    const double r2 = square_corner_height(a);
    const double s = (r2 - r1) * (r2 - r1);
    const double al = alpha;
    const double q = (1.0 - 2.0 * al) * (1.0 - 2.0 * al);

    const double x_num = 4.0 * (1.0 + 2.0 * al) *
                         (al * (1.0 - 2.0 * al) * (2.0 - 4.0 * al + a2 * (3.0 + 2.0 * al)) +
                          (1.0 + 7.0 * al + 8.0 * al * al - 20.0 * al * al * al) * s);
    const double x_den = q * (6.0 * al + 1.0) *
                         ((14.0 * al + 5.0) * a2 + 4.0 * (r2 * r1 - 1.0) * (2.0 * al + 1.0));
    const double y_num = (1.0 + 2.0 * al) * (1.0 + 2.0 * al) *
                         (a2 * (1.0 - 4.0 * al * al) + 2.0 * (5.0 + 2.0 * al - 8.0 * al * al) * s);
    const double y_den = q * (1.0 + 6.0 * al) * (a2 * (2.0 * al - 1.0) - 2.0 * (1.0 + 2.0 * al) * s);
    if (x_den == 0.0 || y_den == 0.0)
        throw SingularParameterError("critical point denominator vanishes");
    return {x_num / x_den, y_num / y_den};
}

AngleExtrema angle_extrema(const SquareParams& p, ErrorKind kind, int samples) {
    const ControlNet net = square_net(p);
    const auto side = detail::curve_extrema(
        [&](double u) { return error_value(net, u, -1.0, kind); }, 0.0, 1.0, samples);
    const auto diag = detail::curve_extrema(
        [&](double u) { return error_value(net, u, u, kind); }, 0.0, 1.0, samples);
    AngleExtrema r;
    r.side_min = side.min.value;
    r.side_max = side.max.value;
    r.side_argmin = side.min.at;
    r.diag_min = diag.min.value;
    r.diag_max = diag.max.value;
    r.diag_argmin = diag.min.at;
    return r;
}

namespace {

// Point and first two derivatives of the diagonal curve u -> p(u, u).
struct CurveJet {
    Vec3 p, d1, d2;
};

CurveJet diagonal_jet(const ControlNet& net, double u) {
    const Basis b = bernstein2(u);
    const Basis db = bernstein2_derivative(u);
    const Basis ddb = bernstein2_second_derivative();
    CurveJet jet;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const Vec3& c = net.points[i][j];
            jet.p += (b[i] * b[j]) * c;
            jet.d1 += (db[i] * b[j] + b[i] * db[j]) * c;
            jet.d2 += (ddb[i] * b[j] + 2.0 * db[i] * db[j] + b[i] * ddb[j]) * c;
        }
    return jet;
}

struct NewtonSystem {
    std::array<double, 2> residual{};
    std::array<std::array<double, 2>, 2> jacobian{};
};

// Residual and exact Jacobian of the two equations in the unknowns (u, alpha),
// with beta eliminated through beta0(alpha).
class SquareSystem {
public:
    SquareSystem(double a, ErrorKind kind)
        : a_(a), kind_(kind), parts_(square_net_parts(a)), slope_(beta0_slope(a)),
          // total derivative of the net along (alpha, beta0(alpha))
          dnet_(parts_.alpha_part + parts_.beta_part.scaled(slope_)) {}

    ControlNet net(double alpha) const {
        return parts_.base + parts_.alpha_part.scaled(alpha) +
               parts_.beta_part.scaled(beta0(alpha, a_));
    }

    NewtonSystem evaluate(double u, double alpha) const {
        const ControlNet n = net(alpha);
        const CurveJet c0 = diagonal_jet(n, 0.0);
        const CurveJet cu = diagonal_jet(n, u);
        const CurveJet d0 = diagonal_jet(dnet_, 0.0);
        const CurveJet du = diagonal_jet(dnet_, u);

        NewtonSystem s;
        const double pq = dot(cu.p, cu.d1);
        s.residual[1] = error_of_point(c0.p, kind_) + error_of_point(cu.p, kind_);
        if (kind_ == ErrorKind::Simplified) {
            s.residual[0] = 2.0 * pq;
            s.jacobian[0][0] = 2.0 * (dot(cu.d1, cu.d1) + dot(cu.p, cu.d2));
            s.jacobian[0][1] = 2.0 * (dot(du.p, cu.d1) + dot(cu.p, du.d1));
            s.jacobian[1][1] = 2.0 * dot(c0.p, d0.p) + 2.0 * dot(cu.p, du.p);
        } else {
            const double r = norm(cu.p);
            const double r0 = norm(c0.p);
            const double r3 = r * r * r;
            s.residual[0] = pq / r;
            s.jacobian[0][0] = (dot(cu.d1, cu.d1) + dot(cu.p, cu.d2)) / r - pq * pq / r3;
            s.jacobian[0][1] = (dot(du.p, cu.d1) + dot(cu.p, du.d1)) / r - pq * dot(cu.p, du.p) / r3;
            s.jacobian[1][1] = dot(c0.p, d0.p) / r0 + dot(cu.p, du.p) / r;
        }
        s.jacobian[1][0] = s.residual[0];
        return s;
    }

    double a() const { return a_; }
    ErrorKind kind() const { return kind_; }

private:
    double a_;
    ErrorKind kind_;
    SquareNetParts parts_;
    double slope_;
    ControlNet dnet_;
};

double inf_norm(const std::array<double, 2>& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

double condition_estimate(const std::array<std::array<double, 2>, 2>& J) {
    const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    if (det == 0.0)
        return std::numeric_limits<double>::infinity();
    const double n = std::max(std::abs(J[0][0]) + std::abs(J[0][1]), std::abs(J[1][0]) + std::abs(J[1][1]));
    const double ninv = std::max(std::abs(J[1][1]) + std::abs(J[0][1]), std::abs(J[1][0]) + std::abs(J[0][0])) /
                        std::abs(det);
    return n * ninv;
}

struct Attempt {
    bool ok = false;
    double u = 0.0;
    double alpha = 0.0;
    int iterations = 0;
    double residual = 0.0;
    double condition = 0.0;
    std::string message;
};

constexpr int kMaxIterations = 50;
constexpr double kRoundingFloor = 64.0 * std::numeric_limits<double>::epsilon();

Attempt newton(const SquareSystem& sys, double u, double alpha, double tol) {
    Attempt at;
    NewtonSystem s = sys.evaluate(u, alpha);
    double res = inf_norm(s.residual);
    for (int it = 1; it <= kMaxIterations; ++it) {
        const auto& J = s.jacobian;
        const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
        if (det == 0.0 || !std::isfinite(det)) {
            at.message = "singular Jacobian at iteration " + std::to_string(it);
            return at;
        }
        const double step_u = -(J[1][1] * s.residual[0] - J[0][1] * s.residual[1]) / det;
        const double step_a = -(J[0][0] * s.residual[1] - J[1][0] * s.residual[0]) / det;

        // damp until the iterate stays inside (0,1) x [1/2, 3/2]
        double lambda = 1.0;
        double nu = u + step_u, na = alpha + step_a;
        while (lambda > 1e-3 && !(nu > 0.0 && nu < 1.0 && na >= kAlphaSearchLo && na <= kAlphaSearchHi)) {
            lambda *= 0.5;
            nu = u + lambda * step_u;
            na = alpha + lambda * step_a;
        }
        if (!(nu > 0.0 && nu < 1.0 && na >= kAlphaSearchLo && na <= kAlphaSearchHi)) {
            std::ostringstream os;
            os << "iterate left (0,1)x[1/2,3/2] at iteration " << it << " (u=" << u + step_u
               << ", alpha=" << alpha + step_a << ")";
            at.message = os.str();
            return at;
        }

        const NewtonSystem next = sys.evaluate(nu, na);
        const double next_res = inf_norm(next.residual);
        const bool small_step = std::abs(nu - u) <= 1e-9 && std::abs(na - alpha) <= 1e-14;
        at.iterations = it;
        if (res <= tol && next_res >= 0.5 * res && !small_step) {
            // at the rounding floor; keep the better of the two iterates
            if (next_res < res) {
                u = nu;
                alpha = na;
                s = next;
                res = next_res;
            }
            break;
        }
        u = nu;
        alpha = na;
        s = next;
        res = next_res;
        if (res <= tol && small_step)
            break;
    }
    at.u = u;
    at.alpha = alpha;
    at.residual = res;
    at.condition = condition_estimate(s.jacobian);
    if (!(res <= tol)) {
        std::ostringstream os;
        os << "no convergence after " << at.iterations << " iterations, residual " << res;
        at.message = os.str();
        return at;
    }
    at.ok = true;
    return at;
}

// Equioscillation must hold with the right signs: +E at the center and a
// true minimum -E at (u_m, u_m).
bool plausible(const SquareSystem& sys, const Attempt& at, std::string& why) {
    const ControlNet n = sys.net(at.alpha);
    const double center = error_value(n, 0.0, 0.0, sys.kind());
    if (!(center > 0.0)) {
        why = "center error not positive";
        return false;
    }
    const CurveJet j = diagonal_jet(n, at.u);
    const double curvature = dot(j.d1, j.d1) + dot(j.p, j.d2);
    if (!(curvature > 0.0)) {
        why = "stationary point on the diagonal is not a minimum";
        return false;
    }
    return true;
}

// Bracketing fallback: find alpha where the center value balances the
// diagonal minimum, then let Newton polish from there.
double bracketed_alpha(const SquareSystem& sys) {
    auto balance = [&](double alpha) {
        const ControlNet n = sys.net(alpha);
        const auto ex = detail::curve_extrema(
            [&](double u) { return error_value(n, u, u, sys.kind()); }, 0.0, 1.0, 201);
        return error_value(n, 0.0, 0.0, sys.kind()) + ex.min.value;
    };
    return detail::find_root(balance, kAlphaSearchLo, kAlphaSearchHi);
}

} // namespace

OptimizationResult optimize_square(double a, ErrorKind kind, double tol) {
    validate_square_half_side(a);
    if (!(tol > 0.0))
        throw ParameterError("tolerance must be positive");

    const SquareSystem sys(a, kind);
    const double alpha_start = std::clamp(1.0 / (2.0 * (1.0 - a * a)), kAlphaSearchLo, kAlphaSearchHi);

    std::vector<std::pair<double, double>> starts = {{0.7, alpha_start}};
    for (double u : {0.3, 0.45, 0.6, 0.75, 0.9})
        starts.emplace_back(u, alpha_start);

    std::vector<std::string> trace;
    std::optional<Attempt> implausible;
    auto try_start = [&](double u, double alpha) -> std::optional<Attempt> {
        Attempt at = newton(sys, u, alpha, tol);
        std::ostringstream os;
        os << "start (u=" << u << ", alpha=" << alpha << "): ";
        if (!at.ok) {
            trace.push_back(os.str() + at.message);
            return std::nullopt;
        }
        std::string why;
        if (!plausible(sys, at, why)) {
            trace.push_back(os.str() + why);
            if (!implausible)
                implausible = at;
            return std::nullopt;
        }
        return at;
    };

    std::optional<Attempt> found;
    for (const auto& [u, alpha] : starts)
        if ((found = try_start(u, alpha)))
            break;
    if (!found) {
        try {
            const double alpha = bracketed_alpha(sys);
            const ControlNet n = sys.net(alpha);
            const auto ex = detail::curve_extrema(
                [&](double u) { return error_value(n, u, u, kind); }, 0.0, 1.0, 201);
            found = try_start(ex.min.at, alpha);
        } catch (const SolverError& e) {
            trace.push_back(std::string("bracketing fallback: ") + e.what());
        }
    }
    // For very small a the optimal error sinks below what |p| - 1 can resolve
    // in double precision, and the sign tests above see only rounding noise.
    bool at_rounding_floor = false;
    if (!found && implausible &&
        std::abs(error_value(sys.net(implausible->alpha), 0.0, 0.0, kind)) <= kRoundingFloor) {
        found = implausible;
        at_rounding_floor = true;
    }
    if (!found)
        throw SolverError("square optimization did not converge for a = " + std::to_string(a), trace);

    OptimizationResult r;
    r.params = {a, found->alpha, beta0(found->alpha, a)};
    r.u_m = found->u;
    r.kind = kind;
    r.max_error = error_value(sys.net(found->alpha), 0.0, 0.0, kind);
    r.iterations = found->iterations;
    r.residual = found->residual;
    r.condition_estimate = found->condition;
    r.warnings = trace;
    if (at_rounding_floor)
        r.warnings.push_back("maximum error is at the rounding level of double precision; E and alpha are not "
                             "resolved");
    if (r.condition_estimate > 1e10) {
        std::ostringstream os;
        os << "ill-conditioned Jacobian at the solution (condition estimate " << r.condition_estimate << ")";
        r.warnings.push_back(os.str());
    }
    return r;
}

SideEquioscillation equioscillating_side_alpha(double a, ErrorKind kind) {
    validate_square_half_side(a);
    const SquareNetParts parts = square_net_parts(a);
    // the side curve ignores the center point, so beta is irrelevant here
    auto side_net = [&](double alpha) { return parts.base + parts.alpha_part.scaled(alpha); };
    auto side_extrema = [&](double alpha) {
        const ControlNet n = side_net(alpha);
        return detail::curve_extrema([&](double u) { return error_value(n, u, -1.0, kind); }, 0.0, 1.0);
    };

    const AlphaBrackets br = alpha_brackets(a);
    SideEquioscillation r;
    r.alpha_e = detail::find_root(
        [&](double alpha) {
            const ControlNet n = side_net(alpha);
            return error_value(n, 0.0, -1.0, kind) + side_extrema(alpha).min.value;
        },
        br.interval_lo, br.interval_hi);

    auto diag_extrema = [&](double beta) {
        const ControlNet n = side_net(r.alpha_e) + parts.beta_part.scaled(beta);
        return detail::curve_extrema([&](double u) { return error_value(n, u, u, kind); }, 0.0, 1.0);
    };
    // max f_d + min f_d grows with beta; its root minimizes max |f_d|
    auto balance = [&](double beta) {
        const auto ex = diag_extrema(beta);
        return ex.max.value + ex.min.value;
    };
    double hi = beta0(r.alpha_e, a);
    double lo = 0.5 * hi;
    for (int k = 0; k < 60 && balance(hi) < 0.0; ++k)
        hi *= 2.0;
    for (int k = 0; k < 60 && balance(lo) > 0.0; ++k)
        lo *= 0.5;
    r.beta = detail::find_root(balance, lo, hi);

    const auto se = side_extrema(r.alpha_e);
    const auto de = diag_extrema(r.beta);
    r.side_max_abs = std::max(se.max.value, -se.min.value);
    r.diag_max_abs = std::max(de.max.value, -de.min.value);
    r.angle_minimax = std::max(r.side_max_abs, r.diag_max_abs);
    return r;
}

GridExtrema grid_extrema(const ControlNet& net, ErrorKind kind, int n) {
    if (n < 2)
        throw ParameterError("grid needs at least 2 points per axis");
    std::vector<Basis> basis(n);
    for (int k = 0; k < n; ++k)
        basis[k] = bernstein2(k == n - 1 ? 1.0 : -1.0 + 2.0 * k / (n - 1));

    GridExtrema g{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (int i = 0; i < n; ++i) {
        // column curves at this u, then blend along v
        std::array<Vec3, 3> col;
        for (int j = 0; j < 3; ++j)
            col[j] = basis[i][0] * net.points[0][j] + basis[i][1] * net.points[1][j] +
                     basis[i][2] * net.points[2][j];
        for (int k = 0; k < n; ++k) {
            const Vec3 p = basis[k][0] * col[0] + basis[k][1] * col[1] + basis[k][2] * col[2];
            const double e = error_of_point(p, kind);
            g.min = std::min(g.min, e);
            g.max = std::max(g.max, e);
        }
    }
    return g;
}

ExtremaReport verify_extrema_on_angle(const SquareParams& p, ErrorKind kind, int grid_n, double slack) {
    if (grid_n < 101 || grid_n % 2 == 0)
        throw ParameterError("grid_n must be odd and >= 101");
    const ControlNet net = square_net(p);

    ExtremaReport r;
    r.grid_n = grid_n;
    r.slack = slack;
    const GridExtrema g = grid_extrema(net, kind, grid_n);
    r.grid_max = g.max;
    r.grid_min = g.min;

    const AngleExtrema ae = angle_extrema(p, kind);
    r.angle_max = ae.max();
    r.angle_min = ae.min();
    // include the grid's own samples on the angle set
    for (int k = 0; k < grid_n; ++k) {
        const double u = k == grid_n - 1 ? 1.0 : -1.0 + 2.0 * k / (grid_n - 1);
        for (double e : {error_value(net, u, -1.0, kind), error_value(net, u, u, kind)}) {
            r.angle_max = std::max(r.angle_max, e);
            r.angle_min = std::min(r.angle_min, e);
        }
    }
    r.pass = (r.grid_max - r.angle_max < slack) && (r.angle_min - r.grid_min < slack);
    return r;
}

ExtremaReport verify_extrema_on_angle(const OptimizationResult& result, int grid_n, double slack) {
    return verify_extrema_on_angle(result.params, result.kind, grid_n, slack);
}

} // namespace spherequad
