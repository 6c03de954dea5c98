#include "spherequad/square_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spherequad/errors.hpp"

namespace spherequad {

namespace {

constexpr ErrorKind kF = ErrorKind::Simplified;
constexpr double kInf = std::numeric_limits<double>::infinity();

double lerp(double lo, double hi, int k, int n) {
    return n <= 1 ? lo : (k == n - 1 ? hi : lo + (hi - lo) * k / (n - 1));
}

std::string describe(const char* what, double value) {
    std::ostringstream os;
    os.precision(6);
    os << what << " " << value;
    return os.str();
}

} // namespace

CheckOutcome check_monotonicity(double a, int n) {
    validate_square_half_side(a);
    CheckOutcome c{"monotonicity", false, kInf, 0.0, {}};
    const SquareNetParts parts = square_net_parts(a);
    auto f = [&](double u, double v, double alpha, double beta) {
        const ControlNet net = parts.base + parts.alpha_part.scaled(alpha) + parts.beta_part.scaled(beta);
        return error_value(net, u, v, kF);
    };
    for (int iu = 0; iu < n; ++iu) {
        const double u = static_cast<double>(iu) / n; // [0,1)
        for (int ia = 0; ia + 1 < n; ++ia) {
            const double al = lerp(0.1, 2.0, ia, n);
            const double al2 = lerp(0.1, 2.0, ia + 1, n);
            c.worst = std::min(c.worst, f(u, -1.0, al2, 1.0) - f(u, -1.0, al, 1.0));
            for (int ib = 0; ib < n; ++ib) {
                const double be = lerp(0.5, 5.0, ib, n);
                c.worst = std::min(c.worst, f(u, u, al2, be) - f(u, u, al, be));
            }
        }
        for (int ia = 0; ia < n; ++ia) {
            const double al = lerp(0.1, 2.0, ia, n);
            for (int ib = 0; ib + 1 < n; ++ib) {
                const double be = lerp(0.5, 5.0, ib, n);
                const double be2 = lerp(0.5, 5.0, ib + 1, n);
                c.worst = std::min(c.worst, f(u, u, al, be2) - f(u, u, al, be));
            }
        }
    }
    c.passed = c.worst > c.threshold;
    c.detail = describe("smallest forward difference", c.worst);
    return c;
}

CheckOutcome check_side_dominates_diagonal(double a, int n) {
    validate_square_half_side(a);
    CheckOutcome c{"side_dominates_diagonal", false, kInf, 0.0, {}};
    const SquareNetParts parts = square_net_parts(a);
    const double hi = 1.0 / (2.0 - 2.0 * a * a);
    for (int ia = 0; ia < n; ++ia) {
        const double al = lerp(0.5, hi, ia, n);
        const double b0 = beta0(al, a);
        for (double shrink : {1.0, 0.9, 0.75, 0.5}) {
            const double be = shrink * b0;
            const ControlNet net =
                parts.base + parts.alpha_part.scaled(al) + parts.beta_part.scaled(be);
            for (int iu = 1; iu <= n; ++iu) {
                const double u = static_cast<double>(iu) / (n + 1); // (0,1)
                c.worst = std::min(c.worst, error_value(net, u, -1.0, kF) - error_value(net, u, u, kF));
            }
        }
    }
    c.passed = c.worst > c.threshold;
    c.detail = describe("min f_side - f_diag", c.worst);
    return c;
}

CheckOutcome check_side_closed_forms(double a, int n) {
    validate_square_half_side(a);
    CheckOutcome c{"side_closed_forms", false, 0.0, 1e-14, {}};
    const double a2 = a * a;
    const double c1 = 1.0 - a2;
    const double alpha0 = alpha_brackets(a).alpha0;
    const double lift = 1.0 - std::sqrt(c1);
    for (int k = 0; k < n; ++k) {
        const double u = lerp(-1.0, 1.0, k, n);
        const double w = 1.0 - u * u;
        const double lo = f_side(u, {a, 0.5, 1.0}, kF) - (-a2 * w);
        const double hi = f_side(u, {a, 1.0 / (2.0 * c1), 1.0}, kF) - a2 * a2 * w * w / (4.0 * c1);
        const double zero = f_side(u, {a, alpha0, 1.0}, kF) - (-lift * lift * u * u * w);
        c.worst = std::max({c.worst, std::abs(lo), std::abs(hi), std::abs(zero)});
    }
    c.passed = c.worst <= c.threshold;
    c.detail = describe("max deviation", c.worst);
    return c;
}

CheckOutcome check_beta0_balance(double a, int n) {
    validate_square_half_side(a);
    CheckOutcome c{"beta0_balance", false, 0.0, 1e-14, {}};
    for (int k = 0; k < n; ++k) {
        const double al = lerp(0.5, 1.5, k, n);
        const SquareParams p{a, al, beta0(al, a)};
        c.worst = std::max(c.worst, std::abs(f_diag(0.0, p, kF) - f_side(0.0, p, kF)));
    }
    c.passed = c.worst <= c.threshold;
    c.detail = describe("max |f_diag(0) - f_side(0)|", c.worst);
    return c;
}

CheckOutcome check_zero_center(double a, int n) {
    validate_square_half_side(a);
    CheckOutcome c{"zero_center_nonpositive", false, -kInf, 1e-14, {}};
    const double al = alpha_brackets(a).alpha0;
    const ControlNet net = square_net({a, al, beta0(al, a)});
    for (int k = 0; k < n; ++k) {
        const double u = lerp(-1.0, 1.0, k, n);
        c.worst = std::max({c.worst, error_value(net, u, -1.0, kF), error_value(net, u, u, kF)});
    }
    c.passed = c.worst <= c.threshold;
    c.detail = describe("max of f_side, f_diag", c.worst);
    return c;
}

CheckOutcome check_critical_point(double a, int n) {
    validate_square_half_side(a);
    CheckOutcome c{"critical_point_outside", false, kInf, 1.0, {}};
    const AlphaBrackets br = alpha_brackets(a);
    for (int k = 0; k < n; ++k)
        c.worst = std::min(c.worst, critical_point(lerp(br.alpha_l, br.alpha_r, k, n), a).y);
    c.passed = c.worst > c.threshold;
    c.detail = describe("min y", c.worst);
    return c;
}

CheckOutcome check_equioscillation(const OptimizationResult& r, int n) {
    CheckOutcome c{"equioscillation", false, 0.0, 1e-12, {}};
    const ControlNet net = square_net(r.params);
    const double E = r.max_error;
    const double center = error_value(net, 0.0, 0.0, r.kind);
    const double trough = error_value(net, r.u_m, r.u_m, r.kind);
    const ErrorGradient g = error_gradient(net, r.u_m, r.u_m, r.kind);
    const double structural = std::max({std::abs(center - E), std::abs(trough + E), std::abs(g.du + g.dv)});

    double side_excess = -kInf;
    double diag_excess = -kInf;
    for (int k = 0; k < n; ++k) {
        const double u = lerp(-1.0, 1.0, k, n);
        side_excess = std::max(side_excess, std::abs(error_value(net, u, -1.0, r.kind)) - E);
        diag_excess = std::max(diag_excess, std::abs(error_value(net, u, u, r.kind)) - E);
    }
    c.worst = std::max(side_excess, diag_excess);
    c.passed = E > 0.0 && structural <= 1e-11 && c.worst <= c.threshold;
    std::ostringstream os;
    os.precision(6);
    os << "E " << E << ", center/trough/slope defect " << structural << ", max |f_side| - E " << side_excess
       << ", max |f_diag| - E " << diag_excess;
    c.detail = os.str();
    return c;
}

std::vector<CheckOutcome> lemma_property_suite(double a) {
    std::vector<CheckOutcome> out;
    out.push_back(check_monotonicity(a));
    out.push_back(check_side_dominates_diagonal(a));
    out.push_back(check_side_closed_forms(a));
    out.push_back(check_beta0_balance(a));
    out.push_back(check_zero_center(a));
    out.push_back(check_critical_point(a));
    out.push_back(check_equioscillation(optimize_square(a, kF)));
    return out;
}

} // namespace spherequad
