#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "reference.hpp"
#include "spherequad/errors.hpp"
#include "spherequad/square_optimizer.hpp"

using namespace spherequad;

namespace {

const double kCube = 1.0 / std::sqrt(3.0);
constexpr ErrorKind kF = ErrorKind::Simplified;
constexpr ErrorKind kG = ErrorKind::Radial;

// plain bisection on f_diag(0) - f_side(0) in beta, via de Casteljau
double beta_balance_by_bisection(double a, double alpha) {
    auto gap = [&](double beta) {
        const ControlNet n = square_net({a, alpha, beta});
        return testref::simplified(n, 0.0, 0.0) - testref::simplified(n, 0.0, -1.0);
    };
    double lo = 0.0, hi = 10.0;
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        (gap(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Fit f = c0 + c1 e1 + c2 e2 + c3 (e1^2 - 2 e2) + c4 e1 e2 + c5 e2^2 with
// e1 = u^2 + v^2, e2 = u^2 v^2, then solve grad = 0 in (e1, e2).
CriticalPoint critical_point_by_fit(double alpha, double a) {
    const ControlNet net = square_net({a, alpha, beta0(alpha, a)});
    const std::array<std::pair<double, double>, 6> uv{
        {{0.0, 0.0}, {0.0, 0.5}, {0.0, 1.0}, {0.5, 0.5}, {0.5, 1.0}, {1.0, 1.0}}};
    double m[6][7];
    for (int r = 0; r < 6; ++r) {
        const double s = uv[r].first * uv[r].first, t = uv[r].second * uv[r].second;
        const double e1 = s + t, e2 = s * t;
        const double row[6] = {1.0, e1, e2, e1 * e1 - 2.0 * e2, e1 * e2, e2 * e2};
        for (int c = 0; c < 6; ++c)
            m[r][c] = row[c];
        m[r][6] = testref::simplified(net, uv[r].first, uv[r].second);
    }
    for (int c = 0; c < 6; ++c) {
        int piv = c;
        for (int r = c + 1; r < 6; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c]))
                piv = r;
        for (int k = 0; k < 7; ++k)
            std::swap(m[c][k], m[piv][k]);
        for (int r = 0; r < 6; ++r) {
            if (r == c)
                continue;
            const double f = m[r][c] / m[c][c];
            for (int k = c; k < 7; ++k)
                m[r][k] -= f * m[c][k];
        }
    }
    double c[6];
    for (int k = 0; k < 6; ++k)
        c[k] = m[k][6] / m[k][k];
    // [2 c3, c4; c4, 2 c5] (x, y) = (-c1, 2 c3 - c2)
    const double a11 = 2.0 * c[3], a12 = c[4], a22 = 2.0 * c[5];
    const double b1 = -c[1], b2 = 2.0 * c[3] - c[2];
    const double det = a11 * a22 - a12 * a12;
    return {(b1 * a22 - a12 * b2) / det, (a11 * b2 - a12 * b1) / det};
}

struct TableRow {
    double alpha, beta, error, rate;
};

// reference optima (radial error), a = a_max / 2^i
const std::array<TableRow, 7> kTable{{{1.0306, 4.3393, 8.2331e-2, 0.0},
                                      {0.5698, 1.1630, 6.9966e-4, 6.87},
                                      {0.5160, 1.0333, 3.7421e-5, 4.23},
                                      {0.5039, 1.0079, 2.2596e-6, 4.05},
                                      {0.5010, 1.0020, 1.4005e-7, 4.01},
                                      {0.5002, 1.0005, 8.7349e-9, 4.00},
                                      {0.5001, 1.0001, 5.4565e-10, 4.00}}};

} // namespace

TEST(Beta0, VanishingSecondTermAtLargestHalfSide) {
    for (double alpha : {0.5, 0.8, 1.2})
        EXPECT_NEAR(beta0(alpha, kMaxSquareHalfSide), std::sqrt(2.0) * (1.0 + 2.0 * alpha), 1e-14);
}

TEST(Beta0, CubeFaceValueAgreesWithBisection) {
    const double expected = 5.0 * std::sqrt(2.0 / 3.0) - 4.0 / std::sqrt(3.0);
    EXPECT_NEAR(beta0(0.75, kCube), expected, 1e-14);
    EXPECT_NEAR(beta_balance_by_bisection(kCube, 0.75), expected, 1e-13);
}

TEST(Beta0, BalancesCenterAgainstSideMidpoint) {
    const SquareParams p{0.5, 0.6, beta0(0.6, 0.5)};
    EXPECT_LT(std::abs(f_diag(0.0, p, kF) - f_side(0.0, p, kF)), 1e-14);
    // beta0 is affine in alpha
    EXPECT_NEAR(beta0(0.9, 0.5) - beta0(0.6, 0.5), 0.3 * beta0_slope(0.5), 1e-14);
}

TEST(AlphaBrackets, ClosedForms) {
    const AlphaBrackets m = alpha_brackets(kMaxSquareHalfSide);
    EXPECT_NEAR(m.alpha0, std::sqrt(2.0) - 0.5, 1e-14);
    const AlphaBrackets h = alpha_brackets(0.5);
    EXPECT_DOUBLE_EQ(h.interval_lo, 0.5);
    EXPECT_NEAR(h.interval_hi, 2.0 / 3.0, 1e-15);
    for (double a : {0.05, 0.3, 0.6, kMaxSquareHalfSide}) {
        const AlphaBrackets b = alpha_brackets(a);
        EXPECT_LT(b.alpha_l, b.interval_hi);
        EXPECT_LT(b.interval_hi, b.alpha_r);
        EXPECT_LT(std::abs(f_side(0.0, {a, b.alpha0, 1.0}, kF)), 1e-14);
    }
}

TEST(CriticalPoint, ClosedFormMatchesPolynomialFit) {
    for (double a : {0.2, 0.45, 0.6, kMaxSquareHalfSide}) {
        const AlphaBrackets b = alpha_brackets(a);
        for (double alpha : {b.alpha_l, b.interval_hi, b.alpha_r, 0.8}) {
            const CriticalPoint cf = critical_point(alpha, a);
            const CriticalPoint fit = critical_point_by_fit(alpha, a);
            EXPECT_NEAR(cf.x, fit.x, 1e-7 * std::abs(fit.x)) << "a=" << a << " alpha=" << alpha;
            EXPECT_NEAR(cf.y, fit.y, 1e-7 * std::abs(fit.y)) << "a=" << a << " alpha=" << alpha;
        }
    }
}

TEST(CriticalPoint, OutsideSquareOverBracketSweep) {
    for (int i = 1; i <= 7; ++i) {
        const double a = std::min(0.1 * i, kMaxSquareHalfSide);
        const AlphaBrackets b = alpha_brackets(a);
        for (int k = 0; k <= 20; ++k) {
            const double alpha = b.alpha_l + (b.alpha_r - b.alpha_l) * k / 20.0;
            EXPECT_GT(critical_point(alpha, a).y, 1.0) << "a=" << a << " alpha=" << alpha;
        }
    }
    EXPECT_GT(critical_point(1.03, kMaxSquareHalfSide).y, 1.0);
    EXPECT_GT(critical_point(optimize_square(0.5, kF).params.alpha, 0.5).y, 1.0);
}

TEST(CriticalPoint, SingularAtHalf) {
    EXPECT_THROW(critical_point(0.5, 0.4), SingularParameterError);
}

TEST(OptimizeSquare, ReproducesTableErrorsAndParameters) {
    for (int i = 0; i < 7; ++i) {
        const double a = std::ldexp(kMaxSquareHalfSide, -i);
        const OptimizationResult r = optimize_square(a, kG);
        EXPECT_NEAR(r.max_error, kTable[i].error, 0.01 * kTable[i].error) << "row " << i;
        EXPECT_LE(r.residual, kDefaultTolerance);
        EXPECT_GT(r.u_m, 0.0);
        EXPECT_LT(r.u_m, 1.0);
        if (i >= 1) {
            EXPECT_NEAR(r.params.alpha, kTable[i].alpha, 5e-3) << "row " << i;
            EXPECT_NEAR(r.params.beta, kTable[i].beta, 5e-3) << "row " << i;
        }
    }
}

TEST(OptimizeSquare, LargestHalfSideObeysCornerBalance) {
    // the reference beta of the first row breaks beta = sqrt(2)(1 + 2 alpha);
    // the computed pair satisfies it
    const OptimizationResult r = optimize_square(kMaxSquareHalfSide, kG);
    EXPECT_NEAR(r.params.alpha, 1.0306, 1e-4);
    EXPECT_NEAR(r.params.beta, std::sqrt(2.0) * (1.0 + 2.0 * r.params.alpha), 1e-12);
    EXPECT_GT(std::abs(r.params.beta - 4.3393), 5e-3);
}

TEST(OptimizeSquare, EquioscillatesOnDiagonal) {
    for (ErrorKind kind : {kF, kG})
        for (double a : {0.1, kCube, kMaxSquareHalfSide}) {
            const OptimizationResult r = optimize_square(a, kind);
            const double E = r.max_error;
            EXPECT_NEAR(f_diag(0.0, r.params, kind), E, 1e-11);
            EXPECT_NEAR(f_diag(r.u_m, r.params, kind), -E, 1e-11);
            EXPECT_NEAR(f_diag(-r.u_m, r.params, kind), -E, 1e-11);
            EXPECT_NEAR(f_diag(0.0, r.params, kF), f_side(0.0, r.params, kF), 1e-11);
            EXPECT_GE(r.params.alpha, kAlphaSearchLo);
            EXPECT_LE(r.params.alpha, kAlphaSearchHi);
            // E really is the max over an independent dense grid
            EXPECT_NEAR(testref::grid_max_abs(square_net(r.params), kind == kG, 201), E, 1e-4 * E);
        }
}

TEST(OptimizeSquare, SmallHalfSideStillConverges) {
    // E ~ 0.037 a^4 would be ~4e-18 here, below what |p| - 1 resolves near
    // the sphere: the solve returns with warnings instead of failing
    const OptimizationResult r = optimize_square(1e-4, kG);
    EXPECT_LE(std::abs(r.max_error), 1e-14);
    EXPECT_NEAR(r.params.alpha, 0.5, 1e-6);
    EXPECT_FALSE(r.warnings.empty());

    const OptimizationResult m = optimize_square(1e-3, kG);
    EXPECT_GT(m.condition_estimate, 1e10);
    EXPECT_NE(m.warnings.back().find("ill-conditioned"), std::string::npos);
}

TEST(OptimizeSquare, RejectsBadInput) {
    EXPECT_THROW(optimize_square(0.0, kG), ParameterError);
    EXPECT_THROW(optimize_square(0.8, kG), ParameterError);
    EXPECT_THROW(optimize_square(0.5, kG, 0.0), ParameterError);
}

TEST(OptimizeSquare, SimplifiedOptimumMapsToRadialBounds) {
    // g = sqrt(1 + f) - 1 is monotone, so the simplified optimum with
    // f in [-E, E] has g in [sqrt(1 - E) - 1, sqrt(1 + E) - 1]
    for (double a : {0.3, kCube, kMaxSquareHalfSide}) {
        const OptimizationResult r = optimize_square(a, kF);
        const AngleExtrema g = angle_extrema(r.params, kG);
        EXPECT_NEAR(g.max(), std::sqrt(1.0 + r.max_error) - 1.0, 1e-12);
        EXPECT_NEAR(g.min(), std::sqrt(1.0 - r.max_error) - 1.0, 1e-12);
    }
}

TEST(Comparator, BracketedByInterval) {
    for (double a : {0.2, kCube, kMaxSquareHalfSide}) {
        const AlphaBrackets b = alpha_brackets(a);
        const SideEquioscillation e = equioscillating_side_alpha(a, kF);
        EXPECT_GE(e.alpha_e, b.interval_lo);
        EXPECT_LE(e.alpha_e, b.interval_hi);
        for (double u = -1.0; u <= 1.0; u += 0.05) {
            EXPECT_LE(f_side(u, {a, 0.5, 1.0}, kF), 1e-15);
            EXPECT_GE(f_side(u, {a, b.interval_hi, 1.0}, kF), -1e-15);
        }
    }
}

TEST(Comparator, WorseThanOptimizerAtCubeFace) {
    const SideEquioscillation e = equioscillating_side_alpha(kCube, kF);
    const OptimizationResult r = optimize_square(kCube, kF);
    EXPECT_GT(e.angle_minimax - r.max_error, 1e-6);
    EXPECT_NEAR(e.alpha_e, 0.72839, 1e-5);
}

TEST(Comparator, DiagonalDominatesForEveryBeta) {
    const double a = kCube;
    const SideEquioscillation e = equioscillating_side_alpha(a, kF);
    for (double beta = 0.25; beta <= 5.0; beta += 0.25) {
        const AngleExtrema x = angle_extrema({a, e.alpha_e, beta}, kF);
        const double diag = std::max(x.diag_max, -x.diag_min);
        const double side = std::max(x.side_max, -x.side_min);
        EXPECT_GT(diag, side) << "beta=" << beta;
    }
}

TEST(Comparator, NeverBeatsOptimizer) {
    for (double a : {0.05, 0.2, 0.4, kCube, 0.65, kMaxSquareHalfSide})
        EXPECT_LE(optimize_square(a, kF).max_error, equioscillating_side_alpha(a, kF).angle_minimax) << a;
}

TEST(ExtremaOnAngle, HoldsAtOptimaOnDenseGrid) {
    for (double a : {kCube, 0.5, kMaxSquareHalfSide}) {
        const ExtremaReport rep = verify_extrema_on_angle(optimize_square(a, kF), 1001);
        EXPECT_TRUE(rep.pass) << "a=" << a << " grid max " << rep.grid_max << " angle max " << rep.angle_max;
    }
}

TEST(ExtremaOnAngle, ReportsPerturbedParameters) {
    const OptimizationResult r = optimize_square(kCube, kG);
    SquareParams p = r.params;
    p.beta += 0.5;
    const ExtremaReport rep = verify_extrema_on_angle(p, kG, 101);
    double expected = -1.0;
    const ControlNet net = square_net(p);
    for (int i = 0; i < 101; ++i)
        for (int j = 0; j < 101; ++j)
            expected = std::max(expected, testref::radial(net, -1.0 + i / 50.0, -1.0 + j / 50.0));
    EXPECT_NEAR(rep.grid_max, expected, 1e-14);
    EXPECT_GT(rep.grid_max, r.max_error);
}

TEST(ExtremaOnAngle, RejectsEvenGrid) {
    EXPECT_THROW(verify_extrema_on_angle(optimize_square(0.5, kG), 100), ParameterError);
    EXPECT_THROW(verify_extrema_on_angle(optimize_square(0.5, kG), 99), ParameterError);
}
