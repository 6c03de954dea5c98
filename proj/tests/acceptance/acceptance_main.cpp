// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>

#include "spherequad/oracle.hpp"
#include "spherequad/rectangle.hpp"
#include "spherequad/sphere_assembly.hpp"
#include "spherequad/square_checks.hpp"
#include "spherequad/square_optimizer.hpp"

using namespace spherequad;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream note;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            note << " [" << what << "]";
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Row {
    double alpha, beta, error, rate;
};
constexpr std::array<Row, 7> kReference{{{1.0306, 4.3393, 8.2331e-2, 0.0},
                                         {0.5698, 1.1630, 6.9966e-4, 6.87},
                                         {0.5160, 1.0333, 3.7421e-5, 4.23},
                                         {0.5039, 1.0079, 2.2596e-6, 4.05},
                                         {0.5010, 1.0020, 1.4005e-7, 4.01},
                                         {0.5002, 1.0005, 8.7349e-9, 4.00},
                                         {0.5001, 1.0001, 5.4565e-10, 4.00}}};

std::array<OptimizationResult, 7> g_table;

void table_errors(Verdict& v) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < 7; ++i)
        g_table[i] = optimize_square(std::ldexp(kMaxSquareHalfSide, -i), ErrorKind::Radial);
    const double elapsed = seconds_since(t0);

    double worst_rel = 0.0, worst_param = 0.0;
    for (int i = 0; i < 7; ++i) {
        worst_rel = std::max(worst_rel, std::abs(g_table[i].max_error / kReference[i].error - 1.0));
        if (i >= 1)
            worst_param = std::max({worst_param, std::abs(g_table[i].params.alpha - kReference[i].alpha),
                                    std::abs(g_table[i].params.beta - kReference[i].beta)});
    }
    const auto orc = grid_minimax_square(kMaxSquareHalfSide, ErrorKind::Radial);
    const double gap = std::abs(g_table[0].max_error - orc.best_minimax);

    v.require(worst_rel <= 0.01, "error off by more than 1%");
    v.require(worst_param <= 5e-3, "parameters off by more than 5e-3");
    v.require(gap <= orc.slack, "row 0 outside oracle slack");
    v.require(elapsed < 10.0, "too slow");
    v.note << " worst rel error " << worst_rel << ", worst param gap " << worst_param << ", row 0 |newton-oracle| "
           << gap << " <= " << orc.slack << ", " << elapsed << " s";
}

void rates(Verdict& v) {
    double worst = 0.0;
    for (int i = 1; i < 7; ++i) {
        const double r = std::log(g_table[i - 1].max_error / g_table[i].max_error) / std::log(2.0);
        worst = std::max(worst, std::abs(r - kReference[i].rate));
        v.note << " " << std::round(r * 100.0) / 100.0;
    }
    v.require(worst <= 0.05, "rate off by more than 0.05");
    v.note << " (worst deviation " << worst << ")";
}

void g1_exactness(Verdict& v) {
    const double alpha = g1_alpha();
    const double beta = g1_beta(alpha);
    const SphereSpline s = assemble_g1();
    const double closed = (5.0 * std::sqrt(3.0) - 8.0) / 8.0;
    double min_g = 1.0;
    for (const PlacedPatch& pp : s.patches) {
        const ControlNet net = pp.world_net();
        for (int i = 0; i < 201; ++i)
            for (int j = 0; j < 201; ++j)
                min_g = std::min(min_g, error_value(net, -1.0 + i / 100.0, -1.0 + j / 100.0, ErrorKind::Radial));
    }
    v.require(std::abs(alpha - 0.75) <= 1e-10, "alpha_G");
    v.require(std::abs(beta - 7.0 * std::sqrt(3.0) / 6.0) <= 1e-10, "beta_G");
    v.require(std::abs(s.max_radial_error - closed) <= 1e-12, "max error");
    v.require(min_g >= 0.0, "g < 0 somewhere");
    v.note << " alpha " << alpha << ", beta " << beta << ", E " << s.max_radial_error << ", min g " << min_g;
}

void comparator(Verdict& v) {
    const double a = 1.0 / std::sqrt(3.0);
    const OptimizationResult opt = optimize_square(a, ErrorKind::Simplified);
    const SideEquioscillation cmp = equioscillating_side_alpha(a, ErrorKind::Simplified);
    const double margin = cmp.angle_minimax - opt.max_error;
    v.require(margin > 1e-6, "margin");
    v.note << " optimum " << opt.max_error << ", comparator " << cmp.angle_minimax << ", margin " << margin;
}

void extrema_on_angle(Verdict& v) {
    for (double a : {1.0 / std::sqrt(3.0), 0.5, std::sqrt(2.0) / 2.0}) {
        const ExtremaReport r = verify_extrema_on_angle(optimize_square(a, ErrorKind::Simplified), 1001);
        v.require(r.pass, "a=" + std::to_string(a));
        v.note << " a=" << a << ": excess " << std::max(r.grid_max - r.angle_max, r.angle_min - r.grid_min);
    }
}

void lemma_suites(Verdict& v) {
    // 20 half-sides strictly inside (0, a_max): at a_max itself the center
    // error no longer depends on alpha
    int checks = 0;
    for (int i = 1; i <= 20; ++i) {
        const double a = i * kMaxSquareHalfSide / 21.0;
        for (const CheckOutcome& c : lemma_property_suite(a)) {
            ++checks;
            v.require(c.passed, c.name + " at a=" + std::to_string(a) + ": " + c.detail);
        }
    }
    v.note << " " << checks << " checks over 20 half-sides";
}

void oracle_equivalence(Verdict& v) {
    const auto t0 = std::chrono::steady_clock::now();
    for (double a : {kMaxSquareHalfSide, kMaxSquareHalfSide / 2, kMaxSquareHalfSide / 4}) {
        const auto orc = grid_minimax_square(a, ErrorKind::Radial);
        const double gap = std::abs(optimize_square(a, ErrorKind::Radial).max_error - orc.best_minimax);
        v.require(gap <= orc.slack, "a=" + std::to_string(a));
        v.note << " a=" << a << ": " << gap << " <= " << orc.slack << ";";
    }
    const double elapsed = seconds_since(t0);
    v.require(elapsed < 60.0, "too slow");
    v.note << " " << elapsed << " s";
}

void equioscillation(Verdict& v) {
    for (double a : {kMaxSquareHalfSide / 4, 0.5, 1.0 / std::sqrt(3.0), kMaxSquareHalfSide}) {
        const CheckOutcome c = check_equioscillation(optimize_square(a, ErrorKind::Simplified), 2001);
        v.require(c.passed, "a=" + std::to_string(a) + ": " + c.detail);
    }
    v.note << " simplified error, 2001-point u grid, 4 half-sides";
}

void rectangle(Verdict& v) {
    const RectRegion r = region_vertices(0.75, 0.2, ErrorKind::Radial);
    v.require(std::abs(r.boundary.alpha1 - 1.0277) <= 1e-3, "alpha1");
    v.note << " alpha1 " << r.boundary.alpha1;
    if (r.degenerate) {
        v.require(false, "region empty: " + r.reason);
        return;
    }
    std::array<double, 4> m{};
    for (int k = 0; k < 3; ++k)
        m[k] = rect_extrema(r.params(r.vertices[k]), ErrorKind::Radial).max_abs();
    m[3] = rect_extrema(r.params(r.centroid()), ErrorKind::Radial).max_abs();
    const double spread = *std::max_element(m.begin(), m.begin() + 3) - *std::min_element(m.begin(), m.begin() + 3);
    const double centroid_gap = std::abs(m[3] - m[0]);
    v.require(spread <= 1e-6, "vertex errors differ");
    v.require(centroid_gap <= 1e-6, "centroid differs");
    v.note << ", max|g| at v1 " << m[0] << ", v2 " << m[1] << ", v3 " << m[2] << ", centroid " << m[3];
}

void continuity(Verdict& v) {
    for (int n : {2, 6}) {
        const ContinuityReport r = check_continuity(assemble_g0(n, ErrorKind::Radial), 101);
        v.require(r.max_position_gap <= 1e-12, "G0 position, n=" + std::to_string(n));
        v.note << " G0/" << n << " gap " << r.max_position_gap << ";";
    }
    const ContinuityReport g1 = check_continuity(assemble_g1(), 101);
    v.require(g1.max_position_gap <= 1e-12, "G1 position");
    v.require(g1.max_normal_gap <= 1e-10, "G1 normal angle");
    v.note << " G1 gap " << g1.max_position_gap << ", normal angle " << g1.max_normal_gap;
}

} // namespace

int main() {
    const std::array<std::pair<const char*, std::function<void(Verdict&)>>, 10> criteria{{
        {"square table errors and parameters", table_errors},
        {"convergence rates", rates},
        {"G1 spline exactness", g1_exactness},
        {"comparator strictly worse at a = 1/sqrt(3)", comparator},
        {"grid extrema lie on side and diagonal", extrema_on_angle},
        {"lemma property suites", lemma_suites},
        {"grid oracle agrees with Newton", oracle_equivalence},
        {"diagonal equioscillation", equioscillation},
        {"rectangle region equal errors", rectangle},
        {"spline continuity", continuity},
    }};

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            criteria[i].second(v);
        } catch (const std::exception& e) {
            v.require(false, std::string("exception: ") + e.what());
        }
        failed += !v.pass;
        std::printf("[%s] criterion %zu: %s:%s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    v.note.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
