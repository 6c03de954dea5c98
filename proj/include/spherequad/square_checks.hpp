// Sampled verification of the structural properties the square optimizer
// relies on. Each check returns its worst observed margin so that callers can
// report how close a property came to failing, not only whether it held.
#pragma once

#include <string>
#include <vector>

#include "spherequad/square_optimizer.hpp"

namespace spherequad {

struct CheckOutcome {
    std::string name;
    bool passed = false;
    double worst = 0.0;     ///< worst margin (meaning depends on the check)
    double threshold = 0.0; ///< value `worst` was compared against
    std::string detail;
};

/// f_side and f_diag strictly increase in alpha, and f_diag in beta, for
/// u in [0,1). `n` samples per axis. worst = smallest forward difference.
CheckOutcome check_monotonicity(double a, int n = 20);

/// f_diag(u, alpha, beta) < f_side(u, alpha) on (0,1) whenever
/// alpha in [1/2, 1/(2-2a^2)] and beta <= beta0(alpha). worst = min(f_side - f_diag).
CheckOutcome check_side_dominates_diagonal(double a, int n = 20);

/// Closed forms of f_side at alpha = 1/2, 1/(2(1-a^2)) and at the zero
/// alpha0 of f_side(0, .), compared to 1e-14.
CheckOutcome check_side_closed_forms(double a, int n = 20);

/// f_diag(0, alpha, beta0(alpha)) == f_side(0, alpha) to 1e-14.
CheckOutcome check_beta0_balance(double a, int n = 20);

/// With f_side(0) = f_diag(0) = 0 both errors are non-positive everywhere.
CheckOutcome check_zero_center(double a, int n = 2001);

/// y > 1 at the interior stationary point for alpha across [alpha_l, alpha_r].
CheckOutcome check_critical_point(double a, int n = 21);

/// f_diag(0) = E = -f_diag(u_m), zero slope at u_m, and |f_side| <= E + 1e-12
/// on an n-point grid.
CheckOutcome check_equioscillation(const OptimizationResult& result, int n = 2001);

/// All of the above at a single half-side, for the simplified error.
std::vector<CheckOutcome> lemma_property_suite(double a);

} // namespace spherequad
