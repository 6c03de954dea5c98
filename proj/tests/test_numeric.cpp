#include <gtest/gtest.h>

#include <cmath>

#include "numeric.hpp"
#include "spherequad/errors.hpp"

using namespace spherequad;

TEST(FindRoot, SolvesToFullPrecision) {
    const double r = detail::find_root([](double x) { return x * x - 2.0; }, 1.0, 2.0);
    EXPECT_NEAR(r, std::sqrt(2.0), 4e-16);
}

TEST(FindRoot, ThrowsWithoutBracket) {
    EXPECT_THROW(detail::find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), SolverError);
}

TEST(FirstRoot, FindsLeftmostSignChange) {
    double r = 0.0;
    ASSERT_TRUE(detail::first_root([](double x) { return std::sin(x); }, 0.5, 10.0, 100, r));
    EXPECT_NEAR(r, M_PI, 1e-14);
    EXPECT_FALSE(detail::first_root([](double x) { return 1.0 + x * x; }, -3.0, 3.0, 50, r));
}

TEST(CurveExtrema, PolishesBetweenSamples) {
    // extremes at x = 0.3 and x = 0.8, neither is a sample of the 9-point grid
    auto f = [](double x) { return std::cos(2.0 * M_PI * (x - 0.3)); };
    const auto e = detail::curve_extrema(f, 0.0, 1.0, 9);
    EXPECT_NEAR(e.max.at, 0.3, 1e-7);
    EXPECT_NEAR(e.max.value, 1.0, 1e-14);
    EXPECT_NEAR(e.min.at, 0.8, 1e-7);
    EXPECT_NEAR(e.min.value, -1.0, 1e-14);
}

TEST(CurveExtrema, KeepsEndpointExtremes) {
    const auto e = detail::curve_extrema([](double x) { return x; }, -1.0, 2.0);
    EXPECT_EQ(e.min.value, -1.0);
    EXPECT_EQ(e.max.value, 2.0);
}
