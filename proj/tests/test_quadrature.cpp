#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "conepath/quadrature.hpp"

using namespace conepath;

TEST(GaussLegendre, WeightsSumToTwoAndNodesAreSymmetric) {
    const auto& r = quad::gauss_legendre<20>();
    double s = 0.0;
    for (double w : r.weights) s += w;
    EXPECT_NEAR(s, 2.0, 1e-14);
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
        EXPECT_NEAR(r.nodes[i], -r.nodes[r.nodes.size() - 1 - i], 1e-15);
}

TEST(GaussLegendre, ExactForPolynomialsUpToDegree2NMinus1) {
    for (int k = 0; k <= 39; ++k) {
        const double got = quad::fixed<20>([k](double x) { return std::pow(x, k); }, 0.0, 1.0);
        EXPECT_NEAR(got, 1.0 / (k + 1.0), 1e-14) << "degree " << k;
    }
}

TEST(GaussLegendre, OtherOrders) {
    const auto& r = quad::gauss_legendre<5>();
    EXPECT_EQ(r.nodes.size(), 5u);
    EXPECT_NEAR(quad::fixed<5>([](double x) { return x * x * x * x; }, -1.0, 1.0), 0.4, 1e-15);
}

TEST(Adaptive, OscillatoryIntegralMeetsTolerance) {
    auto f = [](double x) { return std::polar(1.0, 200.0 * x); };
    const auto r = quad::adaptive(f, 0.0, 1.0, 1e-12);
    const std::complex<double> exact = (std::polar(1.0, 200.0) - 1.0) / std::complex<double>(0.0, 200.0);
    EXPECT_LT(std::abs(r.value - exact), 1e-12);
    EXPECT_LE(r.error, 1e-12);
}

TEST(Adaptive, EmptyIntervalIsZero) {
    const auto r = quad::adaptive([](double) { return 1.0; }, 2.0, 2.0, 1e-12);
    EXPECT_EQ(r.value, 0.0);
}

TEST(OverPanels, SumsPanels) {
    const std::vector<double> breaks{0.0, 0.5, 1.0, std::numbers::pi};
    const auto r = quad::over_panels([](double x) { return std::sin(x); }, breaks, 1e-13);
    EXPECT_NEAR(r.value, 2.0, 1e-13);
}
