#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "conepath/kernel.hpp"

using namespace conepath;

namespace {

// Midpoint rule in theta for I_k = int_{-1}^{1} z^k exp(i xi L(z)) dz, z = sin(theta).
cplx brute_moment(int k, double xi, long n) {
    const double h = std::numbers::pi / static_cast<double>(n);
    cplx s{};
    for (long i = 0; i < n; ++i) {
        const double th = -0.5 * std::numbers::pi + (static_cast<double>(i) + 0.5) * h;
        const double c = std::cos(th);
        s += std::pow(std::sin(th), k) * std::polar(c, xi * (1.0 - c));
    }
    return s * h;
}

PhysicalParams params_for(double xi, double c_dt) {
    PhysicalParams p;
    // dt = m = 1: c dt = c and xi = c^2 / hbar
    p.c = c_dt;
    p.hbar = c_dt * c_dt / xi;
    return p;
}

} // namespace

TEST(Lagrangian, RelativisticValuesAndDomain) {
    const auto L = Lagrangian::relativistic();
    EXPECT_EQ(L(0.0), 0.0);
    EXPECT_NEAR(L(0.6), 0.2, 1e-15);
    EXPECT_NEAR(L(1e-8), 0.5e-16, 1e-30);
    EXPECT_THROW(L(1.0), DomainError);
    EXPECT_THROW(L(-1.5), DomainError);
}

TEST(Lagrangian, CustomIsCheckedAtTheOrigin) {
    EXPECT_NO_THROW(Lagrangian::custom([](double z) { return 0.5 * z * z; }, "nonrelativistic"));
    EXPECT_THROW(Lagrangian::custom([](double z) { return z * z; }), DomainError);
    EXPECT_THROW(Lagrangian::custom([](double z) { return 0.5 * z * z + 0.1 * z; }), DomainError);
    EXPECT_THROW(Lagrangian::custom([](double z) { return 0.5 * z * z + 1.0; }), DomainError);
}

TEST(Moments, ValuesAtXiZero) {
    const auto m = moments(Lagrangian::relativistic(), 0.0);
    EXPECT_NEAR(m.I0.real(), 2.0, 1e-13);
    EXPECT_NEAR(m.I2.real(), 2.0 / 3.0, 1e-13);
    EXPECT_NEAR(m.I4.real(), 0.4, 1e-13);
    EXPECT_THROW(moments(Lagrangian::relativistic(), -1.0), DomainError);
    EXPECT_THROW(moment_integral(Lagrangian::relativistic(), 1, 1.0), DomainError);
}

class ClosedForm : public ::testing::TestWithParam<double> {};

TEST_P(ClosedForm, QuadratureMatchesBesselStruve) {
    const double xi = GetParam();
    const cplx q = moment_integral(Lagrangian::relativistic(), 0, xi);
    EXPECT_LT(std::abs(q - closed_form_check(xi)), 1e-9) << "xi = " << xi;
}

INSTANTIATE_TEST_SUITE_P(Range, ClosedForm, ::testing::Values(0.01, 0.5, 1.0, 3.8317, 10.0, 50.0, 300.0, 2000.0, 2e4));

TEST(Moments, BruteForceAtXi50) {
    const double xi = 50.0;
    const auto m = moments(Lagrangian::relativistic(), xi);
    EXPECT_LT(std::abs(m.I0 - brute_moment(0, xi, 10'000'000)), 1e-9);
    EXPECT_LT(std::abs(m.I2 - brute_moment(2, xi, 2'000'000)), 1e-9);
    EXPECT_LT(std::abs(m.I4 - brute_moment(4, xi, 2'000'000)), 1e-9);
}

TEST(Moments, StationaryPhaseAtLargeXi) {
    // I_0 ~ sqrt(2 pi / xi) e^{i pi/4} (1 + O(1/xi))
    for (double xi : {1e3, 1e4, 1e5}) {
        const cplx lead = std::sqrt(2.0 * std::numbers::pi / xi) * std::polar(1.0, 0.25 * std::numbers::pi);
        EXPECT_LT(std::abs(moment_integral(Lagrangian::relativistic(), 0, xi) / lead - 1.0), 1.0 / xi) << xi;
    }
}

TEST(Moments, NonrelativisticCustomMatchesFresnel) {
    // L = z^2/2: I_0 = 2 int_0^1 exp(i xi z^2 / 2) dz = 2 sqrt(pi/xi) F(sqrt(xi/pi))
    const auto L = Lagrangian::custom([](double z) { return 0.5 * z * z; });
    const double xi = 40.0;
    const cplx expect = 2.0 * std::sqrt(std::numbers::pi / xi) * special::fresnel(std::sqrt(xi / std::numbers::pi));
    EXPECT_LT(std::abs(moment_integral(L, 0, xi) - expect), 1e-10);
}

TEST(Coefficient, SmallXiAgainstBruteForce) {
    for (double xi : {0.01, 0.1, 0.5}) {
        const auto s = coefficient_sample(Lagrangian::relativistic(), xi);
        const cplx oracle = xi * brute_moment(2, xi, 200'000) / (2.0 * brute_moment(0, xi, 200'000));
        EXPECT_LT(std::abs(s.C - oracle), 1e-10 * xi) << xi;
        EXPECT_FALSE(s.singular);
    }
    // frozen: C(0.1) = 0.1 I_2 / (2 I_0)
    const auto s = coefficient_sample(Lagrangian::relativistic(), 0.1);
    EXPECT_NEAR(s.C.real(), 0.0166631862, 1e-10);
    EXPECT_NEAR(s.C.real(), 0.1 / 6.0, 0.05 * 0.1);
}

TEST(Coefficient, ApproachesHalfIAtLargeXi) {
    const auto s = coefficient_sample(Lagrangian::relativistic(), 5e4);
    EXPECT_LT(std::abs(s.C - cplx(0.0, 0.5)), 0.02);
}

TEST(Coefficient, CurveRejectsBadGrid) {
    const std::vector<double> grid{1.0, -2.0};
    EXPECT_THROW(coefficient_curve(Lagrangian::relativistic(), grid), DomainError);
}

TEST(Weights, WindowMustBeAnIntegerOfAtLeast16) {
    PhysicalParams p;
    p.c = 10.0;
    p.dt = 0.1; // c dt = 1
    EXPECT_EQ(window_cells(p, 1.0 / 64), 64);
    EXPECT_THROW(window_cells(p, 1.0 / 8), ConfigError);
    EXPECT_THROW(window_cells(p, 0.03), ConfigError);
    EXPECT_THROW(window_cells(p, 0.0), ConfigError);
}

class WeightRules : public ::testing::TestWithParam<std::tuple<double, WeightRule>> {};

TEST_P(WeightRules, EvenAndSumToNormalization) {
    const auto [xi, rule] = GetParam();
    const auto p = params_for(xi, 1.0);
    const auto kw = kernel_weights(Lagrangian::relativistic(), p, 1.0 / 32, rule);
    ASSERT_EQ(kw.size(), 65u);
    for (int j = 0; j <= 32; ++j) EXPECT_EQ(kw.at(j), kw.at(-j));
    EXPECT_EQ(kw.at(33), cplx{});
    cplx sum{};
    for (const auto& w : kw.weights) sum += w;
    EXPECT_LT(std::abs(sum / kw.norm_N - 1.0), 1e-12);
    EXPECT_NEAR(kw.xi, xi, 1e-12 * xi);
}

INSTANTIATE_TEST_SUITE_P(Grid, WeightRules,
                         ::testing::Combine(::testing::Values(1.0, 25.0, 400.0),
                                            ::testing::Values(WeightRule::linear, WeightRule::cell)));

TEST(Weights, SecondMomentReproducesCoefficient) {
    // sum_j w_j (j dx)^2 / N approximates (c dt)^2 I_2 / I_0 as the grid refines
    const double xi = 25.0;
    const auto p = params_for(xi, 1.0);
    const auto kw = kernel_weights(Lagrangian::relativistic(), p, 1.0 / 256);
    cplx m2{};
    for (int j = -kw.W; j <= kw.W; ++j) m2 += kw.at(j) * std::pow(j * kw.dx, 2);
    const auto m = moments(Lagrangian::relativistic(), xi);
    EXPECT_LT(std::abs(m2 / kw.norm_N - m.I2 / m.I0), 1e-4);
}
