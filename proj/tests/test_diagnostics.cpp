#include <gtest/gtest.h>

#include <numbers>

#include "conepath/diagnostics.hpp"
#include "conepath/quadrature.hpp"

using namespace conepath;

namespace {

// Free propagator integrated over the box by panels:
//   psi = sqrt(m / (2 pi i hbar t)) int_a^b exp(i m (x - y)^2 / (2 hbar t)) dy.
cplx box_oracle(double x, double t, double a, double b) {
    const int panels = 400;
    const double h = (b - a) / panels;
    cplx s{};
    for (int k = 0; k < panels; ++k)
        s += quad::fixed<20>([&](double y) { return std::polar(1.0, (x - y) * (x - y) / (2.0 * t)); }, a + k * h,
                             a + (k + 1) * h);
    return s / std::sqrt(cplx(0.0, 2.0 * std::numbers::pi * t));
}

} // namespace

TEST(Moments, GaussianMoments) {
    const auto psi = sample_on_support(gaussian_profile(0.8), SupportRegion{{-10.0, 10.0}}, 0.01);
    EXPECT_NEAR(norm_moment(psi, 0), 1.0, 1e-12);
    EXPECT_NEAR(norm_moment(psi, 1), 0.0, 1e-14);
    EXPECT_NEAR(norm_moment(psi, 2), 0.5 * 0.64, 1e-12);
    EXPECT_NEAR(norm_moment(psi, 4), 0.75 * 0.8 * 0.8 * 0.8 * 0.8, 1e-12);
    EXPECT_THROW(norm_moment(psi, 3), DomainError);
    EXPECT_NEAR(windowed_second_moment(psi, 10.0), norm_moment(psi, 2), 1e-12);
    EXPECT_LT(windowed_second_moment(psi, 0.5), norm_moment(psi, 2));
}

TEST(FresnelBox, MatchesPropagatorIntegral) {
    PhysicalParams p;
    for (double t : {0.05, 0.5, 2.0})
        for (double x : {-3.0, -1.0, 0.0, 0.7, 4.0})
            EXPECT_LT(std::abs(fresnel_box(x, t, p) - box_oracle(x, t, -1.0, 1.0)), 1e-11) << x << " " << t;
}

TEST(FresnelBox, MirrorSymmetryAndShortTimeLimit) {
    PhysicalParams p;
    for (double x : {0.1, 0.9, 3.0}) EXPECT_LT(std::abs(fresnel_box(x, 0.3, p, 0.0, 2.0) - fresnel_box(2.0 - x, 0.3, p, 0.0, 2.0)), 1e-14);
    EXPECT_LT(std::abs(fresnel_box(0.0, 1e-6, p) - 1.0), 2e-3);
    EXPECT_LT(std::abs(fresnel_box(3.0, 1e-6, p)), 2e-3);
    EXPECT_THROW(fresnel_box(0.0, 0.0, p), DomainError);
    EXPECT_THROW(fresnel_box(0.0, 1.0, p, 1.0, 1.0), DomainError);
}

TEST(L2Error, IdentityAndSignFlip) {
    const auto a = sample_on_support(gaussian_profile(1.0), SupportRegion{{-5.0, 5.0}}, 0.05);
    auto b = a;
    EXPECT_EQ(l2_error(a, b), 0.0);
    for (auto& v : b.values) v = -v;
    EXPECT_NEAR(l2_error(a, b), 2.0, 1e-14);
    auto z = a;
    for (auto& v : z.values) v = 0.0;
    EXPECT_THROW(l2_error(a, z), DataError);
}

TEST(L2Error, ResamplesAcrossGrids) {
    const auto fine = sample_on_support(gaussian_profile(1.0), SupportRegion{{-6.0, 6.0}}, 0.01);
    const auto coarse = sample_on_support(gaussian_profile(1.0), SupportRegion{{-6.0, 6.0}}, 0.03);
    EXPECT_LT(l2_error(coarse, fine), 1e-5);
    const SupportRegion window{{-1.0, 1.0}};
    EXPECT_LT(l2_error(coarse, fine, window), 1e-5);
}

TEST(L2Error, ShiftedLatticeUsesInterpolation) {
    auto a = sample_on_support(gaussian_profile(1.0), SupportRegion{{-6.0, 6.0}}, 0.02);
    WaveFunction b;
    b.dx = 0.02;
    b.origin = -6.01;
    for (int i = 0; i < 601; ++i) b.values.push_back(gaussian_profile(1.0)(b.x(i)));
    b.support = SupportRegion{{b.origin, b.x_end()}};
    EXPECT_LT(l2_error(a, b), 1e-5);
}

TEST(Fit, RecoversPowerLaw) {
    std::vector<double> x, y;
    for (int i = 1; i <= 1000; ++i) {
        x.push_back(i);
        y.push_back(3.0 * std::pow(i, -1.5));
    }
    const auto f = fit_log_log(x, y, 2.0, 500.0);
    EXPECT_NEAR(f.slope, -1.5, 1e-12);
    EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-10);
    EXPECT_NEAR(f.r2, 1.0, 1e-12);
    EXPECT_THROW(fit_log_log(x, y, 2.0, 10.0), DomainError);
}

TEST(Fit, FreeBoxTailDecaysLikeOneOverX) {
    // |psi(x, t)| ~ (t / pi) |x|^{-1} for x >> 1: sampled exactly from the closed form
    PhysicalParams p;
    WaveFunction psi;
    psi.dx = 0.01;
    psi.origin = 0.0;
    for (int i = 0; i <= 100000; ++i) psi.values.push_back(fresnel_box(psi.x(i), 1.0, p));
    psi.support = SupportRegion{{0.0, psi.x_end()}};
    const auto f = tail_fit(psi, 1.0, static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi / psi.dx)));
    EXPECT_NEAR(f.slope, -1.0, 0.05);
}

TEST(Fronts, TrackAndSpeed) {
    Trajectory tr;
    for (int k = 0; k < 5; ++k) {
        auto s = sample_on_support(constant_profile(1.0), SupportRegion{{-1.0 - k, 1.0 + 2.0 * k}}, 0.5);
        s.t = k;
        tr.snapshots.push_back(s);
    }
    const auto f = front_track(tr);
    ASSERT_EQ(f.size(), 5u);
    EXPECT_DOUBLE_EQ(f[2].left, -3.0);
    EXPECT_DOUBLE_EQ(f[2].right, 5.0);
    EXPECT_NEAR(front_speed(f), 2.0, 1e-12);
    EXPECT_THROW(front_track(tr, 0.0), DomainError);
    EXPECT_THROW(front_track(Trajectory{}), DataError);
}

TEST(SupDifference, SkipsExcludedNeighbourhoods) {
    const auto psi = sample_on_support(constant_profile(1.0), SupportRegion{{-1.0, 1.0}}, 0.1);
    auto f = [](double x) { return std::abs(x) < 0.25 ? 2.0 : 1.0; };
    EXPECT_NEAR(sup_difference(psi, f, -1.0, 1.0), 1.0, 1e-15);
    const std::vector<double> skip{0.0};
    EXPECT_NEAR(sup_difference(psi, f, -1.0, 1.0, skip, 0.3), 0.0, 1e-15);
}
