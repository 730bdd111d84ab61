#include <gtest/gtest.h>

#include "conepath/experiments.hpp"

using namespace conepath;
namespace ex = conepath::experiments;

TEST(Helpers, Linspace) {
    const auto v = ex::linspace(1.0, 2.0, 5);
    ASSERT_EQ(v.size(), 5u);
    EXPECT_EQ(v.front(), 1.0);
    EXPECT_EQ(v.back(), 2.0);
    EXPECT_DOUBLE_EQ(v[2], 1.5);
}

TEST(Helpers, SpreadingGaussianStaysNormalized) {
    PhysicalParams p;
    for (double t : {0.0, 1.0, 5.0}) {
        double s = 0.0;
        for (double x = -60.0; x <= 60.0; x += 0.01) s += std::norm(ex::spreading_gaussian(x, t, 1.0, p));
        EXPECT_NEAR(s * 0.01, 1.0, 1e-10) << t;
    }
    EXPECT_LT(std::abs(ex::spreading_gaussian(0.3, 0.0, 1.0, p) - gaussian_profile(1.0)(0.3)), 1e-15);
}

TEST(Helpers, RandomWavefunctionIsSeeded) {
    const auto a = ex::random_wavefunction(64, 0.1, 9), b = ex::random_wavefunction(64, 0.1, 9),
               c = ex::random_wavefunction(64, 0.1, 10);
    EXPECT_EQ(a.values, b.values);
    EXPECT_NE(a.values, c.values);
}

TEST(CoeffStats, SyntheticCurve) {
    std::vector<CoefficientSample> curve;
    for (int k = 0; k < 400; ++k) {
        CoefficientSample s;
        s.xi = 1000.0 + k;
        s.C = cplx(0.0, 0.5) + std::polar(10.0 / s.xi, 0.3 * k);
        curve.push_back(s);
    }
    const auto st = ex::coeff_window_stats(curve);
    EXPECT_NEAR(st.mean_im, 0.5, 1e-3);
    ASSERT_EQ(st.envelope.size(), 4u);
    EXPECT_TRUE(st.envelope_decreasing);
}

TEST(Causality, NothingLeavesTheCone) {
    ex::CausalityOptions o;
    o.steps = 40;
    const auto r = ex::causality_check(o);
    EXPECT_EQ(r.steps, 40u);
    EXPECT_EQ(r.max_outside_rel, 0.0);
    EXPECT_TRUE(r.edges_zero);
}

TEST(Bench, BackendsAgree) {
    const auto row = ex::bench_case(2048, 32, 3, 1);
    EXPECT_LT(row.rel_difference, 1e-12);
    EXPECT_GT(row.direct_seconds, 0.0);
    EXPECT_GT(row.fft_seconds, 0.0);
}

TEST(Degenerate, ErrorShrinksWithTheSlice) {
    ex::DegenerateOptions o;
    o.dt = {1e-2, 1e-3};
    const auto r = ex::degenerate_ladder(o);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_LT(r[1].error, r[0].error);
    // psi(T) - psi0 is first order in the slice
    EXPECT_NEAR(r[0].error / r[1].error, 10.0, 0.5);
}

TEST(TwoSlit, ApexAndZeroBeforeIt) {
    ex::TwoSlitOptions o;
    o.cone_dx = 1e-2;
    o.cone_dt = 1e-2;
    o.t_end = 1.1;
    const auto r = ex::two_slit(o);
    EXPECT_DOUBLE_EQ(r.apex_time, 1.0);
    EXPECT_DOUBLE_EQ(r.probe_x, 1.0);
    EXPECT_EQ(r.max_before_apex_pi, 0.0);
    EXPECT_EQ(r.max_before_apex_cone, 0.0);
}

TEST(Oscillator, GroundStateEnergyHeld) {
    ex::OscillatorEnergyOptions o;
    o.c = 4.0;
    o.samples = 2;
    o.n_modes = 16;
    const auto st = ex::oscillator_energy({1.0}, o);
    EXPECT_NEAR(st.limit, 0.5, 1e-6); // ground state truncated to |x| < 4
    EXPECT_LT(st.max_rel_series, 1e-3);
    EXPECT_LT(st.max_rel_cone_series, 1e-3);
}

TEST(BoundaryLayer, CosineBumpVanishesAtTheEdges) {
    const auto f = ex::cosine_bump(1.0);
    EXPECT_NEAR(std::abs(f(1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(f(-1.0)), 0.0, 1e-15);
    EXPECT_GT(std::abs(f(0.0)), 0.0);
}
