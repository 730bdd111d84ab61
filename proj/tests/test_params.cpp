#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "conepath/params.hpp"

using namespace conepath;

TEST(Params, XiIsRestEnergyTimesSliceOverHbar) {
    PhysicalParams p;
    p.m = 2.0;
    p.c = 3.0;
    p.hbar = 0.5;
    p.dt = 0.1;
    EXPECT_DOUBLE_EQ(derive_groups(p).xi, 2.0 * 9.0 * 0.1 / 0.5);
    EXPECT_DOUBLE_EQ(p.c_dt(), 0.3);
}

TEST(Params, EpsZeroForFreeParticle) {
    PhysicalParams p;
    EXPECT_EQ(derive_groups(p).eps, 0.0);
    p.omega = 4.0;
    p.c = 8.0;
    EXPECT_DOUBLE_EQ(derive_groups(p).eps, 2.0 / 8.0);
}

TEST(Params, RejectsNonPositiveOrNonFinite) {
    const double bad[] = {0.0, -1.0, std::numeric_limits<double>::infinity(), std::nan("")};
    for (double v : bad) {
        for (int field = 0; field < 4; ++field) {
            PhysicalParams p;
            (field == 0 ? p.m : field == 1 ? p.c : field == 2 ? p.hbar : p.dt) = v;
            EXPECT_THROW(p.validate(), ParameterError) << "field " << field << " value " << v;
        }
    }
    PhysicalParams p;
    p.omega = -1.0;
    EXPECT_THROW(derive_groups(p), ParameterError);
}

TEST(Params, OverflowingXiIsRejected) {
    PhysicalParams p;
    p.c = 1e200;
    EXPECT_THROW(derive_groups(p), ParameterError);
}

TEST(Params, RegimeReportFlagsBothSides) {
    PhysicalParams p;
    p.c = 100.0;
    p.dt = 1e-3; // xi = 10
    auto r = check_regime(p, 1.0);
    EXPECT_TRUE(r.lower_ok);
    EXPECT_TRUE(r.upper_ok);
    EXPECT_TRUE(r.ok());
    p.dt = 1e-4; // xi = 1
    EXPECT_FALSE(check_regime(p, 1.0).lower_ok);
    p.dt = 1.0;
    r = check_regime(p, 1.0);
    EXPECT_TRUE(r.lower_ok);
    EXPECT_FALSE(r.upper_ok);
    EXPECT_DOUBLE_EQ(r.diffusion_ratio, 1.0);
    EXPECT_THROW(check_regime(p, 0.0), ParameterError);
}
