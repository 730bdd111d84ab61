#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "conepath/geometry.hpp"

using namespace conepath;

namespace {

SupportRegion random_region(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> pos(-10.0, 10.0), len(0.0, 2.0);
    std::uniform_int_distribution<int> count(1, 5);
    std::vector<Interval> parts;
    for (int k = count(rng); k > 0; --k) {
        const double a = pos(rng);
        parts.push_back({a, a + len(rng)});
    }
    return SupportRegion(parts);
}

} // namespace

TEST(Support, SortsAndMergesOverlaps) {
    const SupportRegion s{{3.0, 4.0}, {-1.0, 0.5}, {0.0, 1.0}};
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s.intervals()[0], (Interval{-1.0, 1.0}));
    EXPECT_EQ(s.intervals()[1], (Interval{3.0, 4.0}));
    EXPECT_DOUBLE_EQ(s.measure(), 3.0);
    EXPECT_EQ(s.hull(), (Interval{-1.0, 4.0}));
    ASSERT_EQ(s.gaps().size(), 1u);
    EXPECT_EQ(s.gaps()[0], (Interval{1.0, 3.0}));
}

TEST(Support, TouchingIntervalsMerge) {
    const SupportRegion s{{0.0, 1.0}, {1.0, 2.0}};
    EXPECT_EQ(s.size(), 1u);
}

TEST(Support, RejectsBadIntervals) {
    EXPECT_THROW((SupportRegion{{1.0, 0.0}}), DomainError);
    EXPECT_THROW((SupportRegion{{0.0, std::nan("")}}), DomainError);
    EXPECT_THROW(SupportRegion::empty().hull(), DomainError);
    EXPECT_THROW(dilate(SupportRegion{{0.0, 1.0}}, -1.0), DomainError);
}

TEST(Support, ContainsIsClosed) {
    const SupportRegion s{{0.0, 1.0}};
    EXPECT_TRUE(s.contains(0.0));
    EXPECT_TRUE(s.contains(1.0));
    EXPECT_FALSE(s.contains(1.0 + 1e-12));
}

TEST(Support, StreamsAsText) {
    std::ostringstream os;
    os << SupportRegion{{0.0, 1.0}, {2.0, 3.5}};
    EXPECT_EQ(os.str(), "{[0,1],[2,3.5]}");
}

TEST(Triangles, ApexAtHalfGapOverC) {
    const SupportRegion s{{-1.0, 0.0}, {2.0, 3.0}};
    const auto tr = triangles_from_gaps(s, 1.0);
    ASSERT_EQ(tr.size(), 1u);
    EXPECT_DOUBLE_EQ(tr[0].apex_t, 1.0);
    EXPECT_DOUBLE_EQ(tr[0].apex_x(), 1.0);
    EXPECT_TRUE(tr[0].contains(1.0, 0.99, 1.0));
    EXPECT_FALSE(tr[0].contains(1.0, 1.0, 1.0));
    EXPECT_FALSE(tr[0].contains(0.5, 0.5, 1.0));
    EXPECT_THROW(triangles_from_gaps(s, 0.0), DomainError);
}

TEST(LightCone, ActiveRegionMergesAtApex) {
    const LightConeGeometry g(SupportRegion{{-1.0, 0.0}, {2.0, 3.0}}, 2.0);
    EXPECT_DOUBLE_EQ(g.last_apex(), 0.5);
    EXPECT_EQ(g.active_region(0.25).size(), 2u);
    EXPECT_EQ(g.active_region(0.5).size(), 1u);
    EXPECT_EQ(g.active_region(1.0).hull(), (Interval{-3.0, 5.0}));
    EXPECT_TRUE(g.inside(-2.9, 1.0));
    EXPECT_FALSE(g.inside(1.0, 0.25));
    EXPECT_THROW(g.active_region(-1.0), DomainError);
    EXPECT_THROW(LightConeGeometry(SupportRegion::empty(), 1.0), DomainError);
}

TEST(LightCone, GeometryCsv) {
    const LightConeGeometry g(SupportRegion{{-1.0, 0.0}, {2.0, 3.0}}, 1.0);
    std::ostringstream os;
    write_geometry_csv(os, g, {0.0, 2.0});
    EXPECT_EQ(os.str(), "t,n_intervals,intervals\n0,2,-1;0 2;3\n2,1,-3;5\n");
}

// Properties over random supports.

TEST(SupportProperties, DilationComposes) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = random_region(rng);
        const auto lhs = dilate(dilate(s, 0.3), 0.4);
        const auto rhs = dilate(s, 0.7);
        ASSERT_EQ(lhs.size(), rhs.size());
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            EXPECT_NEAR(lhs.intervals()[i].a, rhs.intervals()[i].a, 1e-12);
            EXPECT_NEAR(lhs.intervals()[i].b, rhs.intervals()[i].b, 1e-12);
        }
    }
}

TEST(SupportProperties, ActiveRegionIsMonotoneAndCoversInitial) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const LightConeGeometry g(random_region(rng), 1.5);
        EXPECT_TRUE(g.initial().subset_of(g.active_region(0.1)));
        EXPECT_TRUE(g.active_region(0.1).subset_of(g.active_region(0.2)));
        EXPECT_LE(g.active_region(0.2).size(), g.initial().size());
        // after the last apex there is one interval
        EXPECT_EQ(g.active_region(g.last_apex() + 1e-9).size(), 1u);
    }
}

TEST(SupportProperties, TrianglePointsAreOutsideTheActiveRegion) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const LightConeGeometry g(random_region(rng), 1.0);
        for (const auto& tr : g.triangles()) {
            for (int k = 0; k < 20; ++k) {
                const double t = u(rng) * tr.apex_t;
                const double x = tr.a + (tr.b - tr.a) * u(rng);
                if (tr.contains(x, t, 1.0)) {
                    EXPECT_FALSE(g.inside(x, t));
                }
            }
        }
    }
}

TEST(SupportProperties, MeasureIsAdditiveOverDisjointParts) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = random_region(rng);
        double hull = s.hull().width(), gaps = 0.0;
        for (const auto& g : s.gaps()) gaps += g.width();
        EXPECT_NEAR(s.measure() + gaps, hull, 1e-12);
    }
}
