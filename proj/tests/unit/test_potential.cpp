#include <gtest/gtest.h>

#include <cmath>

#include "tdiff/error.hpp"
#include "tdiff/potential.hpp"
#include "tdiff/reference.hpp"
#include "tdiff/stationary.hpp"

using namespace tdiff;

namespace {

const ThresholdModel kBrownian = make_model({0.0}, {0.0, 0.0}, {1.0, 1.0});

}  // namespace

TEST(Potential, StandardBrownianValues) {
    EXPECT_NEAR(potential_density(kBrownian, 0.5, 0.0, 0.0), 0.5, 1e-15);
    EXPECT_NEAR(potential_density(kBrownian, 0.5, 0.0, 2.0), 0.5 * std::exp(-2.0), 1e-15);
    EXPECT_NEAR(potential_density(kBrownian, 0.5, 0.0, 2.0), 0.067668, 1e-6);
}

TEST(Potential, SmallRateApproachesStationaryLaw) {
    const auto m = make_model({0.0}, {1.0, -1.0}, {std::sqrt(2.0), std::sqrt(2.0)});
    EXPECT_NEAR(potential_density(m, 1e-4, 0.0, 0.0), 0.5, 1e-3);
}

TEST(Potential, RequiresPositiveRate) {
    EXPECT_THROW(potential_density(kBrownian, 0.0, 0.0, 0.0), PreconditionError);
    EXPECT_THROW(potential_pieces(kBrownian, 1.0, std::nan("")), PreconditionError);
}

TEST(Pieces, StandardBrownianHasTwoSingleTermSegments) {
    // x = a_1 here, so the breakpoint set is just {0}.
    const auto p = potential_pieces(kBrownian, 0.5, 0.0);
    ASSERT_EQ(p.segments().size(), 2u);
    for (const auto& s : p.segments()) ASSERT_EQ(s.terms.size(), 1u);
    EXPECT_DOUBLE_EQ(p.segments()[0].terms[0].rate, 1.0);
    EXPECT_DOUBLE_EQ(p.segments()[1].terms[0].rate, -1.0);
    EXPECT_NEAR(p.total_mass(), 1.0, 1e-15);
}

TEST(Pieces, BreakpointsAreThresholdsAndStart) {
    const auto m = make_model({0.0}, {0.3, -0.2}, {1.0, 1.5});
    const auto p = potential_pieces(m, 1.0, 0.7);
    ASSERT_EQ(p.segments().size(), 3u);
    EXPECT_EQ(p.segments()[0].right, 0.0);
    EXPECT_EQ(p.segments()[1].right, 0.7);
    EXPECT_TRUE(std::isinf(p.segments()[2].right));
    EXPECT_NEAR(p.total_mass(), 1.0, 1e-14);
}

TEST(Pieces, AgreeWithPointwiseDensity) {
    const auto m = make_model({-1.0, 0.0, 1.5}, {1.0, 0.0, -2.0, 0.5}, {0.5, 1.0, 2.0, 0.8});
    for (double q : {0.05, 1.0, 30.0}) {
        for (double x : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
            const FundamentalPair g(m, q);
            const auto p = potential_pieces(g, x);
            EXPECT_NEAR(p.total_mass(), 1.0, 1e-12);
            for (double z = -4.0; z <= 5.0; z += 0.137) {
                const double d = potential_density(g, x, z);
                EXPECT_NEAR(p.evaluate(z), d, 1e-12 * d + 1e-300) << "q=" << q << " x=" << x << " z=" << z;
            }
        }
    }
}

TEST(Pieces, ManualSegmentIntegratesToOne) {
    Segment s;
    s.left = 0.0;
    s.right = INFINITY;
    s.add_term(1.0, 0.0, -1.0, 0.0);
    const PiecewiseExpDensity d({s});
    EXPECT_NEAR(d.total_mass(), 1.0, 1e-16);
    EXPECT_NEAR(d.integrate(1.0, 2.0), std::exp(-1.0) - std::exp(-2.0), 1e-16);
    EXPECT_EQ(d.evaluate(-1.0), 0.0);
}

TEST(Pieces, NonIntegrableTailsAreRejected) {
    Segment s;
    s.left = 0.0;
    s.right = INFINITY;
    s.add_term(1.0, 0.0, 0.5, 0.0);
    const PiecewiseExpDensity d({s});
    EXPECT_THROW(d.total_mass(), NumericError);
    EXPECT_GT(d.integrate(0.0, 1.0), 0.0);
}

TEST(Pieces, DumpHasOneRowPerTerm) {
    const auto p = potential_pieces(kBrownian, 0.5, 0.3);
    std::size_t terms = 0;
    for (const auto& s : p.segments()) terms += s.terms.size();
    const auto csv = p.dump_csv();
    EXPECT_EQ(csv.rfind("left,right,amplitude,rate,reference\n", 0), 0u);
    EXPECT_EQ(std::size_t(std::count(csv.begin(), csv.end(), '\n')), terms + 1);
}

TEST(Potential, ExtremeRatesStayFinite) {
    const auto m = make_model({0.0, 1.0}, {3.0, -3.0, 3.0}, {0.3, 3.0, 0.3});
    for (double q : {1e-10, 1e6}) {
        const FundamentalPair g(m, q);
        const auto p = potential_pieces(g, 0.5);
        EXPECT_NEAR(p.total_mass(), 1.0, 1e-8) << q;
        EXPECT_TRUE(std::isfinite(potential_density(g, 0.5, 40.0)));
    }
}

TEST(Potential, SpeedSymmetryAcrossThresholds) {
    const auto m = make_model({-0.5, 0.5}, {0.5, 0.0, -1.0}, {1.0, 3.0, 0.4});
    const FundamentalPair g(m, 0.7);
    for (double x : {-1.0, 0.0, 0.9})
        for (double z : {-2.0, -0.5, 0.2, 0.5, 1.3}) {
            const double lhs = potential_log_density(g, x, z) - log_speed_density(m, z);
            const double rhs = potential_log_density(g, z, x) - log_speed_density(m, x);
            EXPECT_NEAR(lhs, rhs, 1e-12);
        }
}
