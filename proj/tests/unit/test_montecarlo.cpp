#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "tdiff/error.hpp"
#include "tdiff/escape.hpp"
#include "tdiff/montecarlo.hpp"
#include "tdiff/passage.hpp"
#include "tdiff/philox.hpp"
#include "tdiff/potential.hpp"
#include "tdiff/reference.hpp"
#include "tdiff/stationary.hpp"

using namespace tdiff;

namespace {

const ThresholdModel kBrownian = make_model({0.0}, {0.0, 0.0}, {1.0, 1.0});
const ThresholdModel kThreeRegime = make_model({0.0, 1.0}, {1.0, -0.5, -1.0}, {1.0, 2.0, 1.0});

SimConfig config(std::size_t paths, double dt, std::uint64_t seed) {
    SimConfig c;
    c.paths = paths;
    c.dt = dt;
    c.seed = seed;
    c.threads = 1;
    return c;
}

double z_score(const Estimate& e, double exact) { return std::fabs(e.mean - exact) / e.std_error; }

}  // namespace

// Known-answer vectors of the Philox4x32-10 reference implementation.
TEST(Philox, KnownAnswers) {
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    EXPECT_EQ(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}), (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(Philox4x32::generate(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}),
              (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}),
              (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, StreamsAreStatelessAndDistinct) {
    const CounterStream a(7, 3, 0), b(7, 3, 1), c(7, 4, 0), d(8, 3, 0);
    EXPECT_EQ(a.block(11), CounterStream(7, 3, 0).block(11));
    EXPECT_NE(a.block(11), b.block(11));
    EXPECT_NE(a.block(11), c.block(11));
    EXPECT_NE(a.block(11), d.block(11));
}

TEST(Philox, UnitIntervalIsOpen) {
    EXPECT_GT(CounterStream::to_unit(0, 0), 0.0);
    EXPECT_LT(CounterStream::to_unit(0xffffffff, 0xffffffff), 1.0);
    const CounterStream s(1, 0, 0);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const auto b = s.block(std::uint64_t(i));
        sum += CounterStream::to_unit(b[0], b[1]);
    }
    EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(Simulation, DriftlessTerminalMeanIsStart) {
    const auto m = make_model({-0.5, 0.5}, {0.0, 0.0, 0.0}, {1.0, 3.0, 0.5});
    SimConfig cfg = config(20000, 1e-3, 5);
    cfg.antithetic = false;
    StopRule stop;
    stop.horizon = 1.0;
    std::vector<double> xs(cfg.paths);
    for (std::size_t p = 0; p < cfg.paths; ++p) xs[p] = simulate_path(m, 0.2, cfg, stop, p).terminal;
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / double(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    const double se = std::sqrt(var / double(xs.size() - 1) / double(xs.size()));
    EXPECT_LT(std::fabs(mean - 0.2) / se, 4.0);
}

TEST(Simulation, StopReasons) {
    SimConfig cfg = config(2, 1e-3, 1);
    StopRule stop;
    stop.lower = -0.1;
    stop.upper = 0.1;
    stop.horizon = 100.0;
    const auto s = simulate_path(kBrownian, 0.0, cfg, stop);
    EXPECT_TRUE(s.reason == StopReason::Lower || s.reason == StopReason::Upper);
    EXPECT_TRUE(s.terminal == -0.1 || s.terminal == 0.1);
    StopRule clock;
    clock.horizon = 1e6;
    clock.clock_rate = 2.0;
    const auto c = simulate_path(kBrownian, 0.0, cfg, clock);
    EXPECT_EQ(c.reason, StopReason::Clock);
    const auto b = CounterStream(cfg.seed, 0, 2).block(0);
    EXPECT_EQ(c.time, -std::log(CounterStream::to_unit(b[0], b[1])) / 2.0);
    EXPECT_THROW(simulate_path(kBrownian, 1.0, cfg, stop), PreconditionError);
}

TEST(HitLaplace, StartOnTargetIsExactlyOne) {
    const auto e = estimate_hit_laplace(kThreeRegime, 1.0, 0.4, 0.4, config(100, 1e-3, 1));
    EXPECT_EQ(e.mean, 1.0);
    EXPECT_EQ(e.std_error, 0.0);
}

TEST(HitLaplace, StandardBrownian) {
    const auto e = estimate_hit_laplace(kBrownian, 0.5, 0.0, 1.0, config(100000, 1e-4, 2));
    EXPECT_LT(z_score(e, std::exp(-1.0)), 3.0) << e.mean << " +- " << e.std_error;
    // Driftless paths may still be out at the default horizon 50 / q; they carry weight e^{-50}.
    EXPECT_LT(e.unresolved, e.paths / 5);
}

TEST(HitLaplace, ThreeRegimeModel) {
    const auto e = estimate_hit_laplace(kThreeRegime, 1.0, 2.0, -0.3, config(20000, 2.5e-4, 3));
    EXPECT_LT(z_score(e, laplace_hit(kThreeRegime, 1.0, 2.0, -0.3)), 3.0) << e.mean << " +- " << e.std_error;
}

TEST(Determinism, BitIdenticalAcrossRunsAndThreadCounts) {
    SimConfig cfg = config(2000, 1e-3, 99);
    const auto a = estimate_hit_laplace(kThreeRegime, 1.0, -0.5, 0.5, cfg);
    const auto b = estimate_hit_laplace(kThreeRegime, 1.0, -0.5, 0.5, cfg);
    cfg.threads = 3;
    const auto c = estimate_hit_laplace(kThreeRegime, 1.0, -0.5, 0.5, cfg);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_EQ(a.mean, c.mean);
    EXPECT_EQ(a.std_error, c.std_error);
    cfg.seed = 100;
    EXPECT_NE(estimate_hit_laplace(kThreeRegime, 1.0, -0.5, 0.5, cfg).mean, a.mean);
}

TEST(ExponentialLaw, MassesSumToOne) {
    std::vector<double> edges{-1.0, 0.0, 0.5, 1.0, 2.0};
    const auto h = sample_exponential_time_law(kThreeRegime, 1.0, 0.5, edges, config(2000, 1e-3, 4));
    const double total = std::accumulate(h.mass.begin(), h.mass.end(), 0.0) + h.below + h.above;
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(ExponentialLaw, StandardBrownianBins) {
    std::vector<double> edges;
    for (int k = 0; k <= 12; ++k) edges.push_back(-3.0 + 0.5 * k);
    const auto h = sample_exponential_time_law(kBrownian, 0.5, 0.0, edges, config(40000, 1e-3, 6));
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        // Exact bin mass of (1/2) e^{-|z|}.
        auto cdf = [](double z) { return z < 0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z); };
        const double exact = cdf(edges[k + 1]) - cdf(edges[k]);
        const double se = std::fmax(h.std_error[k], std::sqrt(exact * (1 - exact) / 40000.0));
        EXPECT_LT(std::fabs(h.mass[k] - exact) / se, 4.0) << k;
    }
}

TEST(Martingale, CheckpointsAreFlat) {
    const FundamentalPair g(kThreeRegime, 1.0);
    const auto mc = martingale_checkpoints(g, 0.5, {0.25, 1.0}, -1.5, 2.5, config(20000, 2.5e-4, 8));
    for (std::size_t j = 0; j < 2; ++j) {
        EXPECT_LT(z_score(mc.plus[j], g.plus.value(0.5)), 4.0);
        EXPECT_LT(z_score(mc.minus[j], g.minus.value(0.5)), 4.0);
    }
}

TEST(EscapeEstimate, SymmetricAndOffCentre) {
    const auto m = make_model({0.0}, {-1.0, 1.0}, {1.0, 1.0});
    const auto cfg = config(20000, 1e-3, 9);
    EXPECT_LT(z_score(estimate_escape(m, 4.0, 0.0, cfg), 0.5), 3.0);
    const auto e4 = estimate_escape(m, 4.0, 1.0, cfg);
    const auto e8 = estimate_escape(m, 8.0, 1.0, cfg);
    EXPECT_LT(z_score(e4, 0.5 * std::exp(-2.0)), 3.0);
    EXPECT_LT(z_score(e8, 0.5 * std::exp(-2.0)), 3.0);
    EXPECT_LT(std::fabs(e4.mean - e8.mean), 2.0 * std::fmax(e4.std_error, e8.std_error));
    EXPECT_EQ(e8.unresolved, 0u);
}

TEST(StationaryHistogram, LaplaceLaw) {
    const double r2 = std::sqrt(2.0);
    const auto m = make_model({0.0}, {1.0, -1.0}, {r2, r2});
    std::vector<double> edges;
    for (int k = 0; k <= 8; ++k) edges.push_back(-2.0 + 0.5 * k);
    SimConfig cfg = config(1, 1e-3, 10);
    cfg.horizon = 2000.0;
    const auto h = estimate_stationary_histogram(m, 0.0, edges, 20.0, cfg);
    double total = h.below + h.above;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        auto cdf = [](double z) { return z < 0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z); };
        const double exact = cdf(edges[k + 1]) - cdf(edges[k]);
        EXPECT_LT(std::fabs(h.mass[k] - exact) / h.std_error[k], 4.0) << k;
        total += h.mass[k];
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
    const auto h2 = estimate_stationary_histogram(m, 0.0, edges, 40.0, cfg);
    for (std::size_t k = 0; k + 1 < edges.size(); ++k)
        EXPECT_LT(std::fabs(h.mass[k] - h2.mass[k]), 2.0 * std::fmax(h.std_error[k], h2.std_error[k]) + 1e-3);
}

TEST(Discretisation, HalvingStepMovesEstimatesLittle) {
    const auto coarse = estimate_hit_laplace(kThreeRegime, 1.0, -0.5, 0.5, config(20000, 4e-4, 12));
    const auto fine = estimate_hit_laplace(kThreeRegime, 1.0, -0.5, 0.5, config(20000, 2e-4, 12));
    EXPECT_LT(std::fabs(coarse.mean - fine.mean), std::fmax(2.0 * std::fmax(coarse.std_error, fine.std_error), 1e-3));
}

TEST(SimConfig, RejectsBadSettings) {
    SimConfig c = config(3, 1e-3, 1);
    EXPECT_THROW(estimate_hit_laplace(kBrownian, 1.0, 0.0, 1.0, c), PreconditionError);
    c.paths = 4;
    c.dt = 0.0;
    EXPECT_THROW(estimate_hit_laplace(kBrownian, 1.0, 0.0, 1.0, c), PreconditionError);
    c.dt = 1e-3;
    EXPECT_THROW(sample_exponential_time_law(kBrownian, 1.0, 0.0, {1.0, 0.0}, c), PreconditionError);
}
