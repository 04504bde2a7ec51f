// Randomised invariants over many models.
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "tdiff/escape.hpp"
#include "tdiff/passage.hpp"
#include "tdiff/potential.hpp"
#include "tdiff/reference.hpp"
#include "tdiff/stationary.hpp"

using namespace tdiff;

namespace {

class Models {
public:
    explicit Models(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) { return lo + (hi - lo) * double(gen_() >> 11) * 0x1p-53; }

    // n <= 5, thresholds in [-3, 3], |mu| <= 3 with some exact zeros, sigma in [0.3, 3].
    ThresholdModel next() {
        const int n = 1 + int(gen_() % 5);
        std::vector<double> a;
        double x = -3.0;
        for (int i = 0; i < n; ++i) a.push_back(x += uniform(0.1, 6.0 / n - 0.01));
        std::vector<double> mu, sig;
        for (int i = 0; i <= n; ++i) {
            mu.push_back(gen_() % 7 == 0 ? 0.0 : uniform(-3.0, 3.0));
            sig.push_back(std::exp(uniform(std::log(0.3), std::log(3.0))));
        }
        return make_model(a, mu, sig);
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace

TEST(Properties, PotentialMassIsOne) {
    Models models(1);
    for (int k = 0; k < 25; ++k) {
        const auto m = models.next();
        for (double q : {0.1, 1.0, 10.0}) {
            const FundamentalPair g(m, q);
            for (double x : {-3.5, 0.1, 2.9}) EXPECT_NEAR(potential_pieces(g, x).total_mass(), 1.0, 1e-8);
        }
    }
}

TEST(Properties, PassageTransformsAreSubProbabilities) {
    Models models(2);
    for (int k = 0; k < 25; ++k) {
        const auto m = models.next();
        const double q = std::exp(models.uniform(std::log(1e-3), std::log(10.0)));
        const FundamentalPair g(m, q);
        for (int j = 0; j < 10; ++j) {
            double y = models.uniform(-4.0, 4.0), z = models.uniform(-4.0, 4.0);
            if (y > z) std::swap(y, z);
            const double x = models.uniform(y, z);
            const double down = laplace_exit_down(g, x, y, z), up = laplace_exit_up(g, x, y, z);
            EXPECT_GE(down, 0.0);
            EXPECT_GE(up, 0.0);
            EXPECT_LE(down + up, 1.0 + 1e-12);
            const double h = laplace_hit(g, x, z);
            EXPECT_GT(h, 0.0);
            EXPECT_LE(h, 1.0);
            EXPECT_GE(h, up - 1e-15);
            const double p = exit_probability_down(m, x, y, z);
            EXPECT_NEAR(p + exit_probability_up(m, x, y, z), 1.0, 1e-12);
            EXPECT_GE(p + 1e-12, down);
        }
    }
}

TEST(Properties, SolutionsArePositiveAndMonotone) {
    Models models(3);
    for (int k = 0; k < 25; ++k) {
        const auto m = models.next();
        const FundamentalPair g(m, std::exp(models.uniform(std::log(1e-3), std::log(10.0))));
        double prev_p = -INFINITY, prev_m = INFINITY;
        for (double x = -6.0; x <= 6.0; x += 0.05) {
            const double lp = g.plus.log_value(x), lm = g.minus.log_value(x);
            EXPECT_TRUE(std::isfinite(lp) && std::isfinite(lm));
            EXPECT_GE(lp, prev_p);
            EXPECT_LE(lm, prev_m);
            prev_p = lp;
            prev_m = lm;
        }
    }
}

TEST(Properties, UniformModelsMatchLinearOracles) {
    Models models(4);
    for (int k = 0; k < 20; ++k) {
        const double mu = k % 4 == 0 ? 0.0 : models.uniform(-3.0, 3.0);
        const double sigma = std::exp(models.uniform(std::log(0.3), std::log(3.0)));
        const double q = std::exp(models.uniform(std::log(1e-2), std::log(10.0)));
        const auto m = make_model({-1.0, 0.0, 0.7}, {mu, mu, mu, mu}, {sigma, sigma, sigma, sigma});
        const FundamentalPair g(m, q);
        for (int j = 0; j < 20; ++j) {
            const double x = models.uniform(-2.0, 2.0), z = models.uniform(-2.0, 2.0);
            EXPECT_NEAR(potential_density(g, x, z) / linear_resolvent_density(mu, sigma, q, x, z), 1.0, 1e-12);
            EXPECT_NEAR(laplace_hit(g, x, z) / linear_fpt_laplace(mu, sigma, q, x, z), 1.0, 1e-12);
        }
    }
}

TEST(Properties, StationaryLawIsProperAndContinuousInSpeedUnits) {
    Models models(5);
    int checked = 0;
    while (checked < 15) {
        const auto m = models.next();
        const auto n = m.num_thresholds();
        if (!(m.drifts(0) > 0.0 && m.drifts(n) < 0.0)) continue;
        ++checked;
        EXPECT_NEAR(stationary_pieces(m).total_mass(), 1.0, 1e-10);
        EXPECT_NEAR(stationary_normalizer(m) / (2.0 * speed_pieces(m).total_mass()), 1.0, 1e-12);
        for (Eigen::Index k = 0; k < n; ++k) {
            const double a = m.thresholds(k);
            const double left = stationary_density(m, a) * m.vols(k) * m.vols(k);
            const double right = stationary_density(m, std::nextafter(a, INFINITY)) * m.vols(k + 1) * m.vols(k + 1);
            EXPECT_NEAR(left / right, 1.0, 1e-12);
        }
    }
}

TEST(Properties, EscapeProbabilitiesAreMonotoneAndBounded) {
    Models models(6);
    int checked = 0;
    while (checked < 15) {
        const auto m = models.next();
        const auto n = m.num_thresholds();
        if (!(m.drifts(0) < 0.0 && m.drifts(n) > 0.0)) continue;
        ++checked;
        double prev = 1.0;
        for (double y = -5.0; y <= 5.0; y += 0.1) {
            const double p = escape_to_minus_infinity(m, y);
            EXPECT_GE(p, 0.0);
            EXPECT_LE(p, prev + 1e-15);
            prev = p;
        }
    }
}
