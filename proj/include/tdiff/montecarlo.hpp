#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "tdiff/fundamentals.hpp"
#include "tdiff/philox.hpp"

namespace tdiff {

struct SimConfig {
    double dt = 1e-3;
    std::size_t paths = 10000;
    // Stopping horizon; 0 selects the estimator's default (50 / q for discounted estimators).
    double horizon = 0.0;
    std::uint64_t seed = 1;
    // Paths 2k and 2k+1 use mirrored Gaussian increments.
    bool antithetic = true;
    // Randomised crossing test between grid points for stop levels (Brownian-bridge exit
    // probability), removing the discrete-monitoring bias of hitting times.
    bool bridge_correction = true;
    // Merge up to max_coarse base steps into one when every threshold and stop level is farther
    // than |mu| h + coarse_margin sigma sqrt(h). Exact in law inside a regime.
    bool coarse_steps = true;
    // Within coarse_margin sigma sqrt(h) of a threshold, step with the exact crossing law of the
    // driftless local process instead of plain Euler, which is biased where sigma jumps.
    bool skew_crossings = true;
    double coarse_margin = 6.0;
    std::uint32_t max_coarse = 4096;
    // Worker threads; 0 uses the hardware concurrency. Results do not depend on it.
    unsigned threads = 0;
};

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t paths = 0;
    // Paths that reached the horizon before their stopping event.
    std::size_t unresolved = 0;
};

struct Histogram {
    std::vector<double> edges;
    std::vector<double> mass;
    std::vector<double> std_error;
    double below = 0.0;
    double above = 0.0;
};

enum class PathEvent { Horizon, Lower, Upper };

// Euler–Maruyama path of one model, driven by its own counter-based random streams.
class PathStepper {
public:
    PathStepper(const ThresholdModel& model, const SimConfig& cfg, std::uint64_t path, double x0);

    // Advance until time t_stop, or until the path reaches lower or upper (either may be
    // infinite). On a hit, x is set to the level and t to the interpolated crossing time.
    PathEvent advance(double t_stop, double lower, double upper);

    // Exponential(rate) variate from a stream reserved for clocks (index selects the draw).
    double exponential(double rate, std::uint64_t index) const;

    double x;
    double t = 0.0;
    std::uint64_t steps = 0;

private:
    double normal();
    double bridge_uniform(int level);
    Eigen::Index nearest_threshold() const;
    double reach(Eigen::Index j, double h) const;
    double skew_step(Eigen::Index j, double h);

    const ThresholdModel& model_;
    const SimConfig& cfg_;
    CounterStream normals_;
    CounterStream bridge_;
    CounterStream clock_;
    double sign_;
    // Thresholds across which drift or volatility changes; the others are invisible to paths.
    std::vector<Eigen::Index> active_;
    std::uint64_t normal_index_ = 0;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

// E_x[exp(-q tau_target)].
Estimate estimate_hit_laplace(const ThresholdModel& model, double q, double x, double target,
                              const SimConfig& cfg);

// Law of X at an independent Exp(q) time, binned on the given increasing edges.
Histogram sample_exponential_time_law(const ThresholdModel& model, double q, double x,
                                      const std::vector<double>& edges, const SimConfig& cfg);

// E_x[exp(-q (t ^ tau)) g(X_{t ^ tau})] at each checkpoint t, tau the exit time of
// (lower, upper), for g the increasing (first) and decreasing (second) fundamental solution.
struct MartingaleCheck {
    std::vector<double> checkpoints;
    std::vector<Estimate> plus;
    std::vector<Estimate> minus;
};
MartingaleCheck martingale_checkpoints(const FundamentalPair& g, double x,
                                       const std::vector<double>& checkpoints, double lower,
                                       double upper, const SimConfig& cfg);

// Fraction of paths from x reaching a_1 - margin before a_n + margin.
Estimate estimate_escape(const ThresholdModel& model, double margin, double x, const SimConfig& cfg);

// Occupation histogram of one long path after burn_in, with batch-means standard errors.
// Coarse steps are not used here regardless of cfg.
Histogram estimate_stationary_histogram(const ThresholdModel& model, double x0,
                                        const std::vector<double>& edges, double burn_in,
                                        const SimConfig& cfg);

}  // namespace tdiff

namespace tdiff {

enum class StopReason { Horizon, Lower, Upper, Clock };

struct StopRule {
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    double horizon = 1.0;
    // Exponential clock rate; 0 disables the clock.
    double clock_rate = 0.0;
};

struct PathSummary {
    double terminal = 0.0;
    StopReason reason = StopReason::Horizon;
    double time = 0.0;
    std::uint64_t steps = 0;
};

PathSummary simulate_path(const ThresholdModel& model, double x0, const SimConfig& cfg,
                          const StopRule& stop, std::uint64_t path = 0);

}  // namespace tdiff
