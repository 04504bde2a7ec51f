#pragma once

#include <optional>

#include "tdiff/model.hpp"
#include "tdiff/piecewise_exp.hpp"

namespace tdiff {

// Scale function with phi(a_1) = 0 and phi'(x) = exp(-int_{a_1}^x 2 mu / sigma^2).
double scale_function(const ThresholdModel& model, double x);
double scale_density(const ThresholdModel& model, double x);
// phi(-inf) and phi(+inf); infinite unless the drift at that end points away from the origin.
double scale_at_minus_infinity(const ThresholdModel& model);
double scale_at_plus_infinity(const ThresholdModel& model);

// Speed density m(x) = 1 / (sigma(x)^2 phi'(x)).
double speed_density(const ThresholdModel& model, double x);
double log_speed_density(const ThresholdModel& model, double x);
// Closed form of regime r evaluated at any x, for one-sided limits at thresholds.
double regime_log_speed_density(const ThresholdModel& model, Eigen::Index r, double x);
PiecewiseExpDensity speed_pieces(const ThresholdModel& model);

// Normaliser 2 * int m for a positive-recurrent model (mu_0 > 0, mu_n < 0), from the drift
// and width sums directly rather than by integrating m.
double stationary_normalizer(const ThresholdModel& model);

// Invariant density. Requires mu_0 > 0 and mu_n < 0.
double stationary_density(const ThresholdModel& model, double z);
PiecewiseExpDensity stationary_pieces(const ThresholdModel& model);

// Sequences that the scaled gluing coefficients approach as q -> 0, indexed like thresholds
// (entry k belongs to a_{k+1}). The forward one needs mu_0 > 0, the backward one mu_n < 0.
Vector forward_limit_sequence(const ThresholdModel& model);
Vector backward_limit_sequence(const ThresholdModel& model);

struct LimitSequences {
    std::optional<Vector> forward;
    std::optional<Vector> backward;
};
LimitSequences limit_sequences(const ThresholdModel& model);

}  // namespace tdiff

namespace tdiff {

// phi'(x) as exponential pieces; integrate(y, z) gives phi(z) - phi(y) without cancellation.
PiecewiseExpDensity scale_pieces(const ThresholdModel& model);
// phi' / phi'(lo) restricted to [lo, hi]; stays representable when phi' itself under- or
// overflows there.
PiecewiseExpDensity scale_pieces(const ThresholdModel& model, double lo, double hi);

}  // namespace tdiff
