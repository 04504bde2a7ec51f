#pragma once

#include "tdiff/fundamentals.hpp"
#include "tdiff/piecewise_exp.hpp"

namespace tdiff {

// Density in z of q * E_x[int_0^inf exp(-q t) 1{X_t in dz} dt], i.e. the law of X at an
// independent exponential time of rate q. Integrates to 1 over the real line.
double potential_density(const FundamentalPair& g, double x, double z);
double potential_density(const ThresholdModel& model, double q, double x, double z);
double potential_log_density(const FundamentalPair& g, double x, double z);

// Same density as a function of z in exponential-sum form, broken at the thresholds and at x.
PiecewiseExpDensity potential_pieces(const FundamentalPair& g, double x);
PiecewiseExpDensity potential_pieces(const ThresholdModel& model, double q, double x);

}  // namespace tdiff
