#pragma once

#include "tdiff/fundamentals.hpp"

namespace tdiff {

// Two-sided exit transforms from x in [y, z]:
//   laplace_exit_down = E_x[exp(-q tau_y); tau_y < tau_z]
//   laplace_exit_up   = E_x[exp(-q tau_z); tau_z < tau_y]
double laplace_exit_down(const FundamentalPair& g, double x, double y, double z);
double laplace_exit_up(const FundamentalPair& g, double x, double y, double z);
double laplace_exit_down(const ThresholdModel& model, double q, double x, double y, double z);
double laplace_exit_up(const ThresholdModel& model, double q, double x, double y, double z);

// E_x[exp(-q tau_target)], either direction.
double laplace_hit(const FundamentalPair& g, double x, double target);
double laplace_hit(const ThresholdModel& model, double q, double x, double target);

// q = 0 limits: P_x(tau_y < tau_z) and P_x(tau_z < tau_y), through the scale function.
double exit_probability_down(const ThresholdModel& model, double x, double y, double z);
double exit_probability_up(const ThresholdModel& model, double x, double y, double z);

}  // namespace tdiff
