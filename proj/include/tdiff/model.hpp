#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "tdiff/error.hpp"

namespace tdiff {

using Vector = Eigen::VectorXd;

// Diffusion with piecewise-constant drift and volatility.
//
// thresholds has n >= 1 strictly increasing entries a_1 < ... < a_n. drifts and vols have
// n + 1 entries, one per regime. Regime 0 is x <= a_1, regime i is a_i < x <= a_{i+1},
// regime n is x > a_n: a threshold belongs to the regime below it.
struct ThresholdModel {
    Vector thresholds;
    Vector drifts;
    Vector vols;

    Eigen::Index num_thresholds() const { return thresholds.size(); }
    Eigen::Index num_regimes() const { return drifts.size(); }
};

// Empty result means the model is valid.
std::vector<std::string> validate(const ThresholdModel& model);

// Builds and validates. Throws ValidationError listing every problem.
ThresholdModel make_model(std::vector<double> thresholds, std::vector<double> drifts,
                          std::vector<double> vols);

void require_valid(const ThresholdModel& model);

// Regime containing x. NaN is rejected.
Eigen::Index regime_index(const ThresholdModel& model, double x);

double drift_at(const ThresholdModel& model, double x);
double vol_at(const ThresholdModel& model, double x);

// mu_i / sigma_i^2 per regime.
Vector drift_ratios(const ThresholdModel& model);

// Regime widths a_{i+1} - a_i for i = 1..n-1, stored at index i (entries 0 and n are +inf).
Vector regime_widths(const ThresholdModel& model);

}  // namespace tdiff
