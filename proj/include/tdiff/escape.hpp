#pragma once

#include <utility>

#include "tdiff/model.hpp"

namespace tdiff {

// Coefficients of the escape probabilities of a transient model (mu_0 < 0 < mu_n), indexed like
// thresholds: entry k belongs to a_{k+1}, so A(n-1) = 1 and B(n-1) = 0. B may be negative;
// A + B > 0 is checked on construction.
struct EscapeCoefficients {
    Vector A;
    Vector B;
    double denominator = 0.0;
};

EscapeCoefficients escape_coefficients(const ThresholdModel& model);

// P_y(X_t -> -inf) and P_y(X_t -> +inf). They sum to exactly 1.
double escape_to_minus_infinity(const ThresholdModel& model, double y);
double escape_to_plus_infinity(const ThresholdModel& model, double y);
double escape_to_minus_infinity(const ThresholdModel& model, const EscapeCoefficients& c, double y);

// Value of the branch for regime r (r = 0..n) of P_y(X_t -> -inf), evaluated at any y, so
// one-sided limits at thresholds can be compared.
double escape_branch(const ThresholdModel& model, const EscapeCoefficients& c, Eigen::Index r,
                     double y);

// The (A_i(y), B_i(y)) pair for y in regime r = i - 1, i = 1..n.
std::pair<double, double> escape_initial_pair(const ThresholdModel& model,
                                              const EscapeCoefficients& c, Eigen::Index r,
                                              double y);

}  // namespace tdiff
