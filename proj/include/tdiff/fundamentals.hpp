#pragma once

#include <string>

#include "tdiff/model.hpp"

namespace tdiff {

// Per-regime roots of (1/2) sigma^2 r^2 + mu r - q = 0: r = dminus > 0 and r = -dplus < 0,
// with l = (dminus + dplus) / 2. The product dminus * dplus = 2q / sigma^2 holds to rounding
// even for tiny q because the root that would cancel is computed in rationalised form.
struct SpectralParams {
    double q = 0.0;
    Vector l;
    Vector dminus;
    Vector dplus;
};

// q = 0 is allowed here (l may then vanish); the gluing coefficients need q > 0.
SpectralParams spectral_params(const ThresholdModel& model, double q);

// Gluing coefficients, indexed by threshold: entry k belongs to threshold a_{k+1}.
// For the increasing solution c(k) is the weight of the decaying exponential in regime k+1.
// For the decreasing solution c(k) is the weight of the growing exponential in regime k.
// b holds the solution's value at the threshold, log_b its logarithm (b may overflow, log_b not).
struct GluingCoefficients {
    Vector b;
    Vector log_b;
    Vector c;
};

GluingCoefficients plus_coefficients(const ThresholdModel& model, double q);
GluingCoefficients minus_coefficients(const ThresholdModel& model, double q);

// One regime of a fundamental solution:
//   g(x) = exp(log_anchor) * (alpha * exp(dminus * u) + beta * exp(-dplus * u)),  u = x - anchor,
// with alpha + beta = 1.
struct SolutionPiece {
    double anchor = 0.0;
    double log_anchor = 0.0;
    double alpha = 1.0;
    double beta = 0.0;
    double dminus = 0.0;
    double dplus = 0.0;

    double log_value(double x) const;
    // g'/g and g''/g.
    double derivative_ratio(double x) const;
    double second_derivative_ratio(double x) const;
};

enum class Side { Increasing, Decreasing };

// Positive solution of (1/2) sigma^2 g'' + mu g' = q g, C^1 across thresholds.
// The increasing one is normalised by g(a_1) = 1, the decreasing one by g(a_n) = 1.
class FundamentalSolution {
public:
    FundamentalSolution(const ThresholdModel& model, double q, Side side);

    Side side() const { return side_; }
    double q() const { return params_.q; }
    const ThresholdModel& model() const { return model_; }
    const SpectralParams& params() const { return params_; }
    const GluingCoefficients& coefficients() const { return coeffs_; }

    double log_value(double x) const;
    // exp(log_value); overflows to +inf for far-away x, which is why log_value exists.
    double value(double x) const;
    double derivative(double x) const;
    double derivative_ratio(double x) const;
    double second_derivative_ratio(double x) const;

    // Piece for regime r, evaluable at any x; used to take one-sided limits at thresholds.
    const SolutionPiece& piece(Eigen::Index r) const { return pieces_[std::size_t(r)]; }

    // Rows "index,b,c,log_g" for each threshold.
    std::string dump_csv() const;

private:
    ThresholdModel model_;
    Side side_;
    SpectralParams params_;
    GluingCoefficients coeffs_;
    std::vector<SolutionPiece> pieces_;
};

// Both fundamental solutions at one q, built once and shared by the passage and potential code.
struct FundamentalPair {
    FundamentalPair(const ThresholdModel& model, double q);
    FundamentalSolution plus;
    FundamentalSolution minus;
};

// True when g is monotone (increasing for Side::Increasing) on every consecutive pair of the grid.
bool is_monotone_on_grid(const FundamentalSolution& g, const std::vector<double>& grid);

}  // namespace tdiff
