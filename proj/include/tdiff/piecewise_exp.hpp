#pragma once

#include <string>
#include <vector>

namespace tdiff {

// amplitude * exp(rate * (z - reference)).
struct ExpTerm {
    double amplitude = 0.0;
    double rate = 0.0;
    double reference = 0.0;

    double value(double z) const;
};

// Sum of exponential terms on [left, right]; either end may be infinite.
struct Segment {
    double left = 0.0;
    double right = 0.0;
    std::vector<ExpTerm> terms;

    double value(double z) const;
    double integral(double lo, double hi) const;
    double integral() const { return integral(left, right); }
    // Appends sign * exp(log_magnitude + rate * (z - reference)), re-referenced to the end of the
    // segment where the exponential is largest so that evaluation never overflows on the segment.
    void add_term(double sign, double log_magnitude, double rate, double reference);
};

// Density made of consecutive segments sharing endpoints, ordered left to right. A point on a
// shared endpoint is evaluated with the segment on its left (segments are right-closed).
class PiecewiseExpDensity {
public:
    PiecewiseExpDensity() = default;
    explicit PiecewiseExpDensity(std::vector<Segment> segments);

    const std::vector<Segment>& segments() const { return segments_; }
    double evaluate(double z) const;
    double left_limit(double z) const;
    double right_limit(double z) const;
    // Integral over [lo, hi] clipped to the support; non-integrable tails raise NumericError.
    double integrate(double lo, double hi) const;
    double total_mass() const;
    // Rows "left,right,amplitude,rate,reference", one per term.
    std::string dump_csv() const;

private:
    std::vector<Segment> segments_;
};

}  // namespace tdiff
