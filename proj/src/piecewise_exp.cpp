#include "tdiff/piecewise_exp.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "tdiff/csv.hpp"
#include "tdiff/error.hpp"

namespace tdiff {

double ExpTerm::value(double z) const {
    if (amplitude == 0.0) return 0.0;
    return amplitude * std::exp(rate * (z - reference));
}

double Segment::value(double z) const {
    double s = 0.0;
    for (const auto& t : terms) s += t.value(z);
    return s;
}

double Segment::integral(double lo, double hi) const {
    lo = std::fmax(lo, left);
    hi = std::fmin(hi, right);
    if (!(lo < hi)) return 0.0;
    double s = 0.0;
    for (const auto& t : terms) {
        if (t.amplitude == 0.0) continue;
        if (t.rate == 0.0) {
            if (std::isinf(hi - lo)) throw NumericError("integral of a flat term over an unbounded range");
            s += t.amplitude * (hi - lo);
        } else if (t.rate > 0.0) {
            if (std::isinf(hi)) throw NumericError("integral of a growing term up to +inf");
            s += t.amplitude * std::exp(t.rate * (hi - t.reference)) *
                 (-std::expm1(-t.rate * (hi - lo))) / t.rate;
        } else {
            if (std::isinf(lo)) throw NumericError("integral of a growing term down to -inf");
            s += t.amplitude * std::exp(t.rate * (lo - t.reference)) *
                 std::expm1(t.rate * (hi - lo)) / t.rate;
        }
    }
    return s;
}

void Segment::add_term(double sign, double log_magnitude, double rate, double reference) {
    double ref = reference;
    if (rate > 0.0 && std::isfinite(right)) ref = right;
    else if (rate < 0.0 && std::isfinite(left)) ref = left;
    else if (rate == 0.0 && std::isfinite(left)) ref = left;
    const double log_amp = log_magnitude + rate * (ref - reference);
    if (std::isnan(log_amp)) throw NumericError("add_term: undefined amplitude");
    terms.push_back({sign * std::exp(log_amp), rate, ref});
}

PiecewiseExpDensity::PiecewiseExpDensity(std::vector<Segment> segments)
    : segments_(std::move(segments)) {}

double PiecewiseExpDensity::evaluate(double z) const { return left_limit(z); }

double PiecewiseExpDensity::left_limit(double z) const {
    for (const auto& s : segments_)
        if (s.left < z && z <= s.right) return s.value(z);
    if (!segments_.empty() && z == segments_.front().left) return segments_.front().value(z);
    return 0.0;
}

double PiecewiseExpDensity::right_limit(double z) const {
    for (const auto& s : segments_)
        if (s.left <= z && z < s.right) return s.value(z);
    if (!segments_.empty() && z == segments_.back().right) return segments_.back().value(z);
    return 0.0;
}

double PiecewiseExpDensity::integrate(double lo, double hi) const {
    double s = 0.0;
    for (const auto& seg : segments_) s += seg.integral(lo, hi);
    return s;
}

double PiecewiseExpDensity::total_mass() const {
    const double inf = std::numeric_limits<double>::infinity();
    return integrate(-inf, inf);
}

std::string PiecewiseExpDensity::dump_csv() const {
    std::ostringstream out;
    write_csv_row(out, std::vector<std::string>{"left", "right", "amplitude", "rate", "reference"});
    for (const auto& s : segments_)
        for (const auto& t : s.terms)
            write_csv_row(out, std::vector<double>{s.left, s.right, t.amplitude, t.rate, t.reference});
    return out.str();
}

}  // namespace tdiff
