#include "tdiff/passage.hpp"

#include <cmath>

#include "tdiff/stationary.hpp"

namespace tdiff {

namespace {

void require_ordered(double x, double y, double z, const char* where) {
    if (std::isnan(x) || std::isnan(y) || std::isnan(z) || !(y <= x && x <= z) || !(y < z))
        throw PreconditionError(std::string(where) + ": requires y <= x <= z with y < z");
}

// Rounding can push a probability-like value a hair outside [0, 1].
double clamp_unit(double v, const char* where) {
    if (!(v >= -1e-12 && v <= 1.0 + 1e-12))
        throw NumericError(std::string(where) + ": result outside [0, 1]");
    return std::fmin(1.0, std::fmax(0.0, v));
}

}  // namespace

double laplace_exit_down(const FundamentalPair& g, double x, double y, double z) {
    require_ordered(x, y, z, "laplace_exit_down");
    if (x == y) return 1.0;
    if (x == z) return 0.0;
    auto h = [&](double v) { return g.plus.log_value(v) - g.minus.log_value(v); };
    const double hz = h(z);
    const double den = std::expm1(h(y) - hz);
    if (den == 0.0) throw NumericError("laplace_exit_down: barriers indistinguishable");
    const double v =
        std::exp(g.minus.log_value(x) - g.minus.log_value(y)) * std::expm1(h(x) - hz) / den;
    return clamp_unit(v, "laplace_exit_down");
}

double laplace_exit_up(const FundamentalPair& g, double x, double y, double z) {
    require_ordered(x, y, z, "laplace_exit_up");
    if (x == z) return 1.0;
    if (x == y) return 0.0;
    auto h = [&](double v) { return g.plus.log_value(v) - g.minus.log_value(v); };
    const double hy = h(y);
    const double den = std::expm1(hy - h(z));
    if (den == 0.0) throw NumericError("laplace_exit_up: barriers indistinguishable");
    const double v =
        std::exp(g.plus.log_value(x) - g.plus.log_value(z)) * std::expm1(hy - h(x)) / den;
    return clamp_unit(v, "laplace_exit_up");
}

double laplace_exit_down(const ThresholdModel& model, double q, double x, double y, double z) {
    return laplace_exit_down(FundamentalPair(model, q), x, y, z);
}

double laplace_exit_up(const ThresholdModel& model, double q, double x, double y, double z) {
    return laplace_exit_up(FundamentalPair(model, q), x, y, z);
}

double laplace_hit(const FundamentalPair& g, double x, double target) {
    if (std::isnan(x) || std::isnan(target)) throw PreconditionError("laplace_hit: NaN input");
    const double v = x >= target ? std::exp(g.minus.log_value(x) - g.minus.log_value(target))
                                 : std::exp(g.plus.log_value(x) - g.plus.log_value(target));
    return clamp_unit(v, "laplace_hit");
}

double laplace_hit(const ThresholdModel& model, double q, double x, double target) {
    return laplace_hit(FundamentalPair(model, q), x, target);
}

double exit_probability_down(const ThresholdModel& model, double x, double y, double z) {
    require_ordered(x, y, z, "exit_probability_down");
    if (x == y) return 1.0;
    if (x == z) return 0.0;
    const auto phi = scale_pieces(model, y, z);
    return clamp_unit(phi.integrate(x, z) / phi.integrate(y, z), "exit_probability_down");
}

double exit_probability_up(const ThresholdModel& model, double x, double y, double z) {
    require_ordered(x, y, z, "exit_probability_up");
    if (x == z) return 1.0;
    if (x == y) return 0.0;
    const auto phi = scale_pieces(model, y, z);
    return clamp_unit(phi.integrate(y, x) / phi.integrate(y, z), "exit_probability_up");
}

}  // namespace tdiff
