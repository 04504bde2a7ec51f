#include "tdiff/escape.hpp"

#include <cmath>

namespace tdiff {

namespace {

// mu / sigma^2 when the drift is non-zero, 1 otherwise.
double kappa_prime(const ThresholdModel& m, Eigen::Index r) {
    const double mu = m.drifts(r);
    return mu != 0.0 ? mu / (m.vols(r) * m.vols(r)) : 1.0;
}

double kappa(const ThresholdModel& m, Eigen::Index r) {
    return m.drifts(r) / (m.vols(r) * m.vols(r));
}

void require_transient(const ThresholdModel& model) {
    require_valid(model);
    const auto n = model.num_thresholds();
    if (!(model.drifts(0) < 0.0 && model.drifts(n) > 0.0))
        throw PreconditionError(
            "escape probabilities require mu_0 < 0 and mu_n > 0 (transience)");
}

// sum_{l=1}^{r-1} kappa_l w_l.
double half_cumulative(const ThresholdModel& m, Eigen::Index r) {
    double s = 0.0;
    for (Eigen::Index l = 1; l < r; ++l) s += kappa(m, l) * (m.thresholds(l) - m.thresholds(l - 1));
    return s;
}

}  // namespace

EscapeCoefficients escape_coefficients(const ThresholdModel& model) {
    require_transient(model);
    const auto n = model.num_thresholds();
    const auto& a = model.thresholds;
    EscapeCoefficients c;
    c.A.resize(n);
    c.B.resize(n);
    c.A(n - 1) = 1.0;
    c.B(n - 1) = 0.0;
    const double kn = kappa(model, n);
    double tail = 0.0;  // sum_{l=i}^{n-1} kappa_l w_l
    for (Eigen::Index k = n - 2; k >= 0; --k) {
        // Coefficients of a_{k+1}; regime k+1 has width a_{k+2} - a_{k+1}.
        const Eigen::Index r = k + 1;
        const double w = a(k + 1) - a(k);
        tail += kappa(model, r) * w;
        c.A(k) = kn / kappa_prime(model, r) * std::exp(tail);
        const double kp_next = kappa_prime(model, r + 1);
        double v = c.A(k + 1) + c.B(k + 1) - kp_next / kappa_prime(model, r) * c.A(k + 1);
        if (model.drifts(r) == 0.0) v += 2.0 * kp_next * w * c.A(k + 1);
        c.B(k) = v * std::exp(-kappa(model, r) * w);
    }
    c.denominator = (1.0 - kappa_prime(model, 1) / kappa(model, 0)) * c.A(0) + c.B(0);
    for (Eigen::Index k = 0; k < n; ++k) {
        if (!std::isfinite(c.A(k)) || !std::isfinite(c.B(k)))
            throw NumericError("escape coefficients overflowed; rescale the state variable");
        if (!(c.A(k) + c.B(k) > 0.0))
            throw NumericError("escape coefficients: A + B is not positive");
    }
    if (!(c.denominator > 0.0) || !std::isfinite(c.denominator))
        throw NumericError("escape coefficients: denominator is not positive and finite");
    return c;
}

std::pair<double, double> escape_initial_pair(const ThresholdModel& model,
                                              const EscapeCoefficients& c, Eigen::Index r,
                                              double y) {
    const auto n = model.num_thresholds();
    if (r < 0 || r >= n) throw PreconditionError("escape_initial_pair: regime out of range");
    const Eigen::Index i = r + 1;  // threshold a_i = a(r)
    const double d = model.thresholds(r) - y;
    const double kp = kappa_prime(model, i);
    const double kprev = kappa(model, r);
    const double A = c.A(r), B = c.B(r);
    const bool flat = model.drifts(r) == 0.0;
    const double ay = flat ? 0.0 : kp / kprev * A * std::exp(kprev * d);
    double by = A + B - (flat ? 0.0 : kp / kprev * A);
    if (flat) by += 2.0 * kp * d * A;
    by *= std::exp(-kprev * d);
    return {ay, by};
}

double escape_branch(const ThresholdModel& model, const EscapeCoefficients& c, Eigen::Index r,
                     double y) {
    const auto n = model.num_thresholds();
    if (r == n) {
        return std::exp(-half_cumulative(model, n) -
                        2.0 * kappa(model, n) * (y - model.thresholds(n - 1))) /
               c.denominator;
    }
    // (A_i(y) + B_i(y)) exp(kappa_{i-1} d) with the exponentials merged to avoid overflow.
    const Eigen::Index i = r + 1;
    const double d = model.thresholds(r) - y;
    const double kp = kappa_prime(model, i);
    const double kprev = kappa(model, r);
    const double A = c.A(r), B = c.B(r);
    double v;
    if (model.drifts(r) == 0.0) {
        v = A + B + 2.0 * kp * d * A;
    } else {
        const double ratio = kp / kprev * A;
        v = ratio * std::exp(2.0 * kprev * d) + (A + B - ratio);
    }
    return v * std::exp(-half_cumulative(model, i)) / c.denominator;
}

double escape_to_minus_infinity(const ThresholdModel& model, const EscapeCoefficients& c, double y) {
    if (std::isnan(y)) throw PreconditionError("escape probability: y is NaN");
    const double p = escape_branch(model, c, regime_index(model, y), y);
    if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) throw NumericError("escape probability outside [0, 1]");
    return std::fmin(1.0, std::fmax(0.0, p));
}

double escape_to_minus_infinity(const ThresholdModel& model, double y) {
    return escape_to_minus_infinity(model, escape_coefficients(model), y);
}

double escape_to_plus_infinity(const ThresholdModel& model, double y) {
    return 1.0 - escape_to_minus_infinity(model, y);
}

}  // namespace tdiff
