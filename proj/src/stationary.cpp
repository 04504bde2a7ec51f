#include "tdiff/stationary.hpp"

#include <cmath>
#include <limits>

namespace tdiff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// int_0^u exp(-2 kappa v) dv.
double damped_integral(double kappa, double u) {
    if (kappa == 0.0) return u;
    return -std::expm1(-2.0 * kappa * u) / (2.0 * kappa);
}

// Cumulative exponent sum_{l=1}^{r-1} 2 kappa_l w_l, indexed by regime r (entries 0 and 1 are 0).
Vector cumulative_exponent(const ThresholdModel& model) {
    const auto n = model.num_thresholds();
    const Vector kappa = drift_ratios(model);
    Vector cum = Vector::Zero(n + 1);
    for (Eigen::Index r = 2; r <= n; ++r)
        cum(r) = cum(r - 1) + 2.0 * kappa(r - 1) * (model.thresholds(r - 1) - model.thresholds(r - 2));
    return cum;
}

// Left end of regime r for the exponent; regime 0 is anchored at a_1 like regime 1.
double regime_anchor(const ThresholdModel& model, Eigen::Index r) {
    return model.thresholds(r == 0 ? 0 : r - 1);
}

double inv_or_zero(double v) { return v != 0.0 ? 1.0 / v : 0.0; }

void require_recurrent(const ThresholdModel& model, const char* where) {
    require_valid(model);
    const auto n = model.num_thresholds();
    if (!(model.drifts(0) > 0.0 && model.drifts(n) < 0.0))
        throw PreconditionError(std::string(where) +
                                ": stationary law requires mu_0 > 0 and mu_n < 0 (positive recurrence)");
}

}  // namespace

double scale_function(const ThresholdModel& model, double x) {
    if (std::isnan(x)) throw PreconditionError("scale_function: x is NaN");
    const Vector kappa = drift_ratios(model);
    const Vector cum = cumulative_exponent(model);
    const auto& a = model.thresholds;
    const auto r = regime_index(model, x);
    if (r == 0) return -damped_integral(-kappa(0), a(0) - x);
    double phi = 0.0;
    for (Eigen::Index k = 1; k < r; ++k)
        phi += std::exp(-cum(k)) * damped_integral(kappa(k), a(k) - a(k - 1));
    return phi + std::exp(-cum(r)) * damped_integral(kappa(r), x - a(r - 1));
}

double scale_density(const ThresholdModel& model, double x) {
    const auto r = regime_index(model, x);
    const Vector kappa = drift_ratios(model);
    const Vector cum = cumulative_exponent(model);
    return std::exp(-cum(r) - 2.0 * kappa(r) * (x - regime_anchor(model, r)));
}

double scale_at_minus_infinity(const ThresholdModel& model) {
    const double k0 = model.drifts(0) / (model.vols(0) * model.vols(0));
    return k0 < 0.0 ? 1.0 / (2.0 * k0) : -kInf;
}

double scale_at_plus_infinity(const ThresholdModel& model) {
    const auto n = model.num_thresholds();
    const Vector kappa = drift_ratios(model);
    if (!(kappa(n) > 0.0)) return kInf;
    const Vector cum = cumulative_exponent(model);
    double phi = 0.0;
    for (Eigen::Index k = 1; k < n; ++k)
        phi += std::exp(-cum(k)) * damped_integral(kappa(k), model.thresholds(k) - model.thresholds(k - 1));
    return phi + std::exp(-cum(n)) / (2.0 * kappa(n));
}

double regime_log_speed_density(const ThresholdModel& model, Eigen::Index r, double x) {
    const Vector cum = cumulative_exponent(model);
    const double s2 = model.vols(r) * model.vols(r);
    return cum(r) + 2.0 * model.drifts(r) / s2 * (x - regime_anchor(model, r)) - std::log(s2);
}

double log_speed_density(const ThresholdModel& model, double x) {
    return regime_log_speed_density(model, regime_index(model, x), x);
}

double speed_density(const ThresholdModel& model, double x) {
    return std::exp(log_speed_density(model, x));
}

PiecewiseExpDensity speed_pieces(const ThresholdModel& model) {
    const auto n = model.num_thresholds();
    const Vector kappa = drift_ratios(model);
    const Vector cum = cumulative_exponent(model);
    std::vector<Segment> segs;
    for (Eigen::Index r = 0; r <= n; ++r) {
        Segment s;
        s.left = r == 0 ? -kInf : model.thresholds(r - 1);
        s.right = r == n ? kInf : model.thresholds(r);
        const double s2 = model.vols(r) * model.vols(r);
        s.add_term(1.0, cum(r) - std::log(s2), 2.0 * kappa(r), regime_anchor(model, r));
        segs.push_back(std::move(s));
    }
    return PiecewiseExpDensity(std::move(segs));
}

double stationary_normalizer(const ThresholdModel& model) {
    require_recurrent(model, "stationary_normalizer");
    const auto n = model.num_thresholds();
    const auto& mu = model.drifts;
    const Vector cum = cumulative_exponent(model);
    double total = 0.0;
    for (Eigen::Index k = 1; k <= n; ++k) {
        double bracket = inv_or_zero(mu(k - 1)) - inv_or_zero(mu(k));
        if (mu(k) == 0.0)
            bracket += 2.0 * (model.thresholds(k) - model.thresholds(k - 1)) / (model.vols(k) * model.vols(k));
        total += std::exp(cum(k)) * bracket;
    }
    if (!(total > 0.0) || !std::isfinite(total))
        throw NumericError("stationary_normalizer: normaliser is not a positive finite number");
    return total;
}

double stationary_density(const ThresholdModel& model, double z) {
    const double norm = stationary_normalizer(model);
    return 2.0 * speed_density(model, z) / norm;
}

PiecewiseExpDensity stationary_pieces(const ThresholdModel& model) {
    const double log_scale = std::log(2.0 / stationary_normalizer(model));
    auto pieces = speed_pieces(model);
    std::vector<Segment> segs = pieces.segments();
    for (auto& s : segs) {
        for (auto& t : s.terms) {
            t.amplitude *= std::exp(log_scale);
            if (!(t.amplitude > 0.0)) throw NumericError("stationary_pieces: regime mass underflowed");
        }
    }
    return PiecewiseExpDensity(std::move(segs));
}

Vector forward_limit_sequence(const ThresholdModel& model) {
    require_valid(model);
    const auto n = model.num_thresholds();
    const auto& mu = model.drifts;
    if (!(mu(0) > 0.0)) throw PreconditionError("forward_limit_sequence: requires mu_0 > 0");
    const Vector kappa = drift_ratios(model);
    Vector f(n);
    f(0) = 1.0 / mu(0) - inv_or_zero(mu(1));
    for (Eigen::Index k = 1; k < n; ++k) {
        // Threshold a_{k+1}; previous regime k with width a_{k+1} - a_k.
        const double w = model.thresholds(k) - model.thresholds(k - 1);
        double v = inv_or_zero(mu(k)) - inv_or_zero(mu(k + 1));
        if (mu(k) == 0.0) v += 2.0 * w / (model.vols(k) * model.vols(k));
        f(k) = v + std::exp(-2.0 * kappa(k) * w) * f(k - 1);
    }
    return f;
}

Vector backward_limit_sequence(const ThresholdModel& model) {
    require_valid(model);
    const auto n = model.num_thresholds();
    const auto& mu = model.drifts;
    if (!(mu(n) < 0.0)) throw PreconditionError("backward_limit_sequence: requires mu_n < 0");
    const Vector kappa = drift_ratios(model);
    Vector f(n);
    f(n - 1) = inv_or_zero(mu(n - 1)) - 1.0 / mu(n);
    for (Eigen::Index k = n - 2; k >= 0; --k) {
        // Threshold a_{k+1}; next regime k+1 with width a_{k+2} - a_{k+1}.
        const double w = model.thresholds(k + 1) - model.thresholds(k);
        double v = inv_or_zero(mu(k)) - inv_or_zero(mu(k + 1));
        if (mu(k + 1) == 0.0) v += 2.0 * w / (model.vols(k + 1) * model.vols(k + 1));
        f(k) = v + std::exp(2.0 * kappa(k + 1) * w) * f(k + 1);
    }
    return f;
}

LimitSequences limit_sequences(const ThresholdModel& model) {
    require_valid(model);
    LimitSequences s;
    if (model.drifts(0) > 0.0) s.forward = forward_limit_sequence(model);
    if (model.drifts(model.num_thresholds()) < 0.0) s.backward = backward_limit_sequence(model);
    return s;
}

}  // namespace tdiff

namespace tdiff {

PiecewiseExpDensity scale_pieces(const ThresholdModel& model) {
    require_valid(model);
    const auto n = model.num_thresholds();
    const Vector kappa = drift_ratios(model);
    const Vector cum = cumulative_exponent(model);
    std::vector<Segment> segs;
    for (Eigen::Index r = 0; r <= n; ++r) {
        Segment s;
        s.left = r == 0 ? -kInf : model.thresholds(r - 1);
        s.right = r == n ? kInf : model.thresholds(r);
        s.add_term(1.0, -cum(r), -2.0 * kappa(r), regime_anchor(model, r));
        segs.push_back(std::move(s));
    }
    return PiecewiseExpDensity(std::move(segs));
}

PiecewiseExpDensity scale_pieces(const ThresholdModel& model, double lo, double hi) {
    require_valid(model);
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw PreconditionError("scale_pieces: requires finite lo < hi");
    const Vector kappa = drift_ratios(model);
    const Vector cum = cumulative_exponent(model);
    const auto r_lo = regime_index(model, lo);
    const auto r_hi = regime_index(model, hi);
    const double log_base = -cum(r_lo) - 2.0 * kappa(r_lo) * (lo - regime_anchor(model, r_lo));
    std::vector<Segment> segs;
    for (Eigen::Index r = r_lo; r <= r_hi; ++r) {
        Segment s;
        s.left = r == r_lo ? lo : model.thresholds(r - 1);
        s.right = r == r_hi ? hi : model.thresholds(r);
        s.add_term(1.0, -cum(r) - log_base, -2.0 * kappa(r), regime_anchor(model, r));
        segs.push_back(std::move(s));
    }
    return PiecewiseExpDensity(std::move(segs));
}

}  // namespace tdiff
