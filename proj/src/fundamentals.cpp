#include "tdiff/fundamentals.hpp"

#include <cmath>
#include <sstream>

#include "tdiff/csv.hpp"

namespace tdiff {

namespace {

void require_q(double q, const char* where) {
    if (!(q > 0.0) || !std::isfinite(q))
        throw PreconditionError(std::string(where) + ": q must be positive and finite");
}

// log(1 + t) for t > -1; a mixture that cancels to zero or below is a numeric failure.
double safe_log1p(double t, const char* where) {
    if (!(t > -1.0)) throw NumericError(std::string(where) + ": mixture weight cancelled to zero");
    return std::log1p(t);
}

// c * E / ((1 - c) + c * E) with E = exp(-s), s >= 0, without forming exp(+s).
double damped_ratio(double c, double s) {
    double e = std::exp(-s);
    double den = 1.0 + c * std::expm1(-s);
    if (!(den > 0.0)) throw NumericError("gluing recursion: denominator vanished");
    return c * e / den;
}

}  // namespace

SpectralParams spectral_params(const ThresholdModel& model, double q) {
    if (!(q >= 0.0) || !std::isfinite(q))
        throw PreconditionError("spectral_params: q must be non-negative and finite");
    require_valid(model);
    const auto m = model.num_regimes();
    SpectralParams p;
    p.q = q;
    p.l.resize(m);
    p.dminus.resize(m);
    p.dplus.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double mu = model.drifts(i);
        const double s2 = model.vols(i) * model.vols(i);
        const double root = std::sqrt(2.0 * q * s2 + mu * mu);
        p.l(i) = root / s2;
        p.dminus(i) = mu > 0.0 ? 2.0 * q / (root + mu) : (root - mu) / s2;
        p.dplus(i) = mu < 0.0 ? 2.0 * q / (root - mu) : (root + mu) / s2;
    }
    return p;
}

GluingCoefficients plus_coefficients(const ThresholdModel& model, double q) {
    require_q(q, "plus_coefficients");
    const auto p = spectral_params(model, q);
    const auto n = model.num_thresholds();
    const auto& a = model.thresholds;
    GluingCoefficients g;
    g.b.resize(n);
    g.log_b.resize(n);
    g.c.resize(n);
    g.log_b(0) = 0.0;
    g.c(0) = (p.dminus(1) - p.dminus(0)) / (p.dplus(1) + p.dminus(1));
    for (Eigen::Index k = 1; k < n; ++k) {
        // Threshold a_{k+1}; the previous regime is k with width a_{k+1} - a_k.
        const double w = a(k) - a(k - 1);
        const double cp = g.c(k - 1);
        const double two_l_prev = p.dplus(k) + p.dminus(k);
        const double two_l = p.dplus(k + 1) + p.dminus(k + 1);
        g.c(k) = (p.dminus(k + 1) - p.dminus(k)) / two_l +
                 two_l_prev / two_l * damped_ratio(cp, two_l_prev * w);
        g.log_b(k) = g.log_b(k - 1) + p.dminus(k) * w +
                     safe_log1p(cp * std::expm1(-two_l_prev * w), "plus_coefficients");
    }
    g.b = g.log_b.array().exp();
    return g;
}

GluingCoefficients minus_coefficients(const ThresholdModel& model, double q) {
    require_q(q, "minus_coefficients");
    const auto p = spectral_params(model, q);
    const auto n = model.num_thresholds();
    const auto& a = model.thresholds;
    GluingCoefficients g;
    g.b.resize(n);
    g.log_b.resize(n);
    g.c.resize(n);
    g.log_b(n - 1) = 0.0;
    g.c(n - 1) = (p.dplus(n - 1) - p.dplus(n)) / (p.dplus(n - 1) + p.dminus(n - 1));
    for (Eigen::Index k = n - 2; k >= 0; --k) {
        // Threshold a_{k+1}; the next regime is k+1 with width a_{k+2} - a_{k+1}.
        const double w = a(k + 1) - a(k);
        const double cn = g.c(k + 1);
        const double two_l_next = p.dplus(k + 1) + p.dminus(k + 1);
        const double two_l = p.dplus(k) + p.dminus(k);
        g.c(k) = (p.dplus(k) - p.dplus(k + 1)) / two_l +
                 two_l_next / two_l * damped_ratio(cn, two_l_next * w);
        g.log_b(k) = g.log_b(k + 1) + p.dplus(k + 1) * w +
                     safe_log1p(cn * std::expm1(-two_l_next * w), "minus_coefficients");
    }
    g.b = g.log_b.array().exp();
    return g;
}

double SolutionPiece::log_value(double x) const {
    const double u = x - anchor;
    if (beta == 0.0) return log_anchor + dminus * u;
    if (alpha == 0.0) return log_anchor - dplus * u;
    const double two_l = dminus + dplus;
    if (u >= 0.0)
        return log_anchor + dminus * u + safe_log1p(beta * std::expm1(-two_l * u), "log_value");
    return log_anchor - dplus * u + safe_log1p(alpha * std::expm1(two_l * u), "log_value");
}

// Ratios are formed as (alpha w_+ + beta w_-) with the larger exponential scaled to 1, so a
// pure piece gives its root exactly and nothing overflows.
double SolutionPiece::derivative_ratio(double x) const {
    if (beta == 0.0) return dminus;
    if (alpha == 0.0) return -dplus;
    const double u = x - anchor;
    const double two_l = dminus + dplus;
    if (u >= 0.0) {
        const double e = std::exp(-two_l * u);
        return (alpha * dminus - beta * dplus * e) / (alpha + beta * e);
    }
    const double e = std::exp(two_l * u);
    return (alpha * dminus * e - beta * dplus) / (alpha * e + beta);
}

double SolutionPiece::second_derivative_ratio(double x) const {
    if (beta == 0.0) return dminus * dminus;
    if (alpha == 0.0) return dplus * dplus;
    const double u = x - anchor;
    const double two_l = dminus + dplus;
    if (u >= 0.0) {
        const double e = std::exp(-two_l * u);
        return (alpha * dminus * dminus + beta * dplus * dplus * e) / (alpha + beta * e);
    }
    const double e = std::exp(two_l * u);
    return (alpha * dminus * dminus * e + beta * dplus * dplus) / (alpha * e + beta);
}

FundamentalSolution::FundamentalSolution(const ThresholdModel& model, double q, Side side)
    : model_(model), side_(side) {
    require_valid(model_);
    params_ = spectral_params(model_, q);
    coeffs_ = side == Side::Increasing ? plus_coefficients(model_, q) : minus_coefficients(model_, q);
    const auto n = model_.num_thresholds();
    const auto& a = model_.thresholds;
    pieces_.resize(std::size_t(n + 1));
    for (Eigen::Index r = 0; r <= n; ++r) {
        SolutionPiece& pc = pieces_[std::size_t(r)];
        pc.dminus = params_.dminus(r);
        pc.dplus = params_.dplus(r);
        if (side == Side::Increasing) {
            if (r == 0) {
                pc.anchor = a(0);
            } else {
                pc.anchor = a(r - 1);
                pc.log_anchor = coeffs_.log_b(r - 1);
                pc.beta = coeffs_.c(r - 1);
                pc.alpha = 1.0 - pc.beta;
            }
        } else {
            if (r == n) {
                pc.anchor = a(n - 1);
                pc.alpha = 0.0;
                pc.beta = 1.0;
            } else {
                pc.anchor = a(r);
                pc.log_anchor = coeffs_.log_b(r);
                pc.alpha = coeffs_.c(r);
                pc.beta = 1.0 - pc.alpha;
            }
        }
    }
}

double FundamentalSolution::log_value(double x) const {
    return pieces_[std::size_t(regime_index(model_, x))].log_value(x);
}

double FundamentalSolution::value(double x) const { return std::exp(log_value(x)); }

double FundamentalSolution::derivative_ratio(double x) const {
    return pieces_[std::size_t(regime_index(model_, x))].derivative_ratio(x);
}

double FundamentalSolution::derivative(double x) const {
    return value(x) * derivative_ratio(x);
}

double FundamentalSolution::second_derivative_ratio(double x) const {
    return pieces_[std::size_t(regime_index(model_, x))].second_derivative_ratio(x);
}

std::string FundamentalSolution::dump_csv() const {
    std::ostringstream out;
    write_csv_row(out, std::vector<std::string>{"index", "b", "c", "log_g"});
    for (Eigen::Index k = 0; k < model_.num_thresholds(); ++k) {
        write_csv_row(out, std::vector<std::string>{
                               std::to_string(k + 1), format_number(coeffs_.b(k)),
                               format_number(coeffs_.c(k)),
                               format_number(log_value(model_.thresholds(k)))});
    }
    return out.str();
}

FundamentalPair::FundamentalPair(const ThresholdModel& model, double q)
    : plus(model, q, Side::Increasing), minus(model, q, Side::Decreasing) {}

bool is_monotone_on_grid(const FundamentalSolution& g, const std::vector<double>& grid) {
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double d = g.log_value(grid[i]) - g.log_value(grid[i - 1]);
        if (g.side() == Side::Increasing ? d < 0.0 : d > 0.0) return false;
    }
    return true;
}

}  // namespace tdiff
