#include "tdiff/reference.hpp"

#include <cmath>
#include <numbers>

#include "tdiff/error.hpp"

namespace tdiff {

namespace {

struct Roots {
    double l, dminus, dplus;
};

Roots roots(double mu, double sigma, double q, const char* where) {
    if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu))
        throw PreconditionError(std::string(where) + ": sigma must be positive, mu finite");
    if (!(q >= 0.0) || !std::isfinite(q))
        throw PreconditionError(std::string(where) + ": q must be non-negative");
    const double s2 = sigma * sigma;
    const double root = std::sqrt(2.0 * q * s2 + mu * mu);
    return {root / s2, mu > 0.0 ? 2.0 * q / (root + mu) : (root - mu) / s2,
            mu < 0.0 ? 2.0 * q / (root - mu) : (root + mu) / s2};
}

// sinh(u) / sinh(v) for 0 <= u <= v, v > 0.
double sinh_ratio(double u, double v) {
    return std::exp(u - v) * std::expm1(-2.0 * u) / std::expm1(-2.0 * v);
}

// sinh(u) sinh(w) / sinh(v) for u, w >= 0, u + w <= v, v > 0.
double sinh_product_ratio(double u, double w, double v) {
    return 0.5 * std::exp(u + w - v) * std::expm1(-2.0 * u) * std::expm1(-2.0 * w) /
           -std::expm1(-2.0 * v);
}

}  // namespace

double linear_resolvent_density(double mu, double sigma, double q, double x, double z) {
    const auto r = roots(mu, sigma, q, "linear_resolvent_density");
    if (!(q > 0.0)) throw PreconditionError("linear_resolvent_density: q must be positive");
    const double s2 = sigma * sigma;
    return q / (r.l * s2) * std::exp(mu * (z - x) / s2 - std::fabs(z - x) * r.l);
}

double linear_fpt_laplace(double mu, double sigma, double q, double x, double a) {
    const auto r = roots(mu, sigma, q, "linear_fpt_laplace");
    // Written with the roots so that q = 0 gives exactly exp(-2 mu (x - a) / sigma^2) or 1.
    return a >= x ? std::exp(-r.dminus * (a - x)) : std::exp(-r.dplus * (x - a));
}

double linear_fpt_density(double mu, double sigma, double x, double a, double t) {
    if (!(sigma > 0.0)) throw PreconditionError("linear_fpt_density: sigma must be positive");
    if (!(t > 0.0)) return 0.0;
    const double d = a - x;
    const double e = d - mu * t;
    return std::fabs(d) / (sigma * std::sqrt(2.0 * std::numbers::pi * t * t * t)) *
           std::exp(-e * e / (2.0 * sigma * sigma * t));
}

double linear_two_sided_laplace(double mu, double sigma, double q, double x, double a, double b,
                                ExitSide side) {
    const auto r = roots(mu, sigma, q, "linear_two_sided_laplace");
    if (!(a < b) || !(a <= x && x <= b))
        throw PreconditionError("linear_two_sided_laplace: requires a <= x <= b, a < b");
    const double s2 = sigma * sigma;
    if (q == 0.0) {
        // Scale-function ratio; same limits as the sinh form.
        const double k = 2.0 * mu / s2;
        auto s = [&](double v) { return k == 0.0 ? v - a : -std::expm1(-k * (v - a)) / k; };
        const double down = (s(b) - s(x)) / (s(b) - s(a));
        return side == ExitSide::Lower ? down : 1.0 - down;
    }
    if (side == ExitSide::Lower) {
        if (x == a) return 1.0;
        return std::exp(mu * (a - x) / s2) * sinh_ratio((b - x) * r.l, (b - a) * r.l);
    }
    if (x == b) return 1.0;
    return std::exp(mu * (b - x) / s2) * sinh_ratio((x - a) * r.l, (b - a) * r.l);
}

double linear_killed_density(double mu, double sigma, double q, double x, double a, double b,
                             double z) {
    const auto r = roots(mu, sigma, q, "linear_killed_density");
    if (!(q > 0.0)) throw PreconditionError("linear_killed_density: q must be positive");
    if (!(a < b) || !(a <= x && x <= b))
        throw PreconditionError("linear_killed_density: requires a <= x <= b, a < b");
    if (z < a || z > b) return 0.0;
    const double s2 = sigma * sigma;
    const double lo = std::fmin(x, z), hi = std::fmax(x, z);
    return 2.0 * q / (r.l * s2) * sinh_product_ratio((lo - a) * r.l, (b - hi) * r.l, (b - a) * r.l) *
           std::exp(mu * (z - x) / s2);
}

double linear_killed_onesided_density(double mu, double sigma, double q, double x, double a,
                                      double z) {
    const auto r = roots(mu, sigma, q, "linear_killed_onesided_density");
    if (!(q > 0.0)) throw PreconditionError("linear_killed_onesided_density: q must be positive");
    if (!(x >= a)) throw PreconditionError("linear_killed_onesided_density: requires x >= a");
    if (z < a) return 0.0;
    const double pref = q / (r.l * sigma * sigma);
    const double two_l = r.dminus + r.dplus;
    if (z >= x) {
        // (e^{d- u} - e^{-d+ u}) e^{-d- v} = e^{d- (u - v)} (1 - e^{-2 l u}), u = x - a, v = z - a.
        return pref * std::exp(-r.dminus * (z - x)) * -std::expm1(-two_l * (x - a));
    }
    return pref * std::exp(-r.dplus * (x - z)) * -std::expm1(-two_l * (z - a));
}

}  // namespace tdiff
