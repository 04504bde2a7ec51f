#include "tdiff/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tdiff {

namespace {

double checked_log(double v, const char* what) {
    if (!(v > 0.0)) throw NumericError(std::string("potential density: ") + what + " is not positive");
    return std::log(v);
}

struct RegimeConstants {
    // log of the prefactor q / (l sigma^2 * normaliser) for each regime.
    std::vector<double> log_pref;
};

// log C_i - delta_i^- w_i, where C_i = exp(delta_i^- w_i) [(1-c_i^+)(1-c_{i+1}^-) - c_i^+ c_{i+1}^- exp(-2 l_i w_i)].
double log_middle_factor(const FundamentalPair& g, Eigen::Index r) {
    const auto& a = g.plus.model().thresholds;
    const auto& p = g.plus.params();
    const double cp = g.plus.coefficients().c(r - 1);
    const double cm = g.minus.coefficients().c(r);
    const double w = a(r) - a(r - 1);
    const double k = (1.0 - cp) * (1.0 - cm) - cp * cm * std::exp(-(p.dminus(r) + p.dplus(r)) * w);
    return checked_log(k, "middle-regime normaliser");
}

RegimeConstants regime_constants(const FundamentalPair& g) {
    const auto& m = g.plus.model();
    const auto& p = g.plus.params();
    const auto n = m.num_thresholds();
    const auto& a = m.thresholds;
    const double log_q = std::log(p.q);
    RegimeConstants rc;
    rc.log_pref.resize(std::size_t(n + 1));
    for (Eigen::Index r = 0; r <= n; ++r) {
        const double base = log_q - std::log(p.l(r) * m.vols(r) * m.vols(r));
        if (r == 0) {
            rc.log_pref[0] = base - checked_log(1.0 - g.minus.coefficients().c(0), "1 - c_1^-");
        } else if (r == n) {
            rc.log_pref[std::size_t(n)] =
                base - checked_log(1.0 - g.plus.coefficients().c(n - 1), "1 - c_n^+");
        } else {
            const double w = a(r) - a(r - 1);
            rc.log_pref[std::size_t(r)] = base - p.dminus(r) * w - log_middle_factor(g, r);
        }
    }
    return rc;
}

}  // namespace

double potential_log_density(const FundamentalPair& g, double x, double z) {
    if (std::isnan(x) || std::isnan(z)) throw PreconditionError("potential_density: NaN input");
    const auto& m = g.plus.model();
    const auto& p = g.plus.params();
    const auto& a = m.thresholds;
    const auto n = m.num_thresholds();
    const auto r = regime_index(m, z);
    const double log_q = std::log(p.q);
    const double s2 = m.vols(r) * m.vols(r);
    const double base = log_q - std::log(p.l(r) * s2);
    const auto& lp = g.plus;
    const auto& lm = g.minus;

    if (r == 0) {
        const double pref = base - p.dplus(0) * (a(0) - z) - lm.coefficients().log_b(0) -
                            checked_log(1.0 - lm.coefficients().c(0), "1 - c_1^-");
        return x >= z ? pref + lm.log_value(x)
                      : pref + lm.log_value(z) - p.dminus(0) * (z - x);
    }
    if (r == n) {
        const double pref = base - p.dminus(n) * (z - a(n - 1)) - lp.coefficients().log_b(n - 1) -
                            checked_log(1.0 - lp.coefficients().c(n - 1), "1 - c_n^+");
        return z >= x ? pref + lp.log_value(x)
                      : pref + lp.log_value(z) - p.dplus(n) * (x - z);
    }
    const double w = a(r) - a(r - 1);
    const double two_kappa = 2.0 * m.drifts(r) / s2;
    const double log_c = p.dminus(r) * w + log_middle_factor(g, r);
    const double pref = base - two_kappa * (a(r) - z) - log_c - lp.log_value(a(r - 1)) -
                        lm.log_value(a(r));
    return x <= z ? pref + lp.log_value(x) + lm.log_value(z)
                  : pref + lm.log_value(x) + lp.log_value(z);
}

double potential_density(const FundamentalPair& g, double x, double z) {
    return std::exp(potential_log_density(g, x, z));
}

double potential_density(const ThresholdModel& model, double q, double x, double z) {
    return potential_density(FundamentalPair(model, q), x, z);
}

PiecewiseExpDensity potential_pieces(const FundamentalPair& g, double x) {
    if (!std::isfinite(x)) throw PreconditionError("potential_pieces: x must be finite");
    const auto& m = g.plus.model();
    const auto& p = g.plus.params();
    const auto& a = m.thresholds;
    const auto n = m.num_thresholds();
    const auto& cp = g.plus.coefficients().c;
    const auto& cm = g.minus.coefficients().c;
    const auto rc = regime_constants(g);
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> cuts(a.data(), a.data() + n);
    cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<double> edges{-inf};
    edges.insert(edges.end(), cuts.begin(), cuts.end());
    edges.push_back(inf);

    // Weight w > 0 is carried as log(w); a zero weight drops the term.
    auto add = [](Segment& s, double weight, double log_rest, double rate, double ref) {
        if (weight == 0.0) return;
        s.add_term(weight > 0.0 ? 1.0 : -1.0, std::log(std::fabs(weight)) + log_rest, rate, ref);
    };

    std::vector<Segment> segments;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        Segment s;
        s.left = edges[k];
        s.right = edges[k + 1];
        const bool below_x = s.right <= x;  // segment lies in z <= x
        // Regime of the open segment: thresholds strictly below its right end.
        const Eigen::Index r = std::isinf(s.right) ? n : regime_index(m, s.right);
        const double lpref = rc.log_pref[std::size_t(r)];
        if (r == 0) {
            const double lb = g.minus.coefficients().log_b(0);
            if (below_x) {
                add(s, 1.0, lpref + g.minus.log_value(x) - lb, p.dplus(0), a(0));
            } else {
                const double shift = -p.dminus(0) * (a(0) - x);
                add(s, cm(0), lpref + shift, p.dplus(0), a(0));
                add(s, 1.0 - cm(0), lpref + shift, -p.dminus(0), a(0));
            }
        } else if (r == n) {
            const double lb = g.plus.coefficients().log_b(n - 1);
            if (!below_x) {
                add(s, 1.0, lpref + g.plus.log_value(x) - lb, -p.dminus(n), a(n - 1));
            } else {
                add(s, 1.0 - cp(n - 1), lpref, p.dplus(n), x);
                add(s, cp(n - 1), lpref - p.dplus(n) * (x - a(n - 1)), -p.dminus(n), a(n - 1));
            }
        } else {
            const double w = a(r) - a(r - 1);
            const double two_kappa = 2.0 * m.drifts(r) / (m.vols(r) * m.vols(r));
            if (!below_x) {
                const double rest = lpref + g.plus.log_value(x) - g.plus.log_value(a(r - 1));
                add(s, cm(r), rest, p.dplus(r), a(r));
                add(s, 1.0 - cm(r), rest, -p.dminus(r), a(r));
            } else {
                const double rest =
                    lpref + g.minus.log_value(x) - g.minus.log_value(a(r)) - two_kappa * w;
                add(s, 1.0 - cp(r - 1), rest, p.dplus(r), a(r - 1));
                add(s, cp(r - 1), rest, -p.dminus(r), a(r - 1));
            }
        }
        segments.push_back(std::move(s));
    }
    return PiecewiseExpDensity(std::move(segments));
}

PiecewiseExpDensity potential_pieces(const ThresholdModel& model, double q, double x) {
    return potential_pieces(FundamentalPair(model, q), x);
}

}  // namespace tdiff
