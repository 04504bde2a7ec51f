#include "tdiff/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tdiff {

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
    std::ostringstream out;
    out << "invalid model:";
    for (const auto& p : problems) out << "\n  " << p;
    return out.str();
}

void check_finite(const Vector& v, const char* name, std::vector<std::string>& problems) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v(i))) {
            std::ostringstream msg;
            msg << name << "[" << i << "] is not finite";
            problems.push_back(msg.str());
        }
    }
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::invalid_argument(join_problems(problems)), problems_(std::move(problems)) {}

std::vector<std::string> validate(const ThresholdModel& model) {
    std::vector<std::string> problems;
    const auto n = model.thresholds.size();
    if (n < 1) problems.emplace_back("at least one threshold is required");
    if (model.drifts.size() != n + 1) {
        std::ostringstream msg;
        msg << "drifts has " << model.drifts.size() << " entries, expected " << n + 1;
        problems.push_back(msg.str());
    }
    if (model.vols.size() != n + 1) {
        std::ostringstream msg;
        msg << "vols has " << model.vols.size() << " entries, expected " << n + 1;
        problems.push_back(msg.str());
    }
    check_finite(model.thresholds, "thresholds", problems);
    check_finite(model.drifts, "drifts", problems);
    check_finite(model.vols, "vols", problems);
    for (Eigen::Index i = 1; i < n; ++i) {
        if (!(model.thresholds(i - 1) < model.thresholds(i))) {
            std::ostringstream msg;
            msg << "thresholds not strictly increasing at index " << i;
            problems.push_back(msg.str());
        }
    }
    for (Eigen::Index i = 0; i < model.vols.size(); ++i) {
        if (std::isfinite(model.vols(i)) && !(model.vols(i) > 0.0)) {
            std::ostringstream msg;
            msg << "volatility must be positive (vols[" << i << "] = " << model.vols(i) << ")";
            problems.push_back(msg.str());
        }
    }
    return problems;
}

void require_valid(const ThresholdModel& model) {
    auto problems = validate(model);
    if (!problems.empty()) throw ValidationError(std::move(problems));
}

ThresholdModel make_model(std::vector<double> thresholds, std::vector<double> drifts,
                          std::vector<double> vols) {
    ThresholdModel m;
    m.thresholds = Eigen::Map<const Vector>(thresholds.data(), Eigen::Index(thresholds.size()));
    m.drifts = Eigen::Map<const Vector>(drifts.data(), Eigen::Index(drifts.size()));
    m.vols = Eigen::Map<const Vector>(vols.data(), Eigen::Index(vols.size()));
    require_valid(m);
    return m;
}

Eigen::Index regime_index(const ThresholdModel& model, double x) {
    if (std::isnan(x)) throw PreconditionError("regime_index: x is NaN");
    const double* first = model.thresholds.data();
    const double* last = first + model.thresholds.size();
    // Count of thresholds strictly below x.
    return std::lower_bound(first, last, x) - first;
}

double drift_at(const ThresholdModel& model, double x) {
    return model.drifts(regime_index(model, x));
}

double vol_at(const ThresholdModel& model, double x) {
    return model.vols(regime_index(model, x));
}

Vector drift_ratios(const ThresholdModel& model) {
    return model.drifts.array() / model.vols.array().square();
}

Vector regime_widths(const ThresholdModel& model) {
    const auto n = model.num_thresholds();
    Vector w = Vector::Constant(n + 1, std::numeric_limits<double>::infinity());
    for (Eigen::Index i = 1; i < n; ++i) w(i) = model.thresholds(i) - model.thresholds(i - 1);
    return w;
}

}  // namespace tdiff
