#include "tdiff/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

namespace tdiff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint32_t kNormalStream = 0;
constexpr std::uint32_t kBridgeStream = 1;
constexpr std::uint32_t kClockStream = 2;

void require_config(const SimConfig& cfg) {
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw PreconditionError("SimConfig: dt must be positive");
    if (cfg.paths == 0) throw PreconditionError("SimConfig: paths must be positive");
    if (cfg.antithetic && cfg.paths % 2 != 0)
        throw PreconditionError("SimConfig: antithetic sampling needs an even path count");
    if (!(cfg.horizon >= 0.0)) throw PreconditionError("SimConfig: horizon must be non-negative");
    if (cfg.max_coarse == 0) throw PreconditionError("SimConfig: max_coarse must be at least 1");
}

// Paths share random numbers in antithetic pairs.
std::uint64_t stream_index(const SimConfig& cfg, std::uint64_t path) {
    return cfg.antithetic ? path / 2 : path;
}

// Runs body(path) for every path; each call writes only its own slots, so the result does not
// depend on the thread count or scheduling.
template <class Body>
void for_each_path(const SimConfig& cfg, Body body) {
    unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = unsigned(std::min<std::size_t>(workers, cfg.paths));
    if (workers <= 1) {
        for (std::size_t p = 0; p < cfg.paths; ++p) body(p);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t p = w; p < cfg.paths; p += workers) body(p);
        });
    }
    for (auto& th : pool) th.join();
}

// Fixed-order pairwise sum.
double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

// Mean and standard error; antithetic pairs are averaged first.
Estimate summarize(const std::vector<double>& values, bool antithetic) {
    std::vector<double> units;
    if (antithetic) {
        units.resize(values.size() / 2);
        for (std::size_t k = 0; k < units.size(); ++k) units[k] = 0.5 * (values[2 * k] + values[2 * k + 1]);
    } else {
        units = values;
    }
    const double n = double(units.size());
    const double mean = pairwise_sum(units.data(), units.size()) / n;
    std::vector<double> sq(units.size());
    for (std::size_t k = 0; k < units.size(); ++k) sq[k] = (units[k] - mean) * (units[k] - mean);
    const double var = units.size() > 1 ? pairwise_sum(sq.data(), sq.size()) / (n - 1.0) : 0.0;
    Estimate e;
    e.mean = mean;
    e.std_error = std::sqrt(var / n);
    e.paths = values.size();
    return e;
}

void require_edges(const std::vector<double>& edges) {
    if (edges.size() < 2) throw PreconditionError("histogram needs at least two edges");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i - 1] < edges[i])) throw PreconditionError("histogram edges must increase");
}

// Bin of x, -1 below the first edge, nbins above the last. Bins are [e_k, e_{k+1}).
long bin_of(const std::vector<double>& edges, double x) {
    if (x < edges.front()) return -1;
    if (x >= edges.back()) return long(edges.size()) - 1;
    return long(std::upper_bound(edges.begin(), edges.end(), x) - edges.begin()) - 1;
}

Histogram histogram_from_bins(const std::vector<double>& edges, const std::vector<long>& bins,
                              bool antithetic) {
    const std::size_t nb = edges.size() - 1;
    const std::size_t n = bins.size();
    Histogram h;
    h.edges = edges;
    h.mass.assign(nb, 0.0);
    h.std_error.assign(nb, 0.0);
    auto slot = [&](long b) { return b < 0 ? nb + 1 : std::size_t(b); };
    for (std::size_t k = 0; k < nb + 2; ++k) {
        std::vector<double> ind(n, 0.0);
        for (std::size_t p = 0; p < n; ++p) ind[p] = slot(bins[p]) == k ? 1.0 : 0.0;
        const Estimate e = summarize(ind, antithetic);
        if (k < nb) {
            h.mass[k] = e.mean;
            h.std_error[k] = e.std_error;
        } else if (k == nb) {
            h.above = e.mean;
        } else {
            h.below = e.mean;
        }
    }
    return h;
}

}  // namespace

PathStepper::PathStepper(const ThresholdModel& model, const SimConfig& cfg, std::uint64_t path,
                         double x0)
    : x(x0),
      model_(model),
      cfg_(cfg),
      normals_(cfg.seed, stream_index(cfg, path), kNormalStream),
      bridge_(cfg.seed, stream_index(cfg, path), kBridgeStream),
      clock_(cfg.seed, stream_index(cfg, path), kClockStream),
      sign_(cfg.antithetic && path % 2 == 1 ? -1.0 : 1.0) {
    for (Eigen::Index j = 0; j < model.num_thresholds(); ++j)
        if (model.drifts(j) != model.drifts(j + 1) || model.vols(j) != model.vols(j + 1)) active_.push_back(j);
}

double PathStepper::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return sign_ * cached_normal_;
    }
    const auto b = normals_.block(normal_index_++);
    const double u1 = CounterStream::to_unit(b[0], b[1]);
    const double u2 = CounterStream::to_unit(b[2], b[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(angle);
    has_cached_ = true;
    return sign_ * r * std::cos(angle);
}

double PathStepper::bridge_uniform(int level) {
    const auto b = bridge_.block(4 * steps + std::uint64_t(level));
    return CounterStream::to_unit(b[0], b[1]);
}

double PathStepper::exponential(double rate, std::uint64_t index) const {
    const auto b = clock_.block(index);
    return -std::log(CounterStream::to_unit(b[0], b[1])) / rate;
}

// Nearest threshold where the coefficients actually change, or -1 if there is none.
Eigen::Index PathStepper::nearest_threshold() const {
    if (active_.empty()) return -1;
    const auto& a = model_.thresholds;
    const auto it = std::lower_bound(active_.begin(), active_.end(), x,
                                     [&](Eigen::Index j, double v) { return a(j) < v; });
    if (it == active_.end()) return active_.back();
    if (it == active_.begin()) return *it;
    return a(*it) - x < x - a(*(it - 1)) ? *it : *(it - 1);
}

double PathStepper::reach(Eigen::Index j, double h) const {
    const double s = std::fmax(model_.vols(j), model_.vols(j + 1));
    return cfg_.coarse_margin * s * std::sqrt(h);
}

// In y = (x - a) / sigma(x) the path near a is a skew Brownian motion whose positive
// excursions have probability sigma_- / (sigma_- + sigma_+). Its modulus is a reflected
// Brownian motion, so one step draws the free endpoint, decides with the bridge law whether
// zero was visited, and if so assigns the side by that probability. The drift is frozen at
// the starting side for the step.
double PathStepper::skew_step(Eigen::Index j, double h) {
    const double a = model_.thresholds(j);
    const double s_minus = model_.vols(j), s_plus = model_.vols(j + 1);
    const bool right = x > a;
    const double s0 = right ? s_plus : s_minus;
    const double mu0 = right ? model_.drifts(j + 1) : model_.drifts(j);
    const double y0 = (x - a) / s0;
    const double y1 = y0 + mu0 / s0 * h + std::sqrt(h) * normal();
    bool visited = y0 == 0.0 || (y0 > 0.0) != (y1 > 0.0);
    if (!visited) {
        const double e = 2.0 * y0 * y1 / h;
        visited = e < 40.0 && bridge_uniform(2) < std::exp(-e);
    }
    if (!visited) return a + s0 * y1;
    const bool up = bridge_uniform(3) < s_minus / (s_minus + s_plus);
    const double m = std::fabs(y1);
    return up ? a + s_plus * m : a - s_minus * m;
}

PathEvent PathStepper::advance(double t_stop, double lower, double upper) {
    const auto& a = model_.thresholds;
    const double* a_first = a.data();
    const double* a_last = a_first + a.size();
    const double tiny = 1e-9 * cfg_.dt;
    while (t_stop - t > tiny) {
        const auto r = std::lower_bound(a_first, a_last, x) - a_first;
        const double mu = model_.drifts(r);
        const double sig = model_.vols(r);
        const double remaining = t_stop - t;
        double h = cfg_.dt;
        bool last = false;
        if (remaining <= cfg_.dt) {
            h = remaining;
            last = true;
        } else if (cfg_.coarse_steps) {
            double d = std::fmin(x - lower, upper - x);
            const auto j = nearest_threshold();
            if (j >= 0) d = std::fmin(d, std::fabs(x - a(j)));
            std::uint32_t k = 1;
            while (2 * k <= cfg_.max_coarse) {
                const double h2 = 2.0 * k * cfg_.dt;
                if (h2 > remaining || std::fabs(mu) * h2 + cfg_.coarse_margin * sig * std::sqrt(h2) > d) break;
                k *= 2;
            }
            h = k * cfg_.dt;
        }
        double xn = 0.0;
        const auto j = nearest_threshold();
        if (cfg_.skew_crossings && j >= 0 && std::fabs(x - a(j)) < reach(j, h)) {
            xn = skew_step(j, h);
        } else {
            xn = x + mu * h + sig * std::sqrt(h) * normal();
        }
        ++steps;
        if (xn <= lower) {
            t += h * (x - lower) / (x - xn);
            x = lower;
            return PathEvent::Lower;
        }
        if (xn >= upper) {
            t += h * (upper - x) / (xn - x);
            x = upper;
            return PathEvent::Upper;
        }
        if (cfg_.bridge_correction) {
            const double s2h = sig * sig * h;
            if (std::isfinite(lower)) {
                const double e = 2.0 * (x - lower) * (xn - lower) / s2h;
                if (e < 40.0 && bridge_uniform(0) < std::exp(-e)) {
                    t += 0.5 * h;
                    x = lower;
                    return PathEvent::Lower;
                }
            }
            if (std::isfinite(upper)) {
                const double e = 2.0 * (upper - x) * (upper - xn) / s2h;
                if (e < 40.0 && bridge_uniform(1) < std::exp(-e)) {
                    t += 0.5 * h;
                    x = upper;
                    return PathEvent::Upper;
                }
            }
        }
        x = xn;
        t = last ? t_stop : t + h;
    }
    return PathEvent::Horizon;
}

Estimate estimate_hit_laplace(const ThresholdModel& model, double q, double x, double target,
                              const SimConfig& cfg) {
    require_valid(model);
    require_config(cfg);
    if (!(q > 0.0)) throw PreconditionError("estimate_hit_laplace: q must be positive");
    const double horizon = cfg.horizon > 0.0 ? cfg.horizon : 50.0 / q;
    const double lower = target < x ? target : -kInf;
    const double upper = target > x ? target : kInf;
    std::vector<double> values(cfg.paths, 0.0);
    std::vector<char> open(cfg.paths, 0);
    for_each_path(cfg, [&](std::size_t p) {
        if (x == target) {
            values[p] = 1.0;
            return;
        }
        PathStepper s(model, cfg, p, x);
        if (s.advance(horizon, lower, upper) == PathEvent::Horizon) {
            open[p] = 1;
        } else {
            values[p] = std::exp(-q * s.t);
        }
    });
    Estimate e = summarize(values, cfg.antithetic);
    e.unresolved = std::size_t(std::count(open.begin(), open.end(), 1));
    return e;
}

Histogram sample_exponential_time_law(const ThresholdModel& model, double q, double x,
                                      const std::vector<double>& edges, const SimConfig& cfg) {
    require_valid(model);
    require_config(cfg);
    require_edges(edges);
    if (!(q > 0.0)) throw PreconditionError("sample_exponential_time_law: q must be positive");
    const double horizon = cfg.horizon > 0.0 ? cfg.horizon : 50.0 / q;
    std::vector<long> bins(cfg.paths);
    for_each_path(cfg, [&](std::size_t p) {
        PathStepper s(model, cfg, p, x);
        s.advance(std::fmin(s.exponential(q, 0), horizon), -kInf, kInf);
        bins[p] = bin_of(edges, s.x);
    });
    return histogram_from_bins(edges, bins, cfg.antithetic);
}

MartingaleCheck martingale_checkpoints(const FundamentalPair& g, double x,
                                       const std::vector<double>& checkpoints, double lower,
                                       double upper, const SimConfig& cfg) {
    const auto& model = g.plus.model();
    require_config(cfg);
    if (!(lower < x && x < upper)) throw PreconditionError("martingale_checkpoints: need lower < x < upper");
    for (std::size_t j = 0; j < checkpoints.size(); ++j)
        if (!(checkpoints[j] > 0.0) || (j > 0 && !(checkpoints[j] > checkpoints[j - 1])))
            throw PreconditionError("martingale_checkpoints: checkpoints must be positive and increasing");
    const std::size_t nc = checkpoints.size();
    const double q = g.plus.q();
    std::vector<double> plus(cfg.paths * nc), minus(cfg.paths * nc);
    for_each_path(cfg, [&](std::size_t p) {
        PathStepper s(model, cfg, p, x);
        bool stopped = false;
        for (std::size_t j = 0; j < nc; ++j) {
            if (!stopped) stopped = s.advance(checkpoints[j], lower, upper) != PathEvent::Horizon;
            const double disc = -q * s.t;
            plus[j * cfg.paths + p] = std::exp(disc + g.plus.log_value(s.x));
            minus[j * cfg.paths + p] = std::exp(disc + g.minus.log_value(s.x));
        }
    });
    MartingaleCheck out;
    out.checkpoints = checkpoints;
    for (std::size_t j = 0; j < nc; ++j) {
        std::vector<double> vp(plus.begin() + long(j * cfg.paths), plus.begin() + long((j + 1) * cfg.paths));
        std::vector<double> vm(minus.begin() + long(j * cfg.paths), minus.begin() + long((j + 1) * cfg.paths));
        out.plus.push_back(summarize(vp, cfg.antithetic));
        out.minus.push_back(summarize(vm, cfg.antithetic));
    }
    return out;
}

Estimate estimate_escape(const ThresholdModel& model, double margin, double x, const SimConfig& cfg) {
    require_valid(model);
    require_config(cfg);
    if (!(margin > 0.0)) throw PreconditionError("estimate_escape: margin must be positive");
    const double lower = model.thresholds(0) - margin;
    const double upper = model.thresholds(model.num_thresholds() - 1) + margin;
    if (!(lower < x && x < upper)) throw PreconditionError("estimate_escape: start outside the barriers");
    const double horizon = cfg.horizon > 0.0 ? cfg.horizon : 1e4;
    std::vector<double> values(cfg.paths, 0.0);
    std::vector<char> open(cfg.paths, 0);
    for_each_path(cfg, [&](std::size_t p) {
        PathStepper s(model, cfg, p, x);
        const auto ev = s.advance(horizon, lower, upper);
        values[p] = ev == PathEvent::Lower ? 1.0 : 0.0;
        open[p] = ev == PathEvent::Horizon;
    });
    Estimate e = summarize(values, cfg.antithetic);
    e.unresolved = std::size_t(std::count(open.begin(), open.end(), 1));
    return e;
}

Histogram estimate_stationary_histogram(const ThresholdModel& model, double x0,
                                        const std::vector<double>& edges, double burn_in,
                                        const SimConfig& cfg) {
    require_valid(model);
    require_edges(edges);
    SimConfig fine = cfg;
    fine.coarse_steps = false;
    fine.antithetic = false;
    fine.paths = 1;
    require_config(fine);
    const double horizon = cfg.horizon > 0.0 ? cfg.horizon : 1000.0;
    if (!(burn_in >= 0.0 && burn_in < horizon))
        throw PreconditionError("estimate_stationary_histogram: burn-in must lie inside the horizon");
    constexpr std::size_t kBatches = 20;
    const std::size_t nb = edges.size() - 1;
    const double batch_len = (horizon - burn_in) / double(kBatches);
    PathStepper s(model, fine, 0, x0);
    s.advance(burn_in, -kInf, kInf);
    // occupation[batch][bin + 1], slot 0 below, slot nb + 1 above.
    std::vector<std::vector<double>> occ(kBatches, std::vector<double>(nb + 2, 0.0));
    for (std::size_t b = 0; b < kBatches; ++b) {
        const double end = burn_in + double(b + 1) * batch_len;
        while (end - s.t > 1e-9 * fine.dt) {
            const double x_before = s.x;
            const double t_before = s.t;
            s.advance(std::fmin(end, s.t + fine.dt), -kInf, kInf);
            occ[b][std::size_t(bin_of(edges, x_before) + 1)] += s.t - t_before;
        }
    }
    Histogram h;
    h.edges = edges;
    h.mass.assign(nb, 0.0);
    h.std_error.assign(nb, 0.0);
    std::vector<double> col(kBatches);
    for (std::size_t k = 0; k < nb + 2; ++k) {
        for (std::size_t b = 0; b < kBatches; ++b) col[b] = occ[b][k] / batch_len;
        const Estimate e = summarize(col, false);
        if (k == 0) h.below = e.mean;
        else if (k == nb + 1) h.above = e.mean;
        else {
            h.mass[k - 1] = e.mean;
            h.std_error[k - 1] = e.std_error;
        }
    }
    return h;
}

}  // namespace tdiff

namespace tdiff {

PathSummary simulate_path(const ThresholdModel& model, double x0, const SimConfig& cfg,
                          const StopRule& stop, std::uint64_t path) {
    require_valid(model);
    if (!(cfg.dt > 0.0)) throw PreconditionError("simulate_path: dt must be positive");
    if (!(stop.horizon > 0.0)) throw PreconditionError("simulate_path: horizon must be positive");
    if (!(stop.lower < x0 && x0 < stop.upper))
        throw PreconditionError("simulate_path: start must lie strictly between the stop levels");
    PathStepper s(model, cfg, path, x0);
    double t_stop = stop.horizon;
    bool clocked = false;
    if (stop.clock_rate > 0.0) {
        const double e = s.exponential(stop.clock_rate, 0);
        if (e < t_stop) {
            t_stop = e;
            clocked = true;
        }
    }
    const auto ev = s.advance(t_stop, stop.lower, stop.upper);
    if (!std::isfinite(s.x)) throw NumericError("simulate_path: state diverged");
    PathSummary out;
    out.terminal = s.x;
    out.time = s.t;
    out.steps = s.steps;
    out.reason = ev == PathEvent::Lower   ? StopReason::Lower
                 : ev == PathEvent::Upper ? StopReason::Upper
                 : clocked                ? StopReason::Clock
                                          : StopReason::Horizon;
    return out;
}

}  // namespace tdiff
