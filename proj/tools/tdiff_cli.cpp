// Command-line front end. Exit codes: 0 ok, 1 usage, 2 invalid model, 3 precondition,
// 4 verification failure, 5 numerical breakdown.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdiff/csv.hpp"
#include "tdiff/error.hpp"
#include "tdiff/escape.hpp"
#include "tdiff/model_io.hpp"
#include "tdiff/montecarlo.hpp"
#include "tdiff/passage.hpp"
#include "tdiff/potential.hpp"
#include "tdiff/stationary.hpp"
#include "tdiff/verify.hpp"

namespace {

using namespace tdiff;

// Malformed or missing arguments; reported with the usage exit code.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> grid_arg(const std::string& grid, const char* who) {
    if (grid.empty()) throw UsageError(std::string(who) + " needs --grid MIN:MAX:N");
    try {
        return parse_grid(grid);
    } catch (const PreconditionError& e) {
        throw UsageError(e.what());
    }
}

std::vector<double> list_arg(const std::string& list) {
    try {
        return parse_list(list);
    } catch (const PreconditionError& e) {
        throw UsageError(e.what());
    }
}

constexpr int kUsage = 1;
constexpr int kValidation = 2;
constexpr int kPrecondition = 3;
constexpr int kVerifyFailed = 4;
constexpr int kNumeric = 5;

struct Common {
    std::string model_path;
    std::string output;
    std::string dump_model;
};

void add_common(CLI::App* cmd, Common& c, bool model_required = true) {
    auto* opt = cmd->add_option("--model", c.model_path, "model JSON file");
    if (model_required) opt->required();
    cmd->add_option("--output", c.output, "write results to this file instead of stdout");
    cmd->add_option("--dump-model", c.dump_model, "write the parsed model back out as JSON");
}

ThresholdModel load(const Common& c) {
    auto m = load_model_file(c.model_path);
    if (!c.dump_model.empty()) {
        std::ofstream out(c.dump_model, std::ios::binary);
        if (!out) throw PreconditionError("cannot write " + c.dump_model);
        out << model_to_json(m);
    }
    return m;
}

// Results are written in one piece so a failed run never leaves a partial file.
void emit(const Common& c, const std::string& text) {
    if (c.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(c.output, std::ios::binary);
    if (!out) throw PreconditionError("cannot write " + c.output);
    out << text;
}

struct SimOptions {
    std::string kind = "hit";
    double q = 1.0;
    double x = 0.0;
    double target = 0.0;
    double margin = 4.0;
    double burn_in = 100.0;
    std::string grid;
    std::size_t paths = 10000;
    double dt = 1e-3;
    double horizon = 0.0;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    bool no_antithetic = false;
};

std::string histogram_csv(const Histogram& h) {
    std::ostringstream out;
    write_csv_row(out, std::vector<std::string>{"bin_left", "bin_right", "mass", "se"});
    for (std::size_t k = 0; k + 1 < h.edges.size(); ++k)
        write_csv_row(out, std::vector<double>{h.edges[k], h.edges[k + 1], h.mass[k], h.std_error[k]});
    return out.str();
}

std::string estimate_csv(const std::string& name, const Estimate& e, double horizon) {
    std::ostringstream out;
    write_csv_row(out, std::vector<std::string>{"quantity", "mean", "se", "paths", "unresolved", "horizon"});
    write_csv_row(out, std::vector<std::string>{name, format_number(e.mean), format_number(e.std_error),
                                                std::to_string(e.paths), std::to_string(e.unresolved),
                                                format_number(horizon)});
    return out.str();
}

std::vector<double> bin_edges(const std::string& grid) {
    return grid_arg(grid, "this estimator");
}

std::string run_simulate(const ThresholdModel& m, const SimOptions& o) {
    SimConfig cfg;
    cfg.paths = o.paths;
    cfg.dt = o.dt;
    cfg.horizon = o.horizon;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    cfg.antithetic = !o.no_antithetic;
    if (o.kind == "hit") {
        const double horizon = o.horizon > 0.0 ? o.horizon : 50.0 / o.q;
        return estimate_csv("laplace_hit", estimate_hit_laplace(m, o.q, o.x, o.target, cfg), horizon);
    }
    if (o.kind == "law") return histogram_csv(sample_exponential_time_law(m, o.q, o.x, bin_edges(o.grid), cfg));
    if (o.kind == "escape") {
        const double horizon = o.horizon > 0.0 ? o.horizon : 1e4;
        return estimate_csv("p_minus", estimate_escape(m, o.margin, o.x, cfg), horizon);
    }
    if (o.kind == "stationary")
        return histogram_csv(estimate_stationary_histogram(m, o.x, bin_edges(o.grid), o.burn_in, cfg));
    throw UsageError("unknown estimator \"" + o.kind + "\"");
}

int run(int argc, char** argv) {
    CLI::App app{"Closed-form and Monte Carlo tools for multi-regime threshold diffusions"};
    app.require_subcommand(1);

    Common common;
    double q = 1.0, x = 0.0, target = 0.0;
    std::optional<double> lower, upper;
    std::string grid, ys;
    bool pieces = false;

    auto* density = app.add_subcommand("eval-density", "law of X at an exponential time, as a density in z");
    add_common(density, common);
    density->add_option("--q", q, "killing rate")->required();
    density->add_option("--x", x, "starting point")->required();
    density->add_option("--grid", grid, "MIN:MAX:N (required unless --pieces)");
    density->add_flag("--pieces", pieces, "emit the exponential segments instead of grid values");

    auto* hitting = app.add_subcommand("hitting", "Laplace transforms of passage times");
    add_common(hitting, common);
    hitting->add_option("--q", q, "Laplace variable")->required();
    hitting->add_option("--x", x, "starting point")->required();
    hitting->add_option("--target", target, "level for the one-sided transform");
    hitting->add_option("--lower", lower, "lower barrier for the two-sided transforms");
    hitting->add_option("--upper", upper, "upper barrier for the two-sided transforms");

    auto* stationary = app.add_subcommand("stationary", "stationary density (needs mu_0 > 0 and mu_n < 0)");
    add_common(stationary, common);
    stationary->add_option("--grid", grid, "MIN:MAX:N")->required();

    auto* scale = app.add_subcommand("scale", "scale function and speed density");
    add_common(scale, common);
    scale->add_option("--grid", grid, "MIN:MAX:N")->required();

    auto* escape = app.add_subcommand("escape", "escape probabilities (needs mu_0 < 0 and mu_n > 0)");
    add_common(escape, common);
    escape->add_option("--y", ys, "comma-separated starting points")->required();

    SimOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates with standard errors");
    add_common(simulate, common);
    simulate->add_option("--estimator", sim.kind, "hit, law, escape or stationary")
        ->check(CLI::IsMember({"hit", "law", "escape", "stationary"}));
    simulate->add_option("--q", sim.q, "rate (hit, law)");
    simulate->add_option("--x", sim.x, "starting point");
    simulate->add_option("--target", sim.target, "level (hit)");
    simulate->add_option("--margin", sim.margin, "barrier distance beyond the outer thresholds (escape)");
    simulate->add_option("--grid", sim.grid, "histogram edges MIN:MAX:N (law, stationary)");
    simulate->add_option("--burn-in", sim.burn_in, "discarded initial time (stationary)");
    simulate->add_option("--paths", sim.paths, "number of paths");
    simulate->add_option("--dt", sim.dt, "Euler step");
    simulate->add_option("--horizon", sim.horizon, "time cap; 0 selects the estimator default");
    simulate->add_option("--seed", sim.seed, "random seed");
    simulate->add_option("--threads", sim.threads, "worker threads (results do not depend on it)");
    simulate->add_flag("--no-antithetic", sim.no_antithetic, "disable antithetic pairs");

    bool full = false, skip_mc = false;
    std::uint64_t seed = VerifyOptions{}.seed;
    unsigned threads = 0;
    auto* verify = app.add_subcommand("verify", "run the acceptance checks and print a pass/fail table");
    add_common(verify, common, false);
    verify->add_flag("--full", full, "full-size Monte Carlo runs");
    verify->add_flag("--skip-monte-carlo", skip_mc, "analytic checks only");
    verify->add_option("--seed", seed, "seed for random models and Monte Carlo");
    verify->add_option("--threads", threads, "Monte Carlo worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        std::ostringstream out;
        if (*density) {
            const auto m = load(common);
            const FundamentalPair g(m, q);
            if (pieces) {
                out << potential_pieces(g, x).dump_csv();
            } else {
                write_csv_row(out, std::vector<std::string>{"z", "density"});
                for (double z : grid_arg(grid, "eval-density")) write_csv_row(out, std::vector<double>{z, potential_density(g, x, z)});
            }
        } else if (*hitting) {
            const auto m = load(common);
            const FundamentalPair g(m, q);
            const bool two_sided = lower || upper;
            if (two_sided && !(lower && upper)) throw UsageError("--lower and --upper must be given together");
            if (!two_sided && hitting->count("--target") == 0)
                throw UsageError("hitting needs --target or both --lower and --upper");
            if (hitting->count("--target")) {
                write_csv_row(out, std::vector<std::string>{"x", "target", "laplace_hit"});
                write_csv_row(out, std::vector<double>{x, target, laplace_hit(g, x, target)});
            }
            if (two_sided) {
                write_csv_row(out, std::vector<std::string>{"x", "lower", "upper", "exit_down", "exit_up"});
                write_csv_row(out, std::vector<double>{x, *lower, *upper, laplace_exit_down(g, x, *lower, *upper),
                                                       laplace_exit_up(g, x, *lower, *upper)});
            }
        } else if (*stationary) {
            const auto m = load(common);
            const auto points = grid_arg(grid, "stationary");
            write_csv_row(out, std::vector<std::string>{"z", "density"});
            for (double z : points) write_csv_row(out, std::vector<double>{z, stationary_density(m, z)});
        } else if (*scale) {
            const auto m = load(common);
            write_csv_row(out, std::vector<std::string>{"x", "phi", "m"});
            for (double v : grid_arg(grid, "scale"))
                write_csv_row(out, std::vector<double>{v, scale_function(m, v), speed_density(m, v)});
        } else if (*escape) {
            const auto m = load(common);
            const auto values = list_arg(ys);
            const auto c = escape_coefficients(m);
            write_csv_row(out, std::vector<std::string>{"y", "p_minus", "p_plus"});
            for (double y : values) {
                const double pm = escape_to_minus_infinity(m, c, y);
                write_csv_row(out, std::vector<double>{y, pm, 1.0 - pm});
            }
        } else if (*simulate) {
            out << run_simulate(load(common), sim);
        } else if (*verify) {
            VerifyOptions opt;
            opt.full = full;
            opt.seed = seed;
            opt.threads = threads;
            opt.skip_monte_carlo = skip_mc;
            if (!common.model_path.empty()) opt.model = load(common);
            const auto results = run_verification(opt);
            const auto report = format_report(results);
            if (common.output.empty()) {
                std::cout << report;
            } else {
                emit(common, report);
                std::cout << report;
            }
            for (const auto& r : results)
                if (!r.passed) return kVerifyFailed;
            return 0;
        }
        emit(common, out.str());
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\nRun with --help for more information.\n";
        return kUsage;
    } catch (const ValidationError& e) {
        std::cerr << "invalid model:\n";
        for (const auto& p : e.problems()) std::cerr << "  " << p << '\n';
        return kValidation;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kPrecondition;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumeric;
    }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
