// One PASS/FAIL line per acceptance criterion; exit status 0 iff every line passes.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "tdiff/verify.hpp"

#ifndef TDIFF_CLI_PATH
#error "TDIFF_CLI_PATH must name the tdiff executable"
#endif

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + TDIFF_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

// Two independent CLI runs with the same seed must write identical bytes.
bool determinism(std::string& detail) {
    const auto dir = std::filesystem::temp_directory_path() / "tdiff_acceptance";
    std::filesystem::create_directories(dir);
    const auto f1 = dir / "verify1.txt";
    const auto f2 = dir / "verify2.txt";
    std::filesystem::remove(f1);
    std::filesystem::remove(f2);
    const int r1 = run_cli("verify --threads 3 --output \"" + f1.string() + "\"");
    const int r2 = run_cli("verify --threads 1 --output \"" + f2.string() + "\"");
    const std::string a = slurp(f1);
    const std::string b = slurp(f2);
    const bool same = !a.empty() && a == b;
    detail = "exit codes " + std::to_string(r1) + "/" + std::to_string(r2) + ", " + std::to_string(a.size()) +
             " bytes, " + (same ? "identical" : "different");
    return same;
}

}  // namespace

int main() {
    tdiff::VerifyOptions opts;
    opts.full = true;
    const auto results = tdiff::run_verification(opts);
    bool all = true;
    for (const auto& r : results) {
        all = all && r.passed;
        std::printf("%s  %s  %s  (%.1f s, budget %.0f s)\n", r.passed ? "PASS" : "FAIL", r.id.c_str(),
                    r.title.c_str(), r.seconds, r.budget_seconds);
        for (const auto& d : r.details) std::printf("        %s\n", d.c_str());
    }
    std::string detail;
    const auto t0 = std::chrono::steady_clock::now();
    const bool det = determinism(detail);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    all = all && det;
    std::printf("%s  8  byte-identical verify output across runs  (%.1f s)\n        %s\n", det ? "PASS" : "FAIL",
                secs, detail.c_str());
    std::fflush(stdout);
    return all ? 0 : 1;
}
