// One line per acceptance criterion: [PASS] or [FAIL], the measured time
// against its limit, and a summary of the underlying checks. Every check is
// exact (rational arithmetic, structural equality); there are no numeric
// tolerances. Exit status is nonzero if any criterion fails.

#include "wstar/verify.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace wstar;

// Pinned limits and sizes.
constexpr double der_finite_seconds = 10;
constexpr double der_symbolic_seconds = 30;
constexpr double upterm_seconds = 10;
constexpr double witness_seconds = 60;
constexpr double separation_seconds = 60;
constexpr double limit_seconds = 30;
constexpr double mass_seconds = 10;
constexpr double roundtrip_seconds = 10;

constexpr std::size_t max_n = 6;
constexpr std::size_t targets_per_cell = 20;
constexpr std::uint64_t coords = 64;
constexpr std::uint64_t terms = 256;
constexpr std::size_t label_bound = 200;
constexpr std::size_t generators = 50;
constexpr std::uint64_t max_m = 100;
constexpr std::size_t samples = 1000;

struct Criterion {
    std::string name;
    double limit;
    std::function<SuiteReport(const SuiteConfig&)> run;
};

SuiteConfig pinned_config() {
    SuiteConfig c;
    c.alphas = SuiteConfig::default_alphas();
    c.grid = SuiteConfig::default_grid();
    c.max_n = max_n;
    c.branches = {2, 3, 4};
    c.coords = coords;
    c.terms = terms;
    c.targets = targets_per_cell;
    c.label_bound = label_bound;
    c.count = generators;
    c.max_m = max_m;
    c.eps = Rational(1, 100);
    c.omegas = {Rational(0), Rational(1, 2), Rational(9, 10)};
    c.samples = samples;
    c.seed = 1;
    return c;
}

}  // namespace

int main() {
    const SuiteConfig cfg = pinned_config();
    const std::vector<Criterion> criteria{
        {"Der(1): brute derivation of truncated F_n matches F_{n-k}, n<=6, b in {2,3,4}", der_finite_seconds,
         verify_der_lemma_finite},
        {"Der(2)/(3): symbolic derived forests and brute membership agreement", der_symbolic_seconds,
         verify_der_lemma_symbolic},
        {"UpTerm: full terminal branching implies only terminal children", upterm_seconds, verify_upterm},
        {"witness sequences converge on the grid (M=64, T=256, exact bound)", witness_seconds, verify_witness},
        {"separation certificates on the grid (label bound 200)", separation_seconds, verify_separation},
        {"limit formula matches the coordinatewise oracle, masses sum to 1", limit_seconds, verify_limit},
        {"mass-escape detector, omega in {0, 1/2, 9/10}, M<=100, eps=1/100, C=1", mass_seconds, verify_mass},
        {"round trips: labels, shortened vectors, ordinal text", roundtrip_seconds, verify_roundtrip},
    };

    std::size_t failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        SuiteReport r;
        std::string error;
        try {
            r = c.run(cfg);
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.limit;
        const bool pass = error.empty() && r.pass() && in_time;
        failed += !pass;

        char timing[64];
        std::snprintf(timing, sizeof timing, "%.2fs / %.0fs", secs, c.limit);
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << c.name << " (" << timing << ", " << r.passed() << "/"
                  << r.checks.size() << " checks)";
        if (!error.empty()) std::cout << " error: " << error;
        if (!in_time) std::cout << " over time limit";
        std::cout << "\n";
        for (const auto& ch : r.checks)
            if (!ch.pass) std::cout << "       failed: " << ch.name << " | " << ch.detail << "\n";
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
