// Acceptance suite: runs every quantitative criterion at its pinned tolerance
// and prints one pass/fail line per criterion. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "lipext/experiment.hpp"
#include "lipext/rng.hpp"

using namespace lipext;

namespace {

struct Criterion {
    bool pass;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentConfig base_config(const std::string& tag, long trials, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.experiment = tag;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.source_dim = 3;
    cfg.target_dim = 3;
    cfg.x_count = 10;
    cfg.a_count = 5;
    cfg.eps = {0.1, 0.4};
    return cfg;
}

std::string stats(const ExperimentRun& run, double secs) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "pass_rate=%.4f min_slack=%.3g max_violation=%.3g (%.1fs)",
                  run.pass_rate, run.min_slack, run.max_violation, secs);
    return buf;
}

// 1. transport_phi: 500 instances, eps in {0.1, 0.4}, perturbation 0.9 eps^2/(8M);
//    extension exact, Lip(g') <= 1 + 1e-6, sup |f - g'| <= eps + 1e-6, under 5 min
Criterion criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentRun run = run_experiment(base_config("phi_lsc", 500, 101));
    const double secs = seconds_since(t0);
    return {run.all_pass && secs < 300.0, stats(run, secs)};
}

// 2. transport_psi: 200 instances per branch, Lip equality within relative 1e-6,
//    sup |f - g'| <= eps + 1e-6
Criterion criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentRun run = run_experiment(base_config("psi_lsc", 400, 202));
    long product_branch = 0, far_branch = 0;
    for (const auto& rec : run.records)
        for (const auto& [name, value] : rec.quantities)
            if (name == "branch") {
                if (value == 1.0) ++product_branch;
                if (value == 2.0) ++far_branch;
            }
    const double secs = seconds_since(t0);
    char buf[64];
    std::snprintf(buf, sizeof(buf), " branches=%ld/%ld", product_branch, far_branch);
    return {run.all_pass && product_branch == 200 && far_branch == 200,
            stats(run, secs) + buf};
}

// 3. reshetnyak_slack: 1e5 random quadruples in R^3, slack >= -1e-12 and the
//    degenerate substitution at |slack| <= 1e-12, under 10 s
Criterion criterion_3() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(303u);
    double min_slack = 1e300, max_degenerate = 0.0;
    for (long i = 0; i < 100000; ++i) {
        auto pt = [&] { return VecD{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}; };
        const VecD x = pt(), y = pt(), u = pt(), v = pt();
        min_slack = std::min(min_slack, reshetnyak_slack(x, y, u, v));
        max_degenerate = std::max(max_degenerate, std::fabs(reshetnyak_slack(x, y, x, y)));
    }
    const double secs = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "min_slack=%.3g max_degenerate=%.3g (%.1fs)", min_slack,
                  max_degenerate, secs);
    return {min_slack >= -1e-12 && max_degenerate <= 1e-12 && secs < 10.0, buf};
}

// 4. projection_stability_slack >= -1e-9 over 1e3 random polytope pairs
Criterion criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentRun run = run_experiment(base_config("lemma_42", 1000, 404));
    return {run.all_pass && run.min_slack >= -1e-9, stats(run, seconds_since(t0))};
}

// 5. hull_hausdorff <= hausdorff + 1e-9 over 1e4 random set pairs in R^2
Criterion criterion_5() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentRun run = run_experiment(base_config("lemma_43", 10000, 505));
    return {run.all_pass, stats(run, seconds_since(t0))};
}

// 6. kirszbraun_extend: 500 extensions, per-step residual <= 1e-6, Lipschitz
//    audit <= 1 + 1e-6
Criterion criterion_6() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentRun run = run_experiment(base_config("kirszbraun", 500, 606));
    return {run.all_pass, stats(run, seconds_since(t0))};
}

// 7. midpoint operator: 1e3 pairs, operator nonexpansivity within 1e-12,
//    extension and Lipschitz audits
Criterion criterion_7() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentRun run = run_experiment(base_config("midpoint_nonexpansive", 1000, 707));
    return {run.all_pass, stats(run, seconds_since(t0))};
}

// 8. clamped operator: containment in the admissible hull with zero violation
//    over 1e3 trials
Criterion criterion_8() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentRun run = run_experiment(base_config("clamped_hull", 1000, 808));
    return {run.all_pass, stats(run, seconds_since(t0))};
}

// 9. greedy transports (sup-norm and tree): 500 trials each, sup distance to
//    f_ext bounded by sup |f - g| + 1e-12, g = f reproduces f_ext exactly
Criterion criterion_9() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentRun sup_run = run_experiment(base_config("transport_supnorm", 500, 909));
    ExperimentRun tree_run = run_experiment(base_config("transport_tree", 500, 910));
    const double secs = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "supnorm pass_rate=%.4f tree pass_rate=%.4f (%.1fs)",
                  sup_run.pass_rate, tree_run.pass_rate, secs);
    return {sup_run.all_pass && tree_run.all_pass, buf};
}

// 10. external families: 200 trials, output within every r_alpha + 1e-9
Criterion criterion_10() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentRun run = run_experiment(base_config("external_family", 200, 1010));
    return {run.all_pass, stats(run, seconds_since(t0))};
}

// 11. alpha_c composition: 500 trials with hull containment <= 1e-7, Lipschitz
//     non-increase, A-values preserved; end-to-end transport+projection chain
//     on the 100 trials at indices divisible by 5
Criterion criterion_11() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentRun run = run_experiment(base_config("alpha_c", 500, 1111));
    long chained = 0;
    for (const auto& rec : run.records)
        for (const auto& [name, value] : rec.quantities)
            if (name == "chain_sup") ++chained;
    const double secs = seconds_since(t0);
    char buf[64];
    std::snprintf(buf, sizeof(buf), " chained=%ld", chained);
    return {run.all_pass && chained == 100, stats(run, secs) + buf};
}

// 12. determinism: every experiment re-run with the same seed yields
//     byte-identical CSV under 1 and under 8 threads
Criterion criterion_12() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string first_bad;
    for (const std::string& tag : experiment_tags()) {
        ExperimentConfig cfg = base_config(tag, tag == "lemma_41" ? 50 : 8, 1212);
        RunOptions one;
        one.threads = 1;
        RunOptions eight;
        eight.threads = 8;
        const std::string a = to_csv(run_experiment(cfg, one));
        const std::string b = to_csv(run_experiment(cfg, one));
        const std::string c = to_csv(run_experiment(cfg, eight));
        const std::string d = to_csv(run_experiment(cfg, eight));
        if (!(a == b && a == c && a == d)) {
            ok = false;
            if (first_bad.empty()) first_bad = tag;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%zu tags x 4 runs%s%s (%.1fs)", experiment_tags().size(),
                  ok ? "" : " first mismatch: ", first_bad.c_str(), seconds_since(t0));
    return {ok, buf};
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        Criterion (*fn)();
    };
    const std::vector<Entry> criteria{
        {"C01 nonexpansive transport (product construction)", criterion_1},
        {"C02 Lipschitz transport (both branches)", criterion_2},
        {"C03 quadrilateral inequality slack", criterion_3},
        {"C04 projection stability slack", criterion_4},
        {"C05 Hausdorff contraction under hulls", criterion_5},
        {"C06 sequential ball-feasibility extension", criterion_6},
        {"C07 midpoint operator nonexpansivity", criterion_7},
        {"C08 clamped operator hull containment", criterion_8},
        {"C09 greedy transports (sup-norm and tree)", criterion_9},
        {"C10 external ball-family extension", criterion_10},
        {"C11 hull-projected composition and chain", criterion_11},
        {"C12 seeded determinism across thread counts", criterion_12},
    };

    int failures = 0;
    for (const auto& entry : criteria) {
        Criterion result;
        try {
            result = entry.fn();
        } catch (const std::exception& e) {
            result = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s  %s: %s\n", result.pass ? "PASS" : "FAIL", entry.name,
                    result.detail.c_str());
        std::fflush(stdout);
        if (!result.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures;
}
