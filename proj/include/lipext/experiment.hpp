#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lipext/instance_io.hpp"

namespace lipext {

struct ExperimentConfig {
    std::string experiment;
    long trials = 1;
    std::uint64_t seed = 0;
    int source_dim = 3;     // n
    int target_dim = 3;     // m (tree targets: vertex count)
    int x_count = 10;       // |X|
    int a_count = 5;        // |A|
    std::vector<double> eps = {0.1, 0.4};
    std::map<std::string, double> tolerances;  // overrides; see kSolverTol etc.
    double lip_target = 1.0;
    std::string out_path;

    double tolerance(const std::string& key, double fallback) const;
    void validate() const;

    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig load(const std::string& path);
};

struct TrialRecord {
    std::string experiment;
    long trial = 0;
    std::string digest;
    std::vector<std::pair<std::string, double>> quantities;
    bool pass = true;
};

struct ExperimentRun {
    std::vector<TrialRecord> records;
    double min_slack = 0.0;
    double max_violation = 0.0;
    double pass_rate = 1.0;
    bool all_pass = true;
};

struct RunOptions {
    int threads = 0;  // 0 = hardware concurrency
};

// Known experiment tags, in the order `run --list` prints them.
std::vector<std::string> experiment_tags();

// One CSV row per trial plus a summary block; rows are emitted in trial order
// regardless of how many worker threads ran, so output bytes depend only on
// (config, seed).
ExperimentRun run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

// Long-format CSV: experiment,trial,digest,quantity,value,pass
std::string to_csv(const ExperimentRun& run);

enum class InstanceKind { Euclidean, SupNorm, Tree };
InstanceKind parse_kind(const std::string& text);

// Seeded deterministic instance generation: source points uniform in the unit
// box (or a random tree with edge lengths in [0.1, 1]); values sampled then
// rescaled toward their centroid until lip_constant(f, A) <= lip_target.
Instance generate_instance(const ExperimentConfig& cfg, InstanceKind kind, std::uint64_t seed);

}  // namespace lipext
