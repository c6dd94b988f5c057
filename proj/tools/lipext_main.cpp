#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "lipext/experiment.hpp"

namespace {

int env_threads() {
    const char* v = std::getenv("LIPEXT_THREADS");
    if (v == nullptr || *v == '\0') return 0;
    try {
        return std::max(0, std::stoi(v));
    } catch (...) {
        return 0;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lipext: Lipschitz extension operators and their quantitative audits"};
    app.require_subcommand(1);

    // gen <kind> --config <file> [--out <file>]
    std::string gen_kind, gen_config, gen_out;
    CLI::App* gen = app.add_subcommand("gen", "generate a seeded instance file");
    gen->add_option("kind", gen_kind, "euclidean | supnorm | tree")->required();
    gen->add_option("--config", gen_config, "experiment config (json)")->required();
    gen->add_option("--out", gen_out, "output path (default: config 'out' field)");

    // run <tag> --config <file> --out <csv>
    std::string run_tag, run_config, run_out;
    bool run_list = false;
    CLI::App* run = app.add_subcommand("run", "run an experiment and write its CSV");
    run->add_option("tag", run_tag, "experiment tag (see --list)");
    run->add_option("--config", run_config, "experiment config (json)");
    run->add_option("--out", run_out, "CSV output path (default: config 'out' field)");
    run->add_flag("--list", run_list, "list known experiment tags");

    // check <instance>
    std::string check_path;
    CLI::App* check = app.add_subcommand("check", "validate an instance file (metric + Lipschitz)");
    check->add_option("instance", check_path, "instance file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            lipext::ExperimentConfig cfg = lipext::ExperimentConfig::load(gen_config);
            lipext::Instance inst =
                lipext::generate_instance(cfg, lipext::parse_kind(gen_kind), cfg.seed);
            const std::string path = gen_out.empty() ? cfg.out_path : gen_out;
            if (path.empty()) {
                std::cout << lipext::serialize_instance(inst);
            } else {
                lipext::save_instance(inst, path);
                std::cout << "wrote " << path << " (digest " << lipext::instance_digest(inst)
                          << ")\n";
            }
            return 0;
        }
        if (run->parsed()) {
            if (run_list) {
                for (const auto& tag : lipext::experiment_tags()) std::cout << tag << "\n";
                return 0;
            }
            if (run_config.empty()) {
                std::cerr << "run: --config is required\n";
                return 2;
            }
            lipext::ExperimentConfig cfg = lipext::ExperimentConfig::load(run_config);
            if (!run_tag.empty()) cfg.experiment = run_tag;
            lipext::RunOptions opts;
            opts.threads = env_threads();
            lipext::ExperimentRun result = lipext::run_experiment(cfg, opts);
            const std::string csv = lipext::to_csv(result);
            const std::string path = run_out.empty() ? cfg.out_path : run_out;
            if (path.empty()) {
                std::cout << csv;
            } else {
                std::ofstream out(path, std::ios::binary);
                if (!out) throw lipext::Error("cannot write CSV: " + path);
                out << csv;
            }
            std::cerr << cfg.experiment << ": " << result.records.size() << " trials, pass rate "
                      << result.pass_rate << ", min slack " << result.min_slack
                      << ", max violation " << result.max_violation << "\n";
            return result.all_pass ? 0 : 1;
        }
        if (check->parsed()) {
            lipext::Instance inst = lipext::load_instance(check_path);
            lipext::CheckReport report = lipext::check_instance(inst);
            std::cout << report.describe();
            return report.ok() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
