// Experiment runner: parses a JSON config, dispatches the named check and
// writes machine-readable verdicts plus CSV artifacts.
//
// Exit codes: 0 all checks pass, 2 at least one inconclusive, 1 on failure
// (including config validation errors).

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "oulevy/experiments.hpp"

namespace {

int run_with_config(const std::string& config_path, oulevy::RunOverrides overrides,
                    const std::string& forced_experiment) {
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot open config file " << config_path << "\n";
        return 1;
    }
    oulevy::Json config;
    try {
        in >> config;
    } catch (const std::exception& e) {
        std::cerr << "error: config parse failure: " << e.what() << "\n";
        return 1;
    }
    if (!forced_experiment.empty()) config["experiment"] = forced_experiment;
    if (const char* env_out = std::getenv("OU_LEVY_OUT"))
        overrides.out_dir = env_out;
    try {
        const auto outcome = oulevy::run_experiment(config, overrides);
        for (const auto& v : outcome.verdicts)
            std::cout << v.at("check").get<std::string>() << " ["
                      << v.at("identity").get<std::string>()
                      << "] discrepancy=" << v.at("discrepancy").get<double>()
                      << " budget=" << v.at("budget").get<double>() << " -> "
                      << v.at("status").get<std::string>() << "\n";
        return outcome.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-local Ornstein-Uhlenbeck semigroup laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    oulevy::RunOverrides overrides;
    std::uint64_t seed_value = 0;
    bool seed_set = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config (JSON)")
            ->required();
        cmd->add_option("--out", overrides.out_dir, "output directory");
        cmd->add_option("--tol-scale", overrides.tol_scale,
                        "multiply all pass/fail budgets");
        cmd->add_option("--threads", overrides.threads,
                        "worker threads (0 = hardware)");
        cmd->add_option_function<std::uint64_t>(
            "--seed",
            [&](const std::uint64_t& v) {
                seed_value = v;
                seed_set = true;
            },
            "master seed override");
    };

    const std::vector<std::string> experiments = {
        "char-check", "simulate", "cauchy",   "commutation", "ito-gap",
        "approx",     "phi-core", "fpk",      "dim-sweep"};
    std::vector<CLI::App*> subs;
    for (const auto& name : experiments) {
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
        add_common(sub);
        subs.push_back(sub);
    }
    CLI::App* run_cmd =
        app.add_subcommand("run", "run the experiment named in the config");
    add_common(run_cmd);

    CLI11_PARSE(app, argc, argv);

    if (seed_set) overrides.seed = seed_value;
    for (std::size_t i = 0; i < experiments.size(); ++i)
        if (subs[i]->parsed())
            return run_with_config(config_path, overrides, experiments[i]);
    return run_with_config(config_path, overrides, "");
}
