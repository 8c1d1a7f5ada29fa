// Copyright 2026 raftsec contributors
// SPDX-License-Identifier: Apache-2.0

// Runs one experiment sweep from a JSON configuration.
//
// exit codes: 0 ok, 2 configuration error, 3 numeric failure, 1 anything else

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "raftsec/experiment.hpp"

namespace ex = raftsec::experiment;

int main(int argc, char** argv) {
    CLI::App app{"raftsec_run: coverage and authentication sweeps for a jammed leader/follower network"};

    std::string config_path;
    ex::Overrides ov;
    bool validate_only = false;

    app.add_option("-c,--config", config_path, "JSON experiment configuration")->required()->check(CLI::ExistingFile);
    app.add_option("--seed", ov.seed, "master seed (overrides master_seed)");
    app.add_option("--trials", ov.trials, "Monte Carlo trials per sweep point")->check(CLI::PositiveNumber);
    app.add_option("-o,--out", ov.output_path, "output file (overrides output.path)");
    app.add_option("--format", ov.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--scenario", ov.scenario, "override the scenario");
    app.add_option("--threads", ov.threads, "worker threads, 0 = all cores");
    app.add_flag("--validate-only", validate_only, "check the configuration and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const auto cfg = ex::load_config(config_path, ov);
        if (validate_only) {
            std::cout << config_path << ": ok (" << ex::to_string(cfg.scenario) << ", " << cfg.sweep.values().size()
                      << " points)\n";
            return 0;
        }
        const auto table = ex::run(cfg);
        std::cout << ex::summarize(table) << "\nwrote " << cfg.output_path << '\n';
        return 0;
    } catch (const ex::ConfigError& e) {
        for (const auto& d : e.diagnostics()) {
            std::cerr << config_path << ':' << d << '\n';
        }
        return 2;
    } catch (const ex::NumericFailure& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
