// ou-selfnorm: Monte Carlo experiments on self-normalized random walks and
// their stationary Gaussian limit.
//
// Exit codes: 0 all checks pass, 1 statistical failure, 2 configuration
// error, 3 runtime or capacity error.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "selfnorm/config.hpp"
#include "selfnorm/errors.hpp"
#include "selfnorm/experiment.hpp"
#include "selfnorm/version.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw selfnorm::ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void print_checks(const selfnorm::RunManifest& manifest) {
    for (const auto& rec : manifest.checks) {
        std::printf("  %-28s %s%s\n", rec.name.c_str(), rec.pass ? "pass" : "FAIL",
                    rec.gating ? "" : " (informational)");
        if (!rec.detail.empty()) std::printf("      %s\n", rec.detail.c_str());
    }
}

void list_experiments() {
    std::puts("ou-convergence            joint distribution of the walk on the harmonic clock");
    std::puts("                          vs the stationary mean-reverting Gaussian process");
    std::puts("functional                windowed path functional vs its reference-process law;");
    std::puts("                          examples 1a|1b (extrema), 2a|2b|2c (means),");
    std::puts("                          1pa|1pb|2pa|2pb|2pc (classical scaling vs Brownian motion)");
    std::puts("moment                    exact moment identities; checks b2|cross|a4");
    std::puts("bm-transform              rescaled walk vs Brownian motion marginals/increments");
    std::puts("integral-limit-comparison which integral limit matches the windowed mean:");
    std::puts("                          plain or exponentially weighted");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-normalized walk simulation lab"};
    app.set_version_flag("--version", std::string(selfnorm::kVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    unsigned workers = 0;
    bool deterministic = false;

    auto* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("config", config_path, "key = value config file")->required();
    run->add_option("--workers", workers, "worker threads (default: one per hardware thread)");
    run->add_flag("--deterministic", deterministic,
                  "pin the deterministic replication layout (always on; flag is a no-op guard)");
    run->add_option("--out", out_dir, "output directory (overrides out_dir from the config)");

    auto* validate = app.add_subcommand("validate", "parse and validate a config file");
    validate->add_option("config", config_path, "key = value config file")->required();

    auto* list = app.add_subcommand("list-experiments", "describe the available experiments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? 0 : 2;
    }

    if (list->parsed()) {
        list_experiments();
        return 0;
    }

    selfnorm::ExperimentConfig config;
    try {
        config = selfnorm::parse_config(read_file(config_path));
        if (validate->parsed()) {
            std::printf("ok: %s\n", selfnorm::to_string(config.experiment).c_str());
            return 0;
        }
        if (workers != 0) config.workers = workers;
        if (deterministic) config.deterministic = true;
        if (!out_dir.empty()) config.out_dir = out_dir;
        selfnorm::validate_config(config);
    } catch (const selfnorm::ConfigError& err) {
        std::fprintf(stderr, "config error: %s\n", err.what());
        return 2;
    }

    try {
        const auto manifest = selfnorm::run_experiment(config);
        std::printf("experiment %s (%s), %llu checks\n", manifest.experiment.c_str(),
                    config.dist.to_string().c_str(),
                    static_cast<unsigned long long>(manifest.checks.size()));
        print_checks(manifest);
        std::printf("wall time %.2fs, outputs in %s\n", manifest.wall_time_seconds,
                    config.out_dir.c_str());
        std::printf("%s\n", manifest.all_pass ? "PASS" : "FAIL");
        return manifest.all_pass ? 0 : 1;
    } catch (const selfnorm::ConfigError& err) {
        std::fprintf(stderr, "config error: %s\n", err.what());
        return 2;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 3;
    }
}
