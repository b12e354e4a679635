#include <iostream>

#include <CLI11.hpp>

#include "specreg/cli.hpp"

int main(int argc, char **argv) {
    CLI::App app{"Spectral regularization experiments"};
    app.require_subcommand(1);

    std::string config_path;
    bool check = false;
    std::string output_dir;
    unsigned threads = 0;
    auto *run = app.add_subcommand("run", "Run an experiment described by a JSON config");
    run->add_option("config", config_path, "Experiment config (JSON)")->required();
    run->add_flag("--check", check, "Exit with status 4 when the config's acceptance thresholds fail");
    run->add_option("--output-dir", output_dir, "Override the config's output_dir");
    run->add_option("--threads", threads, "Worker threads for trials (default: all cores)");

    std::string filter;
    double kappa2 = 1.0;
    auto *fc = app.add_subcommand("filter-check", "Verify the filter axioms on the default grids");
    fc->add_option("filter", filter, "tikhonov | landweber | truncation")->required();
    fc->add_option("--kappa2", kappa2, "Kernel bound kappa^2")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : specreg::cli::kExitConfig;
    }

    if (*run) {
        specreg::cli::RunFlags flags;
        flags.check = check;
        flags.threads = threads;
        if (!output_dir.empty()) flags.output_dir = output_dir;
        return specreg::cli::run(config_path, flags, std::cout, std::cerr);
    }
    return specreg::cli::filter_check(filter, kappa2, std::cout, std::cerr);
}
