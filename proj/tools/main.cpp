#include <CLI11.hpp>

#include <iostream>

#include "amenable/runner.hpp"

namespace rn = amenable::runner;

int main(int argc, char** argv) {
    CLI::App app{"Quasi tilings, ergodic averages, IDS and percolation experiments on amenable groups"};
    app.require_subcommand(1);

    std::string config, out, report;
    auto* run = app.add_subcommand("run", "run one experiment from a JSON config");
    run->add_option("config", config, "config file")->required();
    run->add_option("--out", out, "output directory (overrides AMENABLE_OUTPUT_DIR and output_dir)");

    auto* verify = app.add_subcommand("verify", "re-check a verification.json");
    verify->add_option("report", report, "verification report")->required();

    auto* list = app.add_subcommand("list-experiments", "list experiment kinds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : rn::kInvalidConfig;
    }

    if (list->parsed()) {
        for (const auto& e : rn::experiments()) std::cout << e.kind << "\t" << e.description << "\n";
        return rn::kOk;
    }
    const auto outcome = run->parsed() ? rn::run_file(config, out) : rn::verify_file(report);
    (outcome.exit_code == rn::kOk ? std::cout : std::cerr) << outcome.message << "\n";
    return outcome.exit_code;
}
