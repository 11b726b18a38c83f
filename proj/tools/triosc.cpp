// triosc: command-line front end for the coupled-oscillator invariant pipelines.
#include "triosc/config.hpp"
#include "triosc/errors.hpp"
#include "triosc/pipeline.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <iostream>
#include <optional>

namespace {

std::string output_dir(const std::string& flag, const triosc::ScenarioConfig& cfg) {
    if (!flag.empty()) return flag;
    if (!cfg.output_dir.empty()) return cfg.output_dir;
    if (const char* env = std::getenv("TRIOSC_OUT"); env && *env) return env;
    return "triosc_out";
}

void print_run(const triosc::RunReport& r, bool quiet) {
    if (quiet) return;
    for (const auto& c : r.checks) {
        fmt::print("{:<12} {:<30} {:<24.6g} {} {:<10.3g} {}\n", c.stage, c.name, c.value, c.lower_bound ? ">=" : "<=",
                   c.tolerance, c.pass ? "PASS" : "FAIL");
    }
    for (const auto& t : r.timings) fmt::print("time {:<12} {:.3f} s\n", t.stage, t.seconds);
    if (!r.failed_stage.empty()) fmt::print("stage '{}' failed: {}\n", r.failed_stage, r.error_message);
    fmt::print("{} (exit {})\n", r.pass ? "PASS" : "FAIL", r.exit_code);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"triosc: time-dependent coupled oscillator invariants"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_flag;
    std::optional<double> tol;
    std::optional<int> grid;
    bool quiet = false;
    app.add_option("--out", out_flag, "output directory");
    app.add_option("--tol", tol, "admissibility tolerance")->check(CLI::PositiveNumber);
    app.add_option("--grid", grid, "time grid intervals N")->check(CLI::PositiveNumber);
    app.add_flag("--quiet", quiet, "suppress the summary on stdout");

    std::string config_path;
    int count = 1000;
    std::uint64_t seed = 42;
    struct Sub {
        const char* name;
        triosc::Command command;
        const char* help;
    };
    const Sub subs[] = {
        {"validate", triosc::Command::validate, "auxiliary solve and admissibility checks"},
        {"evolve", triosc::Command::evolve, "classical trajectories, invariant drift, LvN residuals"},
        {"spectrum", triosc::Command::spectrum, "Gamma matrix, eigenvalues and Euler angles"},
        {"eigen", triosc::Command::eigen, "eigenstate checks (includes spectrum)"},
        {"run", triosc::Command::run, "all pipelines enabled in the config"},
    };
    std::vector<std::pair<CLI::App*, triosc::Command>> commands;
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("config", config_path, "scenario file")->required();
        commands.emplace_back(sub, s.command);
    }
    CLI::App* sweep = app.add_subcommand("sweep", "randomized property sweep over Gamma matrices");
    sweep->add_option("config", config_path, "scenario file (tolerances)")->required();
    sweep->add_option("--count", count, "number of matrices");
    sweep->add_option("--seed", seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : triosc::exit_code::config;
    }

    try {
        triosc::ScenarioConfig cfg = triosc::parse_config(config_path);
        if (tol) cfg.tolerances.admissibility = *tol;
        if (grid) cfg.params.grid.intervals = *grid;
        const std::string out = output_dir(out_flag, cfg);

        if (sweep->parsed()) {
            const triosc::SweepReport r = triosc::sweep(cfg, count, seed, out);
            if (!quiet) {
                fmt::print("sweep: {} matrices, {} failures, class 1/2 = {}/{}\n", r.count, r.failures, r.class1,
                           r.class2);
                fmt::print("max eigenvalue rel error {:.3g}, max offdiag {:.3g}, min opposite {:.3g}\n",
                           r.max_eigen_rel_error, std::max(r.max_primary_offdiag, r.max_alternative_offdiag),
                           r.min_opposite_offdiag);
                for (const auto& n : r.failure_notes) fmt::print("  {}\n", n);
            }
            return r.exit_code;
        }
        for (const auto& [sub, command] : commands) {
            if (!sub->parsed()) continue;
            const triosc::RunReport r = triosc::run(cfg, command, out);
            print_run(r, quiet);
            return r.exit_code;
        }
    } catch (const triosc::Error& e) {
        std::cerr << "triosc: " << triosc::to_string(e.kind()) << " error: " << e.what() << '\n';
        return triosc::exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "triosc: " << e.what() << '\n';
        return triosc::exit_code::numeric;
    }
    return triosc::exit_code::config;
}
