// CLI for the periodic-box chemotaxis solver and its verification harness.

#include <CLI11.hpp>

#include <cstdint>
#include <functional>
#include <iostream>

#include "ks/config.hpp"
#include "ks/harness.hpp"
#include "ks/integrator.hpp"

namespace {

void add_common(CLI::App* cmd, ks::CliOptions& opt, std::uint64_t& seed, bool& seed_set) {
    cmd->add_option("--config", opt.config_path, "scenario config file")->required();
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--seed", seed, "override run.seed")->each([&](const std::string&) {
        seed_set = true;
    });
    cmd->add_option("--jobs", opt.jobs, "concurrent sweep cells");
    cmd->add_option("--snapshot-every", opt.snapshot_every,
                    "field snapshot cadence in time units (simulate only)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral chemotaxis solver with theorem-level checks"};
    app.require_subcommand(1);

    ks::CliOptions opt;
    std::uint64_t seed = 0;
    bool seed_set = false;

    std::function<int(const ks::CliOptions&)> action;
    const struct {
        const char* name;
        const char* help;
        int (*fn)(const ks::CliOptions&);
    } commands[] = {
        {"constants", "evaluate every closed-form constant and threshold", ks::cmd_constants},
        {"simulate", "run the scenario and write the time-series CSV", ks::cmd_simulate},
        {"verify-bounds", "run and check the sup-norm boundedness barriers",
         ks::cmd_verify_bounds},
        {"verify-decay", "run and check the exponential convergence to equilibrium",
         ks::cmd_verify_decay},
        {"verify-persistence", "run and check the strictly positive floor",
         ks::cmd_verify_persistence},
        {"lnseq", "print the closeness recursion iterates and limit", ks::cmd_lnseq},
        {"sweep", "run the configured parameter sweep", ks::cmd_sweep},
    };
    for (const auto& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        add_common(sub, opt, seed, seed_set);
        sub->callback([&action, fn = c.fn] { action = fn; });
    }

    CLI11_PARSE(app, argc, argv);
    if (seed_set) opt.seed = seed;

    try {
        return action(opt);
    } catch (const ks::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return ks::kExitConfigError;
    } catch (const ks::IntegrationAbort& e) {
        std::cerr << "non-finite at t=" << e.time_of_failure() << ": " << e.what() << "\n";
        return ks::kExitNumericalAbort;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ks::kExitConfigError;
    }
}
