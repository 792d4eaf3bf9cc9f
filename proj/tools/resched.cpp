// Command-line runner: parse a problem spec, dispatch one of the
// solve/simulate/oracle/crosscheck/props commands, and emit CSV tables
// (plus optional SVG plots) into the output directory.
//
// Exit codes: 0 ok, 2 config error, 3 structural violation, 4 budget
// exceeded.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "resched/config.hpp"
#include "resched/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"threshold scheduling and remote estimation solver"};

    std::string config_path;
    std::string command = "solve";
    std::string out_dir = ".";
    std::string preset;
    std::string seeds_arg = "1";
    int rollouts = 1000;
    double radial_h = 0.0;
    double radial_rmax = 0.0;
    int gl_nodes = 64;
    double budget = 1e6;
    std::uint64_t node_budget = 10'000'000;
    int prop_trials = 1000;
    bool plots = false;
    bool dump_strategies = false;

    app.add_option("--config", config_path, "problem spec file")->required();
    app.add_option("--command", command,
                   "one of: solve, simulate, oracle, crosscheck, props");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seeds", seeds_arg, "comma-separated seed list");
    app.add_option("--rollouts", rollouts, "Monte Carlo rollouts per seed");
    app.add_option("--preset", preset,
                   "spec preset: fixed_budget, no_constraint, iid");
    app.add_option("--radial-h", radial_h, "radial grid step (gaussian)");
    app.add_option("--radial-rmax", radial_rmax, "radial grid extent (gaussian)");
    app.add_option("--gl-nodes", gl_nodes, "quadrature nodes per radial cell");
    app.add_option("--budget", budget, "oracle strategy-count budget");
    app.add_option("--node-budget", node_budget, "belief-tree node budget");
    app.add_option("--prop-trials", prop_trials, "trials per property");
    app.add_flag("--plots", plots, "emit SVG plots");
    app.add_flag("--dump-strategies", dump_strategies,
                 "oracle: also dump per-strategy costs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        resched::RunConfig cfg;
        cfg.spec = resched::parse_spec_file(config_path);
        cfg.command = resched::parse_command(command);
        cfg.preset = resched::parse_preset(preset);
        cfg.output_dir = out_dir;
        cfg.rollouts = rollouts;
        cfg.radial_grid.h = radial_h;
        cfg.radial_grid.r_max = radial_rmax;
        cfg.radial_grid.gl_nodes = gl_nodes;
        cfg.strategy_budget = budget;
        cfg.node_budget = node_budget;
        cfg.prop_trials = prop_trials;
        cfg.plots = plots;
        cfg.dump_strategies = dump_strategies;

        cfg.seeds.clear();
        std::string cur;
        for (char ch : seeds_arg + ",") {
            if (ch == ',') {
                if (!cur.empty()) cfg.seeds.push_back(std::stoull(cur));
                cur.clear();
            } else {
                cur += ch;
            }
        }
        if (cfg.seeds.empty())
            throw resched::ConfigError("--seeds: need at least one seed");

        return resched::run(std::move(cfg));
    } catch (const resched::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const resched::GridTooSmall& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const resched::StructuralViolation& e) {
        std::fprintf(stderr, "structural violation: %s\n", e.what());
        return 3;
    } catch (const resched::BudgetExceeded& e) {
        std::fprintf(stderr, "budget exceeded: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
