#ifndef RESCHED_RUNNER_HPP
#define RESCHED_RUNNER_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "resched/belief.hpp"
#include "resched/config.hpp"
#include "resched/csv.hpp"
#include "resched/errors.hpp"
#include "resched/oracle.hpp"
#include "resched/propcheck.hpp"
#include "resched/radial.hpp"
#include "resched/simulate.hpp"
#include "resched/solver.hpp"

namespace resched {

enum class Command { solve, simulate, oracle, crosscheck, props };

enum class Preset { none, fixed_budget, no_constraint, iid };

struct RunConfig {
    ProblemSpec spec;
    Command command = Command::solve;
    std::vector<std::uint64_t> seeds{1};
    int rollouts = 1000;
    std::string output_dir = ".";
    RadialGridCfg radial_grid;
    Preset preset = Preset::none;
    double strategy_budget = 1e6;
    std::uint64_t node_budget = 10'000'000;
    int prop_trials = 1000;
    bool plots = false;
    bool dump_strategies = false;
};

inline Command parse_command(const std::string& name) {
    if (name == "solve") return Command::solve;
    if (name == "simulate") return Command::simulate;
    if (name == "oracle") return Command::oracle;
    if (name == "crosscheck") return Command::crosscheck;
    if (name == "props") return Command::props;
    throw ConfigError("unknown command: " + name);
}

inline Preset parse_preset(const std::string& name) {
    if (name.empty() || name == "none") return Preset::none;
    if (name == "fixed_budget") return Preset::fixed_budget;
    if (name == "no_constraint") return Preset::no_constraint;
    if (name == "iid") return Preset::iid;
    throw ConfigError("unknown preset: " + name);
}

/// Preset expansion happens before validation. fixed_budget pins the
/// initial energy at its top support point K and removes harvesting;
/// no_constraint guarantees one unit of energy at every step; iid switches
/// the source evolution to fresh redraws.
inline void apply_preset(ProblemSpec& spec, Preset preset) {
    switch (preset) {
    case Preset::none: break;
    case Preset::fixed_budget:
        spec.initial_energy =
            Pmf::delta(std::min(spec.initial_energy.hi(), spec.battery_cap));
        spec.harvest = Pmf::delta(0);
        break;
    case Preset::no_constraint:
        spec.battery_cap = 1;
        spec.initial_energy = Pmf::delta(1);
        spec.harvest = Pmf::delta(1);
        break;
    case Preset::iid:
        spec.source.kind = SourceKind::iid;
        break;
    }
    spec.validate_and_clip();
}

namespace run_detail {

inline std::pair<ValueTable, ThresholdPolicy> solve_any(const RunConfig& cfg) {
    switch (cfg.spec.source.kind) {
    case SourceKind::random_walk: return solve_discrete(cfg.spec);
    case SourceKind::iid: return solve_iid(cfg.spec);
    case SourceKind::gaussian_radial:
        return solve_gaussian_radial(cfg.spec, cfg.radial_grid);
    }
    throw ConfigError("unreachable source kind");
}

inline double predicted_cost(const RunConfig& cfg, const ValueTable& vt) {
    return cfg.spec.source.kind == SourceKind::gaussian_radial
               ? expected_radial_cost(vt, cfg.spec)
               : expected_cost(vt, cfg.spec);
}

/// Minimal SVG polyline chart, one series per curve.
inline void write_svg(const std::string& path,
                      const std::vector<std::pair<std::string,
                                                  std::vector<std::pair<double, double>>>>& series,
                      const std::string& title) {
    const double W = 640, H = 420, m = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 0.0, ymax = -1e300;
    for (const auto& [name, pts] : series)
        for (auto [x, y] : pts) {
            if (!std::isfinite(y)) continue;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymax = std::max(ymax, y);
        }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    auto sx = [&](double x) { return m + (x - xmin) / (xmax - xmin) * (W - 2 * m); };
    auto sy = [&](double y) { return H - m - (y - ymin) / (ymax - ymin) * (H - 2 * m); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#9467bd", "#ff7f0e", "#8c564b"};
    auto out = csv_detail::open(path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='"
        << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << W / 2 << "' y='20' text-anchor='middle'>" << title
        << "</text>\n";
    out << "<line x1='" << m << "' y1='" << H - m << "' x2='" << W - m
        << "' y2='" << H - m << "' stroke='black'/>\n";
    out << "<line x1='" << m << "' y1='" << m << "' x2='" << m << "' y2='"
        << H - m << "' stroke='black'/>\n";
    int ci = 0;
    for (const auto& [name, pts] : series) {
        const char* color = colors[ci % 6];
        out << "<polyline fill='none' stroke='" << color << "' points='";
        for (auto [x, y] : pts)
            if (std::isfinite(y)) out << sx(x) << ',' << sy(y) << ' ';
        out << "'/>\n";
        out << "<text x='" << W - m + 4 << "' y='" << m + 16 * ci << "' fill='"
            << color << "' font-size='12'>" << name << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
}

inline void write_plots(const RunConfig& cfg, const ValueTable& vt,
                        const ThresholdPolicy& policy) {
    namespace fs = std::filesystem;
    std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> th;
    for (int e = 0; e <= policy.battery_cap; ++e) {
        std::vector<std::pair<double, double>> pts;
        for (int t = 1; t <= policy.horizon; ++t)
            pts.emplace_back(t, policy.threshold(t, e));
        th.emplace_back("e=" + std::to_string(e), std::move(pts));
    }
    write_svg((fs::path(cfg.output_dir) / "thresholds.svg").string(), th,
              "threshold vs time");

    std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> vals;
    for (int t = 1; t <= vt.horizon; ++t) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < vt.grid_size; ++i)
            pts.emplace_back(vt.d_value(i), vt.j_at(t, i, vt.battery_cap));
        vals.emplace_back("t=" + std::to_string(t), std::move(pts));
    }
    write_svg((fs::path(cfg.output_dir) / "values.svg").string(), vals,
              "cost-to-go vs error (e = B)");
}

} // namespace run_detail

/// Executes one command. Always writes resolved_spec.cfg (the fully
/// expanded spec actually used) into the output directory. Returns 0;
/// errors are reported by exception and mapped to exit codes by the CLI.
inline int run(RunConfig cfg) {
    namespace fs = std::filesystem;
    apply_preset(cfg.spec, cfg.preset);
    fs::create_directories(cfg.output_dir);
    {
        auto out = csv_detail::open(
            (fs::path(cfg.output_dir) / "resolved_spec.cfg").string());
        out << serialize_spec(cfg.spec);
    }
    const bool gaussian = cfg.spec.source.kind == SourceKind::gaussian_radial;

    switch (cfg.command) {
    case Command::solve: {
        auto [vt, policy] = run_detail::solve_any(cfg);
        write_thresholds_csv((fs::path(cfg.output_dir) / "thresholds.csv").string(),
                             policy);
        write_values_csv((fs::path(cfg.output_dir) / "values.csv").string(), vt);
        if (cfg.plots) run_detail::write_plots(cfg, vt, policy);
        break;
    }
    case Command::simulate: {
        auto [vt, policy] = run_detail::solve_any(cfg);
        double predicted = run_detail::predicted_cost(cfg, vt);
        double sum = 0.0, sumsq = 0.0;
        long n = 0;
        for (std::uint64_t seed : cfg.seeds) {
            Sampler seeder(seed);
            bool first = true;
            for (int k = 0; k < cfg.rollouts; ++k) {
                std::uint64_t sub =
                    static_cast<std::uint64_t>(seeder.uniform01() * 9.007e15);
                double cost;
                if (gaussian) {
                    GaussianTrace tr = sample_trajectory_gaussian(cfg.spec, policy, sub);
                    cost = tr.total_cost;
                    if (first)
                        write_trace_csv((fs::path(cfg.output_dir) /
                                         ("trace_" + std::to_string(seed) + ".csv"))
                                            .string(),
                                        tr);
                } else {
                    Trace tr = sample_trajectory(cfg.spec, policy, sub);
                    cost = tr.total_cost;
                    if (first)
                        write_trace_csv((fs::path(cfg.output_dir) /
                                         ("trace_" + std::to_string(seed) + ".csv"))
                                            .string(),
                                        tr);
                }
                first = false;
                sum += cost;
                sumsq += cost * cost;
                ++n;
            }
        }
        double mean = sum / n;
        double var = n > 1 ? (sumsq - n * mean * mean) / (n - 1) : 0.0;
        double se = std::sqrt(std::max(var, 0.0) / n);
        write_summary_csv((fs::path(cfg.output_dir) / "summary.csv").string(),
                          static_cast<int>(cfg.seeds.size()), cfg.rollouts, mean,
                          se, predicted);
        break;
    }
    case Command::oracle: {
        OracleReport report = enumerate_all(cfg.spec, cfg.strategy_budget);
        write_oracle_report_csv(
            (fs::path(cfg.output_dir) / "oracle_report.csv").string(), report);
        if (cfg.dump_strategies) {
            std::vector<double> costs = strategy_cost_dump(cfg.spec);
            auto out = csv_detail::open(
                (fs::path(cfg.output_dir) / "strategies.csv").string());
            out << "strategy_id,cost\n";
            for (std::size_t i = 0; i < costs.size(); ++i)
                out << i << ',' << csv_detail::num(costs[i]) << '\n';
        }
        break;
    }
    case Command::crosscheck: {
        auto [vt, policy] = run_detail::solve_any(cfg);
        (void)policy;
        double solver_cost = expected_cost(vt, cfg.spec);
        double family = threshold_family_dp(cfg.spec, cfg.node_budget);
        OracleReport report = enumerate_all(cfg.spec, cfg.strategy_budget);
        auto out = csv_detail::open(
            (fs::path(cfg.output_dir) / "crosscheck.csv").string());
        out << "solver_cost,family_dp_cost,oracle_best_cost,gap_solver_oracle,"
               "gap_family_solver,strategy_count,threshold_witness\n";
        out << csv_detail::num(solver_cost) << ',' << csv_detail::num(family)
            << ',' << csv_detail::num(report.best_cost) << ','
            << csv_detail::num(solver_cost - report.best_cost) << ','
            << csv_detail::num(family - solver_cost) << ','
            << csv_detail::num(report.strategy_count) << ','
            << (report.threshold_witness ? 1 : 0) << '\n';
        break;
    }
    case Command::props: {
        std::uint64_t seed = cfg.seeds.empty() ? 1 : cfg.seeds.front();
        std::vector<PropResult> results = run_property_suite(cfg.prop_trials, seed);
        auto out =
            csv_detail::open((fs::path(cfg.output_dir) / "props.csv").string());
        out << "property,trials,failures,pass\n";
        bool all = true;
        for (const PropResult& r : results) {
            out << r.property << ',' << r.trials << ',' << r.failures << ','
                << (r.pass() ? 1 : 0) << '\n';
            all = all && r.pass();
        }
        if (!all) throw StructuralViolation("property suite failed", 0, 0, 0);
        break;
    }
    }
    return 0;
}

} // namespace resched

#endif
