// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit code = number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "resched/belief.hpp"
#include "resched/oracle.hpp"
#include "resched/propcheck.hpp"
#include "resched/radial.hpp"
#include "resched/runner.hpp"
#include "resched/simulate.hpp"
#include "resched/solver.hpp"
#include "signed_dp.hpp"

using namespace resched;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool pass,
            const std::string& detail, double seconds) {
    std::printf("[%s] %d. %s (%s, %.1fs)\n", pass ? "PASS" : "FAIL", idx,
                name.c_str(), detail.c_str(), seconds);
    if (!pass) ++failures;
}

template <typename F>
void criterion(int idx, const std::string& name, F&& body) {
    auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        detail = body();
        pass = true;
    } catch (const std::exception& e) {
        detail = e.what();
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    report(idx, name, pass, detail, secs);
}

struct Check {
    void require(bool ok, const std::string& msg) {
        if (!ok) throw std::runtime_error(msg);
    }
};

ProblemSpec make_walk(int T, double c, int B, Pmf init, Pmf noise, Pmf e1,
                      Pmf harvest, DistortionSpec d,
                      SourceKind kind = SourceKind::random_walk) {
    ProblemSpec s;
    s.horizon = T;
    s.comm_cost = c;
    s.battery_cap = B;
    s.initial_energy = std::move(e1);
    s.harvest = std::move(harvest);
    s.source.kind = kind;
    s.source.init = std::move(init);
    s.source.noise = std::move(noise);
    s.distortion = d;
    s.validate_and_clip();
    return s;
}

std::vector<ProblemSpec> oracle_instances() {
    Pmf u3(-1, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    Pmf n1(-1, {0.25, 0.5, 0.25});
    Pmf n2(-1, {0.3, 0.4, 0.3});
    Pmf peaked(-1, {0.2, 0.6, 0.2});
    DistortionSpec ind{DistortionKind::indicator, 2.0};
    DistortionSpec abs1{DistortionKind::power, 1.0};
    DistortionSpec sq{DistortionKind::power, 2.0};
    return {
        make_walk(2, 0.8, 1, u3, n1, Pmf::delta(1), Pmf::delta(0), ind),
        make_walk(2, 0.3, 1, u3, n1, Pmf::delta(1), Pmf::delta(0), abs1),
        make_walk(2, 0.5, 2, u3, n2, Pmf::delta(1), Pmf(0, {0.5, 0.5}), sq),
        make_walk(2, 0.6, 1, Pmf::delta(0), n2, Pmf::delta(1), Pmf::delta(1), ind),
        make_walk(2, 0.2, 1, peaked, Pmf::delta(0), Pmf(0, {0.5, 0.5}),
                  Pmf::delta(0), abs1),
        make_walk(2, 1.2, 2, u3, n1, Pmf::delta(2), Pmf::delta(0), sq),
    };
}

/// Random A1-A2 instance with hull <= 41 points (max|init| + T*max|Z| <= 20).
ProblemSpec random_instance(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> Td(2, 6), Bd(1, 4), half(0, 2);
    std::uniform_real_distribution<double> cd(0.0, 3.0);
    int T = Td(rng), B = Bd(rng);
    Pmf init = gen::asu_even_pmf(rng, half(rng));
    Pmf noise = gen::asu_even_pmf(rng, half(rng));
    std::vector<double> ew(static_cast<std::size_t>(B) + 1);
    double esum = 0.0;
    for (double& v : ew) esum += (v = 0.05 + static_cast<double>(rng() % 100));
    for (double& v : ew) v /= esum;
    std::vector<double> hw(static_cast<std::size_t>(rng() % (B + 1)) + 1);
    double hsum = 0.0;
    for (double& v : hw) hsum += (v = 0.05 + static_cast<double>(rng() % 100));
    for (double& v : hw) v /= hsum;
    DistortionSpec d;
    switch (rng() % 3) {
    case 0: d = {DistortionKind::indicator, 2.0}; break;
    case 1: d = {DistortionKind::power, 1.0}; break;
    default: d = {DistortionKind::power, 2.0}; break;
    }
    return make_walk(T, cd(rng), B, init, noise, Pmf(0, ew), Pmf(0, hw), d);
}

struct McStats {
    double mean = 0.0;
    double se = 0.0;
};

template <typename RollFn>
McStats monte_carlo(int n, std::uint64_t seed, RollFn&& roll) {
    double sum = 0.0, sumsq = 0.0;
    Sampler seeder(seed);
    for (int k = 0; k < n; ++k) {
        std::uint64_t sub =
            static_cast<std::uint64_t>(seeder.uniform01() * 9.007e15);
        double cost = roll(sub);
        sum += cost;
        sumsq += cost * cost;
    }
    McStats st;
    st.mean = sum / n;
    st.se = std::sqrt((sumsq - n * st.mean * st.mean) / (n - 1) / n);
    return st;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

} // namespace

int main() {
    std::vector<ProblemSpec> instances = oracle_instances();
    std::vector<OracleReport> reports;

    criterion(1, "oracle optimality of the threshold DP", [&] {
        Check ck;
        double worst = 0.0;
        for (const ProblemSpec& s : instances) {
            OracleReport r = enumerate_all(s, 1e6);
            reports.push_back(r);
            ck.require(r.strategy_count <= 1e6, "strategy count over 1e6");
            ck.require(r.gap >= -1e-9, "oracle beaten below -1e-9: gap " +
                                           std::to_string(r.gap));
            ck.require(r.gap <= 1e-9, "solver suboptimal: gap " +
                                          std::to_string(r.gap));
            worst = std::max(worst, std::abs(r.gap));
        }
        return std::to_string(instances.size()) + " instances, max |gap| " +
               fmt(worst);
    });

    criterion(2, "triple consistency (family DP = solver = oracle)", [&] {
        Check ck;
        ck.require(reports.size() == instances.size(),
                   "criterion 1 did not produce reports");
        double worst = 0.0;
        for (std::size_t i = 0; i < instances.size(); ++i) {
            double family = threshold_family_dp(instances[i]);
            double d1 = std::abs(family - reports[i].solver_cost);
            double d2 = std::abs(family - reports[i].best_cost);
            double d3 = std::abs(reports[i].solver_cost - reports[i].best_cost);
            worst = std::max({worst, d1, d2, d3});
            ck.require(d1 <= 1e-9 && d2 <= 1e-9 && d3 <= 1e-9,
                       "triple mismatch on instance " + std::to_string(i) +
                           ": spread " + fmt(std::max({d1, d2, d3})));
        }
        return "pairwise spread <= " + fmt(worst) + " over " +
               std::to_string(instances.size()) + " instances";
    });

    criterion(3, "threshold structure on randomized instances", [&] {
        std::mt19937_64 rng(20240901);
        int count = 120;
        for (int k = 0; k < count; ++k) {
            ProblemSpec s = random_instance(rng);
            // solve_discrete raises StructuralViolation on any non-monotone
            // decision region or broken symmetry; reaching here means none.
            auto [vt, policy] = solve_discrete(s);
            const int D = static_cast<int>(std::llround(-vt.grid_lo));
            for (int t = 1; t <= s.horizon; ++t)
                for (int e = 0; e <= s.battery_cap; ++e)
                    for (int d = 1; d <= D; ++d)
                        if (vt.j_at(t, static_cast<std::size_t>(D + d), e) !=
                            vt.j_at(t, static_cast<std::size_t>(D - d), e))
                            throw std::runtime_error("J not exactly even");
            for (int t = 1; t <= s.horizon; ++t)
                if (policy.threshold(t, 0) != kInfThreshold)
                    throw std::runtime_error("finite threshold at e = 0");
        }
        return std::to_string(count) +
               " instances solved; decision tables threshold-exact, J even";
    });

    criterion(4, "estimator structure on every oracle instance", [&] {
        Check ck;
        for (const ProblemSpec& s : instances) {
            auto [vt, policy] = solve_discrete(s);
            ck.require(estimator_structure_check(s, policy),
                       "rule estimator not a best response");
        }
        return "exhaustive history walk on " + std::to_string(instances.size()) +
               " instances";
    });

    criterion(5, "majorization suite (1000 trials each)", [&] {
        Check ck;
        auto results = run_property_suite(1000, 8675309);
        for (const PropResult& r : results)
            ck.require(r.failures == 0,
                       r.property + ": " + std::to_string(r.failures) +
                           " failures");
        return std::to_string(results.size()) + " properties, zero failures";
    });

    criterion(6, "Monte Carlo agreement at one million rollouts", [&] {
        Check ck;
        Pmf u3(-1, {1.0 / 3, 1.0 / 3, 1.0 / 3});
        std::vector<ProblemSpec> sims = {
            make_walk(4, 0.6, 2, Pmf(-1, {0.25, 0.5, 0.25}),
                      Pmf(-1, {0.3, 0.4, 0.3}), Pmf(0, {0.25, 0.5, 0.25}),
                      Pmf(0, {0.5, 0.5}), {DistortionKind::power, 2.0}),
            make_walk(5, 0.4, 1, u3, Pmf(-1, {0.25, 0.5, 0.25}), Pmf::delta(1),
                      Pmf(0, {0.5, 0.5}), {DistortionKind::indicator, 2.0}),
            make_walk(4, 1.0, 2, Pmf::delta(0), Pmf(-1, {0.2, 0.6, 0.2}),
                      Pmf::delta(1), Pmf(0, {0.25, 0.5, 0.25}),
                      {DistortionKind::power, 1.0}),
        };
        std::string detail;
        for (std::size_t i = 0; i < sims.size(); ++i) {
            const ProblemSpec& s = sims[i];
            auto [vt, policy] = solve_discrete(s);
            double predicted = expected_cost(vt, s);
            double exact = exact_cost(s, policy);
            ck.require(std::abs(exact - predicted) <= 1e-9,
                       "exact_cost vs DP J1: " + fmt(exact - predicted));
            McStats st = monte_carlo(1'000'000, 1000 + i, [&](std::uint64_t sd) {
                return sample_trajectory(s, policy, sd).total_cost;
            });
            double dev = std::abs(st.mean - exact);
            ck.require(dev <= 3.0 * st.se,
                       "MC deviation " + fmt(dev) + " > 3 se " + fmt(st.se));
            if (!detail.empty()) detail += ", ";
            detail += fmt(dev / st.se) + " se";
        }
        return "3 instances; deviations " + detail;
    });

    criterion(7, "gaussian radial validation", [&] {
        Check ck;
        std::string detail;

        // (a) n = 1: radial DP vs independent signed-grid DP, sup norm.
        {
            ProblemSpec s;
            s.horizon = 3;
            s.comm_cost = 1.0;
            s.battery_cap = 1;
            s.initial_energy = Pmf::delta(1);
            s.harvest = Pmf(0, {0.5, 0.5});
            s.source.kind = SourceKind::gaussian_radial;
            s.source.gaussian = GaussianSpec{1, 1.0, 1.0, 1.0};
            s.validate_and_clip();
            double h = 0.01 * std::sqrt(2.0), rmax = 16.0;
            RadialGridCfg cfg{h, rmax, 64};
            auto [vt, policy] = solve_gaussian_radial(s, cfg);
            resched_test::SignedDpResult sg =
                resched_test::signed_dp(s, h, rmax, 64);
            double worst = 0.0;
            for (int t = 1; t <= s.horizon; ++t)
                for (std::size_t i = 0; i < vt.grid_size; ++i)
                    for (int e = 0; e <= 1; ++e)
                        worst = std::max(
                            worst,
                            std::abs(vt.j_at(t, i, e) -
                                     sg.J[static_cast<std::size_t>(t - 1)]
                                         [i + static_cast<std::size_t>(sg.m)]
                                         [static_cast<std::size_t>(e)]));
            ck.require(worst <= 1e-6,
                       "signed-grid oracle sup diff " + fmt(worst));
            detail += "(a) sup " + fmt(worst);
        }

        // (b) T = 1 threshold = sqrt(c) within one grid step, n in {1,2,3}.
        {
            for (int n : {1, 2, 3}) {
                ProblemSpec s;
                s.horizon = 1;
                s.comm_cost = 2.0;
                s.battery_cap = 1;
                s.initial_energy = Pmf::delta(1);
                s.harvest = Pmf::delta(0);
                s.source.kind = SourceKind::gaussian_radial;
                s.source.gaussian = GaussianSpec{n, 1.0, 1.0, 1.0};
                s.validate_and_clip();
                RadialGridCfg cfg{0.01, 6.0, 64};
                auto [vt, policy] = solve_gaussian_radial(s, cfg);
                double err = std::abs(policy.threshold(1, 1) - std::sqrt(2.0));
                ck.require(err <= cfg.h + 1e-12,
                           "T=1 threshold off sqrt(c) by " + fmt(err));
            }
            detail += ", (b) sqrt(c) ok";
        }

        // (c) closed-loop simulation vs DP prediction, n=2, T=4, lambda=1.
        {
            ProblemSpec s;
            s.horizon = 4;
            s.comm_cost = 1.0;
            s.battery_cap = 1;
            s.initial_energy = Pmf::delta(1);
            s.harvest = Pmf(0, {0.5, 0.5});
            s.source.kind = SourceKind::gaussian_radial;
            s.source.gaussian = GaussianSpec{2, 1.0, 1.0, 1.0};
            s.validate_and_clip();
            RadialGridCfg cfg{};
            auto [vt, policy] = solve_gaussian_radial(s, cfg);
            double predicted = expected_radial_cost(vt, s);
            McStats st = monte_carlo(100'000, 4242, [&](std::uint64_t sd) {
                return sample_trajectory_gaussian(s, policy, sd).total_cost;
            });
            double dev = std::abs(st.mean - predicted);
            ck.require(dev <= 3.0 * st.se,
                       "closed-loop deviation " + fmt(dev) + " > 3 se " +
                           fmt(st.se));
            detail += ", (c) " + fmt(dev / st.se) + " se";
        }

        // (d) halving h: the second delta is at most twice the first.
        {
            ProblemSpec s;
            s.horizon = 2;
            s.comm_cost = 1.0;
            s.battery_cap = 1;
            s.initial_energy = Pmf::delta(1);
            s.harvest = Pmf::delta(1);
            s.source.kind = SourceKind::gaussian_radial;
            s.source.gaussian = GaussianSpec{2, 1.0, 1.0, 1.0};
            s.validate_and_clip();
            auto j1 = [&](double h) {
                RadialGridCfg cfg{h, 12.0, 64};
                auto [vt, policy] = solve_gaussian_radial(s, cfg);
                return expected_radial_cost(vt, s);
            };
            double a = j1(0.04), b = j1(0.02), c = j1(0.01);
            double d1 = std::abs(a - b), d2 = std::abs(b - c);
            ck.require(d2 <= 2.0 * d1 + 1e-12,
                       "second halving delta " + fmt(d2) + " > 2 x " + fmt(d1));
            detail += ", (d) deltas " + fmt(d1) + " -> " + fmt(d2);
        }
        return detail;
    });

    criterion(8, "special-case presets", [&] {
        Check ck;
        // no_constraint with c = 0: all-zero thresholds, zero cost.
        {
            ProblemSpec s = make_walk(3, 0.0, 2, Pmf(-1, {0.25, 0.5, 0.25}),
                                      Pmf(-1, {0.25, 0.5, 0.25}),
                                      Pmf::delta(1), Pmf::delta(0),
                                      {DistortionKind::power, 2.0});
            apply_preset(s, Preset::no_constraint);
            auto [vt, policy] = solve_discrete(s);
            for (int t = 1; t <= s.horizon; ++t)
                ck.require(policy.threshold(t, 1) == 0.0,
                           "no_constraint: nonzero threshold");
            ck.require(expected_cost(vt, s) == 0.0, "no_constraint: nonzero cost");
            ck.require(exact_cost(s, policy) == 0.0,
                       "no_constraint: nonzero closed-loop cost");
        }
        // fixed_budget with K = 0 on an iid uniform source: the sensor never
        // has energy, thresholds on the reachable (e = 0) states are inf, and
        // the cost is the never-transmit distortion T*(m-1)/m.
        {
            int T = 4, m = 3;
            Pmf uniform(-1, {1.0 / 3, 1.0 / 3, 1.0 / 3});
            ProblemSpec s = make_walk(T, 0.5, 1, uniform, uniform, Pmf::delta(0),
                                      Pmf(0, {0.5, 0.5}),
                                      {DistortionKind::indicator, 2.0},
                                      SourceKind::iid);
            apply_preset(s, Preset::fixed_budget);
            ck.require(s.harvest.at(0) == 1.0, "fixed_budget: harvest not zero");
            auto [vt, policy] = solve_iid(s);
            for (int t = 1; t <= T; ++t)
                ck.require(policy.threshold(t, 0) == kInfThreshold,
                           "fixed_budget: finite threshold at e=0");
            double closed_form = T * (m - 1.0) / m;
            double cost = expected_cost(vt, s);
            ck.require(std::abs(cost - closed_form) <= 1e-12,
                       "fixed_budget cost " + fmt(cost) + " != " +
                           fmt(closed_form));
            ck.require(std::abs(exact_cost(s, policy) - closed_form) <= 1e-12,
                       "fixed_budget closed-loop cost mismatch");
        }
        return "no_constraint and fixed_budget match closed forms";
    });

    if (failures == 0) std::printf("all acceptance criteria passed\n");
    return failures;
}
