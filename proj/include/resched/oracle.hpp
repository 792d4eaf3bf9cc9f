#ifndef RESCHED_ORACLE_HPP
#define RESCHED_ORACLE_HPP

#include <cstdint>
#include <tuple>
#include <vector>

#include "resched/belief.hpp"
#include "resched/errors.hpp"
#include "resched/solver.hpp"

namespace resched {

inline constexpr double kOracleMassTol = 1e-12;

/// Ground-truth comparison of the threshold DP against exhaustive strategy
/// enumeration on a tiny instance.
struct OracleReport {
    double best_cost = 0.0;
    std::uint64_t best_strategy_id = 0;
    double solver_cost = 0.0;
    double gap = 0.0; ///< solver_cost - best_cost
    double strategy_count = 0.0;
    bool threshold_witness = false;
};

namespace detail {

/// One pre-transmission node of the enumeration tree: the belief, its
/// positive-probability decision points with e > 0, and the branch children
/// shared by every local decision map.
struct OracleNode {
    const ProblemSpec& spec;

    struct FreePoint {
        int x;
        int e;
        double p;
    };

    static std::vector<FreePoint> free_points(const JointBelief& pi) {
        std::vector<FreePoint> f;
        for (int x = pi.lo(); x <= pi.hi(); ++x)
            for (int e = 1; e <= pi.battery_cap(); ++e)
                if (pi.at(x, e) > kOracleMassTol) f.push_back({x, e, pi.at(x, e)});
        return f;
    }

    /// Retained belief for the silent branch when the map transmits exactly
    /// on the masked subset of free points.
    static JointBelief silent_belief(const JointBelief& pi,
                                     const std::vector<FreePoint>& f,
                                     std::uint32_t mask, double eps_mass) {
        JointBelief theta = pi;
        for (std::size_t i = 0; i < f.size(); ++i)
            if (mask & (1u << i)) theta.ref(f[i].x, f[i].e) = 0.0;
        for (int x = theta.lo(); x <= theta.hi(); ++x)
            for (int e = 0; e <= theta.battery_cap(); ++e)
                theta.ref(x, e) /= eps_mass;
        return theta;
    }
};

/// Deterministic collapse of the paper's threshold form: per energy level,
/// transmission is monotone in |x - a|, and at the boundary distance a
/// transmit at a+k forces a transmit at a-k.
inline bool threshold_form(const std::vector<OracleNode::FreePoint>& f,
                           std::uint32_t mask, int a) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!(mask & (1u << i))) continue;
        int di = std::abs(f[i].x - a);
        for (std::size_t j = 0; j < f.size(); ++j) {
            if (f[j].e != f[i].e || (mask & (1u << j))) continue;
            int dj = std::abs(f[j].x - a);
            if (dj > di) return false;
            if (dj == di && f[j].x < a && f[i].x > a) return false;
        }
    }
    return true;
}

struct EnumResult {
    double count = 1.0;
    double best = 0.0;
    std::uint64_t best_id = 0;
    bool witness = true;
};

struct Enumerator {
    const ProblemSpec& spec;
    bool count_only;

    EnumResult visit(int t, const JointBelief& pi, int center) {
        EnumResult res;
        if (t > spec.horizon) return res;
        const bool iid = spec.source.kind == SourceKind::iid;
        const int B = spec.battery_cap;
        auto f = OracleNode::free_points(pi);
        if (f.size() > 25)
            throw BudgetExceeded("enumerate_all: too many decision points "
                                 "at one node",
                                 std::pow(2.0, static_cast<double>(f.size())),
                                 static_cast<double>(1u << 25));
        const double total = pi.total_mass();

        // Transmitted children are the same for every local map.
        std::vector<EnumResult> tx_child(f.size());
        std::vector<double> tx_distortion(f.size(), 0.0);
        if (!count_only || t < spec.horizon)
            for (std::size_t i = 0; i < f.size(); ++i) {
                if (t == spec.horizon) continue;
                JointBelief theta = JointBelief::point(f[i].x, f[i].e - 1, B);
                tx_child[i] = visit(t + 1,
                                    pre_update(theta, spec.source.noise,
                                               spec.harvest, B, spec.source.kind),
                                    iid ? 0 : f[i].x);
            }

        double best = std::numeric_limits<double>::infinity();
        std::uint64_t best_id = 0;
        bool witness = false;
        double count = 0.0;
        std::vector<std::uint32_t> opt_masks;
        std::vector<bool> opt_witness;

        const std::uint32_t nmask = 1u << f.size();
        for (std::uint32_t mask = 0; mask < nmask; ++mask) {
            double tx_mass = 0.0;
            for (std::size_t i = 0; i < f.size(); ++i)
                if (mask & (1u << i)) tx_mass += f[i].p;
            double eps_mass = total - tx_mass;
            bool has_eps = eps_mass > kOracleMassTol;

            double cost = spec.comm_cost * tx_mass;
            double block = 1.0;
            std::uint64_t children_id = 0;
            bool child_witness = true;
            for (std::size_t i = 0; i < f.size(); ++i) {
                if (!(mask & (1u << i))) continue;
                cost += f[i].p * tx_child[i].best;
                children_id = children_id *
                                  static_cast<std::uint64_t>(tx_child[i].count) +
                              tx_child[i].best_id;
                block *= tx_child[i].count;
                child_witness = child_witness && tx_child[i].witness;
            }
            if (has_eps) {
                JointBelief theta = OracleNode::silent_belief(pi, f, mask, eps_mass);
                EnumResult eps_child;
                double distortion = 0.0;
                if (!count_only) {
                    distortion = best_estimate(theta, spec.distortion).second;
                }
                if (t < spec.horizon)
                    eps_child = visit(t + 1,
                                      pre_update(theta, spec.source.noise,
                                                 spec.harvest, B, spec.source.kind),
                                      iid ? 0 : center);
                cost += eps_mass * (distortion + eps_child.best);
                children_id = children_id *
                                  static_cast<std::uint64_t>(eps_child.count) +
                              eps_child.best_id;
                block *= eps_child.count;
                child_witness = child_witness && eps_child.witness;
            }

            if (!count_only) {
                if (cost < best - 1e-12) {
                    best = cost;
                    best_id = static_cast<std::uint64_t>(count) + children_id;
                    opt_masks.clear();
                    opt_witness.clear();
                }
                if (cost <= best + 1e-9) {
                    opt_masks.push_back(mask);
                    opt_witness.push_back(child_witness);
                }
            }
            count += block;
        }

        if (!count_only)
            for (std::size_t k = 0; k < opt_masks.size(); ++k)
                if (opt_witness[k] && threshold_form(f, opt_masks[k], center)) {
                    witness = true;
                    break;
                }

        res.count = count;
        res.best = count_only ? 0.0 : best;
        res.best_id = best_id;
        res.witness = witness;
        return res;
    }
};

} // namespace detail

/// Exhaustive minimum over all deterministic sensor strategies measurable
/// with respect to (X_t, E_t, Y_{1:t-1}), with the exact best-response
/// estimator computed pointwise per history, compared against the threshold
/// DP's expected cost. The strategy space is the product of all local
/// decision maps over positive-probability (x, e) points per history; the
/// count is verified against the budget before any cost is evaluated.
inline OracleReport enumerate_all(const ProblemSpec& spec, double budget = 1e6) {
    if (spec.source.kind == SourceKind::gaussian_radial)
        throw ConfigError("enumerate_all: discrete sources only");

    JointBelief pi1 =
        JointBelief::product(spec.source.init, spec.initial_energy, spec.battery_cap);

    detail::Enumerator counter{spec, true};
    double count = counter.visit(1, pi1, 0).count;
    if (count > budget)
        throw BudgetExceeded("enumerate_all: strategy count over budget", count,
                             budget);

    detail::Enumerator full{spec, false};
    detail::EnumResult r = full.visit(1, pi1, 0);

    auto [vt, policy] = spec.source.kind == SourceKind::iid ? solve_iid(spec)
                                                            : solve_discrete(spec);
    (void)policy;

    OracleReport report;
    report.best_cost = r.best;
    report.best_strategy_id = r.best_id;
    report.solver_cost = expected_cost(vt, spec);
    report.gap = report.solver_cost - report.best_cost;
    report.strategy_count = r.count;
    report.threshold_witness = r.witness;
    return report;
}

namespace detail {

struct StrategyDumper {
    const ProblemSpec& spec;
    std::size_t limit;

    std::vector<double> visit(int t, const JointBelief& pi, int center) {
        if (t > spec.horizon) return {0.0};
        const bool iid = spec.source.kind == SourceKind::iid;
        const int B = spec.battery_cap;
        auto f = OracleNode::free_points(pi);
        const double total = pi.total_mass();

        std::vector<std::vector<double>> tx_costs(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            JointBelief theta = JointBelief::point(f[i].x, f[i].e - 1, B);
            tx_costs[i] = visit(t + 1,
                                pre_update(theta, spec.source.noise, spec.harvest,
                                           B, spec.source.kind),
                                iid ? 0 : f[i].x);
        }

        std::vector<double> out;
        const std::uint32_t nmask = 1u << f.size();
        for (std::uint32_t mask = 0; mask < nmask; ++mask) {
            double tx_mass = 0.0;
            for (std::size_t i = 0; i < f.size(); ++i)
                if (mask & (1u << i)) tx_mass += f[i].p;
            double eps_mass = total - tx_mass;

            std::vector<double> combo{spec.comm_cost * tx_mass};
            auto cross = [&combo](double p, const std::vector<double>& child) {
                std::vector<double> next;
                next.reserve(combo.size() * child.size());
                for (double v : combo)
                    for (double cv : child) next.push_back(v + p * cv);
                combo = std::move(next);
            };
            for (std::size_t i = 0; i < f.size(); ++i)
                if (mask & (1u << i)) cross(f[i].p, tx_costs[i]);
            if (eps_mass > kOracleMassTol) {
                JointBelief theta = OracleNode::silent_belief(pi, f, mask, eps_mass);
                double distortion = best_estimate(theta, spec.distortion).second;
                std::vector<double> eps_costs =
                    visit(t + 1,
                          pre_update(theta, spec.source.noise, spec.harvest, B,
                                     spec.source.kind),
                          iid ? 0 : center);
                for (double& cv : eps_costs) cv += distortion;
                cross(eps_mass, eps_costs);
            }
            for (double v : combo) out.push_back(v);
            if (out.size() > limit)
                throw BudgetExceeded("strategy dump over limit",
                                     static_cast<double>(out.size()),
                                     static_cast<double>(limit));
        }
        return out;
    }
};

} // namespace detail

/// Exact cost of every enumerated strategy, indexed by strategy id.
/// Only sensible for small instances; guarded by the limit.
inline std::vector<double> strategy_cost_dump(const ProblemSpec& spec,
                                              std::size_t limit = 65536) {
    JointBelief pi1 =
        JointBelief::product(spec.source.init, spec.initial_energy, spec.battery_cap);
    detail::StrategyDumper d{spec, limit};
    return d.visit(1, pi1, 0);
}

/// Belief-space backward induction restricted to deterministic threshold
/// prescriptions about the running estimate: at each information state the
/// minimization ranges over all per-energy thresholds n(e) in {0..D, inf}.
/// Returns the optimal expected total cost within that family.
inline double threshold_family_dp(const ProblemSpec& spec,
                                  std::uint64_t node_budget = 1'000'000) {
    if (spec.source.kind == SourceKind::gaussian_radial)
        throw ConfigError("threshold_family_dp: discrete sources only");
    const bool iid = spec.source.kind == SourceKind::iid;
    const int B = spec.battery_cap;

    std::uint64_t nodes = 0;
    auto visit = [&](auto&& self, int t, const JointBelief& pi,
                     int center) -> double {
        if (t > spec.horizon) return 0.0;
        if (++nodes > node_budget)
            throw BudgetExceeded("threshold_family_dp: belief tree too large",
                                 static_cast<double>(nodes),
                                 static_cast<double>(node_budget));

        int dmax = 0;
        for (int x = pi.lo(); x <= pi.hi(); ++x)
            for (int e = 0; e <= B; ++e)
                if (pi.at(x, e) > kOracleMassTol)
                    dmax = std::max(dmax, std::abs(x - center));

        // Transmitted children do not depend on the chosen thresholds.
        std::vector<std::vector<double>> tx_tail(
            static_cast<std::size_t>(pi.hi() - pi.lo() + 1),
            std::vector<double>(static_cast<std::size_t>(B) + 1, 0.0));
        for (int x = pi.lo(); x <= pi.hi(); ++x)
            for (int e = 1; e <= B; ++e)
                if (pi.at(x, e) > kOracleMassTol && t < spec.horizon) {
                    JointBelief theta = JointBelief::point(x, e - 1, B);
                    tx_tail[static_cast<std::size_t>(x - pi.lo())]
                           [static_cast<std::size_t>(e)] =
                               self(self, t + 1,
                                    pre_update(theta, spec.source.noise,
                                               spec.harvest, B, spec.source.kind),
                                    iid ? 0 : x);
                }

        // Odometer over per-energy thresholds; digit dmax+1 encodes inf.
        std::vector<int> digits(static_cast<std::size_t>(B) + 1, 0);
        double best = std::numeric_limits<double>::infinity();
        while (true) {
            std::vector<double> n_by_e(static_cast<std::size_t>(B) + 1,
                                       kInfThreshold);
            for (int e = 1; e <= B; ++e)
                if (digits[static_cast<std::size_t>(e)] <= dmax)
                    n_by_e[static_cast<std::size_t>(e)] =
                        digits[static_cast<std::size_t>(e)];
            Prescription gamma = Prescription::threshold(
                pi.lo(), pi.hi() - pi.lo() + 1, B, center, n_by_e);

            double cost = 0.0;
            double eps_mass = 0.0;
            for (int x = pi.lo(); x <= pi.hi(); ++x)
                for (int e = 0; e <= B; ++e) {
                    double p = pi.at(x, e);
                    if (p <= 0.0) continue;
                    double gxe = gamma.at(x, e);
                    eps_mass += p * (1.0 - gxe);
                    if (gxe > 0.0)
                        cost += p * (spec.comm_cost +
                                     tx_tail[static_cast<std::size_t>(x - pi.lo())]
                                            [static_cast<std::size_t>(e)]);
                }
            if (eps_mass > kBeliefMassTol) {
                JointBelief theta = post_update(pi, gamma, std::nullopt);
                double distortion = best_estimate(theta, spec.distortion).second;
                double tail = 0.0;
                if (t < spec.horizon)
                    tail = self(self, t + 1,
                                pre_update(theta, spec.source.noise, spec.harvest,
                                           B, spec.source.kind),
                                iid ? 0 : center);
                cost += eps_mass * (distortion + tail);
            }
            best = std::min(best, cost);

            int e = 1;
            while (e <= B && ++digits[static_cast<std::size_t>(e)] > dmax + 1) {
                digits[static_cast<std::size_t>(e)] = 0;
                ++e;
            }
            if (e > B) break;
        }
        return best;
    };

    JointBelief pi1 =
        JointBelief::product(spec.source.init, spec.initial_energy, spec.battery_cap);
    return visit(visit, 1, pi1, 0);
}

/// True iff the companion estimator (last received value, 0 before any
/// receipt) is a pointwise best response on every reachable history under
/// the given sensor policy: its expected distortion matches the exact
/// posterior minimum at every node.
inline bool estimator_structure_check(const ProblemSpec& spec,
                                      const ThresholdPolicy& sensor,
                                      std::uint64_t node_budget = 10'000'000) {
    bool ok = true;
    PolicyTreeHooks hooks;
    hooks.on_post = [&](int, const JointBelief& theta, int rule_estimate, double) {
        double best = best_estimate(theta, spec.distortion).second;
        std::vector<double> marg = theta.x_marginal();
        double rule_value = 0.0;
        for (int x = theta.lo(); x <= theta.hi(); ++x)
            rule_value += marg[static_cast<std::size_t>(x - theta.lo())] *
                          spec.distortion.of_abs(std::abs(x - rule_estimate));
        if (rule_value > best + 1e-9) ok = false;
    };
    exact_cost(spec, sensor, hooks, node_budget);
    return ok;
}

} // namespace resched

#endif
