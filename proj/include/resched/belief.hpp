#ifndef RESCHED_BELIEF_HPP
#define RESCHED_BELIEF_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "resched/errors.hpp"
#include "resched/model.hpp"
#include "resched/policy.hpp"

namespace resched {

inline constexpr double kBeliefMassTol = 1e-10;

/// Probability table over (source value x, energy level e), the estimator's
/// pre- or post-transmission information state. Immutable in spirit: every
/// update returns a fresh table.
class JointBelief {
public:
    JointBelief(int grid_lo, int battery_cap, std::vector<double> table)
        : lo_(grid_lo), B_(battery_cap), tab_(std::move(table)) {
        if (tab_.empty() || tab_.size() % static_cast<std::size_t>(B_ + 1) != 0)
            throw std::invalid_argument("JointBelief: table shape mismatch");
    }

    static JointBelief product(const Pmf& x_dist, const Pmf& e_dist, int B) {
        std::vector<double> tab(x_dist.size() * static_cast<std::size_t>(B + 1), 0.0);
        JointBelief out(x_dist.lo(), B, std::move(tab));
        for (int x = x_dist.lo(); x <= x_dist.hi(); ++x)
            for (int e = 0; e <= B; ++e)
                out.ref(x, e) = x_dist.at(x) * e_dist.at(e);
        return out;
    }

    static JointBelief point(int x, int e, int B) {
        std::vector<double> tab(static_cast<std::size_t>(B + 1), 0.0);
        JointBelief out(x, B, std::move(tab));
        out.ref(x, e) = 1.0;
        return out;
    }

    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(tab_.size() / (B_ + 1)) - 1; }
    int battery_cap() const { return B_; }

    double at(int x, int e) const {
        if (x < lo_ || x > hi() || e < 0 || e > B_) return 0.0;
        return tab_[idx(x, e)];
    }
    double& ref(int x, int e) { return tab_[idx(x, e)]; }

    double total_mass() const {
        double s = 0.0;
        for (double v : tab_) s += v;
        return s;
    }

    std::vector<double> x_marginal() const {
        std::vector<double> m(tab_.size() / (B_ + 1), 0.0);
        for (std::size_t i = 0; i < m.size(); ++i)
            for (int e = 0; e <= B_; ++e)
                m[i] += tab_[i * (B_ + 1) + e];
        return m;
    }

    /// Column theta(., e) as a weight vector over the x grid.
    std::vector<double> energy_slice(int e) const {
        std::vector<double> m(tab_.size() / (B_ + 1), 0.0);
        for (std::size_t i = 0; i < m.size(); ++i)
            m[i] = tab_[i * (B_ + 1) + static_cast<std::size_t>(e)];
        return m;
    }

private:
    std::size_t idx(int x, int e) const {
        return static_cast<std::size_t>(x - lo_) * (B_ + 1) +
               static_cast<std::size_t>(e);
    }
    int lo_;
    int B_;
    std::vector<double> tab_;
};

/// Transmission-probability table gamma(x, e) handed to the sensor.
/// gamma(., 0) = 0 always: the sensor cannot transmit on an empty battery.
class Prescription {
public:
    Prescription(int grid_lo, int battery_cap, std::vector<double> vals)
        : lo_(grid_lo), B_(battery_cap), g_(std::move(vals)) {
        for (std::size_t i = 0; i + B_ < g_.size(); i += B_ + 1)
            if (g_[i] != 0.0)
                throw std::invalid_argument("Prescription: gamma(x, 0) must be 0");
    }

    /// Deterministic threshold prescription: transmit iff e > 0 and
    /// |x - center| >= n_by_energy[e].
    static Prescription threshold(int grid_lo, int grid_size, int battery_cap,
                                  int center,
                                  const std::vector<double>& n_by_energy) {
        std::vector<double> vals(static_cast<std::size_t>(grid_size) *
                                     (battery_cap + 1),
                                 0.0);
        Prescription p(grid_lo, battery_cap, std::move(vals));
        for (int x = grid_lo; x < grid_lo + grid_size; ++x)
            for (int e = 1; e <= battery_cap; ++e)
                if (std::abs(x - center) >= n_by_energy[static_cast<std::size_t>(e)])
                    p.ref(x, e) = 1.0;
        return p;
    }

    double at(int x, int e) const {
        if (e == 0) return 0.0;
        int i = x - lo_;
        if (i < 0 || static_cast<std::size_t>(i) * (B_ + 1) >= g_.size() || e < 0 ||
            e > B_)
            return 0.0;
        return g_[static_cast<std::size_t>(i) * (B_ + 1) + static_cast<std::size_t>(e)];
    }
    double& ref(int x, int e) {
        return g_[static_cast<std::size_t>(x - lo_) * (B_ + 1) +
                  static_cast<std::size_t>(e)];
    }

private:
    int lo_;
    int B_;
    std::vector<double> g_;
};

/// y_t: the transmitted (x, e) pair, or nothing (epsilon).
using Observation = std::optional<std::pair<int, int>>;

/// One time step of the estimator's pre-transmission belief:
///   pi(x, e) = sum_{x', e'} P(X+ = x | x') P(E+ = e | E' = e') theta(x', e')
/// The source kernel is convolution with the noise pmf (random walk) or a
/// reset to the noise pmf (i.i.d.); the energy kernel is harvest-then-cap
/// from the post-transmission level e' (the U subtraction already happened
/// in post_update).
inline JointBelief pre_update(const JointBelief& theta, const Pmf& noise,
                              const Pmf& harvest, int B,
                              SourceKind kind = SourceKind::random_walk) {
    const int xs = theta.hi() - theta.lo() + 1;

    // Energy first: tmp(x', e) = sum_{e'} theta(x', e') P(min(e'+N, B) = e).
    std::vector<double> tmp(static_cast<std::size_t>(xs) * (B + 1), 0.0);
    for (int xi = 0; xi < xs; ++xi)
        for (int ep = 0; ep <= B; ++ep) {
            double mass = theta.at(theta.lo() + xi, ep);
            if (mass == 0.0) continue;
            for (int n = harvest.lo(); n <= harvest.hi(); ++n)
                tmp[static_cast<std::size_t>(xi) * (B + 1) +
                    static_cast<std::size_t>(std::min(ep + n, B))] +=
                    mass * harvest.at(n);
        }

    if (kind == SourceKind::iid) {
        // X+ = Z, independent of x': the x profile resets to the noise pmf.
        std::vector<double> e_marg(static_cast<std::size_t>(B + 1), 0.0);
        for (int xi = 0; xi < xs; ++xi)
            for (int e = 0; e <= B; ++e)
                e_marg[static_cast<std::size_t>(e)] +=
                    tmp[static_cast<std::size_t>(xi) * (B + 1) +
                        static_cast<std::size_t>(e)];
        std::vector<double> out(noise.size() * static_cast<std::size_t>(B + 1), 0.0);
        JointBelief pi(noise.lo(), B, std::move(out));
        for (int x = noise.lo(); x <= noise.hi(); ++x)
            for (int e = 0; e <= B; ++e)
                pi.ref(x, e) = noise.at(x) * e_marg[static_cast<std::size_t>(e)];
        return pi;
    }

    // Random walk: convolve each energy column with the noise pmf.
    const int out_lo = theta.lo() + noise.lo();
    const int out_size = xs + static_cast<int>(noise.size()) - 1;
    std::vector<double> out(static_cast<std::size_t>(out_size) * (B + 1), 0.0);
    JointBelief pi(out_lo, B, std::move(out));
    for (int xi = 0; xi < xs; ++xi)
        for (int e = 0; e <= B; ++e) {
            double mass = tmp[static_cast<std::size_t>(xi) * (B + 1) +
                              static_cast<std::size_t>(e)];
            if (mass == 0.0) continue;
            for (int z = noise.lo(); z <= noise.hi(); ++z)
                pi.ref(theta.lo() + xi + z, e) += mass * noise.at(z);
        }
    return pi;
}

/// Conditioning on the observation: a received (x', e') collapses the belief
/// to a point mass at (x', e'-1); silence retains (1-gamma) * pi, normalized.
inline JointBelief post_update(const JointBelief& pi, const Prescription& gamma,
                               const Observation& y) {
    if (y) {
        auto [x, e] = *y;
        if (e <= 0 || pi.at(x, e) <= 0.0 || gamma.at(x, e) <= 0.0)
            throw InconsistentObservation(
                "post_update: observed (x=" + std::to_string(x) +
                ", e=" + std::to_string(e) + ") has zero probability");
        return JointBelief::point(x, e - 1, pi.battery_cap());
    }
    const int B = pi.battery_cap();
    std::vector<double> tab(static_cast<std::size_t>(pi.hi() - pi.lo() + 1) *
                                (B + 1),
                            0.0);
    JointBelief theta(pi.lo(), B, std::move(tab));
    double mass = 0.0;
    for (int x = pi.lo(); x <= pi.hi(); ++x)
        for (int e = 0; e <= B; ++e) {
            double w = (1.0 - gamma.at(x, e)) * pi.at(x, e);
            theta.ref(x, e) = w;
            mass += w;
        }
    if (mass <= 0.0)
        throw InconsistentObservation("post_update: epsilon branch has zero probability");
    for (int x = pi.lo(); x <= pi.hi(); ++x)
        for (int e = 0; e <= B; ++e) theta.ref(x, e) /= mass;
    return theta;
}

/// Minimizer of E[rho(X, a)] over the x-support hull, with its value.
/// Ties break toward the smallest a; for a.s.u. beliefs the center is
/// always in the argmin set, so the tie rule never degrades cost on-path.
inline std::pair<int, double> best_estimate(const JointBelief& theta,
                                            const DistortionSpec& d) {
    std::vector<double> marg = theta.x_marginal();
    int best_a = theta.lo();
    double best_v = std::numeric_limits<double>::infinity();
    for (int a = theta.lo(); a <= theta.hi(); ++a) {
        double v = 0.0;
        for (int x = theta.lo(); x <= theta.hi(); ++x)
            v += marg[static_cast<std::size_t>(x - theta.lo())] *
                 d.of_abs(std::abs(x - a));
        if (v < best_v - 1e-15) {
            best_v = v;
            best_a = a;
        }
    }
    return {best_a, best_v};
}

/// Hooks for observing the reachable belief tree of a fixed policy.
struct PolicyTreeHooks {
    /// Every pre-transmission node: (t, pre-belief, threshold center).
    std::function<void(int, const JointBelief&, int)> on_pre;
    /// Every positive-probability branch: (t, post-belief, rule estimate,
    /// branch probability).
    std::function<void(int, const JointBelief&, int, double)> on_post;
};

namespace detail {

struct PolicyTreeEval {
    const ProblemSpec& spec;
    const ThresholdPolicy& policy;
    const PolicyTreeHooks& hooks;
    std::uint64_t node_budget;
    std::uint64_t nodes = 0;

    double visit(int t, const JointBelief& pi, int center) {
        if (t > spec.horizon) return 0.0;
        if (++nodes > node_budget)
            throw BudgetExceeded("exact_cost: belief tree too large",
                                 static_cast<double>(nodes),
                                 static_cast<double>(node_budget));
        if (hooks.on_pre) hooks.on_pre(t, pi, center);

        const int B = spec.battery_cap;
        const bool iid = policy.estimator == EstimatorRule::last_received_or_mean;
        std::vector<double> n_by_e(static_cast<std::size_t>(B + 1), kInfThreshold);
        for (int e = 1; e <= B; ++e)
            n_by_e[static_cast<std::size_t>(e)] = policy.threshold(t, e);
        Prescription gamma = Prescription::threshold(
            pi.lo(), pi.hi() - pi.lo() + 1, B, center, n_by_e);

        double cost = 0.0;
        // Transmitted branches: estimate is exact, distortion zero.
        for (int x = pi.lo(); x <= pi.hi(); ++x)
            for (int e = 1; e <= B; ++e) {
                double p_branch = pi.at(x, e) * gamma.at(x, e);
                if (p_branch <= 0.0) continue;
                JointBelief theta = JointBelief::point(x, e - 1, B);
                if (hooks.on_post) hooks.on_post(t, theta, x, p_branch);
                double tail = visit(t + 1,
                                    pre_update(theta, spec.source.noise,
                                               spec.harvest, B, spec.source.kind),
                                    iid ? 0 : x);
                cost += p_branch * (spec.comm_cost + tail);
            }

        // Epsilon branch, pruned when gamma == 1 on the whole support.
        double eps_mass = 0.0;
        for (int x = pi.lo(); x <= pi.hi(); ++x)
            for (int e = 0; e <= B; ++e)
                eps_mass += pi.at(x, e) * (1.0 - gamma.at(x, e));
        if (eps_mass > kBeliefMassTol) {
            JointBelief theta = post_update(pi, gamma, std::nullopt);
            int estimate = iid ? 0 : center;
            if (hooks.on_post) hooks.on_post(t, theta, estimate, eps_mass);
            double distortion = 0.0;
            std::vector<double> marg = theta.x_marginal();
            for (int x = theta.lo(); x <= theta.hi(); ++x)
                distortion += marg[static_cast<std::size_t>(x - theta.lo())] *
                              spec.distortion.of_abs(std::abs(x - estimate));
            double tail = visit(t + 1,
                                pre_update(theta, spec.source.noise, spec.harvest,
                                           B, spec.source.kind),
                                estimate);
            cost += eps_mass * (distortion + tail);
        }
        return cost;
    }
};

} // namespace detail

/// Exact expected cost of (threshold sensor, companion estimator) by
/// exhaustive expansion of the observation tree. Error comes only from
/// float rounding; deterministic.
inline double exact_cost(const ProblemSpec& spec, const ThresholdPolicy& policy,
                         const PolicyTreeHooks& hooks = {},
                         std::uint64_t node_budget = 10'000'000) {
    if (spec.source.kind == SourceKind::gaussian_radial)
        throw std::invalid_argument("exact_cost: discrete sources only");
    if (policy.horizon != spec.horizon || policy.battery_cap != spec.battery_cap)
        throw std::invalid_argument("exact_cost: policy does not match spec");
    JointBelief pi1 =
        JointBelief::product(spec.source.init, spec.initial_energy, spec.battery_cap);
    detail::PolicyTreeEval eval{spec, policy, hooks, node_budget};
    return eval.visit(1, pi1, 0);
}

} // namespace resched

#endif
