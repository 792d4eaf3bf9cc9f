#ifndef RESCHED_SIMULATE_HPP
#define RESCHED_SIMULATE_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "resched/model.hpp"
#include "resched/policy.hpp"

namespace resched {

/// Sampling helpers on top of mt19937_64. Uniform and normal variates are
/// derived with explicit formulas so a seed pins the trace bit-for-bit
/// regardless of the standard library's distribution internals.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform01() {
        return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    }

    double normal(double stddev) {
        if (have_spare_) {
            have_spare_ = false;
            return spare_ * stddev;
        }
        double u1 = uniform01(), u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a) * stddev;
    }

    /// Inverse-CDF draw from a finite pmf.
    int draw(const Pmf& p) {
        double u = uniform01();
        double acc = 0.0;
        for (int x = p.lo(); x <= p.hi(); ++x) {
            acc += p.at(x);
            if (u < acc) return x;
        }
        return p.hi();
    }

private:
    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct TraceStep {
    int t;
    double x;          ///< source state (integer-valued for discrete kinds)
    int e;             ///< energy at the start of the step
    int u;             ///< transmit decision
    bool received;     ///< y != epsilon
    double xhat;       ///< estimate after observing y_t
    double stage_cost; ///< c*u + rho(x, xhat)
};

struct Trace {
    std::vector<TraceStep> steps;
    double total_cost = 0.0;
};

/// Closed-loop rollout of a threshold policy on a discrete source.
/// The estimator holds the last received value (initial estimate 0); for
/// i.i.d. sources it falls back to the source mean center (0) whenever
/// nothing is received, and thresholds are tested about that center.
inline Trace sample_trajectory(const ProblemSpec& spec,
                               const ThresholdPolicy& policy,
                               std::uint64_t rng_seed) {
    if (spec.source.kind == SourceKind::gaussian_radial)
        throw std::invalid_argument("sample_trajectory: discrete sources only");
    if (policy.horizon != spec.horizon || policy.battery_cap != spec.battery_cap)
        throw std::invalid_argument("sample_trajectory: policy does not match spec");
    const bool iid_source = spec.source.kind == SourceKind::iid;
    const bool mean_rule = policy.estimator == EstimatorRule::last_received_or_mean;

    Sampler s(rng_seed);
    Trace trace;
    trace.steps.reserve(static_cast<std::size_t>(spec.horizon));

    int x = s.draw(spec.source.init);
    int e = s.draw(spec.initial_energy);
    double xhat_prev = 0.0;

    for (int t = 1; t <= spec.horizon; ++t) {
        double center = iid ? 0.0 : xhat_prev;
        int u = policy.transmit(t, e, std::abs(x - center)) ? 1 : 0;
        double xhat = u ? static_cast<double>(x) : center;
        double cost = spec.comm_cost * u +
                      stage_distortion(spec.distortion, x, xhat);
        trace.steps.push_back({t, static_cast<double>(x), e, u, u != 0, xhat, cost});
        trace.total_cost += cost;

        int n = s.draw(spec.harvest);
        e = energy_step(e, u, n, spec.battery_cap);
        int z = s.draw(spec.source.noise);
        x = iid ? z : x + z;
        xhat_prev = xhat;
    }
    return trace;
}

struct GaussianTraceStep {
    int t;
    int e;
    int u;
    double err_norm;   ///< ||x - lambda*xhat_{t-1}|| before the decision
    double stage_cost; ///< c*u + ||x - xhat||^2
};

struct GaussianTrace {
    std::vector<GaussianTraceStep> steps;
    double total_cost = 0.0;
};

/// Closed-loop rollout for the isotropic Gaussian source. The orthogonal
/// matrix is taken as the identity: thresholds and costs depend on it only
/// through norms, so identity-A traces are cost-equivalent.
inline GaussianTrace sample_trajectory_gaussian(const ProblemSpec& spec,
                                                const ThresholdPolicy& policy,
                                                std::uint64_t rng_seed) {
    if (spec.source.kind != SourceKind::gaussian_radial)
        throw std::invalid_argument("sample_trajectory_gaussian: needs a gaussian source");
    const GaussianSpec& g = *spec.source.gaussian;
    const double lambda = g.lambda;

    Sampler s(rng_seed);
    GaussianTrace trace;
    std::vector<double> x(static_cast<std::size_t>(g.dim));
    std::vector<double> xhat(static_cast<std::size_t>(g.dim), 0.0);
    for (auto& xi : x) xi = s.normal(std::sqrt(g.s1));
    int e = s.draw(spec.initial_energy);

    for (int t = 1; t <= spec.horizon; ++t) {
        double err2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double diff = x[i] - lambda * xhat[i];
            err2 += diff * diff;
        }
        double err = std::sqrt(err2);
        int u = policy.transmit(t, e, err) ? 1 : 0;
        if (u) {
            xhat = x;
        } else {
            for (auto& xi : xhat) xi *= lambda;
        }
        double cost = spec.comm_cost * u + stage_distortion(x, xhat);
        trace.steps.push_back({t, e, u, err, cost});
        trace.total_cost += cost;

        int n = s.draw(spec.harvest);
        e = energy_step(e, u, n, spec.battery_cap);
        for (auto& xi : x) xi = lambda * xi + s.normal(std::sqrt(g.s2));
    }
    return trace;
}

} // namespace resched

#endif
