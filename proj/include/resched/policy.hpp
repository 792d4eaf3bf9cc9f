#ifndef RESCHED_POLICY_HPP
#define RESCHED_POLICY_HPP

#include <limits>
#include <vector>

namespace resched {

inline constexpr double kInfThreshold = std::numeric_limits<double>::infinity();

/// Estimate to use when nothing is received: hold the last received value
/// (random-walk and Gaussian sources) or fall back to the source mean
/// (i.i.d. sources, where past receipts carry no information).
enum class EstimatorRule {
    last_received_or_zero,
    last_received_or_mean,
};

/// Per-(time, energy) transmission thresholds plus the companion estimator.
/// Transmit iff |d| >= n(t, e) (discrete) or ||d|| >= n(t, e) (radial).
/// n(t, 0) is always +inf: transmission is impossible without energy.
struct ThresholdPolicy {
    int horizon = 0;
    int battery_cap = 0;
    /// n[t-1][e], t in 1..T, e in 0..B. +inf means never transmit.
    std::vector<std::vector<double>> n;
    EstimatorRule estimator = EstimatorRule::last_received_or_zero;
    /// Between receipts a Gaussian estimate decays as a -> lambda * A * a.
    double gaussian_lambda = 1.0;

    double threshold(int t, int e) const {
        return n[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(e)];
    }

    bool transmit(int t, int e, double dist_from_center) const {
        return e > 0 && dist_from_center >= threshold(t, e);
    }
};

} // namespace resched

#endif
