#ifndef RESCHED_PMF_HPP
#define RESCHED_PMF_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "resched/errors.hpp"

namespace resched {

inline constexpr double kMassTol = 1e-12;

/// Finite probability mass function on a contiguous integer grid.
/// Weights may contain interior zeros; the grid itself is never trimmed.
class Pmf {
public:
    Pmf(int support_lo, std::vector<double> weights)
        : lo_(support_lo), w_(std::move(weights)) {
        if (w_.empty())
            throw std::invalid_argument("Pmf: empty weight list");
        double sum = 0.0;
        for (double v : w_) {
            if (!(v >= 0.0))
                throw std::invalid_argument("Pmf: negative or NaN weight");
            sum += v;
        }
        if (std::abs(sum - 1.0) > kMassTol)
            throw std::invalid_argument("Pmf: weights sum to " +
                                        std::to_string(sum) + ", expected 1");
    }

    /// Point mass at x.
    static Pmf delta(int x) { return Pmf(x, {1.0}); }

    /// Normalizes a raw weight list (sum may differ from 1 by more than the
    /// construction tolerance). Throws if the sum is not positive.
    static Pmf normalized(int support_lo, std::vector<double> weights) {
        double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
        if (!(sum > 0.0))
            throw std::invalid_argument("Pmf: weights sum to zero");
        for (double& v : weights) v /= sum;
        return Pmf(support_lo, std::move(weights));
    }

    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(w_.size()) - 1; }
    std::size_t size() const { return w_.size(); }
    const std::vector<double>& weights() const { return w_; }

    /// Probability at grid point x; zero off support.
    double at(int x) const {
        if (x < lo_ || x > hi()) return 0.0;
        return w_[static_cast<std::size_t>(x - lo_)];
    }

    double mean() const {
        double m = 0.0;
        for (std::size_t i = 0; i < w_.size(); ++i)
            m += (lo_ + static_cast<int>(i)) * w_[i];
        return m;
    }

    /// Largest absolute grid point of the support interval.
    int max_abs() const { return std::max(std::abs(lo()), std::abs(hi())); }

private:
    int lo_;
    std::vector<double> w_;
};

/// Outcome of a majorization test nu >= mu (in the prefix-sum order).
struct MajorizationVerdict {
    bool holds = false;
    /// Prefix length k at which the partial-sum inequality first fails.
    std::optional<int> first_violating_prefix;
    /// Total mass of nu minus total mass of mu.
    double sum_gap = 0.0;
};

/// True iff w(a+k) >= w(a-k) >= w(a+k+1) for all k >= 0, reading
/// off-support values as zero. Comparisons carry a 1e-12 slack. Works on
/// any non-negative weight vector, normalized or not.
inline bool asu_about(int lo, const std::vector<double>& w, int a) {
    auto at = [&](int x) -> double {
        int i = x - lo;
        if (i < 0 || i >= static_cast<int>(w.size())) return 0.0;
        return w[static_cast<std::size_t>(i)];
    };
    int hi = lo + static_cast<int>(w.size()) - 1;
    int reach = std::max(std::abs(hi - a), std::abs(a - lo));
    for (int k = 0; k <= reach; ++k) {
        if (at(a + k) < at(a - k) - kMassTol) return false;
        if (at(a - k) < at(a + k + 1) - kMassTol) return false;
    }
    return true;
}

inline bool asu_about(const Pmf& p, int a) {
    return asu_about(p.lo(), p.weights(), a);
}

/// True iff p is a.s.u. about 0 and p(x) = p(-x) for all x.
inline bool asu_even(const Pmf& p) {
    if (!asu_about(p, 0)) return false;
    int reach = std::max(std::abs(p.lo()), std::abs(p.hi()));
    for (int k = 1; k <= reach; ++k)
        if (std::abs(p.at(k) - p.at(-k)) > kMassTol) return false;
    return true;
}

/// Non-increasing rearrangement of a weight list. Ties keep their original
/// relative order (stable), so the result is deterministic.
inline std::vector<double> rearrange_desc(std::vector<double> w) {
    std::stable_sort(w.begin(), w.end(), std::greater<double>());
    return w;
}

inline std::vector<double> rearrange_desc(const Pmf& p) {
    return rearrange_desc(p.weights());
}

/// Majorization check: nu majorizes mu iff every prefix sum of the
/// non-increasing rearrangement of mu is dominated by that of nu and the
/// totals agree. Inputs are zero-padded to equal length first.
inline MajorizationVerdict majorizes(std::vector<double> nu,
                                     std::vector<double> mu) {
    std::size_t n = std::max(nu.size(), mu.size());
    nu.resize(n, 0.0);
    mu.resize(n, 0.0);
    nu = rearrange_desc(std::move(nu));
    mu = rearrange_desc(std::move(mu));

    MajorizationVerdict v;
    double pnu = 0.0, pmu = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        pnu += nu[k];
        pmu += mu[k];
        if (pmu > pnu + kMassTol) {
            v.first_violating_prefix = static_cast<int>(k) + 1;
            break;
        }
    }
    v.sum_gap = std::accumulate(nu.begin(), nu.end(), 0.0) -
                std::accumulate(mu.begin(), mu.end(), 0.0);
    v.holds = !v.first_violating_prefix && std::abs(v.sum_gap) <= kMassTol;
    return v;
}

inline MajorizationVerdict majorizes(const Pmf& nu, const Pmf& mu) {
    return majorizes(nu.weights(), mu.weights());
}

/// Exact discrete convolution; the support is the Minkowski sum of the
/// input supports.
inline Pmf convolve(const Pmf& p, const Pmf& q) {
    std::vector<double> out(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j)
            out[i + j] += p.weights()[i] * q.weights()[j];
    return Pmf(p.lo() + q.lo(), std::move(out));
}

/// <p_desc, q_desc> - <p, q>. Non-negative for non-negative inputs
/// (rearrangement inequality); callers may assert >= -1e-12.
inline double hardy_littlewood_gap(const std::vector<double>& p,
                                   const std::vector<double>& q) {
    if (p.size() != q.size())
        throw std::invalid_argument("hardy_littlewood_gap: length mismatch");
    std::vector<double> pd = rearrange_desc(p);
    std::vector<double> qd = rearrange_desc(q);
    double aligned = 0.0, given = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        aligned += pd[i] * qd[i];
        given += p[i] * q[i];
    }
    return aligned - given;
}

/// k-th element (1-based) of the spiral 0, 1, -1, 2, -2, ... about zero.
inline int spiral_offset(int k) {
    int half = k / 2;
    return (k % 2 == 0) ? half : -half;
}

/// Prescription gamma with exactly `lambda_mass` retained (non-transmitted)
/// probability, built by filling the spiral a, a+1, a-1, a+2, ... with
/// "stay" decisions until the retained mass is reached. The boundary spiral
/// point gets the fractional value 1 - alpha; everything beyond transmits.
/// Returned over the full grid of pi_marginal. Requires pi_marginal a.s.u.
/// about a for the result to be a genuine threshold prescription.
inline std::map<int, double> threshold_prescription(const Pmf& pi_marginal,
                                                    int a,
                                                    double lambda_mass) {
    double total = std::accumulate(pi_marginal.weights().begin(),
                                   pi_marginal.weights().end(), 0.0);
    if (lambda_mass < -kMassTol || lambda_mass > total + kMassTol)
        throw std::invalid_argument(
            "threshold_prescription: lambda_mass outside [0, total mass]");

    std::map<int, double> gamma;
    for (int x = pi_marginal.lo(); x <= pi_marginal.hi(); ++x)
        gamma[x] = 1.0;
    if (lambda_mass <= kMassTol) return gamma;

    // Spiral points far enough to cover the whole grid from any center a.
    int reach = std::max(std::abs(pi_marginal.hi() - a),
                         std::abs(a - pi_marginal.lo()));
    double partial = 0.0;
    for (int k = 1; k <= 2 * reach + 1; ++k) {
        int x = a + spiral_offset(k);
        double px = pi_marginal.at(x);
        if (partial + px >= lambda_mass - kMassTol) {
            double alpha = (px > 0.0) ? (lambda_mass - partial) / px : 0.0;
            alpha = std::clamp(alpha, 0.0, 1.0);
            if (gamma.count(x)) gamma[x] = 1.0 - alpha;
            return gamma;
        }
        partial += px;
        if (gamma.count(x)) gamma[x] = 0.0;
    }
    // Unreachable for lambda_mass <= total.
    throw std::logic_error("threshold_prescription: spiral exhausted");
}

} // namespace resched

#endif
