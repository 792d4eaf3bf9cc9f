#ifndef RESCHED_SOLVER_HPP
#define RESCHED_SOLVER_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "resched/errors.hpp"
#include "resched/model.hpp"
#include "resched/pmf.hpp"
#include "resched/policy.hpp"

namespace resched {

/// Cost-to-go table J[t][d][e] with its decision table U[t][d][e].
/// The d axis is a signed integer grid (step 1) for discrete sources or a
/// non-negative radial grid (step h) for the Gaussian source. The terminal
/// slice J[T+1] is stored and identically zero.
struct ValueTable {
    int horizon = 0;     ///< T
    int battery_cap = 0; ///< B
    bool radial = false;
    double grid_lo = 0.0;
    double grid_step = 1.0;
    std::size_t grid_size = 0;
    std::vector<double> J;  ///< (T+1) * grid_size * (B+1), t-major
    std::vector<std::uint8_t> U; ///< T * grid_size * (B+1)

    double d_value(std::size_t i) const { return grid_lo + grid_step * i; }

    double j_at(int t, std::size_t i, int e) const {
        return J[slice(t) + i * (battery_cap + 1) + static_cast<std::size_t>(e)];
    }
    std::uint8_t u_at(int t, std::size_t i, int e) const {
        return U[slice(t) + i * (battery_cap + 1) + static_cast<std::size_t>(e)];
    }

    std::size_t slice(int t) const {
        return static_cast<std::size_t>(t - 1) * grid_size *
               static_cast<std::size_t>(battery_cap + 1);
    }
};

namespace detail {

inline void check_value_table_shape(ValueTable& vt) {
    vt.J.assign(static_cast<std::size_t>(vt.horizon + 1) * vt.grid_size *
                    (vt.battery_cap + 1),
                0.0);
    vt.U.assign(static_cast<std::size_t>(vt.horizon) * vt.grid_size *
                    (vt.battery_cap + 1),
                0);
}

/// Sanity assertions shared by all solvers: J >= 0, non-decreasing in |d|
/// and non-increasing in e. Violations abort the solve with a witness.
inline void assert_value_shape(const ValueTable& vt, double slack = 1e-9) {
    const int B = vt.battery_cap;
    const std::size_t mid =
        vt.radial ? 0
                  : static_cast<std::size_t>(std::llround(-vt.grid_lo / vt.grid_step));
    for (int t = 1; t <= vt.horizon; ++t)
        for (int e = 0; e <= B; ++e) {
            for (std::size_t i = 0; i < vt.grid_size; ++i) {
                if (vt.j_at(t, i, e) < -slack)
                    throw StructuralViolation("negative cost-to-go", t,
                                              vt.d_value(i), e);
                if (e < B &&
                    vt.j_at(t, i, e + 1) > vt.j_at(t, i, e) + slack)
                    throw StructuralViolation("cost-to-go increases with energy",
                                              t, vt.d_value(i), e);
            }
            // Outward monotonicity on each side of the center.
            for (std::size_t i = mid; i + 1 < vt.grid_size; ++i)
                if (vt.j_at(t, i + 1, e) < vt.j_at(t, i, e) - slack)
                    throw StructuralViolation("cost-to-go not monotone in |d|",
                                              t, vt.d_value(i + 1), e);
            for (std::size_t i = mid; i > 0; --i)
                if (vt.j_at(t, i - 1, e) < vt.j_at(t, i, e) - slack)
                    throw StructuralViolation("cost-to-go not monotone in |d|",
                                              t, vt.d_value(i - 1), e);
        }
}

} // namespace detail

/// Reads the threshold n(t, e) off a decision table and verifies that it
/// reproduces the table exactly: U = 1 iff |d| >= n. A decision region that
/// is not monotone in |d| contradicts the threshold structure and fails
/// loudly with the witness cell.
inline ThresholdPolicy extract_thresholds(const ValueTable& vt) {
    ThresholdPolicy p;
    p.horizon = vt.horizon;
    p.battery_cap = vt.battery_cap;
    p.n.assign(static_cast<std::size_t>(vt.horizon),
               std::vector<double>(static_cast<std::size_t>(vt.battery_cap) + 1,
                                   kInfThreshold));
    for (int t = 1; t <= vt.horizon; ++t) {
        for (int e = 0; e <= vt.battery_cap; ++e) {
            double n = kInfThreshold;
            for (std::size_t i = 0; i < vt.grid_size; ++i)
                if (vt.u_at(t, i, e))
                    n = std::min(n, std::abs(vt.d_value(i)));
            if (e == 0 && n < kInfThreshold)
                throw StructuralViolation("transmit decision at zero energy", t,
                                          n, e);
            for (std::size_t i = 0; i < vt.grid_size; ++i) {
                bool want = std::abs(vt.d_value(i)) >= n;
                if (static_cast<bool>(vt.u_at(t, i, e)) != want)
                    throw StructuralViolation(
                        "decision region not monotone in |d|", t, vt.d_value(i),
                        e);
            }
            p.n[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(e)] = n;
        }
    }
    return p;
}

/// Backward induction for the random-walk source on the signed error grid
/// [-D, D], D = max|init| + T * max|Z|. Internally each level is computed on
/// a window widened by max|Z| per remaining step, so every published value
/// is exact with no boundary clamping. Ties transmit.
inline std::pair<ValueTable, ThresholdPolicy> solve_discrete(const ProblemSpec& spec) {
    if (spec.source.kind != SourceKind::random_walk)
        throw ConfigError("solve_discrete: source kind must be random_walk");
    const Pmf& noise = spec.source.noise;
    const Pmf& init = spec.source.init;
    if (!asu_even(noise) || !asu_even(init))
        throw ConfigError("solve_discrete: init and noise must be a.s.u. and even");

    const int T = spec.horizon;
    const int B = spec.battery_cap;
    const double c = spec.comm_cost;
    const int maxZ = noise.max_abs();
    const int D = init.max_abs() + T * maxZ;

    ValueTable vt;
    vt.horizon = T;
    vt.battery_cap = B;
    vt.radial = false;
    vt.grid_lo = -D;
    vt.grid_step = 1.0;
    vt.grid_size = static_cast<std::size_t>(2 * D) + 1;
    detail::check_value_table_shape(vt);

    // Harvest-capped energy transitions for the stay and transmit branches.
    auto next_levels = [&](int e_after_u) {
        std::vector<std::pair<int, double>> out;
        for (int n = spec.harvest.lo(); n <= spec.harvest.hi(); ++n)
            if (spec.harvest.at(n) > 0.0)
                out.emplace_back(std::min(e_after_u + n, B), spec.harvest.at(n));
        return out;
    };

    // Working slice on the padded window of level t: publishing [-D, D] at
    // t = 1 needs level t exact out to D + (t-1) * max|Z|.
    auto window = [&](int t) { return D + (t - 1) * maxZ; };
    int Wn = window(T + 1);
    std::vector<double> next(static_cast<std::size_t>(2 * Wn + 1) * (B + 1), 0.0);

    for (int t = T; t >= 1; --t) {
        const int W = window(t);
        std::vector<double> cur(static_cast<std::size_t>(2 * W + 1) * (B + 1), 0.0);
        auto next_at = [&](int d, int e) {
            return next[static_cast<std::size_t>(d + Wn) * (B + 1) +
                        static_cast<std::size_t>(e)];
        };

        // E[J_{t+1}(Z, e')] for each e': the transmit branch resets the error.
        std::vector<double> reset(static_cast<std::size_t>(B + 1), 0.0);
        for (int e = 0; e <= B; ++e) {
            double s = noise.at(0) * next_at(0, e);
            for (int z = 1; z <= maxZ; ++z)
                s += noise.at(z) * (next_at(z, e) + next_at(-z, e));
            reset[static_cast<std::size_t>(e)] = s;
        }

        for (int e = 0; e <= B; ++e) {
            double transmit_term = c;
            if (e > 0)
                for (auto [en, pn] : next_levels(e - 1))
                    transmit_term += pn * reset[static_cast<std::size_t>(en)];
            auto stay_levels = next_levels(e);

            for (int d = -W; d <= W; ++d) {
                // Paired summation keeps J exactly even in d by induction.
                double drift = 0.0;
                for (auto [en, pn] : stay_levels) {
                    double s = noise.at(0) * next_at(d, en);
                    for (int z = 1; z <= maxZ; ++z)
                        s += noise.at(z) * (next_at(d + z, en) + next_at(d - z, en));
                    drift += pn * s;
                }
                double stay_term =
                    spec.distortion.of_abs(std::abs(d)) + drift;
                bool u = e > 0 && transmit_term <= stay_term;
                double j = u ? transmit_term : stay_term;
                cur[static_cast<std::size_t>(d + W) * (B + 1) +
                    static_cast<std::size_t>(e)] = j;
                if (std::abs(d) <= D) {
                    std::size_t i = static_cast<std::size_t>(d + D);
                    vt.J[vt.slice(t) + i * (B + 1) + static_cast<std::size_t>(e)] = j;
                    vt.U[vt.slice(t) + i * (B + 1) + static_cast<std::size_t>(e)] =
                        u ? 1 : 0;
                }
            }
        }
        next = std::move(cur);
        Wn = W;
    }

    // J is even in d by construction; verify bit-for-bit.
    for (int t = 1; t <= T; ++t)
        for (int e = 0; e <= B; ++e)
            for (int d = 1; d <= D; ++d)
                if (vt.j_at(t, static_cast<std::size_t>(D + d), e) !=
                    vt.j_at(t, static_cast<std::size_t>(D - d), e))
                    throw StructuralViolation("cost-to-go not even in d", t, d, e);
    detail::assert_value_shape(vt);

    ThresholdPolicy policy = extract_thresholds(vt);
    policy.estimator = EstimatorRule::last_received_or_zero;
    return {vt, policy};
}

/// Backward induction for i.i.d. sources: the state is x itself, both
/// branches redraw X fresh, and the silent-stage distortion is taken about
/// the source center 0.
inline std::pair<ValueTable, ThresholdPolicy> solve_iid(const ProblemSpec& spec) {
    if (spec.source.kind != SourceKind::iid)
        throw ConfigError("solve_iid: source kind must be iid");
    const Pmf& noise = spec.source.noise;
    const Pmf& init = spec.source.init;

    const int T = spec.horizon;
    const int B = spec.battery_cap;
    const double c = spec.comm_cost;
    const int D = std::max(init.max_abs(), noise.max_abs());

    ValueTable vt;
    vt.horizon = T;
    vt.battery_cap = B;
    vt.radial = false;
    vt.grid_lo = -D;
    vt.grid_step = 1.0;
    vt.grid_size = static_cast<std::size_t>(2 * D) + 1;
    detail::check_value_table_shape(vt);

    auto next_levels = [&](int e_after_u) {
        std::vector<std::pair<int, double>> out;
        for (int n = spec.harvest.lo(); n <= spec.harvest.hi(); ++n)
            if (spec.harvest.at(n) > 0.0)
                out.emplace_back(std::min(e_after_u + n, B), spec.harvest.at(n));
        return out;
    };

    for (int t = T; t >= 1; --t) {
        // E[J_{t+1}(X+, e')]: identical for both branches, x-independent.
        std::vector<double> redraw(static_cast<std::size_t>(B + 1), 0.0);
        for (int e = 0; e <= B; ++e) {
            double s = 0.0;
            for (int x = noise.lo(); x <= noise.hi(); ++x)
                s += noise.at(x) *
                     vt.j_at(t + 1, static_cast<std::size_t>(x + D), e);
            redraw[static_cast<std::size_t>(e)] = s;
        }
        for (int e = 0; e <= B; ++e) {
            double transmit_term = c;
            if (e > 0)
                for (auto [en, pn] : next_levels(e - 1))
                    transmit_term += pn * redraw[static_cast<std::size_t>(en)];
            double drift = 0.0;
            for (auto [en, pn] : next_levels(e))
                drift += pn * redraw[static_cast<std::size_t>(en)];
            for (int x = -D; x <= D; ++x) {
                double stay_term = spec.distortion.of_abs(std::abs(x)) + drift;
                bool u = e > 0 && transmit_term <= stay_term;
                double j = u ? transmit_term : stay_term;
                std::size_t i = static_cast<std::size_t>(x + D);
                vt.J[vt.slice(t) + i * (B + 1) + static_cast<std::size_t>(e)] = j;
                vt.U[vt.slice(t) + i * (B + 1) + static_cast<std::size_t>(e)] =
                    u ? 1 : 0;
            }
        }
    }
    detail::assert_value_shape(vt);

    ThresholdPolicy policy = extract_thresholds(vt);
    policy.estimator = EstimatorRule::last_received_or_mean;
    return {vt, policy};
}

/// Expected optimal cost E[J_1(D_1, E_1)] with D_1 = X_1 (the initial
/// estimate is 0) and E_1 from the initial energy distribution.
inline double expected_cost(const ValueTable& vt, const ProblemSpec& spec) {
    const int D = static_cast<int>(std::llround(-vt.grid_lo));
    double total = 0.0;
    for (int x = spec.source.init.lo(); x <= spec.source.init.hi(); ++x)
        for (int e = 0; e <= spec.battery_cap; ++e)
            total += spec.source.init.at(x) * spec.initial_energy.at(e) *
                     vt.j_at(1, static_cast<std::size_t>(x + D), e);
    return total;
}

} // namespace resched

#endif
