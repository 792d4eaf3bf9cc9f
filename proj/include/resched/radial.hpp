#ifndef RESCHED_RADIAL_HPP
#define RESCHED_RADIAL_HPP

#include <cmath>
#include <utility>
#include <vector>

#include "resched/errors.hpp"
#include "resched/model.hpp"
#include "resched/policy.hpp"
#include "resched/solver.hpp"

namespace resched {

/// Radial grid for the Gaussian dynamic program. Non-positive fields are
/// replaced by the defaults h = 0.01*sqrt(s1+s2) and
/// r_max = 8*sqrt(s1 + T*s2)*max(lambda,1)^T, which cover the reachable
/// error radii with wide margin.
struct RadialGridCfg {
    double h = 0.0;
    double r_max = 0.0;
    int gl_nodes = 64; ///< Gauss-Legendre nodes per grid cell
};

namespace quad {

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int k) {
    std::vector<double> x(static_cast<std::size_t>(k)), w(static_cast<std::size_t>(k));
    for (int i = 0; i < (k + 1) / 2; ++i) {
        double xi = std::cos(M_PI * (i + 0.75) / (k + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = xi;
            for (int j = 2; j <= k; ++j) {
                double p2 = ((2 * j - 1) * xi * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = k * (xi * p1 - p0) / (xi * xi - 1.0);
            double step = p1 / dp;
            xi -= step;
            if (std::abs(step) < 1e-15) break;
        }
        x[static_cast<std::size_t>(i)] = -xi;
        x[static_cast<std::size_t>(k - 1 - i)] = xi;
        double wi = 2.0 / ((1.0 - xi * xi) * dp * dp);
        w[static_cast<std::size_t>(i)] = wi;
        w[static_cast<std::size_t>(k - 1 - i)] = wi;
    }
    return {x, w};
}

} // namespace quad

namespace chi {

/// log I_nu(z) for z >= 0, nu >= 0. Scaled power series below the switch
/// point, uniform asymptotic expansion above; both stable in log space.
inline double log_bessel_i(double nu, double z) {
    if (z == 0.0) return nu == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
    if (z < 50.0) {
        // e^-z * I_nu(z) = sum_m e^-z (z/2)^(2m+nu) / (m! Gamma(m+nu+1)),
        // every term <= 1, so the sum is safe in doubles.
        double log_term = -z + nu * std::log(z / 2.0) - std::lgamma(nu + 1.0);
        double term = std::exp(log_term);
        double sum = term;
        for (int m = 1; m < 500; ++m) {
            term *= (z * z / 4.0) / (m * (m + nu));
            sum += term;
            if (term < sum * 1e-18) break;
        }
        return z + std::log(sum);
    }
    // I_nu(z) ~ e^z / sqrt(2 pi z) * sum_k (-1)^k u_k / z^k,
    // u_0 = 1, u_k = u_{k-1} (4 nu^2 - (2k-1)^2) / (8k).
    double mu = 4.0 * nu * nu;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 10; ++k) {
        term *= -(mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * z);
        sum += term;
    }
    return z - 0.5 * std::log(2.0 * M_PI * z) + std::log(sum);
}

/// Density of ||d + Z|| for Z ~ N(0, sigma^2 I_n) and ||d|| = delta: the
/// noncentral chi density with n degrees of freedom, scale sigma and
/// noncentrality delta. delta = 0 gives the central chi density.
inline double pdf(double u, int n, double sigma, double delta) {
    if (u < 0.0) return 0.0;
    const double s2 = sigma * sigma;
    if (n == 1) {
        // Folded normal, exact in direct space.
        double a = (u - delta) / sigma, b = (u + delta) / sigma;
        return (std::exp(-0.5 * a * a) + std::exp(-0.5 * b * b)) /
               (sigma * std::sqrt(2.0 * M_PI));
    }
    if (u == 0.0) return 0.0;
    if (delta < 1e-12 * sigma) {
        double logf = (n - 1) * std::log(u) - u * u / (2.0 * s2) -
                      (0.5 * n - 1.0) * std::log(2.0) - std::lgamma(0.5 * n) -
                      n * std::log(sigma);
        return std::exp(logf);
    }
    double nu = 0.5 * n - 1.0;
    double logf = 0.5 * n * std::log(u) + (1.0 - 0.5 * n) * std::log(delta) -
                  2.0 * std::log(sigma) - (u * u + delta * delta) / (2.0 * s2) +
                  log_bessel_i(nu, u * delta / s2);
    return std::exp(logf);
}

/// Mass of the density beyond r, integrated up to where it is negligible.
inline double tail_mass(int n, double sigma, double delta, double r,
                        int gl_nodes = 32) {
    double upper = delta + (std::sqrt(static_cast<double>(n)) + 10.0) * sigma;
    if (upper <= r) return 0.0;
    auto [gx, gw] = quad::gauss_legendre(gl_nodes);
    // 64 panels across [r, upper] keep the Gaussian peak resolved.
    int panels = 64;
    double mass = 0.0, width = (upper - r) / panels;
    for (int p = 0; p < panels; ++p) {
        double a = r + p * width;
        for (int g = 0; g < gl_nodes; ++g) {
            double u = a + 0.5 * width * (gx[static_cast<std::size_t>(g)] + 1.0);
            mass += 0.5 * width * gw[static_cast<std::size_t>(g)] *
                    pdf(u, n, sigma, delta);
        }
    }
    return mass;
}

} // namespace chi

namespace detail {

/// Quadrature weights for E[J(U) | U <= r_max] with U ~ chi(n, sigma,
/// delta) and J piecewise linear on the grid {0, h, ..., M h}: one weight
/// per grid node. Conditioning on staying inside the grid keeps the row a
/// probability kernel, so value monotonicity survives truncation; on
/// reachable radii the conditioning event has mass >= 1 - 1e-6 by the
/// coverage check.
inline std::vector<double> kernel_row(const std::vector<double>& grid, int n,
                                      double sigma, double delta,
                                      const std::vector<double>& gx,
                                      const std::vector<double>& gw) {
    const std::size_t m = grid.size();
    std::vector<double> row(m, 0.0);
    double mass = 0.0;
    for (std::size_t j = 0; j + 1 < m; ++j) {
        double a = grid[j], b = grid[j + 1];
        // The density is negligible more than ~12 sigma from its peak.
        if (b < delta - 13.0 * sigma || a > delta + 13.0 * sigma) continue;
        double half = 0.5 * (b - a);
        for (std::size_t g = 0; g < gx.size(); ++g) {
            double u = a + half * (gx[g] + 1.0);
            double wf = half * gw[g] * chi::pdf(u, n, sigma, delta);
            double s = (u - a) / (b - a);
            row[j] += wf * (1.0 - s);
            row[j + 1] += wf * s;
            mass += wf;
        }
    }
    if (mass > 0.0)
        for (double& w : row) w /= mass;
    return row;
}

} // namespace detail

/// Radial dynamic program for the isotropic Gaussian source: J_t(d, e)
/// depends on d only through r = ||d||, so the backward induction runs on
/// r in [0, r_max]. The stay branch integrates J_{t+1} against the
/// noncentral chi density with noncentrality lambda * r (the error recurses
/// as d -> lambda A d + Z between receipts); the transmit branch uses the
/// central density. Integrals are truncated at r_max; a reachable-envelope
/// check rejects grids that truncate materially.
inline std::pair<ValueTable, ThresholdPolicy>
solve_gaussian_radial(const ProblemSpec& spec, RadialGridCfg cfg = {}) {
    if (spec.source.kind != SourceKind::gaussian_radial)
        throw ConfigError("solve_gaussian_radial: source kind must be gaussian_radial");
    const GaussianSpec& g = *spec.source.gaussian;
    const int T = spec.horizon;
    const int B = spec.battery_cap;
    const double c = spec.comm_cost;
    const int n = g.dim;
    const double lambda = g.lambda;
    const double sigma2 = std::sqrt(g.s2);

    if (cfg.h <= 0.0) cfg.h = 0.01 * std::sqrt(g.s1 + g.s2);
    if (cfg.r_max <= 0.0)
        cfg.r_max = 8.0 * std::sqrt(g.s1 + T * g.s2) *
                    std::pow(std::max(lambda, 1.0), T);
    if (cfg.gl_nodes < 2) throw ConfigError("radial grid: gl_nodes must be >= 2");

    const std::size_t M = static_cast<std::size_t>(std::ceil(cfg.r_max / cfg.h));
    const double r_max = static_cast<double>(M) * cfg.h;

    // Reachable-envelope coverage: the never-transmit error at step t is
    // Gaussian with variance var_t (var_1 = s1, var_{t+1} = lambda^2 var_t
    // + s2). Kernels fired from its q-sigma radius must keep < 1e-6 chi
    // mass beyond r_max at every step.
    const double q = std::sqrt(static_cast<double>(n)) + 5.0;
    if (chi::tail_mass(n, std::sqrt(g.s1), 0.0, r_max) >= 1e-6)
        throw GridTooSmall("radial grid: initial radius mass beyond r_max");
    double var = g.s1;
    for (int t = 1; t < T; ++t) {
        double delta = lambda * q * std::sqrt(var);
        if (chi::tail_mass(n, sigma2, delta, r_max) >= 1e-6)
            throw GridTooSmall("radial grid: reachable radius mass beyond "
                               "r_max at step " + std::to_string(t + 1));
        var = lambda * lambda * var + g.s2;
    }

    std::vector<double> grid(M + 1);
    for (std::size_t i = 0; i <= M; ++i) grid[i] = static_cast<double>(i) * cfg.h;

    auto [gx, gw] = quad::gauss_legendre(cfg.gl_nodes);
    // Transition kernel rows: row 0 is the transmit branch (delta = 0),
    // row i+1 the stay branch from r_i (delta = lambda * r_i). The kernel
    // is time-homogeneous, so it is built once per solve.
    std::vector<std::vector<double>> kern(M + 2);
    kern[0] = detail::kernel_row(grid, n, sigma2, 0.0, gx, gw);
    for (std::size_t i = 0; i <= M; ++i)
        kern[i + 1] = detail::kernel_row(grid, n, sigma2, lambda * grid[i], gx, gw);

    ValueTable vt;
    vt.horizon = T;
    vt.battery_cap = B;
    vt.radial = true;
    vt.grid_lo = 0.0;
    vt.grid_step = cfg.h;
    vt.grid_size = M + 1;
    detail::check_value_table_shape(vt);

    auto next_levels = [&](int e_after_u) {
        std::vector<std::pair<int, double>> out;
        for (int k = spec.harvest.lo(); k <= spec.harvest.hi(); ++k)
            if (spec.harvest.at(k) > 0.0)
                out.emplace_back(std::min(e_after_u + k, B), spec.harvest.at(k));
        return out;
    };

    std::vector<double> next_col(M + 1);
    std::vector<std::vector<double>> expect(M + 2,
                                            std::vector<double>(B + 1, 0.0));
    for (int t = T; t >= 1; --t) {
        // expect[row][e'] = kernel row dotted with J_{t+1}(., e').
        for (int e = 0; e <= B; ++e) {
            for (std::size_t i = 0; i <= M; ++i)
                next_col[i] = vt.j_at(t + 1, i, e);
            for (std::size_t row = 0; row < M + 2; ++row) {
                double s = 0.0;
                const std::vector<double>& kr = kern[row];
                for (std::size_t i = 0; i <= M; ++i) s += kr[i] * next_col[i];
                expect[row][static_cast<std::size_t>(e)] = s;
            }
        }
        for (int e = 0; e <= B; ++e) {
            double transmit_term = c;
            if (e > 0)
                for (auto [en, pn] : next_levels(e - 1))
                    transmit_term += pn * expect[0][static_cast<std::size_t>(en)];
            auto stay_levels = next_levels(e);
            for (std::size_t i = 0; i <= M; ++i) {
                double drift = 0.0;
                for (auto [en, pn] : stay_levels)
                    drift += pn * expect[i + 1][static_cast<std::size_t>(en)];
                double stay_term = grid[i] * grid[i] + drift;
                bool u = e > 0 && transmit_term <= stay_term;
                double j = u ? transmit_term : stay_term;
                vt.J[vt.slice(t) + i * (B + 1) + static_cast<std::size_t>(e)] = j;
                vt.U[vt.slice(t) + i * (B + 1) + static_cast<std::size_t>(e)] =
                    u ? 1 : 0;
            }
        }
    }
    detail::assert_value_shape(vt);

    ThresholdPolicy policy = extract_thresholds(vt);
    policy.estimator = EstimatorRule::last_received_or_zero;
    policy.gaussian_lambda = lambda;
    return {vt, policy};
}

/// E[J_1(||X_1||, E_1)]: the radial table's cost prediction, integrating
/// over the initial radius (central chi with scale sqrt(s1)).
inline double expected_radial_cost(const ValueTable& vt, const ProblemSpec& spec,
                                   int gl_nodes = 64) {
    const GaussianSpec& g = *spec.source.gaussian;
    std::vector<double> grid(vt.grid_size);
    for (std::size_t i = 0; i < vt.grid_size; ++i) grid[i] = vt.d_value(i);
    auto [gx, gw] = quad::gauss_legendre(gl_nodes);
    std::vector<double> row =
        detail::kernel_row(grid, g.dim, std::sqrt(g.s1), 0.0, gx, gw);
    double total = 0.0;
    for (int e = 0; e <= spec.battery_cap; ++e) {
        double pe = spec.initial_energy.at(e);
        if (pe == 0.0) continue;
        double s = 0.0;
        for (std::size_t i = 0; i < vt.grid_size; ++i)
            s += row[i] * vt.j_at(1, i, e);
        total += pe * s;
    }
    return total;
}

} // namespace resched

#endif
