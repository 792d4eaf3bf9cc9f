#ifndef RESCHED_TESTS_SIGNED_DP_HPP
#define RESCHED_TESTS_SIGNED_DP_HPP

// Independent oracle for the n = 1 Gaussian solver: backward induction on a
// SIGNED error grid with a plain Gaussian transition kernel. No chi
// densities, no radial folding; agreement with the radial DP follows from
// the evenness of the value function, not shared code.

#include <cmath>
#include <vector>

#include "resched/model.hpp"
#include "resched/radial.hpp"

namespace resched_test {

struct SignedDpResult {
    double h = 0.0;
    int m = 0; ///< grid is v_j = j*h, j in -m..m
    /// J[t-1][j+m][e] for t in 1..T
    std::vector<std::vector<std::vector<double>>> J;
};

inline SignedDpResult signed_dp(const resched::ProblemSpec& spec, double h,
                                double v_max, int gl_nodes) {
    using resched::Pmf;
    const resched::GaussianSpec& g = *spec.source.gaussian;
    const int T = spec.horizon;
    const int B = spec.battery_cap;
    const double c = spec.comm_cost;
    const double lambda = g.lambda;
    const double sigma = std::sqrt(g.s2);

    const int m = static_cast<int>(std::ceil(v_max / h));
    const int size = 2 * m + 1;
    auto [gx, gw] = resched::quad::gauss_legendre(gl_nodes);

    auto gauss = [&](double u, double mean) {
        double z = (u - mean) / sigma;
        return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
    };

    // kernel[j+m] integrates piecewise-linear J against N(lambda*v_j, s2)
    // conditioned on [-v_max, v_max] (each row renormalized, mirroring the
    // radial solver's truncation semantics); the last row is the transmit
    // kernel centered at zero.
    std::vector<std::vector<double>> kernel(static_cast<std::size_t>(size) + 1,
                                            std::vector<double>(size, 0.0));
    for (int row = 0; row <= size; ++row) {
        double mean = row < size ? lambda * (row - m) * h : 0.0;
        auto& kr = kernel[static_cast<std::size_t>(row)];
        double mass = 0.0;
        for (int j = -m; j < m; ++j) {
            double a = j * h, b = (j + 1) * h;
            if (b < mean - 13.0 * sigma || a > mean + 13.0 * sigma) continue;
            double half = 0.5 * (b - a);
            for (std::size_t gq = 0; gq < gx.size(); ++gq) {
                double u = a + half * (gx[gq] + 1.0);
                double wf = half * gw[gq] * gauss(u, mean);
                double s = (u - a) / (b - a);
                kr[static_cast<std::size_t>(j + m)] += wf * (1.0 - s);
                kr[static_cast<std::size_t>(j + m + 1)] += wf * s;
                mass += wf;
            }
        }
        if (mass > 0.0)
            for (double& w : kr) w /= mass;
    }

    SignedDpResult out;
    out.h = h;
    out.m = m;
    out.J.assign(static_cast<std::size_t>(T),
                 std::vector<std::vector<double>>(
                     static_cast<std::size_t>(size),
                     std::vector<double>(static_cast<std::size_t>(B) + 1, 0.0)));

    std::vector<std::vector<double>> next(
        static_cast<std::size_t>(size),
        std::vector<double>(static_cast<std::size_t>(B) + 1, 0.0));

    for (int t = T; t >= 1; --t) {
        std::vector<std::vector<double>> expect(
            static_cast<std::size_t>(size) + 1,
            std::vector<double>(static_cast<std::size_t>(B) + 1, 0.0));
        for (int e = 0; e <= B; ++e)
            for (int row = 0; row <= size; ++row) {
                double s = 0.0;
                for (int j = 0; j < size; ++j)
                    s += kernel[static_cast<std::size_t>(row)]
                               [static_cast<std::size_t>(j)] *
                         next[static_cast<std::size_t>(j)]
                             [static_cast<std::size_t>(e)];
                expect[static_cast<std::size_t>(row)][static_cast<std::size_t>(e)] =
                    s;
            }

        std::vector<std::vector<double>> cur(
            static_cast<std::size_t>(size),
            std::vector<double>(static_cast<std::size_t>(B) + 1, 0.0));
        for (int e = 0; e <= B; ++e) {
            double tx = c;
            if (e > 0)
                for (int k = spec.harvest.lo(); k <= spec.harvest.hi(); ++k)
                    tx += spec.harvest.at(k) *
                          expect[static_cast<std::size_t>(size)]
                                [static_cast<std::size_t>(std::min(e - 1 + k, B))];
            for (int j = -m; j <= m; ++j) {
                double v = j * h;
                double stay = v * v;
                for (int k = spec.harvest.lo(); k <= spec.harvest.hi(); ++k)
                    stay += spec.harvest.at(k) *
                            expect[static_cast<std::size_t>(j + m)]
                                  [static_cast<std::size_t>(std::min(e + k, B))];
                double j_val = (e > 0 && tx <= stay) ? tx : stay;
                cur[static_cast<std::size_t>(j + m)][static_cast<std::size_t>(e)] =
                    j_val;
            }
        }
        out.J[static_cast<std::size_t>(t - 1)] = cur;
        next = std::move(cur);
    }
    return out;
}

} // namespace resched_test

#endif
