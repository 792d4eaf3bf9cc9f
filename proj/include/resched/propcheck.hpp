#ifndef RESCHED_PROPCHECK_HPP
#define RESCHED_PROPCHECK_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "resched/pmf.hpp"

namespace resched {

/// Random distribution generators for the majorization property suite.
/// All draws are driven by a caller-owned engine so suites are repeatable.
namespace gen {

inline std::vector<double> nonincreasing_weights(std::mt19937_64& rng, int count) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> w(static_cast<std::size_t>(count));
    double cur = 1.0;
    for (auto& x : w) {
        cur *= u(rng);
        x = cur + 1e-6;
    }
    return w;
}

/// a.s.u. pmf about `a`: a random non-increasing sequence laid out on the
/// spiral a, a+1, a-1, a+2, ... and normalized. Spans the full a.s.u. class.
inline Pmf asu_pmf(std::mt19937_64& rng, int a, int points) {
    std::vector<double> seq = nonincreasing_weights(rng, points);
    int lo = a - (points - 1) / 2;
    std::vector<double> w(static_cast<std::size_t>(points), 0.0);
    for (int k = 1; k <= points; ++k) {
        int x = a + spiral_offset(k);
        w[static_cast<std::size_t>(x - lo)] = seq[static_cast<std::size_t>(k - 1)];
    }
    double sum = 0.0;
    for (double v : w) sum += v;
    for (double& v : w) v /= sum;
    return Pmf(lo, std::move(w));
}

/// a.s.u.-even pmf: symmetric about 0 and non-increasing in |x|.
inline Pmf asu_even_pmf(std::mt19937_64& rng, int half_width) {
    std::vector<double> seq = nonincreasing_weights(rng, half_width + 1);
    std::vector<double> w(static_cast<std::size_t>(2 * half_width) + 1, 0.0);
    for (int k = 0; k <= half_width; ++k) {
        w[static_cast<std::size_t>(half_width + k)] = seq[static_cast<std::size_t>(k)];
        w[static_cast<std::size_t>(half_width - k)] = seq[static_cast<std::size_t>(k)];
    }
    double sum = 0.0;
    for (double v : w) sum += v;
    for (double& v : w) v /= sum;
    return Pmf(-half_width, std::move(w));
}

/// Mass-preserving Robin-Hood transfer: move mass from a larger weight to a
/// smaller one. The result is majorized by the input.
inline std::vector<double> robin_hood(std::mt19937_64& rng,
                                      std::vector<double> w, int transfers) {
    std::uniform_int_distribution<std::size_t> pick(0, w.size() - 1);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    for (int k = 0; k < transfers; ++k) {
        std::size_t i = pick(rng), j = pick(rng);
        if (w[i] < w[j]) std::swap(i, j);
        if (w[i] <= w[j]) continue;
        double eps = frac(rng) * 0.5 * (w[i] - w[j]);
        w[i] -= eps;
        w[j] += eps;
    }
    return w;
}

} // namespace gen

struct PropResult {
    std::string property;
    int trials = 0;
    int failures = 0;
    bool pass() const { return failures == 0; }
};

/// The randomized distribution-law suite: a.s.u. convolution closure,
/// majorization preservation under even a.s.u. convolution, the rearranged
/// inner-product gap, order axioms, and the retained-mass identity of the
/// spiral prescription construction.
inline std::vector<PropResult> run_property_suite(int trials,
                                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> center(-4, 4);
    std::uniform_int_distribution<int> pts(1, 21);
    std::uniform_int_distribution<int> half(0, 10);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    std::vector<PropResult> out;

    {
        PropResult r{"asu_convolution_closure", trials, 0};
        for (int k = 0; k < trials; ++k) {
            int a = center(rng);
            Pmf p = gen::asu_pmf(rng, a, pts(rng));
            Pmf q = gen::asu_even_pmf(rng, half(rng));
            if (!asu_about(convolve(p, q), a)) ++r.failures;
        }
        out.push_back(r);
    }
    {
        PropResult r{"majorization_preserved_by_convolution", trials, 0};
        for (int k = 0; k < trials; ++k) {
            Pmf ptilde = gen::asu_pmf(rng, center(rng), pts(rng));
            Pmf p(ptilde.lo(), gen::robin_hood(rng, ptilde.weights(), 4));
            Pmf q = gen::asu_even_pmf(rng, half(rng));
            if (!majorizes(ptilde, p).holds) {
                ++r.failures;
                continue;
            }
            if (!majorizes(convolve(ptilde, q), convolve(p, q)).holds)
                ++r.failures;
        }
        out.push_back(r);
    }
    {
        PropResult r{"hardy_littlewood_gap_nonnegative", trials, 0};
        for (int k = 0; k < trials; ++k) {
            std::size_t len = static_cast<std::size_t>(pts(rng));
            std::vector<double> p(len), q(len);
            for (auto& v : p) v = u01(rng);
            for (auto& v : q) v = u01(rng);
            if (hardy_littlewood_gap(p, q) < -1e-12) ++r.failures;
        }
        out.push_back(r);
    }
    {
        PropResult r{"majorizes_reflexive_transitive", trials, 0};
        for (int k = 0; k < trials; ++k) {
            Pmf a = gen::asu_pmf(rng, center(rng), pts(rng));
            std::vector<double> b = gen::robin_hood(rng, a.weights(), 3);
            std::vector<double> c = gen::robin_hood(rng, b, 3);
            bool ok = majorizes(a.weights(), a.weights()).holds &&
                      majorizes(a.weights(), b).holds &&
                      majorizes(b, c).holds && majorizes(a.weights(), c).holds;
            if (!ok) ++r.failures;
        }
        out.push_back(r);
    }
    {
        PropResult r{"threshold_prescription_retains_mass", trials, 0};
        for (int k = 0; k < trials; ++k) {
            int a = center(rng);
            Pmf p = gen::asu_pmf(rng, a, pts(rng));
            double lambda = u01(rng);
            auto gamma = threshold_prescription(p, a, lambda);
            double retained = 0.0;
            int fractional = 0;
            for (auto [x, gx] : gamma) {
                retained += p.at(x) * (1.0 - gx);
                if (gx > 1e-12 && gx < 1.0 - 1e-12) ++fractional;
            }
            if (std::abs(retained - lambda) > 1e-12 || fractional > 1)
                ++r.failures;
        }
        out.push_back(r);
    }
    return out;
}

} // namespace resched

#endif
