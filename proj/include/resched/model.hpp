#ifndef RESCHED_MODEL_HPP
#define RESCHED_MODEL_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "resched/errors.hpp"
#include "resched/pmf.hpp"

namespace resched {

enum class SourceKind { random_walk, iid, gaussian_radial };
enum class DistortionKind { indicator, power };

/// Isotropic linear-Gaussian source X_{t+1} = lambda * A * X_t + Z_t with
/// A orthogonal. A itself is never stored: every solver and simulator
/// quantity depends on it only through norms.
struct GaussianSpec {
    int dim = 1;
    double lambda = 1.0;
    double s1 = 1.0; ///< initial state covariance scale (s1 * I)
    double s2 = 1.0; ///< per-step noise covariance scale (s2 * I)

    void validate() const {
        if (dim < 1) throw ConfigError("gaussian: dim must be >= 1");
        if (!(lambda > 0)) throw ConfigError("gaussian: lambda must be > 0");
        if (!(s1 > 0) || !(s2 > 0))
            throw ConfigError("gaussian: s1 and s2 must be > 0");
    }
};

struct SourceSpec {
    SourceKind kind = SourceKind::random_walk;
    Pmf init = Pmf::delta(0);  ///< distribution of X_1 (discrete kinds)
    Pmf noise = Pmf::delta(0); ///< distribution of Z_t (discrete kinds)
    std::optional<GaussianSpec> gaussian;
};

/// rho(x, a) = 1{x != a} or |x - a|^k; both non-decreasing in |x - a|.
struct DistortionSpec {
    DistortionKind kind = DistortionKind::indicator;
    double k = 2.0;

    double of_abs(double abs_diff) const {
        if (kind == DistortionKind::indicator) return abs_diff != 0.0 ? 1.0 : 0.0;
        return std::pow(abs_diff, k);
    }
};

/// Full problem instance. Harvest mass above the battery cap is pre-clipped
/// onto B at construction: the dynamics min(e + N - U, B) cannot tell the
/// difference and the clipped pmf keeps every expectation finite-support.
struct ProblemSpec {
    int horizon = 1;          ///< T
    double comm_cost = 0.0;   ///< c
    int battery_cap = 1;      ///< B
    Pmf initial_energy = Pmf::delta(1);
    Pmf harvest = Pmf::delta(0);
    SourceSpec source;
    DistortionSpec distortion;

    void validate_and_clip() {
        if (horizon < 1) throw ConfigError("horizon must be >= 1");
        if (comm_cost < 0) throw ConfigError("comm_cost must be >= 0");
        if (battery_cap < 1) throw ConfigError("battery_cap must be >= 1");
        if (initial_energy.lo() < 0 || initial_energy.hi() > battery_cap)
            throw ConfigError("initial_energy support must lie in [0, B]");
        if (harvest.lo() < 0) throw ConfigError("harvest support must be >= 0");
        harvest = clip_to_cap(harvest, battery_cap);
        if (source.kind == SourceKind::gaussian_radial) {
            if (!source.gaussian)
                throw ConfigError("gaussian_radial source needs a [gaussian] section");
            source.gaussian->validate();
        }
        if (distortion.kind == DistortionKind::power && !(distortion.k > 0))
            throw ConfigError("distortion: k must be > 0");
    }

    static Pmf clip_to_cap(const Pmf& p, int cap) {
        if (p.hi() <= cap) return p;
        std::vector<double> w(static_cast<std::size_t>(cap - p.lo()) + 1, 0.0);
        for (int x = p.lo(); x <= p.hi(); ++x)
            w[static_cast<std::size_t>(std::min(x, cap) - p.lo())] += p.at(x);
        return Pmf(p.lo(), std::move(w));
    }
};

/// E_{t+1} = min(e + n_harvest - u, B). Transmitting without energy is a
/// constraint violation, not a saturating edge case.
inline int energy_step(int e, int u, int n_harvest, int B) {
    if (u > e)
        throw std::invalid_argument("energy_step: u > e (cannot transmit "
                                    "without stored energy)");
    return std::min(e + n_harvest - u, B);
}

inline double stage_distortion(const DistortionSpec& d, double x, double a) {
    return d.of_abs(std::abs(x - a));
}

/// Squared Euclidean distance; the Gaussian problem's distortion.
inline double stage_distortion(const std::vector<double>& x,
                               const std::vector<double>& a) {
    if (x.size() != a.size())
        throw std::invalid_argument("stage_distortion: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double diff = x[i] - a[i];
        s += diff * diff;
    }
    return s;
}

} // namespace resched

#endif
