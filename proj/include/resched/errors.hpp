#ifndef RESCHED_ERRORS_HPP
#define RESCHED_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace resched {

/// Bad input file or run parameters. Maps to exit code 2 in the CLI.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A solved decision table contradicts the threshold structure (or a value
/// table fails a symmetry/monotonicity sanity check). Carries the witness
/// cell. Maps to exit code 3.
class StructuralViolation : public std::runtime_error {
public:
    StructuralViolation(const std::string& what, int t, double d, int e)
        : std::runtime_error(what + " at (t=" + std::to_string(t) +
                             ", d=" + std::to_string(d) +
                             ", e=" + std::to_string(e) + ")"),
          t(t), d(d), e(e) {}
    int t;
    double d;
    int e;
};

/// Enumeration or belief-tree size exceeds the configured budget.
/// Maps to exit code 4.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, double required, double budget)
        : std::runtime_error(what + ": required " + std::to_string(required) +
                             ", budget " + std::to_string(budget)),
          required(required), budget(budget) {}
    double required;
    double budget;
};

/// Radial grid does not cover the reachable error radii. Maps to exit code 2.
class GridTooSmall : public std::runtime_error {
public:
    explicit GridTooSmall(const std::string& what) : std::runtime_error(what) {}
};

/// A belief update was asked to condition on a zero-probability observation.
class InconsistentObservation : public std::runtime_error {
public:
    explicit InconsistentObservation(const std::string& what)
        : std::runtime_error(what) {}
};

} // namespace resched

#endif
