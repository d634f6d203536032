#pragma once

#include <stdexcept>
#include <string>

namespace qpoisson {

/// Bad input: malformed problem, inconsistent configuration, non-unitary matrix.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A layout needs more qubits than the configured budget allows.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Post-selection hit an outcome of (numerically) zero probability; the run has to be restarted.
class ZeroProbability : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool cond, const std::string& msg)
{
    if (!cond)
        throw ValidationError(msg);
}

constexpr bool is_power_of_two(long long v) { return v > 0 && (v & (v - 1)) == 0; }

constexpr int log2_exact(long long v)
{
    int r = 0;
    while ((1LL << r) < v)
        ++r;
    return r;
}

} // namespace detail
} // namespace qpoisson
