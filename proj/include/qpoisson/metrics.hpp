#pragma once

#include "qpoisson/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

namespace qpoisson::analysis {

struct RelativeError {
    int basis_state = 0; ///< register-B basis state, 1..N-1
    double value = 0.0;
};

struct ErrorReport {
    std::vector<RelativeError> per_state;
    std::vector<int> excluded_states; ///< classical reference is zero there
    double max_relative_error = 0.0;
    double mean_relative_error = 0.0;
    double state_fidelity = 0.0;
};

namespace metrics_detail {

inline std::vector<double> normalized(std::span<const double> v)
{
    const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    qpoisson::detail::require(norm > 0.0, "cannot normalize a zero vector");
    std::vector<double> out(v.begin(), v.end());
    for (double& x : out)
        x /= norm;
    return out;
}

} // namespace metrics_detail

/// Component-wise |q_i - a_i| / |a_i| after normalizing both vectors and aligning the
/// global sign of `quantum` to `classical`. Entry k corresponds to basis state k+1.
inline ErrorReport relative_errors(std::span<const double> quantum, std::span<const double> classical,
                                   double zero_tolerance = 1e-14)
{
    qpoisson::detail::require(quantum.size() == classical.size(), "solution vectors differ in length");
    auto q = metrics_detail::normalized(quantum);
    const auto a = metrics_detail::normalized(classical);
    const double overlap = std::inner_product(q.begin(), q.end(), a.begin(), 0.0);
    if (overlap < 0.0)
        for (double& x : q)
            x = -x;

    ErrorReport report;
    report.state_fidelity = std::min(1.0, std::abs(overlap));
    double sum = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        const int state = static_cast<int>(k) + 1;
        if (std::abs(a[k]) <= zero_tolerance) {
            report.excluded_states.push_back(state);
            continue;
        }
        const double e = std::abs(q[k] - a[k]) / std::abs(a[k]);
        report.per_state.push_back({state, e});
        report.max_relative_error = std::max(report.max_relative_error, e);
        sum += e;
    }
    if (!report.per_state.empty())
        report.mean_relative_error = sum / static_cast<double>(report.per_state.size());
    return report;
}

} // namespace qpoisson::analysis
