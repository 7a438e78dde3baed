#pragma once

#include <optional>
#include <vector>

#include "subordinate/core_processes.hpp"
#include "subordinate/kernel.hpp"

namespace subordinate {

/// Transition rates q_{s,k}, k >= 1, of S(t) = X(N(t)) at state s, with N a
/// unit-rate Poisson clock. They are the probabilities P(X(1) = s + k | X(0) = s),
/// and the rate function is lambda_S(s) = 1 - P(X(1) = s | X(0) = s).
struct TransitionRateRow {
    StateCount state = 0;
    std::vector<double> rates;  ///< rates[k - 1] = q_{s,k}
    double rate_function = 0.0;
    double tail_bound = 0.0;
    std::optional<double> tail_ratio;

    double q(StateCount k) const {
        return k >= 1 && static_cast<std::size_t>(k) <= rates.size() ? rates[static_cast<std::size_t>(k - 1)] : 0.0;
    }
    StateCount max_jump() const { return static_cast<StateCount>(rates.size()); }
};

TransitionRateRow rates_from_kernel(const KernelDistribution& kernel);

/// Rates for any family: closed-form kernel where available, uniformization otherwise.
TransitionRateRow transition_rates(const RateFunctionSpec& rate, StateCount s, double eps = kDefaultKernelTolerance);

/// lambda_S(s) = 1 - exp(-lambda_X(s)).
double rate_function_S(const RateFunctionSpec& rate, StateCount s);
inline double rate_function_S(const ProcessSpec& spec, StateCount s) { return rate_function_S(spec.rate, s); }

/// Direct evaluation of the closed-form rate for the Poisson, linear birth and
/// linear death families. Throws DomainError for k < 1, for s outside the
/// family's stated range, or for families without a closed form.
double corollary_rates(const RateFunctionSpec& family, StateCount s, StateCount k);

/// Transient kernel of the time-changed process S over duration t:
/// P(S(t) = s + k | S(0) = s). Uniformization with rate 1 makes the jump
/// matrix equal to the X(1) kernel, so this is sum_j Poisson(j; t) P^j.
/// Infinite-state families are truncated at options.state_cap (or the
/// default cap) with the overflow reported in tail_bound.
KernelDistribution time_changed_kernel(const RateFunctionSpec& rate, StateCount s, double t,
                                       double eps = kDefaultKernelTolerance,
                                       const UniformizationOptions& options = {});

}  // namespace subordinate
