#pragma once

#include <optional>
#include <vector>

#include "subordinate/core_processes.hpp"
#include "subordinate/time_change_rates.hpp"

namespace subordinate {

/// Infinitesimal mean and variance of increments at a state, and their
/// ratio (the infinitesimal dispersion index). Dispersion is absent when
/// the mean is zero (absorbing state).
struct MomentSummary {
    StateCount state = 0;
    double inf_mean = 0.0;
    double inf_var = 0.0;
    std::optional<double> dispersion;
    double error_bound = 0.0;
};

/// mean = sum_k k q_{s,k}, var = sum_k k^2 q_{s,k}.
///
/// error_bound = tail_bound * (K + G)^2 with K the last stored jump size and
/// G = 2 / (1 - rho) when the row carries a geometric tail ratio rho, else
/// G = K + 1. It bounds the omitted contribution to both sums.
MomentSummary moments_from_rates(const TransitionRateRow& row);

/// Closed forms for the Poisson base process with rate alpha:
/// mean alpha (1 - e^{-alpha}), variance alpha (1 + alpha)(1 - e^{-alpha}), dispersion 1 + alpha.
MomentSummary poisson_poisson_moments(double alpha);

/// Closed forms for the linear death counting base process at 0 <= s < d0:
/// mean (d0 - s) p, variance mean (1 + (d0 - s - 1) p), p = 1 - e^{-delta}.
MomentSummary binomial_poisson_moments(double delta, StateCount d0, StateCount s);

/// Jump-size law conditional on a jump occurring: q_{s,k} / lambda_S(s).
struct JumpSizeMoments {
    double mean;
    double variance;
};

/// Absent for absorbing rows (rate_function == 0).
std::optional<JumpSizeMoments> event_size_moments(const TransitionRateRow& row);

inline constexpr double kOdeStep = 1e-3;

/// Deterministic approximation dx/dt = lambda_X(x) (base) or ds/dt = mu_dS(s)
/// (time-changed), integrated with classical RK4 at step <= kOdeStep and
/// reported at each time of t_grid (non-decreasing, starting at >= 0).
///
/// The time-changed drift is poisson_poisson_moments for the Poisson family,
/// binomial_poisson_moments for linear death, and for the remaining families
/// moments_from_rates at integer states, linearly interpolated in between.
std::vector<double> ode_path(const ProcessSpec& spec, bool time_changed, double s0, const std::vector<double>& t_grid);

}  // namespace subordinate
