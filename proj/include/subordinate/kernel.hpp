#pragma once

#include <optional>
#include <vector>

#include "subordinate/core_processes.hpp"

namespace subordinate {

/// Distribution of X(t) - s given X(0) = s, indexed by jump size k = 0, 1, ...
///
/// probs is truncated at some K; tail_bound is the probability mass not
/// represented in probs (zero for finite support). For geometric-tail
/// kernels tail_ratio holds a bound rho < 1 on p(k+1)/p(k) for all k >= K.
struct KernelDistribution {
    StateCount base_state = 0;
    std::vector<double> probs;
    double tail_bound = 0.0;
    std::optional<double> tail_ratio;

    double prob(StateCount k) const {
        return k >= 0 && static_cast<std::size_t>(k) < probs.size() ? probs[static_cast<std::size_t>(k)] : 0.0;
    }
    /// Largest k stored.
    StateCount max_jump() const { return static_cast<StateCount>(probs.size()) - 1; }
};

inline constexpr double kDefaultKernelTolerance = 1e-10;

/// X(1) ~ Poisson(alpha), independent of s.
KernelDistribution poisson_kernel(double alpha, StateCount s, double eps = kDefaultKernelTolerance);

enum class AbsorbingPolicy { reject, point_mass };

/// Linear birth at t = 1: negative binomial with success probability
/// 1 - e^{-beta} and s failures until stopping. s = 0 is absorbing and
/// throws DomainError unless policy is point_mass.
KernelDistribution birth_kernel(double beta, StateCount s, double eps = kDefaultKernelTolerance,
                                AbsorbingPolicy policy = AbsorbingPolicy::reject);

/// Linear death counting at t = 1: Binomial(d0 - s, 1 - e^{-delta}).
KernelDistribution death_kernel(double delta, StateCount d0, StateCount s);

struct UniformizationOptions {
    /// Highest state kept for infinite-state families. Mass reaching it is
    /// reported in tail_bound rather than in probs.
    std::optional<StateCount> state_cap;
    /// When no cap is given, use s + ceil(50 (1 + rate parameter * t)).
    bool allow_default_cap = true;
};

/// Transient kernel P(X(t) = s + k | X(0) = s) by uniformization on the
/// window of states [s, cap]. Poisson weights are truncated so their tail
/// is <= eps / 2. Throws ConfigurationError for an infinite-state family
/// without a cap when default caps are disabled.
KernelDistribution uniformization_kernel(const ProcessSpec& spec, StateCount s, double t,
                                         double eps = kDefaultKernelTolerance,
                                         const UniformizationOptions& options = {});

/// Closed-form kernel at t = 1 for Poisson, LinearBirth and LinearDeathCounting;
/// nullopt for the other families.
std::optional<KernelDistribution> closed_form_kernel(const RateFunctionSpec& rate, StateCount s,
                                                     double eps = kDefaultKernelTolerance);

/// Closed form when one exists, uniformization at t = 1 otherwise.
/// Absorbing states yield a point mass at k = 0.
KernelDistribution kernel_at_one(const RateFunctionSpec& rate, StateCount s, double eps = kDefaultKernelTolerance);

/// E[R^k e^{-R}] / k! for R gamma distributed with shape l/tau and scale tau
/// (mean l, variance l*tau), evaluated in log space.
double gamma_mixed_poisson_prob(double l, StateCount k, double tau);

/// The full gamma-mixed Poisson pmf over k, truncated with a certified
/// geometric tail bound <= eps.
KernelDistribution gamma_mixed_poisson_kernel(double l, double tau, double eps = kDefaultKernelTolerance);

/// Neumaier-compensated sum.
double compensated_sum(const std::vector<double>& values);

}  // namespace subordinate
