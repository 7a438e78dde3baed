#include "subordinate/time_change_rates.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "subordinate/detail/overloaded.hpp"

namespace subordinate {

using detail::overloaded;

TransitionRateRow rates_from_kernel(const KernelDistribution& kernel) {
    TransitionRateRow row;
    row.state = kernel.base_state;
    if (kernel.probs.size() > 1) row.rates.assign(kernel.probs.begin() + 1, kernel.probs.end());
    row.rate_function = 1.0 - kernel.prob(0);
    row.tail_bound = kernel.tail_bound;
    row.tail_ratio = kernel.tail_ratio;
    return row;
}

TransitionRateRow transition_rates(const RateFunctionSpec& rate, StateCount s, double eps) {
    return rates_from_kernel(kernel_at_one(rate, s, eps));
}

double rate_function_S(const RateFunctionSpec& rate, StateCount s) { return -std::expm1(-rate_at(rate, s)); }

double corollary_rates(const RateFunctionSpec& family, StateCount s, StateCount k) {
    if (k < 1) throw DomainError("transition rates are defined for jump sizes k >= 1");
    validate(family);
    const double kk = static_cast<double>(k);
    return std::visit(
        overloaded{
            [&](const Poisson& p) {
                if (s < 0) throw DomainError("state must be >= 0");
                return std::exp(kk * std::log(p.alpha) - p.alpha - std::lgamma(kk + 1.0));
            },
            [&](const LinearBirth& b) {
                if (s < 1) throw DomainError("negative-binomial rates need s >= 1");
                const double n = static_cast<double>(s);
                return std::exp(std::lgamma(n + kk) - std::lgamma(kk + 1.0) - std::lgamma(n) - n * b.beta +
                                kk * std::log(-std::expm1(-b.beta)));
            },
            [&](const LinearDeathCounting& d) {
                if (s < 0 || s >= d.d0) throw DomainError("binomial rates need 0 <= s < d0");
                const StateCount trials = d.d0 - s;
                if (k > trials) throw DomainError("jump size exceeds the remaining population");
                const double n = static_cast<double>(trials);
                return std::exp(std::lgamma(n + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(n - kk + 1.0) +
                                kk * std::log(-std::expm1(-d.delta)) - (n - kk) * d.delta);
            },
            [](const auto&) -> double { throw DomainError("no closed-form rates for this family"); },
        },
        family);
}

KernelDistribution time_changed_kernel(const RateFunctionSpec& rate, StateCount s, double t, double eps,
                                       const UniformizationOptions& options) {
    validate(rate);
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t must be finite and > 0");
    if (!(eps > 0.0)) throw DomainError("tolerance must be > 0");
    if (s < 0) throw DomainError("state must be >= 0");

    StateCount cap = 0;
    const auto finite_max = max_state(rate);
    if (finite_max && !std::holds_alternative<GeneralTable>(rate) && s > *finite_max) {
        throw DomainError("state exceeds the family's state space");
    }
    if (finite_max) {
        cap = std::max(s, *finite_max);
        if (options.state_cap) cap = std::min(cap, std::max(s, *options.state_cap));
    } else if (options.state_cap) {
        cap = std::max(s, *options.state_cap);
    } else if (options.allow_default_cap) {
        const double param = std::visit(overloaded{[](const Poisson& p) { return p.alpha; },
                                                   [](const LinearBirth& b) { return b.beta; },
                                                   [](const auto&) { return 0.0; }},
                                        rate);
        cap = s + static_cast<StateCount>(std::ceil(50.0 * (1.0 + param * t)));
    } else {
        throw ConfigurationError("time-changed kernel of an unbounded family needs a state cap");
    }

    // One-step matrix on the window [s, cap]: row i is the X(1) kernel from s + i.
    // Mass that would leave the window is dropped and shows up in tail_bound.
    const Eigen::Index width = static_cast<Eigen::Index>(cap - s) + 1;
    const double row_eps = eps / (4.0 * static_cast<double>(width) * std::max(1.0, t));
    Eigen::MatrixXd step = Eigen::MatrixXd::Zero(width, width);
    for (Eigen::Index i = 0; i < width; ++i) {
        const KernelDistribution k = kernel_at_one(rate, s + i, row_eps);
        const Eigen::Index reach = std::min<Eigen::Index>(static_cast<Eigen::Index>(k.probs.size()), width - i);
        for (Eigen::Index j = 0; j < reach; ++j) step(i, i + j) = k.probs[static_cast<std::size_t>(j)];
    }

    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(width);
    row[0] = 1.0;
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(width);
    for (int j = 0; j < 100'000; ++j) {
        const double jd = static_cast<double>(j);
        acc += std::exp(-t + jd * std::log(t) - std::lgamma(jd + 1.0)) * row;
        const double next_weight = std::exp(-t + (jd + 1.0) * std::log(t) - std::lgamma(jd + 2.0));
        const double rho = t / (jd + 2.0);
        if (rho < 1.0 && next_weight / (1.0 - rho) <= 0.5 * eps) break;
        row = row * step;
    }

    KernelDistribution out;
    out.base_state = s;
    out.probs.assign(acc.data(), acc.data() + width);
    out.tail_bound = std::max(0.0, 1.0 - compensated_sum(out.probs));
    return out;
}

}  // namespace subordinate
