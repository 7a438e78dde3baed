#include "subordinate/kernel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "subordinate/detail/overloaded.hpp"

namespace subordinate {
namespace {

using detail::overloaded;

constexpr std::size_t kMaxTerms = 50'000'000;

void require_tolerance(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("tolerance must be finite and > 0");
}

double log_choose(double n, double k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Builds p_0, p_1, ... from log p_0 and the log step ratio, stopping at the
// first K where every later ratio is bounded by rho_K < 1 and the geometric
// majorant p_K * rho / (1 - rho) is <= eps.
template <class LogStep, class RatioBound>
KernelDistribution truncate_geometric(StateCount s, double log_p0, LogStep log_step, RatioBound ratio_bound,
                                      double eps) {
    KernelDistribution out;
    out.base_state = s;
    double log_p = log_p0;
    for (std::size_t k = 0; k < kMaxTerms; ++k) {
        const double p = std::exp(log_p);
        out.probs.push_back(p);
        const double rho = ratio_bound(static_cast<double>(k));
        if (rho < 1.0 && p * rho / (1.0 - rho) <= eps) {
            out.tail_ratio = rho;
            out.tail_bound = std::max(0.0, 1.0 - compensated_sum(out.probs));
            return out;
        }
        log_p += log_step(static_cast<double>(k));
    }
    throw ConfigurationError("kernel truncation did not converge");
}

KernelDistribution point_mass(StateCount s) {
    KernelDistribution out;
    out.base_state = s;
    out.probs = {1.0};
    return out;
}

// Upper bound on the Poisson(mean) tail beyond J, given the weight w_{J+1}.
double poisson_tail_bound(double next_weight, double mean, double j) {
    const double rho = mean / (j + 2.0);
    return rho < 1.0 ? next_weight / (1.0 - rho) : std::numeric_limits<double>::infinity();
}

double log_poisson_weight(double mean, double j) {
    return -mean + j * std::log(mean) - std::lgamma(j + 1.0);
}

double rate_parameter(const RateFunctionSpec& rate) {
    return std::visit(overloaded{
                          [](const Poisson& p) { return p.alpha; },
                          [](const LinearBirth& b) { return b.beta; },
                          [](const auto&) { return 0.0; },
                      },
                      rate);
}

}  // namespace

double compensated_sum(const std::vector<double>& values) {
    double sum = 0.0;
    double c = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    return sum + c;
}

KernelDistribution poisson_kernel(double alpha, StateCount s, double eps) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be finite and > 0");
    if (s < 0) throw DomainError("state must be >= 0");
    require_tolerance(eps);
    const double log_alpha = std::log(alpha);
    return truncate_geometric(
        s, -alpha, [&](double k) { return log_alpha - std::log(k + 1.0); },
        [&](double k) { return alpha / (k + 1.0); }, eps);
}

KernelDistribution birth_kernel(double beta, StateCount s, double eps, AbsorbingPolicy policy) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be finite and > 0");
    require_tolerance(eps);
    if (s < 0) throw DomainError("state must be >= 0");
    if (s == 0) {
        if (policy == AbsorbingPolicy::point_mass) return point_mass(0);
        throw DomainError("birth kernel requires s >= 1 (state 0 is absorbing)");
    }
    const double success = -std::expm1(-beta);
    const double log_success = std::log(success);
    const double n = static_cast<double>(s);
    // p_k = C(s+k-1, k) q^s p^k; p_{k+1}/p_k = p (s+k)/(k+1), decreasing in k for s >= 1.
    return truncate_geometric(
        s, -beta * n, [&](double k) { return log_success + std::log((n + k) / (k + 1.0)); },
        [&](double k) { return success * std::max(1.0, (n + k) / (k + 1.0)); }, eps);
}

KernelDistribution death_kernel(double delta, StateCount d0, StateCount s) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("delta must be finite and > 0");
    if (d0 <= 0) throw DomainError("d0 must be a positive integer");
    if (s < 0 || s > d0) throw DomainError("death kernel requires 0 <= s <= d0");
    const StateCount trials = d0 - s;
    if (trials == 0) return point_mass(s);
    const double log_success = std::log(-std::expm1(-delta));
    const double log_failure = -delta;
    KernelDistribution out;
    out.base_state = s;
    out.probs.resize(static_cast<std::size_t>(trials) + 1);
    const double n = static_cast<double>(trials);
    for (StateCount k = 0; k <= trials; ++k) {
        const double kk = static_cast<double>(k);
        out.probs[static_cast<std::size_t>(k)] =
            std::exp(log_choose(n, kk) + kk * log_success + (n - kk) * log_failure);
    }
    out.tail_bound = 0.0;
    return out;
}

KernelDistribution uniformization_kernel(const ProcessSpec& spec, StateCount s, double t, double eps,
                                         const UniformizationOptions& options) {
    validate(spec.rate);
    require_tolerance(eps);
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t must be finite and > 0");
    if (s < 0) throw DomainError("state must be >= 0");

    const auto finite_max = max_state(spec.rate);
    StateCount cap = 0;
    bool overflow_bin = false;
    if (finite_max) {
        if (std::holds_alternative<GeneralTable>(spec.rate)) {
            if (s >= *finite_max) return point_mass(s);
        } else if (s > *finite_max) {
            throw DomainError("state exceeds the family's state space");
        }
        cap = *finite_max;
        if (options.state_cap && *options.state_cap < cap) {
            cap = *options.state_cap;
            overflow_bin = true;
        }
    } else if (options.state_cap) {
        cap = *options.state_cap;
        overflow_bin = true;
    } else if (options.allow_default_cap) {
        cap = s + static_cast<StateCount>(std::ceil(50.0 * (1.0 + rate_parameter(spec.rate) * t)));
        overflow_bin = true;
    } else {
        throw ConfigurationError("uniformization of an unbounded-rate family needs a state cap");
    }
    if (cap < s) throw ConfigurationError("state cap below the conditioning state");

    const Eigen::Index width = static_cast<Eigen::Index>(cap - s) + 1;
    Eigen::ArrayXd rates(width);
    for (Eigen::Index i = 0; i < width; ++i) rates[i] = rate_at(spec.rate, s + i);
    rates[width - 1] = 0.0;  // top of the window is absorbing (true absorption or overflow bin)

    const double uniform_rate = rates.maxCoeff();
    if (uniform_rate == 0.0) return point_mass(s);

    // Row vector e_s P^j with P = I + Q / Lambda (bidiagonal for a simple counting process).
    const Eigen::ArrayXd move = rates / uniform_rate;
    const Eigen::ArrayXd stay = 1.0 - move;
    Eigen::ArrayXd row = Eigen::ArrayXd::Zero(width);
    row[0] = 1.0;
    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(width);

    const double mean = uniform_rate * t;
    for (std::size_t j = 0; j < kMaxTerms; ++j) {
        const double jd = static_cast<double>(j);
        acc += std::exp(log_poisson_weight(mean, jd)) * row;
        if (jd + 1.0 > mean &&
            poisson_tail_bound(std::exp(log_poisson_weight(mean, jd + 1.0)), mean, jd) <= 0.5 * eps) {
            break;
        }
        Eigen::ArrayXd next = row * stay;
        next.tail(width - 1) += (row * move).head(width - 1);
        row.swap(next);
    }

    KernelDistribution out;
    out.base_state = s;
    const Eigen::Index kept = overflow_bin ? width - 1 : width;
    out.probs.assign(acc.data(), acc.data() + kept);
    if (out.probs.empty()) out.probs.push_back(0.0);
    out.tail_bound = std::max(0.0, 1.0 - compensated_sum(out.probs));
    return out;
}

std::optional<KernelDistribution> closed_form_kernel(const RateFunctionSpec& rate, StateCount s, double eps) {
    return std::visit(overloaded{
                          [&](const Poisson& p) -> std::optional<KernelDistribution> {
                              return poisson_kernel(p.alpha, s, eps);
                          },
                          [&](const LinearBirth& b) -> std::optional<KernelDistribution> {
                              return birth_kernel(b.beta, s, eps, AbsorbingPolicy::point_mass);
                          },
                          [&](const LinearDeathCounting& d) -> std::optional<KernelDistribution> {
                              return death_kernel(d.delta, d.d0, s);
                          },
                          [](const auto&) -> std::optional<KernelDistribution> { return std::nullopt; },
                      },
                      rate);
}

KernelDistribution kernel_at_one(const RateFunctionSpec& rate, StateCount s, double eps) {
    if (auto k = closed_form_kernel(rate, s, eps)) return *k;
    if (is_absorbing(rate, s)) return point_mass(s);
    return uniformization_kernel(ProcessSpec{rate, s}, s, 1.0, eps);
}

double gamma_mixed_poisson_prob(double l, StateCount k, double tau) {
    if (!(l > 0.0) || !(tau > 0.0)) throw DomainError("l and tau must be > 0");
    if (k < 0) throw DomainError("k must be >= 0");
    const double shape = l / tau;
    const double kk = static_cast<double>(k);
    return std::exp(std::lgamma(shape + kk) - std::lgamma(kk + 1.0) - std::lgamma(shape) -
                    shape * std::log1p(tau) - kk * std::log1p(1.0 / tau));
}

KernelDistribution gamma_mixed_poisson_kernel(double l, double tau, double eps) {
    if (!(l > 0.0) || !(tau > 0.0)) throw DomainError("l and tau must be > 0");
    require_tolerance(eps);
    const double shape = l / tau;
    const double p = tau / (1.0 + tau);
    const double log_p = std::log(p);
    // p_{k+1}/p_k = p (shape + k)/(k + 1); bounded for all later k by p * max(1, (shape + K)/(K + 1)).
    return truncate_geometric(
        0, -shape * std::log1p(tau), [&](double k) { return log_p + std::log((shape + k) / (k + 1.0)); },
        [&](double k) { return p * std::max(1.0, (shape + k) / (k + 1.0)); }, eps);
}

}  // namespace subordinate
