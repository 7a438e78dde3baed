#pragma once

// Test-only reference computations. Nothing here calls into the code paths
// it is used to check.

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "subordinate/core_processes.hpp"

namespace oracle {

/// E[R^k e^{-R}] / k! for R ~ Gamma(shape, scale) by quadrature.
/// Substituting u = r^shape removes the r^{shape-1} singularity at 0.
inline double gamma_mixture_quadrature(double shape, double scale, int k) {
    boost::math::quadrature::exp_sinh<double> integrator;
    const double norm = std::exp(std::lgamma(shape + 1.0) + shape * std::log(scale));
    auto f = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double r = std::pow(u, 1.0 / shape);
        if (!std::isfinite(r)) return 0.0;
        const double log_rk = k == 0 ? 0.0 : k * std::log(r);
        const double log_val = log_rk - r - std::lgamma(k + 1.0) - r / scale;
        return std::exp(log_val) / norm;
    };
    return integrator.integrate(f, 1e-13);
}

/// Row s of exp(Q t) for a simple counting process on states [s, cap],
/// with cap made absorbing, via Eigen's dense matrix exponential.
inline std::vector<double> expm_kernel(const subordinate::RateFunctionSpec& rate, subordinate::StateCount s,
                                       subordinate::StateCount cap, double t) {
    const Eigen::Index n = static_cast<Eigen::Index>(cap - s) + 1;
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double r = subordinate::rate_at(rate, s + i);
        q(i, i) = -r;
        q(i, i + 1) = r;
    }
    const Eigen::MatrixXd qt = q * t;
    const Eigen::MatrixXd p = qt.exp();
    std::vector<double> out(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = p(0, j);
    return out;
}

/// Classical chain-binomial SIR: per step, new infections
/// ~ Binomial(S, 1 - exp(-beta I / N dt)) and recoveries ~ Binomial(I, 1 - exp(-gamma dt)).
/// Returns the number infected during [0, t_end].
inline long euler_binomial_infections(long population, long s0, long i0, double beta, double gamma, double dt,
                                      double t_end, std::mt19937_64& rng) {
    long s = s0;
    long i = i0;
    const long steps = std::lround(t_end / dt);
    for (long step = 0; step < steps && i > 0; ++step) {
        std::binomial_distribution<long> infect(s, 1.0 - std::exp(-beta * static_cast<double>(i) / population * dt));
        std::binomial_distribution<long> recover(i, 1.0 - std::exp(-gamma * dt));
        const long new_i = infect(rng);
        const long new_r = recover(rng);
        s -= new_i;
        i += new_i - new_r;
    }
    return s0 - s;
}

}  // namespace oracle
