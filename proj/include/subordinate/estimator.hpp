#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "subordinate/core_processes.hpp"

namespace subordinate {

/// One compared quantity. pass iff |estimate - reference| <= tolerance, where
/// tolerance = 3.5 * se + bias_allowance unless stated otherwise for the line.
struct EstimateLine {
    std::string name;
    double estimate = 0.0;
    double se = 0.0;
    double reference = 0.0;
    double bias_allowance = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool available = true;  ///< false when the estimand is undefined (e.g. zero mean)
};

struct EstimateReport {
    std::string target;
    std::vector<EstimateLine> lines;
    std::size_t n_reps = 0;
    std::uint64_t seed = 0;

    bool passed() const;
    const EstimateLine& line(const std::string& name) const;
};

inline constexpr double kSeMultiplier = 3.5;

/// Monte Carlo estimate of q_{s,k} from P(S(h) - S(0) = k) / h over n_reps
/// composed paths started at s. The finite-h estimator carries an O(h) bias,
/// allowed for as 2 h lambda_S(s) q_{s,k}. Also reports the increment rate
/// E[S(h) - s] / h against sum_k k q_{s,k}, and the fraction of replicates
/// with a simultaneous jump of size >= 2.
EstimateReport estimate_transition_rates(const ProcessSpec& spec, StateCount s, double h, std::size_t n_reps,
                                         std::uint64_t seed, StateCount k_max = 3);

/// First holding time of S from s against exponential(1 - e^{-lambda_X(s)}):
/// mean, a scaled Kolmogorov distance sqrt(n) D_n against the 1% critical
/// value 1.628, and the geometric count of clock events consumed before the
/// first jump (mean and P(G = 1)). All from the same replicates.
EstimateReport estimate_interevent(const ProcessSpec& spec, StateCount s, std::size_t n_reps, std::uint64_t seed);

/// First jump size J_1 of S from s against q_{s,k} / lambda_S(s), k = 1..k_max,
/// and the conditional mean jump size.
EstimateReport estimate_jump_sizes(const ProcessSpec& spec, StateCount s, std::size_t n_reps, std::uint64_t seed,
                                   StateCount k_max = 4);

/// Variance-to-mean ratio of S(h) - S(0) (or X(h) - X(0) when time_changed is
/// false) against the infinitesimal dispersion index, with delta-method SE.
/// Bias allowance 2 h lambda(s) D for the finite window.
EstimateReport estimate_dispersion(const ProcessSpec& spec, StateCount s, double h, std::size_t n_reps,
                                   std::uint64_t seed, bool time_changed = true);

/// One JSON object per line:
/// {"check": ..., "estimate": ..., "reference": ..., "se": ..., "tolerance": ..., "pass": ...}
void write_json_lines(std::ostream& out, const EstimateReport& report);

/// Summary statistics of an integer sample used by the dispersion checks.
struct DispersionEstimate {
    double mean = 0.0;
    double variance = 0.0;
    double ratio = 0.0;
    double se = 0.0;
    bool defined = false;
};
DispersionEstimate variance_to_mean(const std::vector<StateCount>& sample);

}  // namespace subordinate
