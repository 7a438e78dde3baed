#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "subordinate/errors.hpp"

namespace subordinate {

/// Counts of events (or deaths so far for the death families). Always >= 0.
using StateCount = std::int64_t;

// Rate function families. Every family is simple (unit jumps only),
// conservative and stable, and time-homogeneous.

/// lambda(x) = alpha
struct Poisson {
    double alpha;
};

/// lambda(x) = beta * x for x > 0; state 0 is absorbing.
struct LinearBirth {
    double beta;
};

/// Counting process of a linear death process: lambda(x) = delta * (d0 - x) for x < d0.
struct LinearDeathCounting {
    double delta;
    StateCount d0;
};

/// lambda(x) = x * (d0 - x) for x < d0.
struct NonlinearDeathCounting {
    StateCount d0;
};

/// Per-state rates for x = 0 .. rates.size() - 1; absorbing beyond the table.
struct GeneralTable {
    std::vector<double> rates;
};

using RateFunctionSpec =
    std::variant<Poisson, LinearBirth, LinearDeathCounting, NonlinearDeathCounting, GeneralTable>;

struct ProcessSpec {
    RateFunctionSpec rate;
    StateCount initial_state = 0;
};

/// Throws DomainError if parameters are non-finite, non-positive where
/// positivity is required, or the initial state is out of range.
void validate(const ProcessSpec& spec);
void validate(const RateFunctionSpec& rate);

/// lambda_X(x). Throws DomainError for x < 0 or x > d0 on the death families.
double rate_at(const RateFunctionSpec& rate, StateCount x);
inline double rate_at(const ProcessSpec& spec, StateCount x) { return rate_at(spec.rate, x); }

bool is_absorbing(const RateFunctionSpec& rate, StateCount x);
inline bool is_absorbing(const ProcessSpec& spec, StateCount x) { return is_absorbing(spec.rate, x); }

/// Largest reachable state for families with finite state space
/// (d0 for the death families, table size for GeneralTable).
std::optional<StateCount> max_state(const RateFunctionSpec& rate);

/// Short machine name: "poisson", "linear_birth", "linear_death", "nonlinear_death", "general".
std::string family_name(const RateFunctionSpec& rate);

}  // namespace subordinate
