#pragma once

#include <json.hpp>

#include "subordinate/compartmental.hpp"
#include "subordinate/core_processes.hpp"
#include "subordinate/kernel.hpp"
#include "subordinate/time_change_rates.hpp"
#include "subordinate/trajectory.hpp"

namespace subordinate {

using Json = nlohmann::ordered_json;

// {"family": "poisson"|"linear_birth"|"linear_death"|"nonlinear_death"|"general",
//  "params": {...}, "initial_state": n}
// params: alpha | beta | delta, d0 | d0 | rates: [...]
Json to_json(const ProcessSpec& spec);
/// Throws DomainError on unknown families, missing fields or invalid values.
ProcessSpec process_spec_from_json(const Json& j);

/// {"s": n, "probs": {"0": p0, ...}, "tail_bound": t}
Json to_json(const KernelDistribution& kernel);

/// {"s": n, "lambda_S": l, "rates": {"1": q1, ...}, "tail_bound": t}
Json to_json(const TransitionRateRow& row);

/// {"initial_state": n, "horizon": h, "events": [{"time": t, "jump": k}, ...]}
Json to_json(const Trajectory& traj);

/// {"population": n, "contact_rate": b, "recovery_rate": g, "step": d,
///  "overdispersed": {"SI": bool, "IR": bool}, "initial": {"S": s, "I": i, "R": r}}
SirConfig sir_config_from_json(const Json& j);

}  // namespace subordinate
