#pragma once

#include <iosfwd>
#include <vector>

#include "subordinate/core_processes.hpp"
#include "subordinate/rng.hpp"

namespace subordinate {

/// Right-continuous step path of a counting process on [0, horizon].
///
/// Event times are strictly positive and strictly increasing; time 0 is the
/// initial condition. Jumps are positive; simple processes only produce unit
/// jumps, composed paths may carry larger ones.
class Trajectory {
public:
    struct Event {
        double time;
        StateCount jump;
    };

    /// Throws std::invalid_argument if the event list breaks the invariants.
    Trajectory(StateCount initial_state, std::vector<Event> events, double horizon);

    StateCount initial_state() const { return initial_state_; }
    const std::vector<Event>& events() const { return events_; }
    double horizon() const { return horizon_; }
    StateCount final_state() const { return cumulative_.empty() ? initial_state_ : cumulative_.back(); }

    /// State after the i-th event (0-based).
    StateCount state_after(std::size_t i) const { return cumulative_[i]; }

    /// Value at t including any event at exactly t. Throws HorizonError if t > horizon.
    StateCount evaluate(double t) const;

    bool operator==(const Trajectory& other) const;

private:
    StateCount initial_state_;
    std::vector<Event> events_;
    std::vector<StateCount> cumulative_;
    double horizon_;
};

/// Exact event-driven simulation of a simple counting process started at
/// spec.initial_state over [0, t_end]. Stops early (flat tail) on absorption.
Trajectory simulate_simple(const ProcessSpec& spec, double t_end, RngStream& rng);

/// Unit-rate Poisson process over [0, t_end].
Trajectory simulate_poisson_unit(double t_end, RngStream& rng);

/// S(t) = X(N(t)) built event by event from the two paths.
///
/// S can only jump at event times of N; the jump at N's i-th event is
/// X(n_i) - X(n_{i-1}), zero jumps are dropped and several X events inside
/// one N increment merge into one larger jump. Requires
/// x_traj.horizon() >= n_traj.final_state(), else HorizonError.
Trajectory compose(const Trajectory& x_traj, const Trajectory& n_traj);

struct TimeChangedPaths {
    Trajectory clock;  ///< N over [0, t_end]
    Trajectory base;   ///< X over [0, N(t_end)] in its own time
    Trajectory composed;
};

/// Simulates N on [0, t_end], then X up to X-time N(t_end), then composes.
TimeChangedPaths simulate_time_changed(const ProcessSpec& spec, double t_end, RngStream& rng);

/// CSV with header `time,state`: a row at 0, one per event, one at the horizon.
void write_csv(std::ostream& out, const Trajectory& traj);

}  // namespace subordinate
