#include "subordinate/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "subordinate/format.hpp"

namespace subordinate {

Trajectory::Trajectory(StateCount initial_state, std::vector<Event> events, double horizon)
    : initial_state_(initial_state), events_(std::move(events)), horizon_(horizon) {
    if (initial_state_ < 0) throw std::invalid_argument("trajectory initial state must be >= 0");
    if (!(horizon_ >= 0.0)) throw std::invalid_argument("trajectory horizon must be >= 0");
    cumulative_.reserve(events_.size());
    StateCount state = initial_state_;
    double last = 0.0;
    for (const auto& e : events_) {
        if (!(e.time > last) || e.time > horizon_) {
            throw std::invalid_argument("event times must be strictly increasing in (0, horizon]");
        }
        if (e.jump <= 0) throw std::invalid_argument("event jumps must be positive");
        state += e.jump;
        cumulative_.push_back(state);
        last = e.time;
    }
}

StateCount Trajectory::evaluate(double t) const {
    if (t < 0.0) throw std::invalid_argument("cannot evaluate a trajectory at negative time");
    if (t > horizon_) {
        throw HorizonError("t = " + std::to_string(t) + " beyond horizon " + std::to_string(horizon_));
    }
    auto it = std::upper_bound(events_.begin(), events_.end(), t,
                               [](double value, const Event& e) { return value < e.time; });
    if (it == events_.begin()) return initial_state_;
    return cumulative_[static_cast<std::size_t>(it - events_.begin()) - 1];
}

bool Trajectory::operator==(const Trajectory& other) const {
    if (initial_state_ != other.initial_state_ || horizon_ != other.horizon_) return false;
    if (events_.size() != other.events_.size()) return false;
    for (std::size_t i = 0; i < events_.size(); ++i) {
        if (events_[i].time != other.events_[i].time || events_[i].jump != other.events_[i].jump) return false;
    }
    return true;
}

Trajectory simulate_simple(const ProcessSpec& spec, double t_end, RngStream& rng) {
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
    validate(spec);
    std::vector<Trajectory::Event> events;
    StateCount x = spec.initial_state;
    double t = 0.0;
    for (;;) {
        const double rate = rate_at(spec, x);
        if (rate == 0.0) break;
        const double next = t + rng.exponential(rate);
        if (next > t_end) break;
        t = next;
        events.push_back({t, 1});
        ++x;
    }
    return Trajectory(spec.initial_state, std::move(events), t_end);
}

Trajectory simulate_poisson_unit(double t_end, RngStream& rng) {
    return simulate_simple(ProcessSpec{Poisson{1.0}, 0}, t_end, rng);
}

Trajectory compose(const Trajectory& x_traj, const Trajectory& n_traj) {
    if (x_traj.horizon() < static_cast<double>(n_traj.final_state())) {
        throw HorizonError("base trajectory horizon " + std::to_string(x_traj.horizon()) +
                           " is shorter than the clock's final value " + std::to_string(n_traj.final_state()));
    }
    const auto& x_events = x_traj.events();
    std::size_t cursor = 0;  // number of X events with time <= current clock value
    auto x_at = [&](StateCount clock_value) {
        const double limit = static_cast<double>(clock_value);
        while (cursor < x_events.size() && x_events[cursor].time <= limit) ++cursor;
        return cursor == 0 ? x_traj.initial_state() : x_traj.state_after(cursor - 1);
    };

    StateCount previous = x_at(n_traj.initial_state());
    const StateCount initial = previous;
    std::vector<Trajectory::Event> events;
    const auto& n_events = n_traj.events();
    for (std::size_t i = 0; i < n_events.size(); ++i) {
        const StateCount current = x_at(n_traj.state_after(i));
        if (current != previous) {
            events.push_back({n_events[i].time, current - previous});
            previous = current;
        }
    }
    return Trajectory(initial, std::move(events), n_traj.horizon());
}

TimeChangedPaths simulate_time_changed(const ProcessSpec& spec, double t_end, RngStream& rng) {
    Trajectory clock = simulate_poisson_unit(t_end, rng);
    Trajectory base = clock.final_state() > 0
                          ? simulate_simple(spec, static_cast<double>(clock.final_state()), rng)
                          : Trajectory(spec.initial_state, {}, 0.0);
    Trajectory composed = compose(base, clock);
    return {std::move(clock), std::move(base), std::move(composed)};
}

void write_csv(std::ostream& out, const Trajectory& traj) {
    out << "time,state\n";
    out << format_real(0.0) << ',' << traj.initial_state() << '\n';
    for (std::size_t i = 0; i < traj.events().size(); ++i) {
        out << format_real(traj.events()[i].time) << ',' << traj.state_after(i) << '\n';
    }
    out << format_real(traj.horizon()) << ',' << traj.final_state() << '\n';
}

}  // namespace subordinate
