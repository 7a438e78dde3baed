#include "subordinate/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "subordinate/moments.hpp"
#include "subordinate/parallel.hpp"
#include "subordinate/rng.hpp"
#include "subordinate/time_change_rates.hpp"
#include "subordinate/trajectory.hpp"

namespace subordinate {
namespace {

// Kolmogorov distribution 1% critical value for sqrt(n) D_n.
constexpr double kKsCritical = 1.628;

EstimateLine make_line(std::string name, double estimate, double se, double reference, double bias_allowance = 0.0) {
    EstimateLine line;
    line.name = std::move(name);
    line.estimate = estimate;
    line.se = se;
    line.reference = reference;
    line.bias_allowance = bias_allowance;
    line.tolerance = kSeMultiplier * se + bias_allowance;
    line.pass = std::abs(estimate - reference) <= line.tolerance;
    return line;
}

struct MeanSe {
    double mean;
    double se;
};

MeanSe mean_and_se(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double var = xs.size() > 1 ? ss / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n)};
}

struct FirstEvent {
    double holding;
    StateCount clock_events;
    StateCount jump;
};

// Walks the unit-rate clock event by event and evaluates the base path at
// each integer clock value, extending the base path lazily. The first clock
// event at which the base path has moved is the first event of S.
FirstEvent sample_first_event(const RateFunctionSpec& rate, StateCount s, RngStream& rng) {
    StateCount x = s;
    double next_x = rng.exponential(rate_at(rate, s));
    double t = 0.0;
    for (StateCount i = 1;; ++i) {
        t += rng.exponential(1.0);
        while (next_x <= static_cast<double>(i)) {
            ++x;
            const double r = rate_at(rate, x);
            next_x = r > 0.0 ? next_x + rng.exponential(r) : std::numeric_limits<double>::infinity();
        }
        if (x != s) return {t, i, x - s};
    }
}

std::vector<FirstEvent> sample_first_events(const ProcessSpec& spec, StateCount s, std::size_t n_reps,
                                            std::uint64_t seed) {
    validate(spec.rate);
    if (n_reps == 0) throw std::invalid_argument("n_reps must be positive");
    if (is_absorbing(spec.rate, s)) throw DomainError("state is absorbing; S never leaves it");
    std::vector<FirstEvent> out(n_reps);
    for_each_replicate(n_reps, [&](std::size_t r) {
        RngStream rng(seed, r);
        out[r] = sample_first_event(spec.rate, s, rng);
    });
    return out;
}

std::vector<StateCount> sample_increments(const ProcessSpec& spec, StateCount s, double h, std::size_t n_reps,
                                          std::uint64_t seed, bool time_changed) {
    validate(spec.rate);
    if (!(h > 0.0)) throw std::invalid_argument("h must be > 0");
    if (n_reps == 0) throw std::invalid_argument("n_reps must be positive");
    const ProcessSpec start{spec.rate, s};
    validate(start);
    std::vector<StateCount> out(n_reps);
    for_each_replicate(n_reps, [&](std::size_t r) {
        RngStream rng(seed, r);
        if (time_changed) {
            out[r] = simulate_time_changed(start, h, rng).composed.final_state() - s;
        } else {
            out[r] = simulate_simple(start, h, rng).final_state() - s;
        }
    });
    return out;
}

}  // namespace

bool EstimateReport::passed() const {
    return std::all_of(lines.begin(), lines.end(), [](const EstimateLine& l) { return l.pass; });
}

const EstimateLine& EstimateReport::line(const std::string& name) const {
    for (const auto& l : lines) {
        if (l.name == name) return l;
    }
    throw std::out_of_range("no report line named " + name);
}

DispersionEstimate variance_to_mean(const std::vector<StateCount>& sample) {
    DispersionEstimate d;
    if (sample.empty()) return d;
    std::map<StateCount, std::size_t> histogram;
    for (StateCount v : sample) ++histogram[v];
    const double n = static_cast<double>(sample.size());
    double m1 = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (const auto& [value, count] : histogram) {
        const double v = static_cast<double>(value);
        const double w = static_cast<double>(count) / n;
        m1 += w * v;
        m2 += w * v * v;
        m3 += w * v * v * v;
        m4 += w * v * v * v * v;
    }
    d.mean = m1;
    d.variance = m2 - m1 * m1;
    if (!(m1 > 0.0)) return d;
    d.defined = true;
    d.ratio = d.variance / m1;
    // Delta method for D = m2 / m1 - m1 over the sample means of (Y, Y^2).
    const double g1 = -m2 / (m1 * m1) - 1.0;
    const double g2 = 1.0 / m1;
    const double v11 = m2 - m1 * m1;
    const double v12 = m3 - m1 * m2;
    const double v22 = m4 - m2 * m2;
    const double var = (g1 * g1 * v11 + 2.0 * g1 * g2 * v12 + g2 * g2 * v22) / n;
    d.se = std::sqrt(std::max(0.0, var));
    return d;
}

EstimateReport estimate_transition_rates(const ProcessSpec& spec, StateCount s, double h, std::size_t n_reps,
                                         std::uint64_t seed, StateCount k_max) {
    const auto increments = sample_increments(spec, s, h, n_reps, seed, true);
    const TransitionRateRow row = transition_rates(spec.rate, s);
    const double lambda_s = rate_function_S(spec.rate, s);
    const double n = static_cast<double>(n_reps);

    std::map<StateCount, std::size_t> counts;
    double total = 0.0;
    std::size_t simultaneous = 0;
    for (StateCount k : increments) {
        ++counts[k];
        total += static_cast<double>(k);
        if (k >= 2) ++simultaneous;
    }
    StateCount top = k_max;
    if (!counts.empty()) top = std::max(top, std::min<StateCount>(counts.rbegin()->first, k_max + 7));

    EstimateReport report;
    report.target = "transition_rates/" + family_name(spec.rate) + "/s=" + std::to_string(s);
    report.n_reps = n_reps;
    report.seed = seed;
    for (StateCount k = 1; k <= top; ++k) {
        const auto it = counts.find(k);
        const double p_hat = it == counts.end() ? 0.0 : static_cast<double>(it->second) / n;
        const double se = std::sqrt(std::max(p_hat, 1.0 / n) * (1.0 - p_hat) / n) / h;
        const double reference = row.q(k);
        report.lines.push_back(make_line("q_" + std::to_string(k), p_hat / h, se, reference,
                                         2.0 * h * lambda_s * reference));
    }

    const MomentSummary moments = moments_from_rates(row);
    double ss = 0.0;
    const double mean_inc = total / n;
    for (StateCount k : increments) ss += (static_cast<double>(k) - mean_inc) * (static_cast<double>(k) - mean_inc);
    const double se_mean = std::sqrt(ss / (n - 1.0 > 0.0 ? n - 1.0 : 1.0) / n) / h;
    report.lines.push_back(make_line("increment_rate", mean_inc / h, se_mean, moments.inf_mean,
                                     2.0 * h * lambda_s * moments.inf_mean + moments.error_bound));

    // Composed paths can jump by 2 or more at a single clock tick.
    double compound_ref = 0.0;
    for (StateCount k = 2; k <= row.max_jump(); ++k) compound_ref += row.q(k);
    const double frac = static_cast<double>(simultaneous) / n;
    report.lines.push_back(make_line("simultaneous_rate", frac / h,
                                     std::sqrt(std::max(frac, 1.0 / n) * (1.0 - frac) / n) / h, compound_ref,
                                     2.0 * h * lambda_s * compound_ref + row.tail_bound));
    return report;
}

EstimateReport estimate_interevent(const ProcessSpec& spec, StateCount s, std::size_t n_reps, std::uint64_t seed) {
    const auto events = sample_first_events(spec, s, n_reps, seed);
    const double pi = rate_function_S(spec.rate, s);
    const double n = static_cast<double>(n_reps);

    std::vector<double> holding(n_reps);
    std::vector<double> clock(n_reps);
    std::size_t first_clock_hits = 0;
    for (std::size_t i = 0; i < n_reps; ++i) {
        holding[i] = events[i].holding;
        clock[i] = static_cast<double>(events[i].clock_events);
        if (events[i].clock_events == 1) ++first_clock_hits;
    }

    EstimateReport report;
    report.target = "interevent/" + family_name(spec.rate) + "/s=" + std::to_string(s);
    report.n_reps = n_reps;
    report.seed = seed;

    const MeanSe h = mean_and_se(holding);
    report.lines.push_back(make_line("mean_holding_time", h.mean, h.se, 1.0 / pi));

    std::vector<double> sorted = holding;
    std::sort(sorted.begin(), sorted.end());
    double d_max = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = -std::expm1(-pi * sorted[i]);
        d_max = std::max({d_max, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    EstimateLine ks;
    ks.name = "holding_time_ks";
    ks.estimate = std::sqrt(n) * d_max;
    ks.reference = 0.0;
    ks.tolerance = kKsCritical;
    ks.pass = ks.estimate <= kKsCritical;
    report.lines.push_back(ks);

    EstimateLine positive;
    positive.name = "min_holding_time";
    positive.estimate = sorted.front();
    positive.pass = sorted.front() > 0.0;
    report.lines.push_back(positive);

    const MeanSe g = mean_and_se(clock);
    report.lines.push_back(make_line("geometric_mean_clock_events", g.mean, g.se, 1.0 / pi));
    const double p1 = static_cast<double>(first_clock_hits) / n;
    report.lines.push_back(
        make_line("geometric_p_first", p1, std::sqrt(std::max(p1 * (1.0 - p1), 1.0 / n) / n), pi));
    return report;
}

EstimateReport estimate_jump_sizes(const ProcessSpec& spec, StateCount s, std::size_t n_reps, std::uint64_t seed,
                                   StateCount k_max) {
    const auto events = sample_first_events(spec, s, n_reps, seed);
    const TransitionRateRow row = transition_rates(spec.rate, s);
    const double n = static_cast<double>(n_reps);

    std::map<StateCount, std::size_t> counts;
    std::vector<double> sizes(n_reps);
    for (std::size_t i = 0; i < n_reps; ++i) {
        ++counts[events[i].jump];
        sizes[i] = static_cast<double>(events[i].jump);
    }

    EstimateReport report;
    report.target = "jump_sizes/" + family_name(spec.rate) + "/s=" + std::to_string(s);
    report.n_reps = n_reps;
    report.seed = seed;
    for (StateCount k = 1; k <= k_max; ++k) {
        const auto it = counts.find(k);
        const double p_hat = it == counts.end() ? 0.0 : static_cast<double>(it->second) / n;
        const double se = std::sqrt(std::max(p_hat * (1.0 - p_hat), 1.0 / n) / n);
        report.lines.push_back(make_line("p_jump_" + std::to_string(k), p_hat, se, row.q(k) / row.rate_function,
                                         row.tail_bound / row.rate_function));
    }
    const auto conditional = event_size_moments(row);
    const MeanSe m = mean_and_se(sizes);
    report.lines.push_back(make_line("mean_jump", m.mean, m.se, conditional->mean,
                                     moments_from_rates(row).error_bound / row.rate_function));
    return report;
}

EstimateReport estimate_dispersion(const ProcessSpec& spec, StateCount s, double h, std::size_t n_reps,
                                   std::uint64_t seed, bool time_changed) {
    const auto increments = sample_increments(spec, s, h, n_reps, seed, time_changed);
    const DispersionEstimate d = variance_to_mean(increments);

    double reference = 1.0;
    double lambda = rate_at(spec.rate, s);
    if (time_changed) {
        const MomentSummary m = moments_from_rates(transition_rates(spec.rate, s));
        reference = m.dispersion.value_or(1.0);
        lambda = rate_function_S(spec.rate, s);
    }

    EstimateReport report;
    report.target = std::string(time_changed ? "dispersion/" : "dispersion_base/") + family_name(spec.rate) +
                    "/s=" + std::to_string(s);
    report.n_reps = n_reps;
    report.seed = seed;
    if (!d.defined) {
        EstimateLine line;
        line.name = "dispersion";
        line.reference = reference;
        line.available = false;
        line.pass = lambda == 0.0;  // no increments at an absorbing state
        report.lines.push_back(line);
        return report;
    }
    report.lines.push_back(make_line("dispersion", d.ratio, d.se, reference, 2.0 * h * lambda * reference));
    return report;
}

void write_json_lines(std::ostream& out, const EstimateReport& report) {
    for (const auto& l : report.lines) {
        nlohmann::ordered_json j;
        j["check"] = report.target + "/" + l.name;
        if (l.available) {
            j["estimate"] = l.estimate;
        } else {
            j["estimate"] = nullptr;
        }
        j["reference"] = l.reference;
        j["se"] = l.se;
        j["tolerance"] = l.tolerance;
        j["pass"] = l.pass;
        j["n_reps"] = report.n_reps;
        j["seed"] = report.seed;
        out << j.dump() << '\n';
    }
}

}  // namespace subordinate
