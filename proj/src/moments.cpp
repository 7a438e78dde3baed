#include "subordinate/moments.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "subordinate/detail/overloaded.hpp"

namespace subordinate {

using detail::overloaded;

MomentSummary moments_from_rates(const TransitionRateRow& row) {
    MomentSummary m;
    m.state = row.state;
    std::vector<double> first;
    std::vector<double> second;
    first.reserve(row.rates.size());
    second.reserve(row.rates.size());
    for (std::size_t i = 0; i < row.rates.size(); ++i) {
        const double k = static_cast<double>(i + 1);
        first.push_back(k * row.rates[i]);
        second.push_back(k * k * row.rates[i]);
    }
    m.inf_mean = compensated_sum(first);
    m.inf_var = compensated_sum(second);
    if (m.inf_mean > 0.0) m.dispersion = m.inf_var / m.inf_mean;
    if (row.tail_bound > 0.0) {
        const double k_last = static_cast<double>(row.max_jump());
        const double g = row.tail_ratio ? 2.0 / (1.0 - *row.tail_ratio) : k_last + 1.0;
        m.error_bound = row.tail_bound * (k_last + g) * (k_last + g);
    }
    return m;
}

MomentSummary poisson_poisson_moments(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be finite and > 0");
    const double active = -std::expm1(-alpha);
    MomentSummary m;
    m.inf_mean = alpha * active;
    m.inf_var = alpha * (1.0 + alpha) * active;
    m.dispersion = 1.0 + alpha;
    return m;
}

MomentSummary binomial_poisson_moments(double delta, StateCount d0, StateCount s) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("delta must be finite and > 0");
    if (d0 <= 0) throw DomainError("d0 must be a positive integer");
    if (s < 0 || s >= d0) throw DomainError("binomial-Poisson moments need 0 <= s < d0");
    const double p = -std::expm1(-delta);
    const double remaining = static_cast<double>(d0 - s);
    MomentSummary m;
    m.state = s;
    m.dispersion = 1.0 + (remaining - 1.0) * p;
    m.inf_mean = remaining * p;
    m.inf_var = m.inf_mean * *m.dispersion;
    return m;
}

std::optional<JumpSizeMoments> event_size_moments(const TransitionRateRow& row) {
    if (!(row.rate_function > 0.0)) return std::nullopt;
    const MomentSummary raw = moments_from_rates(row);
    const double mean = raw.inf_mean / row.rate_function;
    const double second = raw.inf_var / row.rate_function;
    return JumpSizeMoments{mean, std::max(0.0, second - mean * mean)};
}

namespace {

double base_drift(const RateFunctionSpec& rate, double x) {
    return std::visit(overloaded{
                          [](const Poisson& p) { return p.alpha; },
                          [x](const LinearBirth& b) { return x > 0.0 ? b.beta * x : 0.0; },
                          [x](const LinearDeathCounting& d) {
                              const double left = static_cast<double>(d.d0) - x;
                              return left > 0.0 ? d.delta * left : 0.0;
                          },
                          [x](const NonlinearDeathCounting& d) {
                              const double left = static_cast<double>(d.d0) - x;
                              return left > 0.0 ? x * left : 0.0;
                          },
                          [x](const GeneralTable& g) {
                              if (x < 0.0) return 0.0;
                              const auto i = static_cast<std::size_t>(std::floor(x));
                              return i < g.rates.size() ? g.rates[i] : 0.0;
                          },
                      },
                      rate);
}

class TimeChangedDrift {
public:
    explicit TimeChangedDrift(const RateFunctionSpec& rate) : rate_(rate) {}

    double operator()(double s) {
        return std::visit(overloaded{
                              [](const Poisson& p) { return poisson_poisson_moments(p.alpha).inf_mean; },
                              [s](const LinearDeathCounting& d) {
                                  const double left = static_cast<double>(d.d0) - s;
                                  return left > 0.0 ? left * -std::expm1(-d.delta) : 0.0;
                              },
                              [this, s](const auto&) { return interpolated(s); },
                          },
                          rate_);
    }

private:
    double at_state(StateCount i) {
        if (i < 0) return 0.0;
        if (auto cap = max_state(rate_); cap && i >= *cap) return 0.0;
        auto it = cache_.find(i);
        if (it != cache_.end()) return it->second;
        const double mean = moments_from_rates(transition_rates(rate_, i)).inf_mean;
        cache_.emplace(i, mean);
        return mean;
    }

    double interpolated(double s) {
        const double lo = std::floor(s);
        const double frac = s - lo;
        const auto i = static_cast<StateCount>(lo);
        const double a = at_state(i);
        return frac == 0.0 ? a : a + frac * (at_state(i + 1) - a);
    }

    RateFunctionSpec rate_;
    std::map<StateCount, double> cache_;
};

}  // namespace

std::vector<double> ode_path(const ProcessSpec& spec, bool time_changed, double s0, const std::vector<double>& t_grid) {
    validate(spec.rate);
    if (!std::isfinite(s0) || s0 < 0.0) throw DomainError("initial value must be finite and >= 0");
    std::function<double(double)> drift;
    if (time_changed) {
        drift = TimeChangedDrift(spec.rate);
    } else {
        drift = [rate = spec.rate](double x) { return base_drift(rate, x); };
    }

    std::vector<double> out;
    out.reserve(t_grid.size());
    double t = 0.0;
    double y = s0;
    for (double target : t_grid) {
        if (!(target >= t)) throw std::invalid_argument("t_grid must be non-decreasing and start at >= 0");
        const double span = target - t;
        const auto steps = static_cast<long>(std::ceil(span / kOdeStep - 1e-9));
        if (steps > 0) {
            const double h = span / static_cast<double>(steps);
            for (long i = 0; i < steps; ++i) {
                const double k1 = drift(y);
                const double k2 = drift(y + 0.5 * h * k1);
                const double k3 = drift(y + 0.5 * h * k2);
                const double k4 = drift(y + h * k3);
                y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
        }
        t = target;
        out.push_back(y);
    }
    return out;
}

}  // namespace subordinate
