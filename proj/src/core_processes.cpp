#include "subordinate/core_processes.hpp"

#include <cmath>
#include <string>

#include "subordinate/detail/overloaded.hpp"

namespace subordinate {
namespace {

using detail::overloaded;

void require_positive(double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0) {
        throw DomainError(std::string(name) + " must be finite and > 0");
    }
}

void require_death_state(StateCount x, StateCount d0) {
    if (x > d0) {
        throw DomainError("state " + std::to_string(x) + " exceeds d0 = " + std::to_string(d0));
    }
}

}  // namespace

void validate(const RateFunctionSpec& rate) {
    std::visit(overloaded{
                   [](const Poisson& p) { require_positive(p.alpha, "alpha"); },
                   [](const LinearBirth& b) { require_positive(b.beta, "beta"); },
                   [](const LinearDeathCounting& d) {
                       require_positive(d.delta, "delta");
                       if (d.d0 <= 0) throw DomainError("d0 must be a positive integer");
                   },
                   [](const NonlinearDeathCounting& d) {
                       if (d.d0 <= 0) throw DomainError("d0 must be a positive integer");
                   },
                   [](const GeneralTable& g) {
                       for (double r : g.rates) {
                           if (!std::isfinite(r) || r < 0.0) {
                               throw DomainError("table rates must be finite and >= 0");
                           }
                       }
                   },
               },
               rate);
}

void validate(const ProcessSpec& spec) {
    validate(spec.rate);
    if (spec.initial_state < 0) throw DomainError("initial_state must be >= 0");
    if (auto cap = max_state(spec.rate); cap && !std::holds_alternative<GeneralTable>(spec.rate)) {
        require_death_state(spec.initial_state, *cap);
    }
}

double rate_at(const RateFunctionSpec& rate, StateCount x) {
    if (x < 0) throw DomainError("state must be >= 0");
    return std::visit(overloaded{
                          [](const Poisson& p) { return p.alpha; },
                          [x](const LinearBirth& b) { return x > 0 ? b.beta * static_cast<double>(x) : 0.0; },
                          [x](const LinearDeathCounting& d) {
                              require_death_state(x, d.d0);
                              return x < d.d0 ? d.delta * static_cast<double>(d.d0 - x) : 0.0;
                          },
                          [x](const NonlinearDeathCounting& d) {
                              require_death_state(x, d.d0);
                              return x < d.d0 ? static_cast<double>(x) * static_cast<double>(d.d0 - x) : 0.0;
                          },
                          [x](const GeneralTable& g) {
                              return static_cast<std::size_t>(x) < g.rates.size() ? g.rates[static_cast<std::size_t>(x)] : 0.0;
                          },
                      },
                      rate);
}

bool is_absorbing(const RateFunctionSpec& rate, StateCount x) { return rate_at(rate, x) == 0.0; }

std::optional<StateCount> max_state(const RateFunctionSpec& rate) {
    return std::visit(overloaded{
                          [](const Poisson&) -> std::optional<StateCount> { return std::nullopt; },
                          [](const LinearBirth&) -> std::optional<StateCount> { return std::nullopt; },
                          [](const LinearDeathCounting& d) -> std::optional<StateCount> { return d.d0; },
                          [](const NonlinearDeathCounting& d) -> std::optional<StateCount> { return d.d0; },
                          [](const GeneralTable& g) -> std::optional<StateCount> {
                              return static_cast<StateCount>(g.rates.size());
                          },
                      },
                      rate);
}

std::string family_name(const RateFunctionSpec& rate) {
    return std::visit(overloaded{
                          [](const Poisson&) { return std::string("poisson"); },
                          [](const LinearBirth&) { return std::string("linear_birth"); },
                          [](const LinearDeathCounting&) { return std::string("linear_death"); },
                          [](const NonlinearDeathCounting&) { return std::string("nonlinear_death"); },
                          [](const GeneralTable&) { return std::string("general"); },
                      },
                      rate);
}

}  // namespace subordinate
